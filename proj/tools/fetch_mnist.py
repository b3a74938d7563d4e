#!/usr/bin/env python3
"""Fetch MNIST training digits into an IDX directory.

Tries the usual gzip mirrors first. When none is reachable, falls back to the
`mnist` npm package, which bundles roughly 10k MNIST training digits as JSON,
and converts it to the same IDX layout (pixels re-quantized to 0..255).

Writes <out>/train-images-idx3-ubyte and <out>/train-labels-idx1-ubyte.
"""

import argparse
import gzip
import json
import os
import shutil
import struct
import subprocess
import sys
import tarfile
import tempfile
import urllib.request

MIRRORS = [
    "https://ossci-datasets.s3.amazonaws.com/mnist/",
    "https://storage.googleapis.com/cvdf-datasets/mnist/",
    "http://yann.lecun.com/exdb/mnist/",
]
FILES = {
    "train-images-idx3-ubyte": "train-images-idx3-ubyte.gz",
    "train-labels-idx1-ubyte": "train-labels-idx1-ubyte.gz",
}


def try_mirrors(out_dir):
    for base in MIRRORS:
        try:
            for raw, gz in FILES.items():
                with urllib.request.urlopen(base + gz, timeout=20) as resp:
                    data = gzip.decompress(resp.read())
                with open(os.path.join(out_dir, raw), "wb") as f:
                    f.write(data)
            print(f"fetched MNIST from {base}")
            return True
        except Exception as exc:  # noqa: BLE001 - any failure means try the next source
            print(f"mirror {base} unavailable: {exc}", file=sys.stderr)
    return False


def write_idx(out_dir, images, labels):
    with open(os.path.join(out_dir, "train-images-idx3-ubyte"), "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        for img in images:
            f.write(bytes(min(255, max(0, round(p * 255))) for p in img))
    with open(os.path.join(out_dir, "train-labels-idx1-ubyte"), "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(bytes(labels))


def try_npm(out_dir):
    if shutil.which("npm") is None:
        print("npm not found", file=sys.stderr)
        return False
    with tempfile.TemporaryDirectory() as tmp:
        try:
            subprocess.run(["npm", "pack", "mnist@1.1.0"], cwd=tmp, check=True,
                           stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
        except subprocess.CalledProcessError as exc:
            print(f"npm pack failed: {exc}", file=sys.stderr)
            return False
        with tarfile.open(os.path.join(tmp, "mnist-1.1.0.tgz")) as tar:
            tar.extractall(tmp)
        images, labels = [], []
        per_digit = []
        for digit in range(10):
            with open(os.path.join(tmp, "package", "src", "digits", f"{digit}.json")) as f:
                data = json.load(f)["data"]
            per_digit.append([data[i:i + 784] for i in range(0, len(data), 784)])
        # Interleave digits so the file order is not grouped by class.
        longest = max(len(d) for d in per_digit)
        for i in range(longest):
            for digit in range(10):
                if i < len(per_digit[digit]):
                    images.append(per_digit[digit][i])
                    labels.append(digit)
        write_idx(out_dir, images, labels)
        print(f"converted {len(images)} digits from the npm 'mnist' package")
        return True


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=os.environ.get("WLCAE_DATA_DIR", "data/mnist"))
    parser.add_argument("--no-mirrors", action="store_true", help="skip the gzip mirrors")
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)
    if not args.no_mirrors and try_mirrors(args.out):
        return 0
    if try_npm(args.out):
        return 0
    print("could not obtain MNIST", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
