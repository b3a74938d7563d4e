#!/usr/bin/env python3
"""Generate the 64-image synthetic IDX fixture used by the test suite.

Digits are drawn as seven-segment glyphs with a random offset, stroke width
and intensity, so the set is license-free and needs no download. Labels cycle
0..9; classes 0-3 get seven members, the rest six.
"""

import argparse
import os
import random
import struct

SEGMENTS = {  # a b c d e f g
    0: "abcdef", 1: "bc", 2: "abdeg", 3: "abcdg", 4: "bcfg",
    5: "acdfg", 6: "acdefg", 7: "abc", 8: "abcdefg", 9: "abcdfg",
}


def draw(digit, rng):
    img = [[0.0] * 28 for _ in range(28)]
    ox, oy = rng.randint(6, 10), rng.randint(3, 6)
    w, h, t = rng.randint(9, 12), rng.randint(8, 10), rng.randint(2, 3)
    ink = rng.uniform(0.75, 1.0)

    def box(x0, y0, x1, y1):
        for y in range(max(0, y0), min(28, y1)):
            for x in range(max(0, x0), min(28, x1)):
                img[y][x] = ink

    x0, x1 = ox, ox + w
    y0, y1, y2 = oy, oy + h, oy + 2 * h
    spans = {
        "a": (x0, y0, x1, y0 + t), "g": (x0, y1, x1, y1 + t), "d": (x0, y2, x1, y2 + t),
        "f": (x0, y0, x0 + t, y1 + t), "b": (x1 - t, y0, x1, y1 + t),
        "e": (x0, y1, x0 + t, y2 + t), "c": (x1 - t, y1, x1, y2 + t),
    }
    for s in SEGMENTS[digit]:
        box(*spans[s])
    return [min(255, max(0, round(p * 255))) for row in img for p in row]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "tests", "data"))
    parser.add_argument("--seed", type=int, default=20240601)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    labels = [i % 10 for i in range(64)]
    images = [draw(d, rng) for d in labels]
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "train-images-idx3-ubyte"), "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(images), 28, 28))
        for img in images:
            f.write(bytes(img))
    with open(os.path.join(args.out, "train-labels-idx1-ubyte"), "wb") as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(bytes(labels))


if __name__ == "__main__":
    main()
