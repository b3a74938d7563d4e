#include "wlcae/complex_core.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "wlcae/errors.hpp"
#include "wlcae/kernels.hpp"

namespace wlcae {
namespace {

std::string shape_str(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": W1 is " + shape_str(a.rows(), a.cols()) +
                     " but W2 is " + shape_str(b.rows(), b.cols()));
  }
}

void require_cols(std::size_t cols, std::size_t len, const char* what) {
  if (cols != len) {
    throw ShapeError(std::string(what) + ": matrix has " + std::to_string(cols) +
                     " columns, vector has " + std::to_string(len) + " entries");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("matrix " + shape_str(rows, cols) + " given " + std::to_string(data_.size()) +
                     " entries");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix out(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = std::conj(data_[k]);
  return out;
}

bool ComplexMatrix::is_zero() const noexcept {
  for (const Complex& c : data_) {
    if (c.real() != 0.0 || c.imag() != 0.0) return false;
  }
  return true;
}

AugmentedMatrix::AugmentedMatrix(ComplexMatrix w1, ComplexMatrix w2)
    : w1_(std::move(w1)), w2_(std::move(w2)) {
  require_same_shape(w1_, w2_, "augmented matrix");
}

Complex AugmentedMatrix::operator()(std::size_t r, std::size_t c) const {
  const std::size_t R = w1_.rows(), C = w1_.cols();
  const bool bottom = r >= R, right = c >= C;
  const std::size_t i = bottom ? r - R : r, k = right ? c - C : c;
  if (!bottom) return right ? w2_(i, k) : w1_(i, k);
  return right ? std::conj(w1_(i, k)) : std::conj(w2_(i, k));
}

ComplexVector AugmentedMatrix::apply(std::span<const Complex> augmented) const {
  require_cols(cols(), augmented.size(), "augmented apply");
  ComplexVector out(rows());
  for (std::size_t r = 0; r < rows(); ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < cols(); ++c) acc += (*this)(r, c) * augmented[c];
    out[r] = acc;
  }
  return out;
}

bool AugmentedMatrix::has_block_conjugate_structure() const {
  const std::size_t R = w1_.rows(), C = w1_.cols();
  for (std::size_t i = 0; i < R; ++i) {
    for (std::size_t k = 0; k < C; ++k) {
      if ((*this)(R + i, k) != std::conj((*this)(i, C + k))) return false;
      if ((*this)(R + i, C + k) != std::conj((*this)(i, k))) return false;
    }
  }
  return true;
}

ComplexVector conj(std::span<const Complex> v) {
  ComplexVector out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::conj(v[k]);
  return out;
}

ComplexVector augment(std::span<const Complex> a) {
  ComplexVector out(a.begin(), a.end());
  out.reserve(2 * a.size());
  for (const Complex& c : a) out.push_back(std::conj(c));
  return out;
}

bool all_finite(std::span<const Complex> v) noexcept {
  for (const Complex& c : v) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

ComplexVector strictly_linear(const ComplexMatrix& w, std::span<const Complex> a) {
  require_cols(w.cols(), a.size(), "strictly_linear");
  const auto& k = kernels::active();
  ComplexVector z(w.rows());
  for (std::size_t i = 0; i < w.rows(); ++i) z[i] = k.dot(w.row(i).data(), a.data(), a.size());
  return z;
}

ComplexVector widely_linear(const ComplexMatrix& w1, const ComplexMatrix& w2,
                            std::span<const Complex> a) {
  require_same_shape(w1, w2, "widely_linear");
  require_cols(w1.cols(), a.size(), "widely_linear");
  const auto& k = kernels::active();
  ComplexVector z(w1.rows());
  for (std::size_t i = 0; i < w1.rows(); ++i) {
    z[i] = k.dot(w1.row(i).data(), a.data(), a.size()) +
           k.dot_conj(w2.row(i).data(), a.data(), a.size());
  }
  return z;
}

RealCompositeTransform to_real_composite(const ComplexMatrix& w1, const ComplexMatrix& w2) {
  require_same_shape(w1, w2, "to_real_composite");
  const std::size_t R = w1.rows(), C = w1.cols();
  RealCompositeTransform t{RealMatrix(R, C), RealMatrix(R, C), RealMatrix(R, C), RealMatrix(R, C)};
  for (std::size_t i = 0; i < R; ++i) {
    for (std::size_t k = 0; k < C; ++k) {
      const Complex sum = w1(i, k) + w2(i, k);
      const Complex diff = w1(i, k) - w2(i, k);
      t.m11(i, k) = sum.real();
      t.m22(i, k) = diff.real();
      t.m21(i, k) = sum.imag();
      t.m12(i, k) = -diff.imag();
    }
  }
  return t;
}

std::pair<ComplexMatrix, ComplexMatrix> from_real_composite(const RealCompositeTransform& t) {
  const std::size_t R = t.m11.rows, C = t.m11.cols;
  for (const RealMatrix* m : {&t.m12, &t.m21, &t.m22}) {
    if (m->rows != R || m->cols != C) throw ShapeError("real-composite blocks differ in shape");
  }
  ComplexMatrix w1(R, C), w2(R, C);
  for (std::size_t i = 0; i < R; ++i) {
    for (std::size_t k = 0; k < C; ++k) {
      w1(i, k) = 0.5 * Complex(t.m11(i, k) + t.m22(i, k), t.m21(i, k) - t.m12(i, k));
      w2(i, k) = 0.5 * Complex(t.m11(i, k) - t.m22(i, k), t.m21(i, k) + t.m12(i, k));
    }
  }
  return {std::move(w1), std::move(w2)};
}

ComplexVector apply_real_composite(const RealCompositeTransform& t, std::span<const Complex> a) {
  const std::size_t R = t.m11.rows, C = t.m11.cols;
  for (const RealMatrix* m : {&t.m12, &t.m21, &t.m22}) {
    if (m->rows != R || m->cols != C) throw ShapeError("real-composite blocks differ in shape");
  }
  require_cols(C, a.size(), "apply_real_composite");
  ComplexVector out(R);
  for (std::size_t i = 0; i < R; ++i) {
    double m = 0.0, n = 0.0;
    for (std::size_t k = 0; k < C; ++k) {
      const double u = a[k].real(), v = a[k].imag();
      m += t.m11(i, k) * u + t.m12(i, k) * v;
      n += t.m21(i, k) * u + t.m22(i, k) * v;
    }
    out[i] = {m, n};
  }
  return out;
}

}  // namespace wlcae
