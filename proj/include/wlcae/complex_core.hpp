#pragma once

// Dense complex linear algebra and the strictly / widely linear transforms,
// together with their augmented and real-composite representations.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wlcae {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix conj() const;
  bool same_shape(const ComplexMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool is_zero() const noexcept;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Row-major dense real matrix; the blocks of a real-composite transform.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

  friend bool operator==(const RealMatrix&, const RealMatrix&) = default;
};

/// The real map [m; n] = [M11 M12; M21 M22] [u; v] acting on (Re a, Im a).
struct RealCompositeTransform {
  RealMatrix m11, m12, m21, m22;
};

/// Augmented widely linear matrix [W1 W2; conj(W2) conj(W1)].
///
/// Only W1 and W2 are stored; the bottom blocks are produced on demand, so the
/// block-conjugate structure holds by construction.
class AugmentedMatrix {
 public:
  AugmentedMatrix(ComplexMatrix w1, ComplexMatrix w2);

  const ComplexMatrix& top_left() const noexcept { return w1_; }
  const ComplexMatrix& top_right() const noexcept { return w2_; }
  ComplexMatrix bottom_left() const { return w2_.conj(); }
  ComplexMatrix bottom_right() const { return w1_.conj(); }

  std::size_t rows() const noexcept { return 2 * w1_.rows(); }
  std::size_t cols() const noexcept { return 2 * w1_.cols(); }

  /// Entry of the full 2R x 2C matrix.
  Complex operator()(std::size_t r, std::size_t c) const;

  /// Multiplies by an augmented vector [a; conj(a)] of length 2C.
  ComplexVector apply(std::span<const Complex> augmented) const;

  /// True when every bottom block entry is the conjugate of its mirrored top block entry.
  bool has_block_conjugate_structure() const;

 private:
  ComplexMatrix w1_;
  ComplexMatrix w2_;
};

ComplexVector conj(std::span<const Complex> v);

/// [a; conj(a)]
ComplexVector augment(std::span<const Complex> a);

bool all_finite(std::span<const Complex> v) noexcept;

/// W a
ComplexVector strictly_linear(const ComplexMatrix& w, std::span<const Complex> a);

/// W1 a + W2 conj(a)
ComplexVector widely_linear(const ComplexMatrix& w1, const ComplexMatrix& w2,
                            std::span<const Complex> a);

/// Inverse of W1 = (M11 + M22 + j(M21 - M12))/2, W2 = (M11 - M22 + j(M21 + M12))/2.
RealCompositeTransform to_real_composite(const ComplexMatrix& w1, const ComplexMatrix& w2);

/// Recovers (W1, W2) from the real blocks.
std::pair<ComplexMatrix, ComplexMatrix> from_real_composite(const RealCompositeTransform& t);

/// m + jn with m = M11 u + M12 v, n = M21 u + M22 v, where a = u + jv.
ComplexVector apply_real_composite(const RealCompositeTransform& t, std::span<const Complex> a);

}  // namespace wlcae
