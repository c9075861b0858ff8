#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ternalg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Element of a fibre, written in a fixed basis.
using FibreVector = Vector;

/// Linear map between fibres; rows = target dimension, cols = source dimension.
using LinearMap = Matrix;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or mismatched input (dimensions, ranges, file contents).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Absolute residual bound used by every algebraic predicate.
struct Tolerance {
  double eps = 1e-9;

  constexpr Tolerance() = default;
  explicit Tolerance(double e) : eps(e) {
    if (!(e >= 0.0)) throw InputError("tolerance must be nonnegative");
  }
};

/// Dense row-major real array of fixed rank.
template <std::size_t Rank>
class DenseTensor {
 public:
  using Extents = std::array<std::size_t, Rank>;

  DenseTensor() { ext_.fill(0); }

  explicit DenseTensor(const Extents& ext)
      : ext_(ext),
        data_(std::accumulate(ext.begin(), ext.end(), std::size_t{1}, std::multiplies<>{}), 0.0) {}

  const Extents& extents() const { return ext_; }
  std::size_t extent(std::size_t i) const { return ext_[i]; }
  std::size_t size() const { return data_.size(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  template <class... I>
    requires(sizeof...(I) == Rank)
  double& operator()(I... idx) {
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  template <class... I>
    requires(sizeof...(I) == Rank)
  double operator()(I... idx) const {
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
  }

  DenseTensor& operator+=(const DenseTensor& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  DenseTensor& operator-=(const DenseTensor& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  DenseTensor& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
  friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
  friend DenseTensor operator*(DenseTensor a, double s) { return a *= s; }
  friend DenseTensor operator*(double s, DenseTensor a) { return a *= s; }

  friend bool operator==(const DenseTensor& a, const DenseTensor& b) {
    return a.ext_ == b.ext_ && a.data_ == b.data_;
  }

 private:
  std::size_t offset(const std::array<std::size_t, Rank>& idx) const {
    std::size_t off = 0;
    for (std::size_t k = 0; k < Rank; ++k) off = off * ext_[k] + idx[k];
    return off;
  }

  void require_same_shape(const DenseTensor& o) const {
    if (ext_ != o.ext_) throw InputError("tensor shape mismatch");
  }

  Extents ext_;
  std::vector<double> data_;
};

/// C(lambda, alpha, beta, gamma): lambda-coefficient of [s_alpha, s_beta, s_gamma].
using StructureTensor = DenseTensor<4>;

inline StructureTensor make_structure_tensor(std::size_t n) { return StructureTensor({n, n, n, n}); }

inline Vector basis_vector(std::size_t n, std::size_t i) {
  Vector e = Vector::Zero(static_cast<Eigen::Index>(n));
  e(static_cast<Eigen::Index>(i)) = 1.0;
  return e;
}

inline double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }
inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace ternalg
