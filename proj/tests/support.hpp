#pragma once

#include "ternalg/ternalg.hpp"

#include <random>

namespace ternalg::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20260415);
  return gen;
}

inline double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline Vector random_vector(std::size_t n) {
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uniform();
  return v;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = uniform();
  return m;
}

inline BilinearForm random_symmetric_form(std::size_t n) {
  const Matrix m = random_matrix(n, n);
  return BilinearForm(0.5 * (m + m.transpose()));
}

inline TernaryAlgebra random_algebra(std::size_t n) {
  StructureTensor C = make_structure_tensor(n);
  for (double& v : C.data()) v = uniform();
  return TernaryAlgebra(C, "random");
}

/// [x,y,z] = (x y) z from binary structure constants M(l,a,b).
inline TernaryAlgebra triple_from_binary(const DenseTensor<3>& M) {
  const std::size_t n = M.extent(0);
  StructureTensor C = make_structure_tensor(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t m = 0; m < n; ++m) C(l, a, b, c) += M(m, a, b) * M(l, m, c);
  return TernaryAlgebra(C, "from_binary");
}

/// Group algebra of Z/k in the basis of group elements.
inline DenseTensor<3> cyclic_group_algebra(std::size_t k) {
  DenseTensor<3> M({k, k, k});
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) M((a + b) % k, a, b) = 1.0;
  return M;
}

/// Heap of a group algebra: [x,y,z] = x y^{-1} z, with y^{-1} extended linearly.
inline TernaryAlgebra group_heap(std::size_t k) {
  const DenseTensor<3> M = cyclic_group_algebra(k);
  StructureTensor C = make_structure_tensor(k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c) {
        const std::size_t binv = (k - b) % k;
        for (std::size_t m = 0; m < k; ++m)
          for (std::size_t l = 0; l < k; ++l) C(l, a, b, c) += M(m, a, binv) * M(l, m, c);
      }
  return TernaryAlgebra(C, "group_heap");
}

}  // namespace ternalg::test
