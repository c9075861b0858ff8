#pragma once

#include "ternalg/tern_core.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace ternalg {

struct BilinearForm {
  Matrix entries;

  BilinearForm() = default;
  explicit BilinearForm(Matrix B) : entries(std::move(B)) {
    if (entries.rows() == 0 || entries.rows() != entries.cols()) throw InputError("bilinear form must be square, n >= 1");
    if (!entries.allFinite()) throw InputError("bilinear form has non-finite entries");
  }

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
  double operator()(const Vector& u, const Vector& v) const { return u.dot(entries * v); }
};

/// Ternary operation on a finite set {1..k}: table(a,b,c) in 1..k, with 0-based arguments.
struct HeapTable {
  std::size_t order = 0;
  std::vector<int> table;

  int operator()(std::size_t a, std::size_t b, std::size_t c) const { return table[(a * order + b) * order + c]; }
  int& operator()(std::size_t a, std::size_t b, std::size_t c) { return table[(a * order + b) * order + c]; }
};

/// Binary algebra M(l, a, b): l-coefficient of s_a * s_b.
struct BinaryAlgebra {
  DenseTensor<3> M;
  std::optional<Vector> unit;

  std::size_t dim() const { return M.extent(0); }
};

/// [u,v,w] = B(u,v) w
inline TernaryAlgebra bilinear_algebra(const BilinearForm& B, std::string label = "bilinear") {
  const std::size_t n = B.dim();
  StructureTensor C = make_structure_tensor(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) C(c, a, b, c) = B.entries(a, b);
  return TernaryAlgebra(std::move(C), std::move(label));
}

inline TernaryAlgebra heap_algebra(const HeapTable& H, std::string label = "heap") {
  const std::size_t k = H.order;
  if (k == 0 || H.table.size() != k * k * k) throw InputError("heap table must have order^3 entries, order >= 1");
  StructureTensor C = make_structure_tensor(k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c) {
        const int v = H(a, b, c);
        if (v < 1 || static_cast<std::size_t>(v) > k)
          throw InputError("heap table entry " + std::to_string(v) + " out of range 1.." + std::to_string(k));
        C(static_cast<std::size_t>(v - 1), a, b, c) = 1.0;
      }
  return TernaryAlgebra(std::move(C), std::move(label));
}

/// Heap of the cyclic group C_k: [a,b,c] = a - b + c (mod k), 1-based encoding.
inline HeapTable cyclic_heap_table(std::size_t k) {
  if (k == 0) throw InputError("cyclic_heap_table: order must be >= 1");
  HeapTable H{k, std::vector<int>(k * k * k)};
  const auto kk = static_cast<long>(k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c) {
        const long r = ((static_cast<long>(a) - static_cast<long>(b) + static_cast<long>(c)) % kk + kk) % kk;
        H(a, b, c) = static_cast<int>(r + 1);
      }
  return H;
}

/// u *_e v = [u, e, v]. The unit is recorded when e is a biunit.
inline BinaryAlgebra star_reduce(const TernaryAlgebra& A, const Vector& e, Tolerance tol = {}) {
  detail::require_dim(A, e, "star_reduce");
  const std::size_t n = A.dim();
  BinaryAlgebra out{DenseTensor<3>({n, n, n}), std::nullopt};
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double s = 0.0;
        for (std::size_t g = 0; g < n; ++g) s += A(l, a, g, b) * e(g);
        out.M(l, a, b) = s;
      }
  if (is_biunit(A, e, tol)) out.unit = e;
  return out;
}

inline Vector binary_product(const BinaryAlgebra& Bn, const Vector& u, const Vector& v) {
  const std::size_t n = Bn.dim();
  if (static_cast<std::size_t>(u.size()) != n || static_cast<std::size_t>(v.size()) != n)
    throw InputError("binary_product: dimension mismatch");
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) out(l) += Bn.M(l, a, b) * u(a) * v(b);
  return out;
}

/// max over basis triples of |(s_a * s_b) * s_c - s_a * (s_b * s_c)|_inf.
inline double binary_assoc_residual(const BinaryAlgebra& Bn) {
  const std::size_t n = Bn.dim();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const Vector x = basis_vector(n, a), y = basis_vector(n, b), z = basis_vector(n, c);
        const Vector r = binary_product(Bn, binary_product(Bn, x, y), z) - binary_product(Bn, x, binary_product(Bn, y, z));
        worst = std::max(worst, max_abs(r));
      }
  return worst;
}

/// max over basis x of |u*x - x| and |x*u - x|.
inline double binary_unit_residual(const BinaryAlgebra& Bn, const Vector& u) {
  const std::size_t n = Bn.dim();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const Vector x = basis_vector(n, a);
    worst = std::max({worst, max_abs(Vector(binary_product(Bn, u, x) - x)), max_abs(Vector(binary_product(Bn, x, u) - x))});
  }
  return worst;
}

inline double binary_commutativity_defect(const BinaryAlgebra& Bn) {
  const std::size_t n = Bn.dim();
  double worst = 0.0;
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) worst = std::max(worst, std::abs(Bn.M(l, a, b) - Bn.M(l, b, a)));
  return worst;
}

/// max over basis pairs of |psi(s_a *_1 s_b) - psi(s_a) *_2 psi(s_b)|_inf.
inline double binary_hom_residual(const BinaryAlgebra& from, const BinaryAlgebra& to, const LinearMap& psi) {
  if (static_cast<std::size_t>(psi.rows()) != to.dim() || static_cast<std::size_t>(psi.cols()) != from.dim())
    throw InputError("binary_hom_residual: map shape does not match algebra dimensions");
  const std::size_t n = from.dim();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const Vector lhs = psi * binary_product(from, basis_vector(n, a), basis_vector(n, b));
      const Vector rhs = binary_product(to, psi.col(a), psi.col(b));
      worst = std::max(worst, max_abs(Vector(lhs - rhs)));
    }
  return worst;
}

/// psi(u) = [u, e, e'] between the reductions at two biunits.
inline LinearMap canonical_biunit_iso(const TernaryAlgebra& A, const Vector& e, const Vector& e2, Tolerance tol = {}) {
  if (!is_biunit(A, e, tol) || !is_biunit(A, e2, tol))
    throw PreconditionError("canonical_biunit_iso: both elements must be biunits");
  const std::size_t n = A.dim();
  LinearMap psi(n, n);
  for (std::size_t i = 0; i < n; ++i) psi.col(i) = ternary_product(A, basis_vector(n, i), e, e2);
  return psi;
}

/// Component-wise product on the block sum.
inline TernaryAlgebra direct_sum(const TernaryAlgebra& A1, const TernaryAlgebra& A2) {
  const std::size_t n1 = A1.dim(), n2 = A2.dim();
  StructureTensor C = make_structure_tensor(n1 + n2);
  for (std::size_t l = 0; l < n1; ++l)
    for (std::size_t a = 0; a < n1; ++a)
      for (std::size_t b = 0; b < n1; ++b)
        for (std::size_t c = 0; c < n1; ++c) C(l, a, b, c) = A1(l, a, b, c);
  for (std::size_t l = 0; l < n2; ++l)
    for (std::size_t a = 0; a < n2; ++a)
      for (std::size_t b = 0; b < n2; ++b)
        for (std::size_t c = 0; c < n2; ++c) C(n1 + l, n1 + a, n1 + b, n1 + c) = A2(l, a, b, c);
  return TernaryAlgebra(std::move(C), A1.label() + "+" + A2.label());
}

/// Triple tensor product; multi-index (i1,i2,i3) flattens to (i1*n2 + i2)*n3 + i3.
inline TernaryAlgebra tensor_product(const TernaryAlgebra& A1, const TernaryAlgebra& A2, const TernaryAlgebra& A3) {
  const std::size_t n1 = A1.dim(), n2 = A2.dim(), n3 = A3.dim();
  const auto flat = [&](std::size_t i1, std::size_t i2, std::size_t i3) { return (i1 * n2 + i2) * n3 + i3; };
  StructureTensor C = make_structure_tensor(n1 * n2 * n3);
  // Only nonzero factor entries contribute.
  struct Entry {
    std::size_t l, a, b, c;
    double v;
  };
  const auto nonzeros = [](const TernaryAlgebra& A) {
    std::vector<Entry> out;
    const std::size_t n = A.dim();
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t c = 0; c < n; ++c)
            if (A(l, a, b, c) != 0.0) out.push_back({l, a, b, c, A(l, a, b, c)});
    return out;
  };
  const auto E1 = nonzeros(A1), E2 = nonzeros(A2), E3 = nonzeros(A3);
  for (const auto& x : E1)
    for (const auto& y : E2)
      for (const auto& z : E3)
        C(flat(x.l, y.l, z.l), flat(x.a, y.a, z.a), flat(x.b, y.b, z.b), flat(x.c, y.c, z.c)) = x.v * y.v * z.v;
  return TernaryAlgebra(std::move(C), A1.label() + "*" + A2.label() + "*" + A3.label());
}

class NotScalingRelated : public Error {
 public:
  using Error::Error;
};

/// Finds lambda > 0 such that lambda * identity is a homomorphism from A1 to A2,
/// assuming the structure tensors are proportional, C1 = s * C2. Then lambda^2 = s.
/// Returns nullopt when no positive lambda exists (s <= 0, or C2 = 0 with C1 != 0).
/// Throws NotScalingRelated when the tensors are not proportional.
inline std::optional<double> scaling_iso_search(const TernaryAlgebra& A1, const TernaryAlgebra& A2, Tolerance tol = {}) {
  if (A1.dim() != A2.dim()) throw InputError("scaling_iso_search: dimension mismatch");
  const auto c1 = A1.structure().data();
  const auto c2 = A2.structure().data();
  double dot12 = 0.0, dot22 = 0.0;
  for (std::size_t i = 0; i < c1.size(); ++i) {
    dot12 += c1[i] * c2[i];
    dot22 += c2[i] * c2[i];
  }
  if (dot22 == 0.0) {
    if (A1.structure().is_zero()) return 1.0;
    return std::nullopt;
  }
  const double s = dot12 / dot22;
  double misfit = 0.0;
  for (std::size_t i = 0; i < c1.size(); ++i) misfit = std::max(misfit, std::abs(c1[i] - s * c2[i]));
  if (misfit > tol.eps) throw NotScalingRelated("not scaling-related: structure tensors are not proportional");
  if (s <= 0.0) return std::nullopt;
  return std::sqrt(s);
}

}  // namespace ternalg
