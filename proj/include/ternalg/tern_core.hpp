#pragma once

#include "ternalg/tensor.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ternalg {

/// Finite-dimensional real ternary algebra given by structure constants.
///
/// Para-associativity is not required at construction; the predicates below
/// test it.
class TernaryAlgebra {
 public:
  TernaryAlgebra() : C_(make_structure_tensor(1)) {}

  explicit TernaryAlgebra(StructureTensor C, std::string label = {}) : C_(std::move(C)), label_(std::move(label)) {
    const auto& e = C_.extents();
    if (e[0] == 0 || e[0] != e[1] || e[0] != e[2] || e[0] != e[3])
      throw InputError("structure tensor must have shape n x n x n x n with n >= 1");
    if (!C_.all_finite()) throw InputError("structure tensor has non-finite entries");
  }

  static TernaryAlgebra zero(std::size_t n, std::string label = "zero") {
    return TernaryAlgebra(make_structure_tensor(n), std::move(label));
  }

  std::size_t dim() const { return C_.extent(0); }
  const StructureTensor& structure() const { return C_; }
  double operator()(std::size_t l, std::size_t a, std::size_t b, std::size_t c) const { return C_(l, a, b, c); }
  const std::string& label() const { return label_; }
  void set_label(std::string s) { label_ = std::move(s); }

  friend bool operator==(const TernaryAlgebra& x, const TernaryAlgebra& y) { return x.C_ == y.C_; }

 private:
  StructureTensor C_;
  std::string label_;
};

namespace detail {

inline void require_dim(const TernaryAlgebra& A, const Vector& v, const char* what) {
  if (static_cast<std::size_t>(v.size()) != A.dim())
    throw InputError(std::string(what) + ": vector of dimension " + std::to_string(v.size()) +
                     " does not match algebra dimension " + std::to_string(A.dim()));
}

}  // namespace detail

inline Vector ternary_product(const TernaryAlgebra& A, const Vector& u, const Vector& v, const Vector& w) {
  detail::require_dim(A, u, "ternary_product");
  detail::require_dim(A, v, "ternary_product");
  detail::require_dim(A, w, "ternary_product");
  const std::size_t n = A.dim();
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    if (u(a) == 0.0) continue;
    for (std::size_t b = 0; b < n; ++b) {
      const double uv = u(a) * v(b);
      if (uv == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        const double uvw = uv * w(c);
        if (uvw == 0.0) continue;
        for (std::size_t l = 0; l < n; ++l) out(l) += A(l, a, b, c) * uvw;
      }
    }
  }
  return out;
}

/// Residual pair of a five-argument associativity law.
struct ResidualPair {
  Vector first;
  Vector second;

  double max_abs() const { return std::max(ternalg::max_abs(first), ternalg::max_abs(second)); }
};

/// R1 = [[x1,x2,x3],x4,x5] - [x1,[x4,x3,x2],x5],  R2 = [x1,[x4,x3,x2],x5] - [x1,x2,[x3,x4,x5]].
inline ResidualPair para_residual(const TernaryAlgebra& A, const Vector& x1, const Vector& x2, const Vector& x3,
                                  const Vector& x4, const Vector& x5) {
  const Vector left = ternary_product(A, ternary_product(A, x1, x2, x3), x4, x5);
  const Vector middle = ternary_product(A, x1, ternary_product(A, x4, x3, x2), x5);
  const Vector right = ternary_product(A, x1, x2, ternary_product(A, x3, x4, x5));
  return {left - middle, middle - right};
}

/// Same as para_residual with the un-reversed middle factor [x2,x3,x4].
inline ResidualPair a_assoc_residual(const TernaryAlgebra& A, const Vector& x1, const Vector& x2, const Vector& x3,
                                     const Vector& x4, const Vector& x5) {
  const Vector left = ternary_product(A, ternary_product(A, x1, x2, x3), x4, x5);
  const Vector middle = ternary_product(A, x1, ternary_product(A, x2, x3, x4), x5);
  const Vector right = ternary_product(A, x1, x2, ternary_product(A, x3, x4, x5));
  return {left - middle, middle - right};
}

/// Largest violation of the contracted structure-constant identities
///
///   C^e_{abc} C^l_{edf} = C^e_{dcb} C^l_{aef} = C^e_{cdf} C^l_{abe}
///
/// over all index tuples. Zero exactly when the algebra is para-associative.
inline double para_defect(const TernaryAlgebra& A) {
  const std::size_t n = A.dim();
  const auto& C = A.structure();
  double worst = 0.0;
  std::vector<double> p1(n), p2(n), p3(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d)
          for (std::size_t f = 0; f < n; ++f) {
            std::fill(p1.begin(), p1.end(), 0.0);
            std::fill(p2.begin(), p2.end(), 0.0);
            std::fill(p3.begin(), p3.end(), 0.0);
            for (std::size_t e = 0; e < n; ++e) {
              const double c1 = C(e, a, b, c);
              const double c2 = C(e, d, c, b);
              const double c3 = C(e, c, d, f);
              if (c1 == 0.0 && c2 == 0.0 && c3 == 0.0) continue;
              for (std::size_t l = 0; l < n; ++l) {
                p1[l] += c1 * C(l, e, d, f);
                p2[l] += c2 * C(l, a, e, f);
                p3[l] += c3 * C(l, a, b, e);
              }
            }
            for (std::size_t l = 0; l < n; ++l)
              worst = std::max({worst, std::abs(p1[l] - p2[l]), std::abs(p2[l] - p3[l])});
          }
  return worst;
}

inline bool is_para_associative(const TernaryAlgebra& A, Tolerance tol = {}) { return para_defect(A) <= tol.eps; }

/// Largest A-type associativity residual over all basis 5-tuples.
inline double a_assoc_defect(const TernaryAlgebra& A) {
  const std::size_t n = A.dim();
  double worst = 0.0;
  std::vector<Vector> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back(basis_vector(n, i));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d)
          for (std::size_t f = 0; f < n; ++f)
            worst = std::max(worst, a_assoc_residual(A, e[a], e[b], e[c], e[d], e[f]).max_abs());
  return worst;
}

inline double commutativity_defect(const TernaryAlgebra& A) {
  const std::size_t n = A.dim();
  double worst = 0.0;
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) worst = std::max(worst, std::abs(A(l, a, b, c) - A(l, c, b, a)));
  return worst;
}

inline bool is_commutative(const TernaryAlgebra& A, Tolerance tol = {}) { return commutativity_defect(A) <= tol.eps; }

/// max_i |[e,e,s_i] - s_i|
inline double left_biunit_residual(const TernaryAlgebra& A, const Vector& e) {
  detail::require_dim(A, e, "left_biunit_residual");
  double worst = 0.0;
  for (std::size_t i = 0; i < A.dim(); ++i) {
    const Vector x = basis_vector(A.dim(), i);
    worst = std::max(worst, max_abs(Vector(ternary_product(A, e, e, x) - x)));
  }
  return worst;
}

/// max_i |[s_i,e,e] - s_i|
inline double right_biunit_residual(const TernaryAlgebra& A, const Vector& e) {
  detail::require_dim(A, e, "right_biunit_residual");
  double worst = 0.0;
  for (std::size_t i = 0; i < A.dim(); ++i) {
    const Vector x = basis_vector(A.dim(), i);
    worst = std::max(worst, max_abs(Vector(ternary_product(A, x, e, e) - x)));
  }
  return worst;
}

inline bool is_biunit(const TernaryAlgebra& A, const Vector& e, Tolerance tol = {}) {
  return left_biunit_residual(A, e) <= tol.eps && right_biunit_residual(A, e) <= tol.eps;
}

/// Candidates that pass is_biunit, in input order. Not a completeness claim.
inline std::vector<Vector> biunit_search(const TernaryAlgebra& A, const std::vector<Vector>& candidates,
                                         Tolerance tol = {}) {
  if (candidates.empty()) throw InputError("biunit_search: candidate list is empty");
  std::vector<Vector> out;
  for (const auto& e : candidates)
    if (is_biunit(A, e, tol)) out.push_back(e);
  return out;
}

/// [u,v,w]^op = [w,v,u]
inline TernaryAlgebra opposite(const TernaryAlgebra& A) {
  const std::size_t n = A.dim();
  StructureTensor C = make_structure_tensor(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) C(l, a, b, c) = A(l, c, b, a);
  return TernaryAlgebra(std::move(C), A.label().empty() ? std::string{} : A.label() + "^op");
}

inline Vector ternary_commutator(const TernaryAlgebra& A, const Vector& u, const Vector& v, const Vector& w) {
  return ternary_product(A, u, v, w) - ternary_product(A, v, u, w) + ternary_product(A, w, u, v) -
         ternary_product(A, u, w, v) + ternary_product(A, v, w, u) - ternary_product(A, w, v, u);
}

/// max over basis triples of |phi[s_a,s_b,s_c]_A - [phi s_a, phi s_b, phi s_c]_B|_inf.
inline double hom_residual(const TernaryAlgebra& A, const TernaryAlgebra& B, const LinearMap& phi) {
  if (static_cast<std::size_t>(phi.rows()) != B.dim() || static_cast<std::size_t>(phi.cols()) != A.dim())
    throw InputError("hom_residual: map shape does not match algebra dimensions");
  const std::size_t n = A.dim();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const Vector lhs = phi * ternary_product(A, basis_vector(n, a), basis_vector(n, b), basis_vector(n, c));
        const Vector rhs = ternary_product(B, phi.col(a), phi.col(b), phi.col(c));
        worst = std::max(worst, max_abs(Vector(lhs - rhs)));
      }
  return worst;
}

/// max over basis v, w of |[z,v,w]| and |[v,z,w]|; zero when z annihilates the first two slots.
inline double left_central_annihilator_residual(const TernaryAlgebra& A, const Vector& z) {
  detail::require_dim(A, z, "left_central_annihilator_residual");
  const std::size_t n = A.dim();
  double worst = 0.0;
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = 0; c < n; ++c) {
      const Vector v = basis_vector(n, b);
      const Vector w = basis_vector(n, c);
      worst = std::max({worst, max_abs(ternary_product(A, z, v, w)), max_abs(ternary_product(A, v, z, w))});
    }
  return worst;
}

}  // namespace ternalg
