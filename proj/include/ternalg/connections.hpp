#pragma once

#include "ternalg/fields.hpp"
#include "ternalg/parallel.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace ternalg {

/// Gamma(a, alpha, beta) per node: nabla_a s_alpha = Gamma(a, alpha, beta) s_beta.
struct ConnectionField {
  Chart chart;
  std::size_t fibre_dim = 0;
  std::vector<DenseTensor<3>> values;
};

inline ConnectionField zero_connection(const Chart& chart, std::size_t fibre_dim) {
  return {chart, fibre_dim,
          std::vector<DenseTensor<3>>(chart.num_points(), DenseTensor<3>({chart.base_dim(), fibre_dim, fibre_dim}))};
}

inline void validate(const ConnectionField& G) {
  if (G.values.size() != G.chart.num_points()) throw InputError("connection field: value count does not match chart");
  const DenseTensor<3>::Extents ext{G.chart.base_dim(), G.fibre_dim, G.fibre_dim};
  for (const auto& v : G.values) {
    if (v.extents() != ext) throw InputError("connection field: coefficient shape must be base_dim x n x n");
    if (!v.all_finite()) throw InputError("connection field: non-finite entry");
  }
}

class DegenerateMetricError : public Error {
 public:
  DegenerateMetricError(GridIndex node, double det)
      : Error(message(node, det)), node_(std::move(node)), det_(det) {}

  const GridIndex& node() const { return node_; }
  double determinant() const { return det_; }

 private:
  static std::string message(const GridIndex& node, double det) {
    std::ostringstream os;
    os << "degenerate metric at node " << format_index(node) << " (|det g| = " << std::abs(det) << ")";
    return os.str();
  }

  GridIndex node_;
  double det_;
};

/// Second-order derivative along one chart axis: central differences in the
/// interior, three-point one-sided differences at the two ends. Exact on
/// affine data. T needs T - T, T * double and copy construction.
template <class T>
std::vector<T> partial_derivative(const Chart& chart, const std::vector<T>& f, std::size_t axis) {
  if (axis >= chart.base_dim()) throw InputError("partial_derivative: axis out of range");
  if (f.size() != chart.num_points()) throw InputError("partial_derivative: value count does not match chart");
  const std::size_t m = chart.shape()[axis];
  if (m < 3) throw InputError("partial_derivative: axis " + std::to_string(axis) + " has fewer than 3 points");
  const std::size_t s = chart.stride(axis);
  const double inv2h = 1.0 / (2.0 * chart.spacing()[axis]);
  std::vector<T> out;
  out.reserve(f.size());
  for (std::size_t p = 0; p < f.size(); ++p) {
    const std::size_t i = (p / s) % m;
    if (i == 0) {
      out.emplace_back((((f[p + s] - f[p]) * 4.0) - (f[p + 2 * s] - f[p])) * inv2h);
    } else if (i == m - 1) {
      out.emplace_back((((f[p] - f[p - s]) * 4.0) - (f[p] - f[p - 2 * s])) * inv2h);
    } else {
      out.emplace_back((f[p + s] - f[p - s]) * inv2h);
    }
  }
  return out;
}

/// Max-norm summary of a residual field.
struct ResidualReport {
  double max = 0.0;
  GridIndex argmax;
  std::vector<double> per_axis;  // max over nodes of the residual restricted to one base direction
  std::vector<double> node_max;  // max-norm per node
  bool pass = true;
};

namespace detail {

inline ResidualReport summarize(const Chart& chart, std::vector<double> node_max, std::vector<double> per_axis,
                                double eps) {
  ResidualReport r;
  std::size_t worst = 0;
  for (std::size_t p = 0; p < node_max.size(); ++p)
    if (node_max[p] > node_max[worst]) worst = p;
  r.max = node_max.empty() ? 0.0 : node_max[worst];
  r.argmax = chart.multi_index(worst);
  r.per_axis = std::move(per_axis);
  r.node_max = std::move(node_max);
  r.pass = r.max <= eps;
  return r;
}

inline void require_same_chart(const Chart& a, const Chart& b, const char* what) {
  if (!(a == b)) throw InputError(std::string(what) + ": chart mismatch");
}

}  // namespace detail

/// Residual of the ternary Leibniz rule in coordinates,
///
///   R^l_{a abc} = d_a C^l_{abc} + C^e_{abc} G^l_{ae}
///                 - G^e_{aa} C^l_{ebc} - G^e_{ab} C^l_{aec} - G^e_{ac} C^l_{abe},
///
/// with d_a the second-order stencil. The connection is differential iff max |R| <= eps.
inline ResidualReport differential_residual(const StructureField& F, const ConnectionField& G, Tolerance tol = {}) {
  validate(F);
  validate(G);
  detail::require_same_chart(F.chart, G.chart, "differential_residual");
  if (F.fibre_dim != G.fibre_dim) throw InputError("differential_residual: fibre dimension mismatch");
  const std::size_t d = F.chart.base_dim(), n = F.fibre_dim, P = F.values.size();

  std::vector<std::vector<StructureTensor>> dC;
  for (std::size_t a = 0; a < d; ++a) dC.push_back(partial_derivative(F.chart, F.values, a));

  std::vector<double> node_max(P, 0.0);
  std::vector<double> node_axis(P * d, 0.0);
  parallel_for(P, [&](std::size_t p) {
    const auto& C = F.values[p];
    const auto& Gm = G.values[p];
    for (std::size_t a = 0; a < d; ++a) {
      double worst = 0.0;
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t al = 0; al < n; ++al)
          for (std::size_t be = 0; be < n; ++be)
            for (std::size_t ga = 0; ga < n; ++ga) {
              double r = dC[a][p](l, al, be, ga);
              for (std::size_t e = 0; e < n; ++e) {
                r += C(e, al, be, ga) * Gm(a, e, l);
                r -= Gm(a, al, e) * C(l, e, be, ga);
                r -= Gm(a, be, e) * C(l, al, e, ga);
                r -= Gm(a, ga, e) * C(l, al, be, e);
              }
              worst = std::max(worst, std::abs(r));
            }
      node_axis[p * d + a] = worst;
      node_max[p] = std::max(node_max[p], worst);
    }
  });
  std::vector<double> per_axis(d, 0.0);
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t a = 0; a < d; ++a) per_axis[a] = std::max(per_axis[a], node_axis[p * d + a]);
  return detail::summarize(F.chart, std::move(node_max), std::move(per_axis), tol.eps);
}

/// Torsion-free metric connection, G^c_{ab} = 1/2 g^{cd} (d_a g_{bd} + d_b g_{ad} - d_d g_{ab}),
/// with discrete derivatives. Throws DegenerateMetricError at the first node with |det g| below the threshold.
inline ConnectionField levi_civita(const MetricField& g, double det_threshold = 1e-12) {
  validate(g);
  const Chart& chart = g.chart;
  const std::size_t d = chart.base_dim(), P = g.values.size();
  for (std::size_t p = 0; p < P; ++p) {
    const double det = g.values[p].determinant();
    if (!(std::abs(det) >= det_threshold)) throw DegenerateMetricError(chart.multi_index(p), det);
  }
  std::vector<std::vector<Matrix>> dg;
  for (std::size_t a = 0; a < d; ++a) dg.push_back(partial_derivative(chart, g.values, a));

  ConnectionField G = zero_connection(chart, d);
  parallel_for(P, [&](std::size_t p) {
    const Matrix ginv = g.values[p].inverse();
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b)
        for (std::size_t c = 0; c < d; ++c) {
          double s = 0.0;
          for (std::size_t e = 0; e < d; ++e)
            s += ginv(c, e) * (dg[a][p](b, e) + dg[b][p](a, e) - dg[e][p](a, b));
          G.values[p](a, b, c) = 0.5 * s;
          G.values[p](b, a, c) = 0.5 * s;
        }
  });
  return G;
}

/// d_a g_{bc} - G^e_{ab} g_{ec} - G^e_{ac} g_{be}
inline ResidualReport metric_compat_residual(const MetricField& g, const ConnectionField& G, Tolerance tol = {}) {
  validate(g);
  validate(G);
  detail::require_same_chart(g.chart, G.chart, "metric_compat_residual");
  const std::size_t d = g.chart.base_dim(), P = g.values.size();
  if (G.fibre_dim != d) throw InputError("metric_compat_residual: connection must act on the tangent bundle");
  std::vector<std::vector<Matrix>> dg;
  for (std::size_t a = 0; a < d; ++a) dg.push_back(partial_derivative(g.chart, g.values, a));

  std::vector<double> node_max(P, 0.0), node_axis(P * d, 0.0);
  parallel_for(P, [&](std::size_t p) {
    const Matrix& m = g.values[p];
    for (std::size_t a = 0; a < d; ++a) {
      double worst = 0.0;
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t c = 0; c < d; ++c) {
          double r = dg[a][p](b, c);
          for (std::size_t e = 0; e < d; ++e) r -= G.values[p](a, b, e) * m(e, c) + G.values[p](a, c, e) * m(b, e);
          worst = std::max(worst, std::abs(r));
        }
      node_axis[p * d + a] = worst;
      node_max[p] = std::max(node_max[p], worst);
    }
  });
  std::vector<double> per_axis(d, 0.0);
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t a = 0; a < d; ++a) per_axis[a] = std::max(per_axis[a], node_axis[p * d + a]);
  return detail::summarize(g.chart, std::move(node_max), std::move(per_axis), tol.eps);
}

/// Per-node curvature R(beta, a, b, alpha) = R^beta_{ab alpha}:
///   d_a G^beta_{b alpha} - d_b G^beta_{a alpha} + G^e_{b alpha} G^beta_{a e} - G^e_{a alpha} G^beta_{b e}.
/// Antisymmetric in (a, b) by construction.
inline std::vector<DenseTensor<4>> curvature(const ConnectionField& G) {
  validate(G);
  const std::size_t d = G.chart.base_dim(), n = G.fibre_dim, P = G.values.size();
  std::vector<std::vector<DenseTensor<3>>> dG;
  for (std::size_t a = 0; a < d; ++a) dG.push_back(partial_derivative(G.chart, G.values, a));

  std::vector<DenseTensor<4>> R(P, DenseTensor<4>({n, d, d, n}));
  parallel_for(P, [&](std::size_t p) {
    const auto& Gm = G.values[p];
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b)
        for (std::size_t al = 0; al < n; ++al)
          for (std::size_t be = 0; be < n; ++be) {
            double r = dG[a][p](b, al, be) - dG[b][p](a, al, be);
            for (std::size_t e = 0; e < n; ++e) r += Gm(b, al, e) * Gm(a, e, be) - Gm(a, al, e) * Gm(b, e, be);
            R[p](be, a, b, al) = r;
            R[p](be, b, a, al) = -r;
          }
  });
  return R;
}

/// Largest violation of R[u,v,w] = [Ru,v,w] + [u,Rv,w] + [u,v,Rw] over nodes,
/// base pairs (a < b) and basis triples.
inline ResidualReport curvature_derivation_residual(const StructureField& F, const ConnectionField& G,
                                                    Tolerance tol = {}) {
  validate(F);
  detail::require_same_chart(F.chart, G.chart, "curvature_derivation_residual");
  if (F.fibre_dim != G.fibre_dim) throw InputError("curvature_derivation_residual: fibre dimension mismatch");
  const auto R = curvature(G);
  const std::size_t d = F.chart.base_dim(), n = F.fibre_dim, P = F.values.size();
  std::vector<double> node_max(P, 0.0);
  parallel_for(P, [&](std::size_t p) {
    const auto& C = F.values[p];
    const auto& Rp = R[p];
    double worst = 0.0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b)
        for (std::size_t al = 0; al < n; ++al)
          for (std::size_t be = 0; be < n; ++be)
            for (std::size_t ga = 0; ga < n; ++ga)
              for (std::size_t mu = 0; mu < n; ++mu) {
                double r = 0.0;
                for (std::size_t e = 0; e < n; ++e) {
                  r += C(e, al, be, ga) * Rp(mu, a, b, e);
                  r -= Rp(e, a, b, al) * C(mu, e, be, ga);
                  r -= Rp(e, a, b, be) * C(mu, al, e, ga);
                  r -= Rp(e, a, b, ga) * C(mu, al, be, e);
                }
                worst = std::max(worst, std::abs(r));
              }
    node_max[p] = worst;
  });
  return detail::summarize(F.chart, std::move(node_max), {}, tol.eps);
}

}  // namespace ternalg
