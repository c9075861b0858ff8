#pragma once

#include "ternalg/fields.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace ternalg::presets {

/// (theta, phi) chart of the round sphere with theta spacing h. The theta
/// nodes are aligned so that `anchor` is a node, and stay inside
/// [margin, pi - margin] to keep away from the coordinate poles.
inline Chart sphere_chart(double h, double phi_lo, double phi_hi, double phi_h,
                          double anchor = std::numbers::pi / 3.0, double margin = 0.1) {
  if (!(h > 0.0) || !(phi_h > 0.0) || !(phi_hi > phi_lo)) throw InputError("sphere_chart: bad spacing or range");
  if (anchor < margin || anchor > std::numbers::pi - margin) throw InputError("sphere_chart: anchor outside margin");
  const auto below = static_cast<std::size_t>(std::floor((anchor - margin) / h));
  const auto above = static_cast<std::size_t>(std::floor((std::numbers::pi - margin - anchor) / h));
  const double theta0 = anchor - static_cast<double>(below) * h;
  const auto phi_n = static_cast<std::size_t>(std::ceil((phi_hi - phi_lo) / phi_h - 1e-9)) + 1;
  return Chart({theta0, phi_lo}, {h, phi_h}, {below + above + 1, phi_n});
}

/// g = diag(1, sin^2 theta)
inline MetricField round_sphere_metric(const Chart& chart) {
  return sample_metric(chart, [](const std::vector<double>& x) {
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = std::sin(x[0]) * std::sin(x[0]);
    return g;
  });
}

inline MetricField constant_metric(const Chart& chart, const Matrix& g0) {
  return sample_metric(chart, [&](const std::vector<double>&) { return g0; });
}

inline MetricField flat_metric(const Chart& chart) {
  const auto d = static_cast<Eigen::Index>(chart.base_dim());
  return constant_metric(chart, Matrix::Identity(d, d));
}

/// Degenerate g = diag(0, 1).
inline MetricField carroll_metric(const Chart& chart) {
  if (chart.base_dim() != 2) throw InputError("carroll_metric: chart must be two-dimensional");
  Matrix g = Matrix::Zero(2, 2);
  g(1, 1) = 1.0;
  return constant_metric(chart, g);
}

/// g = diag(x, 1); changes signature across x = 0.
inline MetricField signature_change_metric(const Chart& chart) {
  if (chart.base_dim() != 2) throw InputError("signature_change_metric: chart must be two-dimensional");
  return sample_metric(chart, [](const std::vector<double>& x) {
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = x[0];
    g(1, 1) = 1.0;
    return g;
  });
}

/// Antisymmetric unit form on R^2: w(e1, e2) = 1.
inline Matrix antisymmetric_unit() {
  Matrix w = Matrix::Zero(2, 2);
  w(0, 1) = 1.0;
  w(1, 0) = -1.0;
  return w;
}

/// [u,v,w] = x w(u,v) w over a one-dimensional chart, w the antisymmetric unit form.
inline StructureField almost_symplectic_line(const Chart& chart) {
  if (chart.base_dim() != 1) throw InputError("almost_symplectic_line: chart must be one-dimensional");
  const StructureTensor base = bilinear_algebra(BilinearForm(antisymmetric_unit())).structure();
  StructureField F{chart, 2, {}};
  for (std::size_t p = 0; p < chart.num_points(); ++p) F.values.push_back(chart.coordinate(0, p) * base);
  return F;
}

}  // namespace ternalg::presets
