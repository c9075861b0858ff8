#pragma once

#include "ternalg/constructors.hpp"
#include "ternalg/parallel.hpp"
#include "ternalg/tern_core.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace ternalg {

using GridIndex = std::vector<std::size_t>;

/// Rectangular grid sampling one coordinate patch. Nodes are ordered
/// C-row-major (last axis fastest).
class Chart {
 public:
  Chart() = default;

  Chart(std::vector<double> origin, std::vector<double> spacing, std::vector<std::size_t> shape)
      : origin_(std::move(origin)), spacing_(std::move(spacing)), shape_(std::move(shape)) {
    if (origin_.empty() || origin_.size() != spacing_.size() || origin_.size() != shape_.size())
      throw InputError("chart: origin, spacing and shape must have the same positive length");
    for (std::size_t a = 0; a < shape_.size(); ++a) {
      if (!(spacing_[a] > 0.0) || !std::isfinite(spacing_[a])) throw InputError("chart: spacings must be positive");
      if (!std::isfinite(origin_[a])) throw InputError("chart: origin must be finite");
      if (shape_[a] == 0) throw InputError("chart: every axis needs at least one point");
    }
  }

  /// Chart over [lo, hi] per axis with the given point counts.
  static Chart box(const std::vector<double>& lo, const std::vector<double>& hi, const std::vector<std::size_t>& shape) {
    std::vector<double> h(lo.size());
    for (std::size_t a = 0; a < lo.size(); ++a)
      h[a] = shape.at(a) > 1 ? (hi.at(a) - lo[a]) / static_cast<double>(shape[a] - 1) : 1.0;
    return Chart(lo, h, shape);
  }

  std::size_t base_dim() const { return shape_.size(); }
  const std::vector<double>& origin() const { return origin_; }
  const std::vector<double>& spacing() const { return spacing_; }
  const std::vector<std::size_t>& shape() const { return shape_; }

  std::size_t num_points() const {
    std::size_t p = 1;
    for (auto s : shape_) p *= s;
    return p;
  }

  std::size_t stride(std::size_t axis) const {
    std::size_t s = 1;
    for (std::size_t a = axis + 1; a < shape_.size(); ++a) s *= shape_[a];
    return s;
  }

  std::size_t flat_index(const GridIndex& idx) const {
    if (idx.size() != shape_.size()) throw InputError("grid index has wrong rank");
    std::size_t off = 0;
    for (std::size_t a = 0; a < shape_.size(); ++a) {
      if (idx[a] >= shape_[a]) throw InputError("grid index out of range on axis " + std::to_string(a));
      off = off * shape_[a] + idx[a];
    }
    return off;
  }

  GridIndex multi_index(std::size_t flat) const {
    GridIndex idx(shape_.size());
    for (std::size_t a = shape_.size(); a-- > 0;) {
      idx[a] = flat % shape_[a];
      flat /= shape_[a];
    }
    return idx;
  }

  double coordinate(std::size_t axis, std::size_t i) const {
    return origin_[axis] + static_cast<double>(i) * spacing_[axis];
  }

  std::vector<double> coordinates(std::size_t flat) const {
    const GridIndex idx = multi_index(flat);
    std::vector<double> x(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) x[a] = coordinate(a, idx[a]);
    return x;
  }

  double upper(std::size_t axis) const { return coordinate(axis, shape_[axis] - 1); }

  bool contains(const std::vector<double>& x) const {
    if (x.size() != shape_.size()) return false;
    for (std::size_t a = 0; a < x.size(); ++a) {
      const double slack = 1e-12 * spacing_[a];
      if (x[a] < origin_[a] - slack || x[a] > upper(a) + slack) return false;
    }
    return true;
  }

  friend bool operator==(const Chart&, const Chart&) = default;

 private:
  std::vector<double> origin_;
  std::vector<double> spacing_;
  std::vector<std::size_t> shape_;
};

inline std::string format_index(const GridIndex& idx) {
  std::string s = "(";
  for (std::size_t a = 0; a < idx.size(); ++a) s += (a ? "," : "") + std::to_string(idx[a]);
  return s + ")";
}

struct StructureField {
  Chart chart;
  std::size_t fibre_dim = 0;
  std::vector<StructureTensor> values;
};

/// Symmetric d x d form per node. Degenerate and indefinite values are allowed.
struct MetricField {
  Chart chart;
  std::vector<Matrix> values;
};

struct SectionField {
  Chart chart;
  std::size_t fibre_dim = 0;
  std::vector<Vector> values;
};

inline void validate(const StructureField& F) {
  if (F.values.size() != F.chart.num_points()) throw InputError("structure field: value count does not match chart");
  for (const auto& C : F.values) {
    if (C.extents() != StructureTensor::Extents{F.fibre_dim, F.fibre_dim, F.fibre_dim, F.fibre_dim})
      throw InputError("structure field: tensor shape does not match fibre dimension");
    if (!C.all_finite()) throw InputError("structure field: non-finite entry");
  }
}

inline void validate(const MetricField& g) {
  const auto d = static_cast<Eigen::Index>(g.chart.base_dim());
  if (g.values.size() != g.chart.num_points()) throw InputError("metric field: value count does not match chart");
  for (std::size_t p = 0; p < g.values.size(); ++p) {
    const Matrix& m = g.values[p];
    if (m.rows() != d || m.cols() != d) throw InputError("metric field: each value must be base_dim x base_dim");
    if (!m.allFinite()) throw InputError("metric field: non-finite entry");
    if (m != m.transpose())
      throw InputError("metric field: not symmetric at node " + format_index(g.chart.multi_index(p)));
  }
}

inline void validate(const SectionField& u) {
  if (u.values.size() != u.chart.num_points()) throw InputError("section field: value count does not match chart");
  for (const auto& v : u.values)
    if (static_cast<std::size_t>(v.size()) != u.fibre_dim) throw InputError("section field: vector length mismatch");
}

/// Samples g at every node; the lower triangle is copied from the upper one.
inline MetricField sample_metric(const Chart& chart, const std::function<Matrix(const std::vector<double>&)>& fn) {
  MetricField g{chart, {}};
  g.values.reserve(chart.num_points());
  for (std::size_t p = 0; p < chart.num_points(); ++p) {
    Matrix m = fn(chart.coordinates(p));
    m.triangularView<Eigen::StrictlyLower>() = m.transpose().triangularView<Eigen::StrictlyLower>();
    g.values.push_back(std::move(m));
  }
  validate(g);
  return g;
}

inline SectionField sample_section(const Chart& chart, std::size_t n,
                                   const std::function<Vector(const std::vector<double>&)>& fn) {
  SectionField u{chart, n, {}};
  u.values.reserve(chart.num_points());
  for (std::size_t p = 0; p < chart.num_points(); ++p) u.values.push_back(fn(chart.coordinates(p)));
  validate(u);
  return u;
}

inline StructureField constant_field(const Chart& chart, const TernaryAlgebra& A) {
  return {chart, A.dim(), std::vector<StructureTensor>(chart.num_points(), A.structure())};
}

/// [X,Y,Z] = g(X,Y) Z on the tangent bundle of the chart.
inline StructureField metric_algebroid(const MetricField& g) {
  validate(g);
  const std::size_t d = g.chart.base_dim();
  StructureField F{g.chart, d, {}};
  F.values.reserve(g.values.size());
  for (const auto& m : g.values) F.values.push_back(bilinear_algebra(BilinearForm(m)).structure());
  return F;
}

/// Inverse metric per node; throws if any node is singular.
inline MetricField inverse_metric(const MetricField& g, double det_threshold = 1e-12) {
  validate(g);
  MetricField inv{g.chart, {}};
  inv.values.reserve(g.values.size());
  for (std::size_t p = 0; p < g.values.size(); ++p) {
    if (std::abs(g.values[p].determinant()) < det_threshold)
      throw PreconditionError("inverse_metric: degenerate metric at node " + format_index(g.chart.multi_index(p)));
    Matrix m = g.values[p].inverse();
    m = 0.5 * (m + m.transpose()).eval();
    inv.values.push_back(std::move(m));
  }
  return inv;
}

/// [w,e,s] = g^{-1}(w,e) s on the cotangent bundle; needs an invertible metric.
inline StructureField cotangent_algebroid(const MetricField& g) { return metric_algebroid(inverse_metric(g)); }

/// C(t) = t * (bilinear structure of B) over a one-dimensional chart.
inline StructureField scaled_line_algebroid(const BilinearForm& B, const Chart& chart) {
  if (chart.base_dim() != 1) throw InputError("scaled_line_algebroid: chart must be one-dimensional");
  const StructureTensor base = bilinear_algebra(B).structure();
  StructureField F{chart, B.dim(), {}};
  F.values.reserve(chart.num_points());
  for (std::size_t p = 0; p < chart.num_points(); ++p) F.values.push_back(chart.coordinate(0, p) * base);
  return F;
}

inline TernaryAlgebra fibre_algebra(const StructureField& F, const GridIndex& idx) {
  const std::size_t p = F.chart.flat_index(idx);
  if (p >= F.values.size()) throw InputError("fibre_algebra: field has no value at " + format_index(idx));
  return TernaryAlgebra(F.values[p], "fibre" + format_index(idx));
}

struct FieldCheckReport {
  GridIndex worst_point;
  double worst_residual = 0.0;
  bool pass = true;
};

/// Runs the para-associativity check at every node.
inline FieldCheckReport field_para_check(const StructureField& F, Tolerance tol = {}) {
  validate(F);
  std::vector<double> defect(F.values.size());
  parallel_for(F.values.size(), [&](std::size_t p) { defect[p] = para_defect(TernaryAlgebra(F.values[p])); });
  FieldCheckReport r;
  std::size_t worst = 0;
  for (std::size_t p = 0; p < defect.size(); ++p)
    if (defect[p] > defect[worst]) worst = p;
  r.worst_point = F.chart.multi_index(worst);
  r.worst_residual = defect.empty() ? 0.0 : defect[worst];
  r.pass = r.worst_residual <= tol.eps;
  return r;
}

/// Pointwise ternary product of three sections.
inline SectionField evaluate_section_product(const StructureField& F, const SectionField& u, const SectionField& v,
                                             const SectionField& w) {
  validate(F);
  for (const SectionField* s : {&u, &v, &w}) {
    validate(*s);
    if (!(s->chart == F.chart)) throw InputError("evaluate_section_product: chart mismatch");
    if (s->fibre_dim != F.fibre_dim) throw InputError("evaluate_section_product: fibre dimension mismatch");
  }
  SectionField out{F.chart, F.fibre_dim, std::vector<Vector>(F.values.size())};
  for (std::size_t p = 0; p < F.values.size(); ++p) {
    const TernaryAlgebra A(F.values[p]);
    out.values[p] = ternary_product(A, u.values[p], v.values[p], w.values[p]);
  }
  return out;
}

}  // namespace ternalg
