#pragma once

#include "report.hpp"
#include "ternalg/io.hpp"
#include "ternalg/presets.hpp"
#include "ternalg/ternalg.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ternalg::cli {

using Params = std::map<std::string, std::string>;

struct Options {
  double eps = 1e-9;
  double dt = 1e-3;
  std::string out;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("invalid number for " + what + ": '" + s + "'");
  }
}

inline std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_double(p, what));
  if (out.empty()) throw InputError("empty list for " + what);
  return out;
}

inline Vector parse_vector(const std::string& s, const std::string& what) {
  const auto v = parse_list(s, what);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline const std::string& param(const Params& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw InputError("missing parameter --set " + key + "=...");
  return it->second;
}

inline double param_double(const Params& p, const std::string& key, std::optional<double> fallback = {}) {
  if (!p.count(key)) {
    if (fallback) return *fallback;
    param(p, key);
  }
  return parse_double(p.at(key), key);
}

inline std::size_t param_size(const Params& p, const std::string& key, std::optional<std::size_t> fallback = {}) {
  const double v = param_double(p, key, fallback ? std::optional<double>(static_cast<double>(*fallback)) : std::nullopt);
  if (v < 0 || v != std::floor(v)) throw InputError("parameter " + key + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

inline Chart chart_from_params(const Params& p) {
  const auto origin = parse_list(param(p, "origin"), "origin");
  const auto spacing = parse_list(param(p, "spacing"), "spacing");
  std::vector<std::size_t> shape;
  for (double v : parse_list(param(p, "shape"), "shape")) {
    if (v < 1 || v != std::floor(v)) throw InputError("shape entries must be positive integers");
    shape.push_back(static_cast<std::size_t>(v));
  }
  return Chart(origin, spacing, shape);
}

inline void require_inputs(const std::vector<std::string>& inputs, std::size_t count, const std::string& kind) {
  if (inputs.size() != count)
    throw InputError("construct " + kind + " expects " + std::to_string(count) + " input file(s), got " +
                     std::to_string(inputs.size()));
}

inline json index_json(const GridIndex& idx) {
  json j = json::array();
  for (auto i : idx) j.push_back(i);
  return j;
}

inline json residual_json(const ResidualReport& r, const Chart& chart) {
  json per = json::array();
  for (double v : r.per_axis) per.push_back(v);
  json x = json::array();
  for (std::size_t a = 0; a < r.argmax.size(); ++a) x.push_back(chart.coordinate(a, r.argmax[a]));
  return json{{"max", r.max}, {"argmax", index_json(r.argmax)}, {"argmax_coordinates", x}, {"per_axis", per}};
}

inline double max_spacing(const Chart& c) {
  double h = 0.0;
  for (double s : c.spacing()) h = std::max(h, s);
  return h;
}

inline std::string spacing_note(const Chart& c) {
  std::ostringstream os;
  os << "field residuals include second-order discretization error; max grid spacing h = " << max_spacing(c)
     << ", h^2 = " << max_spacing(c) * max_spacing(c);
  return os.str();
}

/// Ternary products of basis vectors, 1-based, for small algebras.
inline json product_table(const TernaryAlgebra& A) {
  const std::size_t n = A.dim();
  json rows = json::array();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        json v = json::array();
        for (std::size_t l = 0; l < n; ++l) v.push_back(A(l, a, b, c));
        rows.push_back({{"args", {a + 1, b + 1, c + 1}}, {"value", v}});
      }
  return rows;
}

inline std::vector<Vector> default_biunit_candidates(std::size_t n) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(basis_vector(n, i));
    Vector neg = Vector::Zero(static_cast<Eigen::Index>(n));
    neg(static_cast<Eigen::Index>(i)) = -1.0;
    out.push_back(neg);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(basis_vector(n, i) + basis_vector(n, j));
  return out;
}

inline bool all_stencil_ready(const Chart& c) {
  for (auto m : c.shape())
    if (m < 3) return false;
  return true;
}

}  // namespace detail

/// Post-construction self checks on an algebra, reported as properties.
inline json algebra_summary(const TernaryAlgebra& A, double eps) {
  const double para = para_defect(A);
  return json{{"dim", A.dim()},
              {"label", A.label()},
              {"para_associative", to_json(Verdict::check(para, eps))},
              {"commutative", to_json(Verdict::check(commutativity_defect(A), eps))}};
}

inline RunReport algebra_check(const std::string& path, const Options& opt) {
  RunReport r;
  r.command = "algebra check";
  r.add_input(path);
  const TernaryAlgebra A = io::algebra_from_json(io::read_document(path));
  const double eps = Tolerance(opt.eps).eps;
  r.verdicts["para_associative"] = Verdict::check(para_defect(A), eps);
  r.properties["dim"] = A.dim();
  r.properties["label"] = A.label();
  r.properties["commutative"] = to_json(Verdict::check(commutativity_defect(A), eps));
  r.properties["a_associative"] = to_json(Verdict::check(a_assoc_defect(A), eps));
  json units = json::array();
  for (const Vector& e : biunit_search(A, detail::default_biunit_candidates(A.dim()), Tolerance(eps)))
    units.push_back(io::to_json(e));
  r.properties["biunits_among_candidates"] = units;
  if (A.dim() <= 4) r.outputs["products"] = detail::product_table(A);
  return r;
}

inline RunReport algebra_reduce(const std::string& path, const std::string& e_text, const Options& opt) {
  RunReport r;
  r.command = "algebra reduce";
  r.add_input(path);
  const TernaryAlgebra A = io::algebra_from_json(io::read_document(path));
  const Vector e = detail::parse_vector(e_text, "--e");
  if (static_cast<std::size_t>(e.size()) != A.dim()) throw InputError("--e has wrong dimension for the algebra");
  const Tolerance tol(opt.eps);
  const BinaryAlgebra B = star_reduce(A, e, tol);
  r.verdicts["associative"] = Verdict::check(binary_assoc_residual(B), tol.eps);
  r.properties["e"] = io::to_json(e);
  r.properties["e_is_biunit"] = is_biunit(A, e, tol);
  r.properties["commutative"] = to_json(Verdict::check(binary_commutativity_defect(B), tol.eps));
  if (B.unit) {
    r.properties["unit"] = io::to_json(*B.unit);
    r.properties["unit_residual"] = binary_unit_residual(B, *B.unit);
  } else {
    r.properties["unit"] = nullptr;
  }
  r.outputs["binary_algebra"] = io::to_json(B);
  if (!opt.out.empty()) {
    io::write_document(opt.out, io::to_json(B));
    r.outputs["path"] = opt.out;
  }
  return r;
}

inline RunReport field_check(const std::string& path, const Options& opt) {
  RunReport r;
  r.command = "field check";
  r.add_input(path);
  const StructureField F = io::algebroid_from_json(io::read_document(path));
  const FieldCheckReport c = field_para_check(F, Tolerance(opt.eps));
  r.verdicts["para_associative"] = Verdict::check(c.worst_residual, opt.eps);
  r.outputs["worst_point"] = detail::index_json(c.worst_point);
  r.properties["fibre_dim"] = F.fibre_dim;
  r.properties["base_dim"] = F.chart.base_dim();
  r.properties["num_points"] = F.chart.num_points();
  return r;
}

inline RunReport connection_check(const std::string& field_path, const std::string& connection_path,
                                  const std::string& metric_path, const Options& opt) {
  RunReport r;
  r.command = "connection check";
  r.add_input(field_path);
  r.add_input(connection_path);
  const json field_doc = io::read_document(field_path);
  const StructureField F = io::algebroid_from_json(field_doc);
  const ConnectionField G = io::connection_field_from_json(io::read_document(connection_path));
  const Tolerance tol(opt.eps);

  const ResidualReport dr = differential_residual(F, G, tol);
  r.verdicts["differential"] = Verdict::check(dr.max, tol.eps);
  r.outputs["differential_residual"] = detail::residual_json(dr, F.chart);

  std::optional<MetricField> g;
  if (!metric_path.empty()) {
    r.add_input(metric_path);
    g = io::metric_field_from_json(io::read_document(metric_path));
  } else if (io::field_kind(field_doc) == "metric") {
    g = io::metric_field_from_json(field_doc);
  }
  if (g) {
    const ResidualReport mc = metric_compat_residual(*g, G, tol);
    r.verdicts["metric_compatible"] = Verdict::check(mc.max, tol.eps);
    r.outputs["metric_compat_residual"] = detail::residual_json(mc, g->chart);
  }
  if (detail::all_stencil_ready(G.chart)) {
    const ResidualReport cd = curvature_derivation_residual(F, G, tol);
    r.properties["curvature_derivation"] = to_json(Verdict::check(cd.max, tol.eps));
    r.outputs["curvature_derivation_residual"] = detail::residual_json(cd, F.chart);
  }
  r.notes.push_back(detail::spacing_note(F.chart));
  return r;
}

inline RunReport transport_run(const std::string& field_path, const std::string& connection_path,
                               const std::string& curve_path, const Options& opt) {
  RunReport r;
  r.command = "transport run";
  r.add_input(field_path);
  r.add_input(connection_path);
  r.add_input(curve_path);
  const StructureField F = io::algebroid_from_json(io::read_document(field_path));
  const ConnectionField G = io::connection_field_from_json(io::read_document(connection_path));
  const Curve c = io::curve_from_json(io::read_document(curve_path));
  const Tolerance tol(opt.eps);
  const TransportResult t = transport_iso_residual(F, G, c, opt.dt);
  r.verdicts["isomorphism"] = Verdict::check(t.iso_residual, tol.eps);
  r.outputs["map"] = io::to_json(t.map);
  r.outputs["step_size"] = t.step_size;
  r.outputs["steps"] = t.steps;
  if (t.differential_residual) {
    r.properties["differential"] = to_json(Verdict::check(*t.differential_residual, tol.eps));
    if (*t.differential_residual > tol.eps)
      r.notes.push_back("connection is not differential for this field within eps; transport need not be an "
                        "isomorphism of fibre algebras");
  } else {
    r.notes.push_back("differential residual not computed: chart has an axis with fewer than 3 nodes");
  }
  r.notes.push_back(detail::spacing_note(F.chart));
  return r;
}

/// Builds a document for `algebra construct`. Returns the report; the
/// constructed document is written to opt.out when given.
inline RunReport algebra_construct(const std::string& kind, const std::vector<std::string>& inputs,
                                   const Params& params, const Options& opt) {
  using namespace detail;
  RunReport r;
  r.command = "algebra construct";
  for (const auto& in : inputs) r.add_input(in);
  r.properties["kind"] = kind;
  const double eps = Tolerance(opt.eps).eps;
  json doc;

  const auto algebra_in = [&](std::size_t i) { return io::algebra_from_json(io::read_document(inputs[i])); };
  const auto metric_in = [&](std::size_t i) { return io::metric_field_from_json(io::read_document(inputs[i])); };
  const auto finish_algebra = [&](const TernaryAlgebra& A) {
    doc = io::to_json(A);
    r.properties["checks"] = algebra_summary(A, eps);
  };
  const auto finish_field = [&](const StructureField& F) {
    doc = io::to_json(F);
    const FieldCheckReport c = field_para_check(F, Tolerance(eps));
    r.properties["checks"] = {{"para_associative", to_json(Verdict::check(c.worst_residual, eps))},
                              {"worst_point", index_json(c.worst_point)}};
  };

  if (kind == "cyclic_heap") {
    require_inputs(inputs, 0, kind);
    const std::size_t k = param_size(params, "k");
    finish_algebra(heap_algebra(cyclic_heap_table(k), "cyclic_heap_" + std::to_string(k)));
  } else if (kind == "heap") {
    require_inputs(inputs, 1, kind);
    finish_algebra(heap_algebra(io::heap_table_from_json(io::read_document(inputs[0]))));
  } else if (kind == "bilinear") {
    require_inputs(inputs, 1, kind);
    finish_algebra(bilinear_algebra(io::bilinear_form_from_json(io::read_document(inputs[0]))));
  } else if (kind == "opposite") {
    require_inputs(inputs, 1, kind);
    finish_algebra(opposite(algebra_in(0)));
  } else if (kind == "direct_sum") {
    require_inputs(inputs, 2, kind);
    finish_algebra(direct_sum(algebra_in(0), algebra_in(1)));
  } else if (kind == "tensor_product") {
    require_inputs(inputs, 3, kind);
    finish_algebra(tensor_product(algebra_in(0), algebra_in(1), algebra_in(2)));
  } else if (kind == "metric") {
    require_inputs(inputs, 0, kind);
    const std::string preset = param(params, "preset");
    MetricField g;
    if (preset == "sphere") {
      const Chart chart = presets::sphere_chart(
          param_double(params, "h"), param_double(params, "phi_lo", 0.0), param_double(params, "phi_hi", 1.0),
          param_double(params, "phi_h", param_double(params, "h")),
          param_double(params, "anchor", std::numbers::pi / 3.0), param_double(params, "margin", 0.1));
      g = presets::round_sphere_metric(chart);
    } else if (preset == "flat") {
      g = presets::flat_metric(chart_from_params(params));
    } else if (preset == "carroll") {
      g = presets::carroll_metric(chart_from_params(params));
    } else if (preset == "signature_change") {
      g = presets::signature_change_metric(chart_from_params(params));
    } else {
      throw InputError("unknown metric preset '" + preset + "' (sphere, flat, carroll, signature_change)");
    }
    doc = io::to_json(g);
    r.properties["checks"] = {{"num_points", g.chart.num_points()}};
  } else if (kind == "metric_algebroid") {
    require_inputs(inputs, 1, kind);
    finish_field(metric_algebroid(metric_in(0)));
  } else if (kind == "cotangent_algebroid") {
    require_inputs(inputs, 1, kind);
    finish_field(cotangent_algebroid(metric_in(0)));
  } else if (kind == "scaled_line") {
    require_inputs(inputs, 1, kind);
    finish_field(scaled_line_algebroid(io::bilinear_form_from_json(io::read_document(inputs[0])),
                                       chart_from_params(params)));
  } else if (kind == "almost_symplectic_line") {
    require_inputs(inputs, 0, kind);
    finish_field(presets::almost_symplectic_line(chart_from_params(params)));
  } else if (kind == "constant_field") {
    require_inputs(inputs, 1, kind);
    finish_field(constant_field(chart_from_params(params), algebra_in(0)));
  } else if (kind == "levi_civita") {
    require_inputs(inputs, 1, kind);
    const MetricField g = metric_in(0);
    const ConnectionField G = levi_civita(g);
    doc = io::to_json(G);
    const ResidualReport mc = metric_compat_residual(g, G, Tolerance(eps));
    r.properties["checks"] = {{"metric_compatible", to_json(Verdict::check(mc.max, eps))}};
    r.notes.push_back(spacing_note(g.chart));
  } else if (kind == "zero_connection") {
    require_inputs(inputs, 1, kind);
    const StructureField F = io::algebroid_from_json(io::read_document(inputs[0]));
    doc = io::to_json(zero_connection(F.chart, F.fibre_dim));
  } else if (kind == "curve") {
    require_inputs(inputs, 0, kind);
    const std::string preset = param(params, "preset");
    Curve c;
    if (preset == "latitude") {
      c = latitude_curve(param_double(params, "theta0", std::numbers::pi / 3.0), param_double(params, "phi0", 0.0),
                         param_double(params, "phi1", 2.0 * std::numbers::pi), param_size(params, "samples", 2001));
    } else if (preset == "segment") {
      c = segment_curve(parse_vector(param(params, "from"), "from"), parse_vector(param(params, "to"), "to"),
                        param_size(params, "samples", 1001));
    } else {
      throw InputError("unknown curve preset '" + preset + "' (latitude, segment)");
    }
    doc = io::to_json(c);
    r.properties["checks"] = {{"samples", c.t.size()}, {"closed", c.closed}};
  } else {
    throw InputError("unknown construct kind '" + kind + "'");
  }

  r.properties["document_kind"] = doc.value("kind", "");
  if (!opt.out.empty()) {
    io::write_document(opt.out, doc);
    r.outputs["path"] = opt.out;
    r.outputs["sha256"] = sha256_hex(io::dump(doc));
  } else {
    r.outputs["document"] = doc;
  }
  return r;
}

/// Structural comparison of two reports with timing removed. Differences are
/// listed as JSON pointers.
inline std::vector<std::string> report_diff(const json& a, const json& b) {
  std::vector<std::string> paths;
  for (const auto& op : json::diff(without_timing(a), without_timing(b))) paths.push_back(op.value("path", ""));
  return paths;
}

}  // namespace ternalg::cli
