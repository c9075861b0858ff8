#pragma once

// JSON documents for every artifact. One artifact per file, discriminated by
// "kind". Doubles are written in shortest round-trip form.

#include "ternalg/connections.hpp"
#include "ternalg/constructors.hpp"
#include "ternalg/fields.hpp"
#include "ternalg/transport.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace ternalg::io {

using json = nlohmann::json;

inline constexpr const char* kFieldOrder = "C-row-major, point-major then tensor indices";

inline json parse_document(const std::string& text, const std::string& origin = "<input>") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(origin + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_document(const std::string& path) { return parse_document(read_text(path), path); }

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void write_document(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << dump(j);
}

namespace detail {

inline const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return member(j, key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("field \"") + key + "\": " + e.what());
  }
}

inline void flatten_into(const json& j, std::vector<double>& out) {
  if (j.is_array()) {
    for (const auto& x : j) flatten_into(x, out);
  } else if (j.is_number()) {
    out.push_back(j.get<double>());
  } else {
    throw InputError("expected a number or an array of numbers");
  }
}

inline std::vector<double> flatten(const json& j) {
  std::vector<double> out;
  flatten_into(j, out);
  return out;
}

inline void expect_kind(const json& j, const char* kind) {
  if (j.is_object() && j.contains("kind") && j.at("kind") != kind)
    throw InputError(std::string("expected kind \"") + kind + "\", found " + j.at("kind").dump());
}

inline json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from(const json& j, std::size_t rows, std::size_t cols) {
  const auto flat = flatten(j);
  if (flat.size() != rows * cols) throw InputError("matrix has wrong number of entries");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = flat[r * cols + c];
  return m;
}

}  // namespace detail

inline Vector vector_from_json(const json& j) {
  const auto flat = detail::flatten(j);
  return Eigen::Map<const Vector>(flat.data(), static_cast<Eigen::Index>(flat.size()));
}

inline json to_json(const Vector& v) { return detail::vector_json(v); }

inline json to_json(const Matrix& m) { return detail::matrix_json(m); }

// --- algebra -------------------------------------------------------------

inline json to_json(const TernaryAlgebra& A) {
  const std::size_t n = A.dim();
  json C = json::array();
  for (std::size_t l = 0; l < n; ++l) {
    json L = json::array();
    for (std::size_t a = 0; a < n; ++a) {
      json Aa = json::array();
      for (std::size_t b = 0; b < n; ++b) {
        json Bb = json::array();
        for (std::size_t c = 0; c < n; ++c) Bb.push_back(A(l, a, b, c));
        Aa.push_back(std::move(Bb));
      }
      L.push_back(std::move(Aa));
    }
    C.push_back(std::move(L));
  }
  return json{{"kind", "algebra"}, {"dim", n}, {"C", std::move(C)}, {"label", A.label()}};
}

inline TernaryAlgebra algebra_from_json(const json& j) {
  detail::expect_kind(j, "algebra");
  const auto n = detail::get<std::size_t>(j, "dim");
  if (n == 0) throw InputError("algebra: dim must be >= 1");
  const auto flat = detail::flatten(detail::member(j, "C"));
  if (flat.size() != n * n * n * n) throw InputError("algebra: C must have dim^4 entries");
  StructureTensor C = make_structure_tensor(n);
  std::copy(flat.begin(), flat.end(), C.data().begin());
  std::string label = j.contains("label") && j.at("label").is_string() ? j.at("label").get<std::string>() : "";
  return TernaryAlgebra(std::move(C), std::move(label));
}

inline json to_json(const HeapTable& H) {
  json T = json::array();
  for (std::size_t a = 0; a < H.order; ++a) {
    json A = json::array();
    for (std::size_t b = 0; b < H.order; ++b) {
      json B = json::array();
      for (std::size_t c = 0; c < H.order; ++c) B.push_back(H(a, b, c));
      A.push_back(std::move(B));
    }
    T.push_back(std::move(A));
  }
  return json{{"kind", "heap_table"}, {"order", H.order}, {"table", std::move(T)}};
}

inline HeapTable heap_table_from_json(const json& j) {
  detail::expect_kind(j, "heap_table");
  HeapTable H;
  H.order = detail::get<std::size_t>(j, "order");
  for (double v : detail::flatten(detail::member(j, "table"))) {
    if (v != std::floor(v)) throw InputError("heap table entries must be integers");
    H.table.push_back(static_cast<int>(v));
  }
  if (H.order == 0 || H.table.size() != H.order * H.order * H.order)
    throw InputError("heap table must have order^3 entries");
  return H;
}

inline json to_json(const BilinearForm& B) {
  return json{{"kind", "bilinear_form"}, {"dim", B.dim()}, {"B", detail::matrix_json(B.entries)}};
}

inline BilinearForm bilinear_form_from_json(const json& j) {
  detail::expect_kind(j, "bilinear_form");
  const auto n = detail::get<std::size_t>(j, "dim");
  return BilinearForm(detail::matrix_from(detail::member(j, "B"), n, n));
}

inline json to_json(const BinaryAlgebra& Bn) {
  const std::size_t n = Bn.dim();
  json M = json::array();
  for (std::size_t l = 0; l < n; ++l) {
    json L = json::array();
    for (std::size_t a = 0; a < n; ++a) {
      json row = json::array();
      for (std::size_t b = 0; b < n; ++b) row.push_back(Bn.M(l, a, b));
      L.push_back(std::move(row));
    }
    M.push_back(std::move(L));
  }
  return json{{"kind", "binary_algebra"},
              {"dim", n},
              {"M", std::move(M)},
              {"unit", Bn.unit ? detail::vector_json(*Bn.unit) : json(nullptr)}};
}

inline BinaryAlgebra binary_algebra_from_json(const json& j) {
  detail::expect_kind(j, "binary_algebra");
  const auto n = detail::get<std::size_t>(j, "dim");
  const auto flat = detail::flatten(detail::member(j, "M"));
  if (n == 0 || flat.size() != n * n * n) throw InputError("binary algebra: M must have dim^3 entries");
  BinaryAlgebra Bn{DenseTensor<3>({n, n, n}), std::nullopt};
  std::copy(flat.begin(), flat.end(), Bn.M.data().begin());
  if (j.contains("unit") && !j.at("unit").is_null()) Bn.unit = vector_from_json(j.at("unit"));
  return Bn;
}

// --- fields --------------------------------------------------------------

inline json to_json(const Chart& c) {
  return json{{"base_dim", c.base_dim()}, {"origin", c.origin()}, {"spacing", c.spacing()}, {"shape", c.shape()}};
}

inline Chart chart_from_json(const json& j) {
  Chart c(detail::get<std::vector<double>>(j, "origin"), detail::get<std::vector<double>>(j, "spacing"),
          detail::get<std::vector<std::size_t>>(j, "shape"));
  if (j.contains("base_dim") && detail::get<std::size_t>(j, "base_dim") != c.base_dim())
    throw InputError("chart: base_dim disagrees with origin length");
  return c;
}

namespace detail {

inline json field_header(const Chart& chart, std::size_t fibre_dim, const char* kind) {
  return json{{"kind", kind}, {"chart", to_json(chart)}, {"fibre_dim", fibre_dim}, {"order", kFieldOrder}};
}

inline std::vector<double> field_values(const json& j, std::size_t expected) {
  auto flat = flatten(member(j, "values"));
  if (flat.size() != expected)
    throw InputError("field values: expected " + std::to_string(expected) + " numbers, found " +
                     std::to_string(flat.size()));
  return flat;
}

}  // namespace detail

inline json to_json(const StructureField& F) {
  json j = detail::field_header(F.chart, F.fibre_dim, "structure");
  json v = json::array();
  for (const auto& C : F.values)
    for (double x : C.data()) v.push_back(x);
  j["values"] = std::move(v);
  return j;
}

inline json to_json(const MetricField& g) {
  json j = detail::field_header(g.chart, g.chart.base_dim(), "metric");
  json v = json::array();
  for (const auto& m : g.values)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
  j["values"] = std::move(v);
  return j;
}

inline json to_json(const SectionField& u) {
  json j = detail::field_header(u.chart, u.fibre_dim, "section");
  json v = json::array();
  for (const auto& x : u.values)
    for (Eigen::Index i = 0; i < x.size(); ++i) v.push_back(x(i));
  j["values"] = std::move(v);
  return j;
}

inline json to_json(const ConnectionField& G) {
  json j = detail::field_header(G.chart, G.fibre_dim, "connection");
  json v = json::array();
  for (const auto& g : G.values)
    for (double x : g.data()) v.push_back(x);
  j["values"] = std::move(v);
  return j;
}

inline std::string field_kind(const json& j) { return detail::get<std::string>(j, "kind"); }

inline StructureField structure_field_from_json(const json& j) {
  detail::expect_kind(j, "structure");
  StructureField F{chart_from_json(detail::member(j, "chart")), detail::get<std::size_t>(j, "fibre_dim"), {}};
  const std::size_t n = F.fibre_dim, per = n * n * n * n;
  const auto flat = detail::field_values(j, F.chart.num_points() * per);
  for (std::size_t p = 0; p < F.chart.num_points(); ++p) {
    StructureTensor C = make_structure_tensor(n);
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(p * per), flat.begin() + static_cast<std::ptrdiff_t>((p + 1) * per),
              C.data().begin());
    F.values.push_back(std::move(C));
  }
  validate(F);
  return F;
}

inline MetricField metric_field_from_json(const json& j) {
  detail::expect_kind(j, "metric");
  MetricField g{chart_from_json(detail::member(j, "chart")), {}};
  const std::size_t d = g.chart.base_dim();
  const auto flat = detail::field_values(j, g.chart.num_points() * d * d);
  for (std::size_t p = 0; p < g.chart.num_points(); ++p)
    g.values.push_back(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        flat.data() + p * d * d, static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  validate(g);
  return g;
}

inline SectionField section_field_from_json(const json& j) {
  detail::expect_kind(j, "section");
  SectionField u{chart_from_json(detail::member(j, "chart")), detail::get<std::size_t>(j, "fibre_dim"), {}};
  const std::size_t n = u.fibre_dim;
  const auto flat = detail::field_values(j, u.chart.num_points() * n);
  for (std::size_t p = 0; p < u.chart.num_points(); ++p)
    u.values.push_back(Eigen::Map<const Vector>(flat.data() + p * n, static_cast<Eigen::Index>(n)));
  validate(u);
  return u;
}

inline ConnectionField connection_field_from_json(const json& j) {
  detail::expect_kind(j, "connection");
  ConnectionField G{chart_from_json(detail::member(j, "chart")), detail::get<std::size_t>(j, "fibre_dim"), {}};
  const std::size_t d = G.chart.base_dim(), n = G.fibre_dim, per = d * n * n;
  const auto flat = detail::field_values(j, G.chart.num_points() * per);
  for (std::size_t p = 0; p < G.chart.num_points(); ++p) {
    DenseTensor<3> g({d, n, n});
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(p * per), flat.begin() + static_cast<std::ptrdiff_t>((p + 1) * per),
              g.data().begin());
    G.values.push_back(std::move(g));
  }
  validate(G);
  return G;
}

/// Structure field from either a "structure" document or a "metric" one
/// (via the metric algebroid).
inline StructureField algebroid_from_json(const json& j) {
  const std::string kind = field_kind(j);
  if (kind == "structure") return structure_field_from_json(j);
  if (kind == "metric") return metric_algebroid(metric_field_from_json(j));
  throw InputError("expected a structure or metric field, found kind \"" + kind + "\"");
}

// --- curves --------------------------------------------------------------

inline json to_json(const Curve& c) {
  json samples = json::array();
  for (std::size_t k = 0; k < c.t.size(); ++k) {
    json row = json::array();
    row.push_back(c.t[k]);
    for (Eigen::Index i = 0; i < c.x[k].size(); ++i) row.push_back(c.x[k](i));
    samples.push_back(std::move(row));
  }
  json j{{"kind", "curve"}, {"closed", c.closed}, {"samples", std::move(samples)}};
  if (!c.corners.empty()) j["corners"] = c.corners;
  return j;
}

inline Curve curve_from_json(const json& j) {
  detail::expect_kind(j, "curve");
  Curve c;
  c.closed = j.contains("closed") ? detail::get<bool>(j, "closed") : false;
  const json& samples = detail::member(j, "samples");
  if (!samples.is_array()) throw InputError("curve: samples must be an array");
  for (const auto& row : samples) {
    const auto flat = detail::flatten(row);
    if (flat.size() < 2) throw InputError("curve: each sample is [t, x1, ..., xd]");
    c.t.push_back(flat[0]);
    c.x.push_back(Eigen::Map<const Vector>(flat.data() + 1, static_cast<Eigen::Index>(flat.size() - 1)));
  }
  if (j.contains("corners")) {
    if (!j["corners"].is_array()) throw InputError("curve: corners must be an array of sample indices");
    for (const auto& k : j["corners"]) {
      if (!k.is_number_unsigned()) throw InputError("curve: corners must be an array of sample indices");
      c.corners.push_back(k.get<std::size_t>());
    }
  }
  return c;
}

}  // namespace ternalg::io
