#include "support.hpp"
#include "ternalg/io.hpp"

#include <gtest/gtest.h>

using namespace ternalg;
using namespace ternalg::test;
using json = nlohmann::json;

namespace {

template <class T, class F>
T round_trip(const T& value, F&& parse) {
  return parse(json::parse(io::dump(io::to_json(value))));
}

}  // namespace

TEST(Io, AlgebraRoundTripIsExact) {
  const TernaryAlgebra A = random_algebra(3);
  const TernaryAlgebra B = round_trip(A, io::algebra_from_json);
  EXPECT_EQ(A, B);
  EXPECT_EQ(B.label(), "random");
}

TEST(Io, AlgebraLayoutIsLambdaFirst) {
  const json j = io::to_json(heap_algebra(cyclic_heap_table(2)));
  // lambda = e2 coefficient of [e1, e1, e2]
  EXPECT_EQ(j["C"][1][0][0][1].get<double>(), 1.0);
  EXPECT_EQ(j["kind"], "algebra");
}

TEST(Io, HeapBilinearBinaryRoundTrip) {
  const HeapTable H = cyclic_heap_table(3);
  EXPECT_EQ(round_trip(H, io::heap_table_from_json).table, H.table);
  const BilinearForm B(random_matrix(2, 2));
  EXPECT_EQ(round_trip(B, io::bilinear_form_from_json).entries, B.entries);
  const BinaryAlgebra Bn = star_reduce(heap_algebra(cyclic_heap_table(2)), basis_vector(2, 0));
  const BinaryAlgebra back = round_trip(Bn, io::binary_algebra_from_json);
  EXPECT_EQ(back.M, Bn.M);
  EXPECT_EQ(*back.unit, *Bn.unit);
}

TEST(Io, FieldsRoundTrip) {
  const Chart c = presets::sphere_chart(0.3, 0.0, 1.0, 0.5);
  const MetricField g = presets::round_sphere_metric(c);
  const MetricField g2 = round_trip(g, io::metric_field_from_json);
  EXPECT_EQ(g2.chart, c);
  for (std::size_t p = 0; p < c.num_points(); ++p) EXPECT_EQ(g2.values[p], g.values[p]);

  const StructureField F = metric_algebroid(g);
  const StructureField F2 = round_trip(F, io::structure_field_from_json);
  for (std::size_t p = 0; p < c.num_points(); ++p) EXPECT_EQ(F2.values[p], F.values[p]);

  const ConnectionField G = levi_civita(g);
  const ConnectionField G2 = round_trip(G, io::connection_field_from_json);
  for (std::size_t p = 0; p < c.num_points(); ++p) EXPECT_EQ(G2.values[p], G.values[p]);

  const SectionField u = sample_section(c, 2, [](const std::vector<double>& x) {
    return Vector((Vector(2) << x[0], x[1]).finished());
  });
  const SectionField u2 = round_trip(u, io::section_field_from_json);
  for (std::size_t p = 0; p < c.num_points(); ++p) EXPECT_EQ(u2.values[p], u.values[p]);
}

TEST(Io, MetricDocumentAcceptedAsAlgebroid) {
  const Chart c = Chart::box({0, 0}, {1, 1}, {3, 3});
  const StructureField F = io::algebroid_from_json(io::to_json(presets::flat_metric(c)));
  EXPECT_EQ(F.fibre_dim, 2u);
  EXPECT_EQ(F.values[0](1, 0, 0, 1), 1.0);
}

TEST(Io, CurveRoundTrip) {
  const Curve c = latitude_curve(1.0, 0.0, 2.0 * M_PI, 17);
  const Curve c2 = round_trip(c, io::curve_from_json);
  EXPECT_TRUE(c2.closed);
  EXPECT_EQ(c2.t, c.t);
  for (std::size_t k = 0; k < c.t.size(); ++k) EXPECT_EQ(c2.x[k], c.x[k]);
  EXPECT_FALSE(io::to_json(c).contains("corners"));

  const Curve s = segment_curve((Vector(2) << 0.0, 0.0).finished(), (Vector(2) << 1.0, 0.0).finished(), 3);
  const Curve bent = concatenate(s, segment_curve(s.x.back(), (Vector(2) << 1.0, 1.0).finished(), 3));
  EXPECT_EQ(round_trip(bent, io::curve_from_json).corners, bent.corners);
}

TEST(Io, ParseErrorReportsByteOffset) {
  try {
    io::parse_document("{\"kind\": \"algebra\", \"dim\": 2,, }", "bad.json");
    FAIL();
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("bad.json"), std::string::npos);
    EXPECT_NE(msg.find("byte 30"), std::string::npos) << msg;
  }
}

TEST(Io, StructuralErrors) {
  EXPECT_THROW(io::algebra_from_json(json::parse(R"({"kind":"curve"})")), InputError);
  EXPECT_THROW(io::algebra_from_json(json::parse(R"({"kind":"algebra","dim":2})")), InputError);
  EXPECT_THROW(io::algebra_from_json(json::parse(R"({"kind":"algebra","dim":2,"C":[1,2,3]})")), InputError);
  EXPECT_THROW(io::algebra_from_json(json::parse(R"({"kind":"algebra","dim":"two","C":[]})")), InputError);
  EXPECT_THROW(io::algebroid_from_json(json::parse(R"({"kind":"connection"})")), InputError);
  EXPECT_THROW(io::read_document("/nonexistent/file.json"), InputError);
}

TEST(Io, DumpIsDeterministic) {
  const json j = io::to_json(random_algebra(2));
  EXPECT_EQ(io::dump(j), io::dump(json::parse(io::dump(j))));
}
