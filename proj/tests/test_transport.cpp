#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ternalg;
using namespace ternalg::test;

namespace {

constexpr double kPi = std::numbers::pi;

/// Narrow band of latitudes around pi/3 with fine theta spacing.
struct Band {
  Chart chart;
  MetricField g;
  StructureField F;
  ConnectionField G;

  explicit Band(double h)
      : chart({kPi / 3.0 - 20 * h, -0.1}, {h, 0.05}, {41, 130}),
        g(presets::round_sphere_metric(chart)),
        F(metric_algebroid(g)),
        G(levi_civita(g)) {}
};

Vector orthonormal(const Vector& v, double theta) { return (Vector(2) << v(0), std::sin(theta) * v(1)).finished(); }

}  // namespace

TEST(Interpolate, ExactOnMultilinearData) {
  const Chart c({0.0, 0.0}, {0.5, 0.25}, {4, 5});
  std::vector<double> f;
  for (std::size_t p = 0; p < c.num_points(); ++p) {
    const auto x = c.coordinates(p);
    f.push_back(1.0 + 2.0 * x[0] - x[1] + 3.0 * x[0] * x[1]);
  }
  for (int k = 0; k < 20; ++k) {
    const Vector x = (Vector(2) << uniform(0.0, 1.5), uniform(0.0, 1.0)).finished();
    EXPECT_NEAR(interpolate(c, f, x), 1.0 + 2.0 * x(0) - x(1) + 3.0 * x(0) * x(1), 1e-13);
  }
}

TEST(CurveEvaluator, ReproducesQuadraticPath) {
  Curve c;
  for (int k = 0; k <= 10; ++k) {
    const double t = 0.1 * k;
    c.t.push_back(t);
    c.x.push_back((Vector(2) << t * t, 1.0 - t).finished());
  }
  const CurveEvaluator ev(c);
  for (double t : {0.0, 0.05, 0.33, 0.71, 1.0}) {
    const auto [x, v] = ev(t);
    EXPECT_NEAR(x(0), t * t, 1e-13);
    EXPECT_NEAR(v(0), 2.0 * t, 1e-12);
    EXPECT_NEAR(v(1), -1.0, 1e-13);
  }
}

TEST(CurveOps, ReverseAndConcatenate) {
  const Curve a = segment_curve((Vector(2) << 0, 0).finished(), (Vector(2) << 1, 0).finished(), 5);
  const Curve b = segment_curve((Vector(2) << 1, 0).finished(), (Vector(2) << 1, 1).finished(), 5);
  const Curve ab = concatenate(a, b);
  EXPECT_EQ(ab.t.size(), 9u);
  EXPECT_DOUBLE_EQ(ab.t.back(), 2.0);
  const Curve r = reverse(ab);
  EXPECT_EQ(r.x.front(), ab.x.back());
  EXPECT_DOUBLE_EQ(r.t.front(), 0.0);
  EXPECT_THROW(concatenate(a, a), InputError);
}

TEST(Transport, ZeroConnectionIsIdentity) {
  const Chart c = Chart::box({0, 0}, {1, 1}, {5, 5});
  const Curve cv = segment_curve((Vector(2) << 0.1, 0.2).finished(), (Vector(2) << 0.9, 0.7).finished(), 101);
  const Vector v0 = random_vector(3);
  EXPECT_EQ(transport_vector(zero_connection(c, 3), cv, v0, 1e-3), v0);
  EXPECT_EQ(transport_map(zero_connection(c, 3), cv, 1e-3), LinearMap::Identity(3, 3));
}

TEST(Transport, FlatLeviCivitaIsIdentity) {
  const Chart c = Chart::box({0, 0}, {1, 1}, {6, 6});
  const Curve cv = latitude_curve(0.5, 0.1, 0.9, 201);
  EXPECT_EQ(transport_map(levi_civita(presets::flat_metric(c)), cv), LinearMap::Identity(2, 2));
}

TEST(Transport, SphereLatitudeHolonomyIsHalfTurn) {
  const Band b(2.5e-3);
  const Curve loop = latitude_curve(kPi / 3.0, 0.0, 2.0 * kPi, 2001);
  const Vector v0 = (Vector(2) << 0.6, -0.3).finished();
  const Vector v1 = transport_vector(b.G, loop, v0, 1e-3);
  // Rotation by 2 pi cos(pi/3) = pi in the orthonormal frame.
  EXPECT_LE(max_abs(Vector(orthonormal(v1, kPi / 3.0) + orthonormal(v0, kPi / 3.0))), 1e-4);
  // Independent adaptive integration of the exact Christoffel system.
  const Vector ref = analytic_latitude_transport(kPi / 3.0, 2.0 * kPi, v0);
  EXPECT_LE(max_abs(Vector(ref + v0)), 1e-10);
  EXPECT_LE(max_abs(Vector(v1 - ref)), 1e-4);
}

TEST(Transport, SphereLoopPreservesMetric) {
  const Band b(1e-2);
  const Curve loop = latitude_curve(kPi / 3.0, 0.0, 2.0 * kPi, 2001);
  const LinearMap Phi = transport_map(b.G, loop, 1e-3);
  const Matrix g0 = b.g.values[b.chart.flat_index({20, 2})];
  EXPECT_LE(max_abs(Matrix(Phi.transpose() * g0 * Phi - g0)), 1e-6);
}

TEST(Transport, MatchesAdaptiveReferenceOnSameOde) {
  const Band b(1e-2);
  const Curve c = segment_curve((Vector(2) << kPi / 3.0 - 0.15, 0.0).finished(),
                                (Vector(2) << kPi / 3.0 + 0.1, 3.0).finished(), 301);
  const LinearMap Phi = transport_map(b.G, c, 1e-3);
  EXPECT_LE(max_abs(Matrix(Phi - reference_transport_map(b.G, c))), 1e-9);
}

TEST(Transport, CompositionAndReversal) {
  const Band b(1e-2);
  const Curve c1 = segment_curve((Vector(2) << 1.0, 0.0).finished(), (Vector(2) << 1.1, 1.5).finished(), 301);
  const Curve c2 = segment_curve((Vector(2) << 1.1, 1.5).finished(), (Vector(2) << 0.95, 4.0).finished(), 301);
  const LinearMap P1 = transport_map(b.G, c1), P2 = transport_map(b.G, c2);
  const LinearMap P12 = transport_map(b.G, concatenate(c1, c2));
  EXPECT_LE(max_abs(Matrix(P12 - P2 * P1)), 1e-8);
  const LinearMap Pr = transport_map(b.G, reverse(c1));
  EXPECT_LE(max_abs(Matrix(Pr * P1 - Matrix::Identity(2, 2))), 1e-8);
}

TEST(Transport, FourthOrderInStepSize) {
  // Coarse steps so the integrator error dominates round-off.
  const Band b(1e-2);
  const Curve loop = latitude_curve(kPi / 3.0, 0.0, 2.0 * kPi, 41);
  const Matrix ref = reference_transport_map(b.G, loop);
  const double e1 = max_abs(Matrix(transport_map(b.G, loop, 0.1) - ref));
  const double e2 = max_abs(Matrix(transport_map(b.G, loop, 0.05) - ref));
  EXPECT_GT(e1, 1e-9);
  EXPECT_GE(e1 / e2, 8.0);
}

TEST(Transport, InputErrors) {
  const Band b(1e-2);
  const Curve loop = latitude_curve(kPi / 3.0, 0.0, 2.0 * kPi, 101);
  EXPECT_THROW(transport_map(b.G, loop, 0.5), InputError);
  EXPECT_THROW(transport_map(b.G, loop, 0.0), InputError);
  const Curve outside = latitude_curve(0.5, 0.0, 1.0, 11);
  EXPECT_THROW(transport_map(b.G, outside, 1e-3), InputError);
  EXPECT_THROW(transport_vector(b.G, loop, Vector::Zero(3), 1e-3), InputError);
}

TEST(Transport, SingularMapReported) {
  // A huge constant connection drives the columns to underflow.
  const Chart c = Chart::box({0.0}, {1.0}, {3});
  ConnectionField G = zero_connection(c, 1);
  for (auto& Gp : G.values) Gp(0, 0, 0) = 800.0;
  const Curve s = segment_curve((Vector(1) << 0.0).finished(), (Vector(1) << 1.0).finished(), 11);
  EXPECT_THROW(transport_map(G, s, 1e-3), SingularTransportError);
}

TEST(IsoResidual, TrivialBundleExactlyIso) {
  const Chart c = Chart::box({0, 0}, {1, 1}, {4, 4});
  const StructureField F = constant_field(c, heap_algebra(cyclic_heap_table(2)));
  const Curve cv = segment_curve((Vector(2) << 0.0, 0.0).finished(), (Vector(2) << 1.0, 0.3).finished(), 51);
  const TransportResult r = transport_iso_residual(F, zero_connection(c, 2), cv);
  EXPECT_LE(r.iso_residual, 1e-10);
  ASSERT_TRUE(r.differential_residual.has_value());
  EXPECT_EQ(*r.differential_residual, 0.0);
}

TEST(IsoResidual, SphereLoop) {
  const Band b(1e-2);
  const TransportResult r = transport_iso_residual(b.F, b.G, latitude_curve(kPi / 3.0, 0.0, 2.0 * kPi, 2001), 1e-3);
  EXPECT_LE(r.iso_residual, 1e-5);
  EXPECT_EQ(r.steps, 6284u);
}

TEST(IsoResidual, ScaledLineNegativeControl) {
  const BilinearForm B((Matrix(2, 2) << 2.0, 0.5, 0.5, -1.0).finished());
  const Chart c = Chart::box({0.0}, {1.0}, {11});
  const StructureField F = scaled_line_algebroid(B, c);
  const Curve s = segment_curve((Vector(1) << 0.25).finished(), (Vector(1) << 1.0).finished(), 76);
  const TransportResult r = transport_iso_residual(F, zero_connection(c, 2), s);
  EXPECT_NEAR(r.iso_residual, 0.75 * 2.0, 1e-9);
  EXPECT_NEAR(*r.differential_residual, 2.0, 1e-12);
}

TEST(Curve, CornersSurviveReverseAndIo) {
  const Curve a = segment_curve((Vector(2) << 1.0, 0.0).finished(), (Vector(2) << 1.1, 1.0).finished(), 5);
  const Curve b = segment_curve((Vector(2) << 1.1, 1.0).finished(), (Vector(2) << 1.0, 2.0).finished(), 4);
  const Curve ab = concatenate(a, b);
  EXPECT_EQ(ab.corners, (std::vector<std::size_t>{4}));
  EXPECT_EQ(reverse(ab).corners, (std::vector<std::size_t>{3}));
  EXPECT_EQ(pieces(ab).size(), 2u);
  EXPECT_EQ(pieces(ab)[1].x.front(), a.x.back());
  Curve bad = a;
  bad.corners = {0};
  EXPECT_THROW(validate(bad, Band(1e-2).chart), InputError);
}
