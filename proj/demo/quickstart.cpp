// Small tour: the two-element heap, its binary reduction, and holonomy of
// the round sphere around the latitude theta = pi/3.
#include "ternalg/ternalg.hpp"

#include <iostream>
#include <numbers>

using namespace ternalg;

int main() {
  const TernaryAlgebra H = heap_algebra(cyclic_heap_table(2));
  std::cout << "C2 heap: para-associativity defect " << para_defect(H) << ", commutative "
            << std::boolalpha << is_commutative(H) << "\n";

  const BinaryAlgebra B = star_reduce(H, basis_vector(2, 0));
  std::cout << "reduction at e1: associativity defect " << binary_assoc_residual(B) << ", unit "
            << (B.unit ? "found" : "none") << "\n";

  const double pi = std::numbers::pi;
  const Chart chart = presets::sphere_chart(1e-2, 0.0, 2.0 * pi + 0.1, 0.05);
  const MetricField g = presets::round_sphere_metric(chart);
  const ConnectionField G = levi_civita(g);
  const TransportResult r = transport_iso_residual(metric_algebroid(g), G, latitude_curve(pi / 3.0, 0.0, 2.0 * pi, 2001));
  std::cout << "holonomy around theta = pi/3 (" << r.steps << " RK4 steps):\n" << r.map << "\n"
            << "isomorphism residual " << r.iso_residual << "\n";
  return 0;
}
