#pragma once

#include "ternalg/connections.hpp"
#include "ternalg/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

namespace ternalg {

/// Sampled path in chart coordinates. A closed curve returns to its start
/// point up to a constant coordinate offset (e.g. an unwrapped angle), which
/// is used to take periodic tangents at the two ends.
///
/// `corners` lists interior sample indices where the tangent may jump; the
/// curve is smooth only between consecutive corners and is interpolated and
/// integrated piece by piece.
struct Curve {
  std::vector<double> t;
  std::vector<Vector> x;
  bool closed = false;
  std::vector<std::size_t> corners;
};

inline void validate(const Curve& c, const Chart& chart) {
  if (c.t.size() < 2 || c.t.size() != c.x.size()) throw InputError("curve: need at least two samples");
  if (c.closed && c.t.size() < 3) throw InputError("curve: a closed curve needs at least three samples");
  for (std::size_t k = 0; k < c.t.size(); ++k) {
    if (!std::isfinite(c.t[k])) throw InputError("curve: non-finite parameter");
    if (k > 0 && !(c.t[k] > c.t[k - 1])) throw InputError("curve: parameters must be strictly increasing");
    if (static_cast<std::size_t>(c.x[k].size()) != chart.base_dim()) throw InputError("curve: point dimension mismatch");
    const std::vector<double> p(c.x[k].data(), c.x[k].data() + c.x[k].size());
    if (!chart.contains(p)) throw InputError("curve: sample " + std::to_string(k) + " lies outside the chart");
  }
  for (std::size_t i = 0; i < c.corners.size(); ++i) {
    const std::size_t k = c.corners[i];
    if (k == 0 || k + 1 >= c.t.size() || (i > 0 && k <= c.corners[i - 1]))
      throw InputError("curve: corners must be increasing interior sample indices");
  }
  if (c.closed && !c.corners.empty()) throw InputError("curve: a closed curve cannot have corners");
}

/// Smooth pieces between consecutive corners (a single piece when there are none).
inline std::vector<Curve> pieces(const Curve& c) {
  if (c.corners.empty()) return {c};
  std::vector<Curve> out;
  std::size_t start = 0;
  auto cut = [&](std::size_t end) {
    Curve p;
    p.t.assign(c.t.begin() + static_cast<std::ptrdiff_t>(start), c.t.begin() + static_cast<std::ptrdiff_t>(end + 1));
    p.x.assign(c.x.begin() + static_cast<std::ptrdiff_t>(start), c.x.begin() + static_cast<std::ptrdiff_t>(end + 1));
    out.push_back(std::move(p));
    start = end;
  };
  for (std::size_t k : c.corners) cut(k);
  cut(c.t.size() - 1);
  return out;
}

inline double min_segment(const Curve& c) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < c.t.size(); ++k) m = std::min(m, c.t[k] - c.t[k - 1]);
  return m;
}

/// Same path traversed backwards, parameter t' = t_first + t_last - t.
inline Curve reverse(const Curve& c) {
  Curve r{{}, {}, c.closed, {}};
  const double s = c.t.front() + c.t.back();
  for (std::size_t k = c.t.size(); k-- > 0;) {
    r.t.push_back(s - c.t[k]);
    r.x.push_back(c.x[k]);
  }
  for (std::size_t i = c.corners.size(); i-- > 0;) r.corners.push_back(c.t.size() - 1 - c.corners[i]);
  return r;
}

/// c1 followed by c2; c2 is re-parametrized to start where c1 ends and its
/// first sample (which must coincide with the last of c1) is dropped. The
/// junction becomes a corner.
inline Curve concatenate(const Curve& c1, const Curve& c2) {
  if (max_abs(Vector(c1.x.back() - c2.x.front())) > 1e-12) throw InputError("concatenate: curves do not meet");
  Curve out = c1;
  out.closed = false;
  const std::size_t join = c1.t.size() - 1;
  out.corners.push_back(join);
  for (std::size_t k : c2.corners) out.corners.push_back(join + k);
  const double shift = c1.t.back() - c2.t.front();
  for (std::size_t k = 1; k < c2.t.size(); ++k) {
    out.t.push_back(c2.t[k] + shift);
    out.x.push_back(c2.x[k]);
  }
  return out;
}

/// Circle theta = theta0 on the (theta, phi) sphere chart, phi from phi0 to phi1 = t.
inline Curve latitude_curve(double theta0, double phi0, double phi1, std::size_t samples) {
  if (samples < 3) throw InputError("latitude_curve: need at least three samples");
  Curve c;
  for (std::size_t k = 0; k < samples; ++k) {
    const double phi = phi0 + (phi1 - phi0) * static_cast<double>(k) / static_cast<double>(samples - 1);
    c.t.push_back(phi);
    c.x.push_back((Vector(2) << theta0, phi).finished());
  }
  c.closed = std::abs(std::abs(phi1 - phi0) - 2.0 * std::numbers::pi) < 1e-12;
  return c;
}

/// Straight segment from a to b with parameter t in [0, 1].
inline Curve segment_curve(const Vector& a, const Vector& b, std::size_t samples) {
  if (samples < 2) throw InputError("segment_curve: need at least two samples");
  Curve c;
  for (std::size_t k = 0; k < samples; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(samples - 1);
    c.t.push_back(s);
    c.x.push_back(a + s * (b - a));
  }
  return c;
}

/// Cubic Hermite evaluation of a sampled curve. Sample tangents come from
/// three-point differences (periodic for closed curves, one-sided at open ends).
class CurveEvaluator {
 public:
  explicit CurveEvaluator(const Curve& c) : c_(c), m_(c.t.size()) {
    const std::size_t N = c.t.size();
    if (N == 2) {
      m_[0] = m_[1] = (c.x[1] - c.x[0]) / (c.t[1] - c.t[0]);
      return;
    }
    for (std::size_t k = 1; k + 1 < N; ++k)
      m_[k] = centered(c.t[k - 1], c.x[k - 1], c.t[k], c.x[k], c.t[k + 1], c.x[k + 1]);
    if (c.closed) {
      const Vector offset = c.x[N - 1] - c.x[0];
      const double T = c.t[N - 1] - c.t[0];
      m_[0] = centered(c.t[N - 2] - T, c.x[N - 2] - offset, c.t[0], c.x[0], c.t[1], c.x[1]);
      m_[N - 1] = m_[0];
    } else {
      const double h1 = c.t[1] - c.t[0], h2 = c.t[2] - c.t[1];
      m_[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * c.x[0] + (h1 + h2) / (h1 * h2) * c.x[1] -
              h1 / (h2 * (h1 + h2)) * c.x[2];
      const double g1 = c.t[N - 1] - c.t[N - 2], g2 = c.t[N - 2] - c.t[N - 3];
      m_[N - 1] = (2 * g1 + g2) / (g1 * (g1 + g2)) * c.x[N - 1] - (g1 + g2) / (g1 * g2) * c.x[N - 2] +
                  g1 / (g2 * (g1 + g2)) * c.x[N - 3];
    }
  }

  double t_begin() const { return c_.t.front(); }
  double t_end() const { return c_.t.back(); }

  /// Position and velocity at parameter t.
  std::pair<Vector, Vector> operator()(double t) const {
    const auto& ts = c_.t;
    std::size_t k = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
    k = std::clamp<std::size_t>(k, 1, ts.size() - 1) - 1;
    const double dt = ts[k + 1] - ts[k];
    const double s = (t - ts[k]) / dt;
    const double s2 = s * s, s3 = s2 * s;
    const Vector& x0 = c_.x[k];
    const Vector& x1 = c_.x[k + 1];
    Vector pos = (2 * s3 - 3 * s2 + 1) * x0 + (s3 - 2 * s2 + s) * dt * m_[k] + (-2 * s3 + 3 * s2) * x1 +
                 (s3 - s2) * dt * m_[k + 1];
    Vector vel = ((6 * s2 - 6 * s) * x0 + (-6 * s2 + 6 * s) * x1) / dt + (3 * s2 - 4 * s + 1) * m_[k] +
                 (3 * s2 - 2 * s) * m_[k + 1];
    return {std::move(pos), std::move(vel)};
  }

 private:
  static Vector centered(double ta, const Vector& xa, double tb, const Vector& xb, double tc, const Vector& xc) {
    const double h1 = tb - ta, h2 = tc - tb;
    return -h2 / (h1 * (h1 + h2)) * xa + (h2 - h1) / (h1 * h2) * xb + h1 / (h2 * (h1 + h2)) * xc;
  }

  const Curve& c_;
  std::vector<Vector> m_;
};

/// Multilinear interpolation of nodal values at chart coordinates x.
template <class T>
T interpolate(const Chart& chart, const std::vector<T>& values, const Vector& x) {
  const std::size_t d = chart.base_dim();
  if (static_cast<std::size_t>(x.size()) != d) throw InputError("interpolate: point dimension mismatch");
  std::vector<std::size_t> lo(d);
  std::vector<double> frac(d);
  std::vector<std::size_t> active;
  for (std::size_t a = 0; a < d; ++a) {
    const std::size_t m = chart.shape()[a];
    if (m == 1) {
      lo[a] = 0;
      frac[a] = 0.0;
      continue;
    }
    const double q = (x(a) - chart.origin()[a]) / chart.spacing()[a];
    const auto i = static_cast<std::size_t>(std::clamp(std::floor(q), 0.0, static_cast<double>(m - 2)));
    lo[a] = i;
    frac[a] = q - static_cast<double>(i);
    active.push_back(a);
  }
  std::size_t base = 0;
  for (std::size_t a = 0; a < d; ++a) base += lo[a] * chart.stride(a);

  std::optional<T> acc;
  for (std::size_t corner = 0; corner < (std::size_t{1} << active.size()); ++corner) {
    double w = 1.0;
    std::size_t p = base;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const std::size_t a = active[k];
      if (corner & (std::size_t{1} << k)) {
        w *= frac[a];
        p += chart.stride(a);
      } else {
        w *= 1.0 - frac[a];
      }
    }
    if (acc)
      *acc = *acc + values[p] * w;
    else
      acc.emplace(values[p] * w);
  }
  return *acc;
}

class SingularTransportError : public Error {
 public:
  using Error::Error;
};

struct TransportResult {
  LinearMap map;
  double step_size = 0.0;
  std::size_t steps = 0;
  double iso_residual = 0.0;
  std::optional<double> differential_residual;
};

namespace detail {

/// dU/dt = -A(t) U with A_{alpha beta} = G(a, beta, alpha)(x(t)) xdot^a(t), classical RK4.
template <class State>
State integrate_transport(const ConnectionField& G, const Curve& c, State U, double dt, double* step_used = nullptr,
                          std::size_t* step_count = nullptr) {
  validate(G);
  validate(c, G.chart);
  if (!(dt > 0.0)) throw InputError("transport: dt must be positive");
  if (dt > min_segment(c) * (1.0 + 1e-12)) throw InputError("transport: dt larger than curve segment spacing");
  if (static_cast<std::size_t>(U.rows()) != G.fibre_dim) throw InputError("transport: vector dimension mismatch");

  const std::size_t d = G.chart.base_dim(), n = G.fibre_dim;
  double h_max = 0.0;
  std::size_t total = 0;
  for (const Curve& piece : pieces(c)) {
    const CurveEvaluator curve(piece);
    const auto generator = [&](double t) {
      const auto [x, xdot] = curve(t);
      const DenseTensor<3> Gx = interpolate(G.chart, G.values, x);
      Matrix A = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t al = 0; al < n; ++al)
          for (std::size_t be = 0; be < n; ++be) A(al, be) += Gx(a, be, al) * xdot(a);
      return A;
    };

    const double T = curve.t_end() - curve.t_begin();
    const auto N = static_cast<std::size_t>(std::max(1.0, std::ceil(T / dt - 1e-9)));
    const double h = T / static_cast<double>(N);
    for (std::size_t k = 0; k < N; ++k) {
      const double t = curve.t_begin() + static_cast<double>(k) * h;
      const Matrix A0 = generator(t), Ah = generator(t + 0.5 * h), A1 = generator(t + h);
      const State k1 = -(A0 * U);
      const State k2 = -(Ah * (U + 0.5 * h * k1));
      const State k3 = -(Ah * (U + 0.5 * h * k2));
      const State k4 = -(A1 * (U + h * k3));
      U += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    h_max = std::max(h_max, h);
    total += N;
  }
  if (step_used) *step_used = h_max;
  if (step_count) *step_count = total;
  return U;
}

}  // namespace detail

/// Parallel transport of v0 from the start to the end of the curve.
inline Vector transport_vector(const ConnectionField& G, const Curve& c, const Vector& v0, double dt = 1e-3) {
  return detail::integrate_transport<Vector>(G, c, v0, dt);
}

/// Transport operator from the start fibre to the end fibre; column i is the transport of s_i.
inline LinearMap transport_map(const ConnectionField& G, const Curve& c, double dt = 1e-3, double* step_used = nullptr,
                               std::size_t* step_count = nullptr) {
  const auto n = static_cast<Eigen::Index>(G.fibre_dim);
  LinearMap Phi = detail::integrate_transport<Matrix>(G, c, Matrix::Identity(n, n), dt, step_used, step_count);
  if (!(std::abs(Phi.determinant()) > 1e-8)) throw SingularTransportError("transport map is singular");
  return Phi;
}

/// Structure tensor interpolated at a chart point.
inline TernaryAlgebra fibre_algebra_at(const StructureField& F, const Vector& x) {
  return TernaryAlgebra(interpolate(F.chart, F.values, x));
}

/// Transports along c and measures how far the transport operator is from
/// an isomorphism between the start and end fibre algebras.
inline TransportResult transport_iso_residual(const StructureField& F, const ConnectionField& G, const Curve& c,
                                              double dt = 1e-3) {
  validate(F);
  detail::require_same_chart(F.chart, G.chart, "transport_iso_residual");
  if (F.fibre_dim != G.fibre_dim) throw InputError("transport_iso_residual: fibre dimension mismatch");
  TransportResult r;
  r.map = transport_map(G, c, dt, &r.step_size, &r.steps);
  const TernaryAlgebra start = fibre_algebra_at(F, c.x.front());
  const TernaryAlgebra end = fibre_algebra_at(F, c.x.back());
  r.iso_residual = hom_residual(start, end, r.map);
  bool stencil_ok = true;
  for (auto m : F.chart.shape()) stencil_ok = stencil_ok && m >= 3;
  if (stencil_ok) r.differential_residual = differential_residual(F, G).max;
  return r;
}

}  // namespace ternalg
