#pragma once

// Discrete Noether quantities of the invariant variational schemes, their
// continuous counterparts, and drift audits along trajectories.

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "ivs/core.hpp"
#include "ivs/errors.hpp"
#include "ivs/params.hpp"

namespace ivs {

/// One value per generator: x-translation, u-translation, rotation (or the
/// third fractional-linear generator for the divergence example).
struct ConservedTriple {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  std::array<double, 3> as_array() const { return {c1, c2, c3}; }
};

namespace detail {

struct ConservedStencil {
  std::array<EdgeData, 3> e;  // Delta_{k-2}, Delta_{k-1}, Delta_k
  std::array<double, 2> D;    // D_{k-2}, D_{k-1}
};

inline ConservedStencil conserved_stencil(std::span<const Point2, 4> w) {
  ConservedStencil s;
  s.e = {make_edge(w[0], w[1]), make_edge(w[1], w[2]), make_edge(w[2], w[3])};
  for (const EdgeData& e : s.e) {
    if (e.ell == 0.0) throw DegenerateStencil("zero-length edge in conserved-quantity stencil");
  }
  s.D = {cross_det(s.e[0], s.e[1]), cross_det(s.e[1], s.e[2])};
  return s;
}

}  // namespace detail

/// Quantities of the unconstrained invariant elastica Lagrangian at lattice
/// index k, from the window z_{k-2}, ..., z_{k+1}.
inline ConservedTriple elastica_free_conserved(std::span<const Point2, 4> w) {
  const auto s = detail::conserved_stencil(w);
  const auto& e = s.e;
  const auto& D = s.D;
  const double p_lo = e[0].ell * e[1].ell;  // ell_{k-2} ell_{k-1}
  const double p_hi = e[1].ell * e[2].ell;  // ell_{k-1} ell_k
  const double w_lo = std::pow(p_lo, 2.5);
  const double w_hi = std::pow(p_hi, 2.5);
  const double q_lo = 5.0 * D[0] * D[0] * e[0].ell / (4.0 * e[1].ell * std::pow(p_lo, 3.5));
  const double q_hi = 5.0 * D[1] * D[1] * e[2].ell / (4.0 * e[1].ell * std::pow(p_hi, 3.5));

  ConservedTriple c;
  c.c1 = D[1] * e[2].du / w_hi - D[0] * e[0].du / w_lo - (q_hi + q_lo) * e[1].dx;
  c.c2 = D[0] * e[0].dx / w_lo - D[1] * e[2].dx / w_hi - (q_hi + q_lo) * e[1].du;
  c.c3 = w[2].x * c.c2 - w[2].u * c.c1 + D[1] / w_hi * (e[1].dx * e[2].dx + e[1].du * e[2].du);
  return c;
}

/// ell^5-scaled quantities of the arc-length constrained Lagrangian.
inline ConservedTriple elastica_constrained_conserved(std::span<const Point2, 4> w, const SchemeParams& p) {
  const auto s = detail::conserved_stencil(w);
  const auto& e = s.e;
  const auto& D = s.D;
  const double lam = p.alpha * p.mu * std::pow(p.ell, 4);
  const double q = 5.0 * (D[0] * D[0] + D[1] * D[1]) / (4.0 * p.ell * p.ell);

  ConservedTriple c;
  c.c1 = -lam * e[1].dx + D[1] * e[2].du - D[0] * e[0].du - q * e[1].dx;
  c.c2 = -lam * e[1].du + D[0] * e[0].dx - D[1] * e[2].dx - q * e[1].du;
  c.c3 = w[2].x * c.c2 - w[2].u * c.c1 + D[1] * (e[2].dx * e[1].dx + e[2].du * e[1].du);
  return c;
}

/// Quantities of the SL(2)-invariant divergence Lagrangian on the edge z_k, z_{k+1}.
inline ConservedTriple div_conserved(Point2 zk, Point2 zn) {
  const double dx = zn.x - zk.x;
  if (dx == 0.0) throw DegenerateStencil("vertical edge in divergence quantities");
  const double uu = zk.u * zn.u;
  if (uu == 0.0) throw DegenerateStencil("zero ordinate in divergence quantities");
  const double slope = (zn.u - zk.u) / dx;
  const double cross = (zn.u * zk.x - zn.x * zk.u) / dx;
  return {
      .c1 = slope * slope + 1.0 / uu,
      .c2 = (zk.x + zn.x) / uu + 2.0 * slope * cross,
      .c3 = zk.x * zn.x / uu + cross * cross,
  };
}

/// C2^2/4 - C1 C3 + 1 - (dx/(u_k u_{k+1}))^2/4, which vanishes identically.
inline double div_relation_residual(const ConservedTriple& c, Point2 zk, Point2 zn) {
  const double t = (zn.x - zk.x) / (zk.u * zn.u);
  return c.c2 * c.c2 / 4.0 - c.c1 * c.c3 + 1.0 - t * t / 4.0;
}

// --- continuous quantities ------------------------------------------------------

struct ElasticaJet {
  double x = 0.0;
  double u = 0.0;
  double ux = 0.0;
  double uxx = 0.0;
  double uxxx = 0.0;
};

inline ConservedTriple continuous_conserved_elastica(const ElasticaJet& j) {
  const double g = 1.0 + j.ux * j.ux;
  const double g52 = std::pow(g, 2.5);
  const double g72 = std::pow(g, 3.5);
  const double bracket = 2.0 * j.uxxx / g52 - 5.0 * j.ux * j.uxx * j.uxx / g72;
  return {
      .c1 = 2.0 * j.ux * j.uxxx / g52 - (1.0 + 6.0 * j.ux * j.ux) * j.uxx * j.uxx / g72,
      .c2 = -bracket,
      .c3 = (j.x + j.u * j.ux) * bracket - j.u * j.uxx * j.uxx / g52 - 2.0 * j.uxx / std::pow(g, 1.5),
  };
}

inline ConservedTriple continuous_conserved_div(double x, double u, double ux) {
  if (u == 0.0) throw DomainError("divergence quantities at zero ordinate");
  const double v = u - x * ux;
  return {
      .c1 = ux * ux + 1.0 / (u * u),
      .c2 = 2.0 * x / (u * u) - 2.0 * v * ux,
      .c3 = x * x / (u * u) + v * v,
  };
}

// --- drift audits -----------------------------------------------------------------

struct ConservedSample {
  std::size_t k = 0;
  ConservedTriple value;
};

/// Absolute deviations |C_i(k) - C_i(k0)| from the first evaluable index k0.
struct DriftSeries {
  std::size_t k0 = 0;
  std::vector<std::size_t> k;
  std::vector<std::array<double, 3>> deviation;

  std::array<double, 3> max_deviation() const {
    std::array<double, 3> m{};
    for (const auto& d : deviation) {
      for (int i = 0; i < 3; ++i) m[i] = std::max(m[i], d[i]);
    }
    return m;
  }
};

/// Quantities appropriate to `which`, evaluated from the raw trajectory points.
/// The elastica families need z_{k-2}..z_{k+1} (k >= 2); the divergence
/// example needs the edge z_k, z_{k+1} (k >= 0).
inline std::vector<ConservedSample> conserved_series(std::span<const Point2> pts, SchemeId which,
                                                     const SchemeParams& p) {
  std::vector<ConservedSample> out;
  if (is_div_scheme(which)) {
    if (pts.size() < 2) throw ArgumentError("trajectory too short for divergence quantities");
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) out.push_back({k, div_conserved(pts[k], pts[k + 1])});
    return out;
  }
  if (pts.size() < 4) throw ArgumentError("trajectory too short for elastica quantities");
  for (std::size_t k = 2; k + 1 < pts.size(); ++k) {
    const std::span<const Point2, 4> w = pts.subspan(k - 2).first<4>();
    out.push_back({k, which == SchemeId::kFreeIvs ? elastica_free_conserved(w) : elastica_constrained_conserved(w, p)});
  }
  return out;
}

inline DriftSeries drift_of(const std::vector<ConservedSample>& series) {
  DriftSeries d;
  if (series.empty()) return d;
  d.k0 = series.front().k;
  const auto ref = series.front().value.as_array();
  for (const auto& s : series) {
    const auto v = s.value.as_array();
    d.k.push_back(s.k);
    d.deviation.push_back({std::abs(v[0] - ref[0]), std::abs(v[1] - ref[1]), std::abs(v[2] - ref[2])});
  }
  return d;
}

inline DriftSeries drift(std::span<const Point2> pts, SchemeId which, const SchemeParams& p) {
  return drift_of(conserved_series(pts, which, p));
}

inline DriftSeries drift(const Trajectory& traj, SchemeId which) {
  return drift(traj.points(), which, traj.meta().params);
}

}  // namespace ivs
