#pragma once

// Time-steppers for the elastica and the divergence example.
//
// Every implicit stepper solves two scalar equations for the next lattice
// point with newton_solve.  Elastica stencils are four known points
// z_{k-2}, z_{k-1}, z_k, z_{k+1}; the unknown is z_{k+2}.  Inside the residual
// functions, arrays of edges and determinants are indexed by lattice offset:
//   e[0] = z_{k-1} - z_{k-2}, e[1] = z_k - z_{k-1}, e[2] = z_{k+1} - z_k,
//   e[3] = z_{k+2} - z_{k+1} (the unknown edge),
//   D[j] = det[e[j] e[j+1]], i.e. D[0] = D_{k-2}, D[1] = D_{k-1}, D[2] = D_k.

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ivs/core.hpp"
#include "ivs/elliptic.hpp"
#include "ivs/errors.hpp"
#include "ivs/newton.hpp"
#include "ivs/params.hpp"

namespace ivs {

using ElasticaWindow = std::span<const Point2, 4>;

namespace detail {

struct ElasticaStencil {
  std::array<EdgeData, 4> e;
  std::array<double, 3> D;
};

inline ElasticaStencil elastica_stencil(ElasticaWindow w, Point2 next) {
  ElasticaStencil s;
  s.e = {make_edge(w[0], w[1]), make_edge(w[1], w[2]), make_edge(w[2], w[3]), make_edge(w[3], next)};
  for (int j = 0; j < 3; ++j) s.D[j] = cross_det(s.e[j], s.e[j + 1]);
  return s;
}

inline void require_nonzero_edges(const ElasticaStencil& s, int count) {
  for (int j = 0; j < count; ++j) {
    if (s.e[j].ell == 0.0) throw DegenerateStencil("zero-length edge in elastica stencil");
  }
}

}  // namespace detail

// --- free elastica ----------------------------------------------------------

/// Discrete Euler-Lagrange equations of the invariant elastica Lagrangian,
/// multiplied through by (ell_{k-1} ell_k)^{5/2}.  f = (E_x, E_u).
inline Residual2 free_elastica_residual(ElasticaWindow w, Point2 next) {
  const auto s = detail::elastica_stencil(w, next);
  detail::require_nonzero_edges(s, 4);
  const auto& e = s.e;
  const auto& D = s.D;
  const double l1sq = e[1].ell * e[1].ell;
  const double l2sq = e[2].ell * e[2].ell;
  const double l3sq = e[3].ell * e[3].ell;
  const double r_lo = std::pow(e[2].ell / e[0].ell, 2.5);
  const double r_hi = std::pow(e[1].ell / e[3].ell, 2.5);

  Residual2 r;
  r.f[0] = -D[0] * e[0].du * r_lo + D[1] * (e[1].du + e[2].du) - D[2] * e[3].du * r_hi -
           5.0 * D[0] * D[0] * e[1].dx / (4.0 * l1sq) * r_lo - 5.0 * D[1] * D[1] * e[1].dx / (4.0 * l1sq) +
           5.0 * D[1] * D[1] * e[2].dx / (4.0 * l2sq) + 5.0 * D[2] * D[2] * e[2].dx / (4.0 * l2sq) * r_hi;
  r.f[1] = D[0] * e[0].dx * r_lo - D[1] * (e[1].dx + e[2].dx) + D[2] * e[3].dx * r_hi -
           5.0 * D[0] * D[0] * e[1].du / (4.0 * l1sq) * r_lo - 5.0 * D[1] * D[1] * e[1].du / (4.0 * l1sq) +
           5.0 * D[1] * D[1] * e[2].du / (4.0 * l2sq) + 5.0 * D[2] * D[2] * e[2].du / (4.0 * l2sq) * r_hi;

  const double dk = D[2];
  const double dxk = e[2].dx, duk = e[2].du, dxn = e[3].dx, dun = e[3].du;
  const double c5k = 5.0 * dk / (2.0 * l2sq);
  const double c5n = 5.0 * dk / (2.0 * l3sq);
  const double c25 = 25.0 * dk * dk / (8.0 * l2sq * l3sq);
  r.J[0][0] = r_hi * (duk * dun - c5k * duk * dxk + c5n * dun * dxn - c25 * dxk * dxn);
  r.J[0][1] = r_hi * (-dk - dun * dxk + c5k * dxk * dxk + c5n * dun * dun - c25 * dun * dxk);
  r.J[1][0] = r_hi * (dk - duk * dxn - c5k * duk * duk - c5n * dxn * dxn - c25 * duk * dxn);
  r.J[1][1] = r_hi * (dxk * dxn + c5k * duk * dxk - c5n * dun * dxn - c25 * duk * dun);
  return r;
}

inline Point2 step_free_elastica(ElasticaWindow w, const SolverConfig& cfg) {
  const Point2 guess = 2.0 * w[3] - w[2];
  return newton_solve([&](Point2 z) { return free_elastica_residual(w, z); }, guess, cfg).z;
}

// --- arc-length constrained schemes -------------------------------------------

/// Which Euler-Lagrange component is paired with the chord constraint.
enum class ElBranch { kEx, kEu };

/// E_x when the current edge is steeper than 45 degrees, E_u otherwise
/// (ties go to E_u).
inline ElBranch select_branch(ElasticaWindow w) {
  const EdgeData cur = make_edge(w[2], w[3]);
  return std::abs(cur.dx) < std::abs(cur.du) ? ElBranch::kEx : ElBranch::kEu;
}

namespace detail {

inline void require_on_circle(ElasticaWindow w, double ell) {
  for (int j = 0; j < 3; ++j) {
    const double len = distance(w[j], w[j + 1]);
    if (std::abs(len - ell) > 1e-10) {
      throw PreconditionError("stencil edge " + std::to_string(j) + " has length " + std::to_string(len) +
                              ", expected " + std::to_string(ell));
    }
  }
}

inline void validate_constrained(const SchemeParams& p) {
  if (!(p.ell > 0.0)) throw ArgumentError("ell must be positive");
  if (!std::isfinite(p.alpha) || !std::isfinite(p.mu)) throw ArgumentError("alpha and mu must be finite");
}

/// Second row of every constrained system: |z_{k+2} - z_{k+1}|^2 - ell^2.
inline void set_constraint_row(Residual2& r, const EdgeData& next, double ell) {
  r.f[1] = next.dx * next.dx + next.du * next.du - ell * ell;
  r.J[1] = {2.0 * next.dx, 2.0 * next.du};
}

inline Point2 circle_guess(ElasticaWindow w, double ell) {
  const Point2 dir = w[3] - w[2];
  const double len = std::hypot(dir.x, dir.u);
  if (len == 0.0) throw DegenerateStencil("zero-length edge in elastica stencil");
  return w[3] + (ell / len) * dir;
}

}  // namespace detail

/// ell^5-scaled Euler-Lagrange equation of the constrained invariant
/// Lagrangian (multiplier -alpha mu) for the chosen branch, paired with the
/// chord constraint.
inline Residual2 constrained_elastica_residual(ElasticaWindow w, Point2 next, const SchemeParams& p, ElBranch branch) {
  const auto s = detail::elastica_stencil(w, next);
  const auto& e = s.e;
  const auto& D = s.D;
  const double ell = p.ell;
  const double k5 = 5.0 / (4.0 * ell * ell);
  const double lam = p.alpha * p.mu * std::pow(ell, 4);

  Residual2 r;
  if (branch == ElBranch::kEx) {
    r.f[0] = -D[0] * e[0].du + D[1] * (e[1].du + e[2].du) - D[2] * e[3].du +
             k5 * (-D[0] * D[0] * e[1].dx + D[1] * D[1] * (e[2].dx - e[1].dx) + D[2] * D[2] * e[2].dx) -
             lam * (e[1].dx - e[2].dx);
    r.J[0][0] = e[2].du * e[3].du - 2.0 * k5 * D[2] * e[2].du * e[2].dx;
    r.J[0][1] = -e[2].dx * e[3].du - D[2] + 2.0 * k5 * D[2] * e[2].dx * e[2].dx;
  } else {
    r.f[0] = D[0] * e[0].dx - D[1] * (e[1].dx + e[2].dx) + D[2] * e[3].dx +
             k5 * (-D[0] * D[0] * e[1].du + D[1] * D[1] * (e[2].du - e[1].du) + D[2] * D[2] * e[2].du) -
             lam * (e[1].du - e[2].du);
    r.J[0][0] = -e[2].du * e[3].dx + D[2] - 2.0 * k5 * D[2] * e[2].du * e[2].du;
    r.J[0][1] = e[2].dx * e[3].dx + 2.0 * k5 * D[2] * e[2].dx * e[2].du;
  }
  detail::set_constraint_row(r, e[3], ell);
  return r;
}

inline Point2 constrained_elastica_solve(ElasticaWindow w, const SchemeParams& p, ElBranch branch) {
  detail::validate_constrained(p);
  detail::require_on_circle(w, p.ell);
  const auto eval = [&](Point2 z) { return constrained_elastica_residual(w, z, p, branch); };
  return newton_solve(eval, detail::circle_guess(w, p.ell), p.solver).z;
}

inline Point2 constrained_elastica_step(ElasticaWindow w, const SchemeParams& p) {
  return constrained_elastica_solve(w, p, select_branch(w));
}

/// kappa_ss + kappa^3/(2 ell^4) + mu alpha ell^2 kappa with the curvature built
/// from plain second, third and fourth differences, paired with the chord
/// constraint.
inline Residual2 invariant_naive_residual(ElasticaWindow w, Point2 next, const SchemeParams& p) {
  const Point2 d1 = w[3] - w[2];
  const Point2 d2 = next - 2.0 * w[3] + w[2];
  const Point2 d3 = next - 3.0 * w[3] + 3.0 * w[2] - w[1];
  const Point2 d4 = next - 4.0 * w[3] + 6.0 * w[2] - 4.0 * w[1] + w[0];
  const double ell = p.ell;
  const double ell4 = std::pow(ell, 4);
  const double lin = p.mu * p.alpha * ell * ell;

  const double kappa = d2.u * d1.x - d2.x * d1.u;
  const double kappa_ss = d4.u * d1.x + d3.u * d2.x - d4.x * d1.u - d3.x * d2.u;

  Residual2 r;
  r.f[0] = kappa_ss + kappa * kappa * kappa / (2.0 * ell4) + lin * kappa;
  const double dk_dx = -d1.u;
  const double dk_du = d1.x;
  const double dkss_dx = d3.u - d1.u - d2.u;
  const double dkss_du = d1.x + d2.x - d3.x;
  const double cubic = 3.0 * kappa * kappa / (2.0 * ell4) + lin;
  r.J[0][0] = dkss_dx + cubic * dk_dx;
  r.J[0][1] = dkss_du + cubic * dk_du;
  detail::set_constraint_row(r, make_edge(w[3], next), ell);
  return r;
}

inline Point2 invariant_nonvariational_step(ElasticaWindow w, const SchemeParams& p) {
  detail::validate_constrained(p);
  detail::require_on_circle(w, p.ell);
  const auto eval = [&](Point2 z) { return invariant_naive_residual(w, z, p); };
  return newton_solve(eval, detail::circle_guess(w, p.ell), p.solver).z;
}

/// ell^5-scaled Euler-Lagrange equations of the graph-based (rotation
/// dependent) elastica Lagrangian with the chord constraint.  The ratios
/// (dx_{j}/dx_{j+1})^{5/2} go NaN once the tangent turns through vertical.
inline Residual2 noninvariant_residual(ElasticaWindow w, Point2 next, const SchemeParams& p, ElBranch branch) {
  const auto s = detail::elastica_stencil(w, next);
  const auto& e = s.e;
  const auto& D = s.D;
  for (const EdgeData& edge : e) {
    if (edge.dx == 0.0) throw DegenerateStencil("vertical edge in graph-based elastica stencil");
  }
  const double ell = p.ell;
  const double ell2 = ell * ell;
  const double lam = std::pow(ell, 4) * p.alpha * p.mu;
  const double r_hi = std::pow(e[2].dx / e[3].dx, 2.5);
  const double r_mid = std::pow(e[1].dx / e[2].dx, 2.5);
  const double r_lo = std::pow(e[0].dx / e[1].dx, 2.5);
  const double dx0 = e[2].dx, du0 = e[2].du, dxn = e[3].dx, dun = e[3].du, dk = D[2];

  Residual2 r;
  if (branch == ElBranch::kEu) {
    const double head = dk * dxn + 5.0 * dk * dk * du0 / (2.0 * ell2);
    r.f[0] = head * r_hi + D[0] * e[0].dx * r_lo -
             (D[1] * (e[2].dx + e[1].dx) + 5.0 * D[1] * D[1] * e[1].du / (2.0 * ell2)) * r_mid -
             lam * (e[1].du - e[2].du);
    const double dhead_dx = dk - du0 * dxn - 5.0 * dk * du0 * du0 / ell2;
    const double dhead_du = dx0 * dxn + 5.0 * dk * dx0 * du0 / ell2;
    r.J[0][0] = r_hi * (dhead_dx - 2.5 * head / dxn);
    r.J[0][1] = r_hi * dhead_du;
  } else {
    const double head = -dk * dun + 5.0 * dk * dk * dx0 / (2.0 * ell2) - 5.0 * dk * dk / (4.0 * dx0);
    r.f[0] = head * r_hi +
             (D[1] * (e[2].du + e[1].du) - 5.0 * D[1] * D[1] * e[1].dx / (2.0 * ell2) +
              5.0 * D[1] * D[1] / (4.0 * e[1].dx) + 5.0 * D[1] * D[1] / (4.0 * e[2].dx)) *
                 r_mid -
             (D[0] * e[0].du + 5.0 * D[0] * D[0] / (4.0 * e[1].dx)) * r_lo - lam * (e[1].dx - e[2].dx);
    const double dd = 5.0 * dk * dx0 / ell2 - 5.0 * dk / (2.0 * dx0);  // d(head)/dD_k, less the -dun term
    const double dhead_dx = du0 * dun - du0 * dd;
    const double dhead_du = -dx0 * dun - dk + dx0 * dd;
    r.J[0][0] = r_hi * (dhead_dx - 2.5 * head / dxn);
    r.J[0][1] = r_hi * dhead_du;
  }
  detail::set_constraint_row(r, e[3], ell);
  return r;
}

inline Point2 noninvariant_variational_solve(ElasticaWindow w, const SchemeParams& p, ElBranch branch) {
  detail::validate_constrained(p);
  detail::require_on_circle(w, p.ell);
  const auto eval = [&](Point2 z) { return noninvariant_residual(w, z, p, branch); };
  return newton_solve(eval, detail::circle_guess(w, p.ell), p.solver).z;
}

inline Point2 noninvariant_variational_step(ElasticaWindow w, const SchemeParams& p) {
  return noninvariant_variational_solve(w, p, select_branch(w));
}

// --- divergence example --------------------------------------------------------

/// f = (E_u, E_x) of the SL(2)-invariant Lagrangian at z_k, unknown z_{k+1}.
inline Residual2 div_invariant_residual(Point2 prev, Point2 cur, Point2 next) {
  const double dx0 = cur.x - prev.x;
  const double dx = next.x - cur.x;
  if (dx0 == 0.0 || dx == 0.0) throw DegenerateStencil("vertical edge in divergence stencil");
  if (prev.u == 0.0 || cur.u == 0.0 || next.u == 0.0) throw DegenerateStencil("zero ordinate in divergence stencil");
  const double p0 = (cur.u - prev.u) / dx0;
  const double du = next.u - cur.u;
  const double p = du / dx;
  const double uk = cur.u;
  const double un = next.u;
  const double ub = prev.u;

  Residual2 r;
  r.f[0] = -2.0 * (p - p0) + (dx / un + dx0 / ub) / (uk * uk);
  r.f[1] = p * p - p0 * p0 + (1.0 / un - 1.0 / ub) / uk;
  r.J[0][0] = 2.0 * du / (dx * dx) + 1.0 / (uk * uk * un);
  r.J[0][1] = -2.0 / dx - dx / (uk * uk * un * un);
  r.J[1][0] = -2.0 * p * du / (dx * dx);
  r.J[1][1] = 2.0 * p / dx - 1.0 / (uk * un * un);
  return r;
}

/// Solves both divergence-scheme equations for z_{k+1}.  The linear
/// extrapolation is first corrected in u at fixed x so that Newton starts on
/// the E_u = 0 curve: the pair is nearly dependent along the x-direction, and
/// from the raw extrapolation Newton can fall onto the spurious root
/// z_{k+1} = z_{k-1}.
inline Point2 div_invariant_step(Point2 prev, Point2 cur, const SolverConfig& cfg) {
  if (prev.u == 0.0 || cur.u == 0.0) throw DomainError("divergence scheme needs nonzero ordinates");
  if (cur.x == prev.x) throw DegenerateStencil("vertical edge in divergence stencil");
  Point2 guess = 2.0 * cur - prev;
  for (int it = 0; it < 20; ++it) {
    Residual2 r;
    try {
      r = div_invariant_residual(prev, cur, guess);
    } catch (const DegenerateStencil&) {
      break;
    }
    const double du = r.f[0] / r.J[0][1];
    if (!std::isfinite(du)) break;
    guess.u -= du;
    if (std::abs(du) <= 1e-15 * std::max(1.0, std::abs(guess.u))) break;
  }
  return newton_solve([&](Point2 z) { return div_invariant_residual(prev, cur, z); }, guess, cfg).z;
}

/// u_{k+1} = 2 u_k - u_{k-1} + h^2 / u_k^3.
inline double div_standard_step(double u_prev, double u_cur, double h) {
  if (u_cur == 0.0) throw DomainError("standard divergence step at zero ordinate");
  if (!(h > 0.0)) throw ArgumentError("grid spacing must be positive");
  return 2.0 * u_cur - u_prev + h * h / (u_cur * u_cur * u_cur);
}

// --- initialization ------------------------------------------------------------

/// Exact solution family a scheme is seeded from and compared against.
inline ElasticaFamily elastica_family(SchemeId id, const SchemeParams& p) {
  if (is_div_scheme(id)) throw ArgumentError("divergence schemes have no elastica family");
  return id == SchemeId::kFreeIvs ? ElasticaFamily::kFree : family_for_mu(p.mu);
}

inline Curve elastica_curve(ElasticaFamily family, const SchemeParams& p) {
  if (family != ElasticaFamily::kFree) (void)ElasticaSolutionParams::make(p.alpha, p.mu);
  return [family, alpha = p.alpha, mu = p.mu](double s) { return exact_elastica(family, s, alpha, mu); };
}

/// Four exact points starting at s0 with consecutive chords of length ell.
inline std::array<Point2, 4> init_elastica(ElasticaFamily family, const SchemeParams& p) {
  if (!(p.ell > 0.0)) throw ArgumentError("ell must be positive");
  const Curve curve = elastica_curve(family, p);
  const auto s = arc_parameters(curve, p.s0, p.ell, 4);
  return {curve(s[0]), curve(s[1]), curve(s[2]), curve(s[3])};
}

/// Grid spacing of the divergence runs: `points` lattice points spanning [-1, 1].
inline double div_spacing(int points) {
  if (points < 2) throw ArgumentError("divergence runs need at least two lattice points");
  return 2.0 / (points - 1);
}

/// Exact seeds x_0 = -1, x_1 = -1 + 2/(points-1) on u = sqrt(x^2 + 1).
inline std::array<Point2, 2> init_div(int points) {
  const double x1 = -1.0 + div_spacing(points);
  return {Point2{-1.0, exact_div(-1.0, 1.0, 0.0)}, Point2{x1, exact_div(x1, 1.0, 0.0)}};
}

// --- driver --------------------------------------------------------------------

struct RunFailure {
  std::size_t index = 0;  // lattice index of the point that could not be computed
  std::string message;
  double residual = 0.0;
};

struct RunResult {
  Trajectory trajectory;
  std::optional<RunFailure> failure;

  bool ok() const { return !failure.has_value(); }
};

inline void validate(SchemeId id, const SchemeParams& p) {
  p.solver.validate();
  if (!std::isfinite(p.s0)) throw ArgumentError("s0 must be finite");
  if (is_div_scheme(id)) {
    if (p.steps < 2) throw ArgumentError("divergence runs need steps >= 2 lattice points");
    return;
  }
  if (p.steps < 0) throw ArgumentError("steps must be nonnegative");
  if (!(p.ell > 0.0) || !std::isfinite(p.ell)) throw ArgumentError("ell must be positive");
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) throw ArgumentError("alpha must be positive");
  if (id != SchemeId::kFreeIvs) (void)family_for_mu(p.mu);
}

namespace detail {

inline Point2 advance(SchemeId id, const Trajectory& traj, const SchemeParams& p) {
  switch (id) {
    case SchemeId::kFreeIvs: return step_free_elastica(traj.tail(4).first<4>(), p.solver);
    case SchemeId::kConstrainedIvs: return constrained_elastica_step(traj.tail(4).first<4>(), p);
    case SchemeId::kInvariantNaive: return invariant_nonvariational_step(traj.tail(4).first<4>(), p);
    case SchemeId::kNoninvariantVar: return noninvariant_variational_step(traj.tail(4).first<4>(), p);
    case SchemeId::kDivIvs: {
      const auto w = traj.tail(2);
      return div_invariant_step(w[0], w[1], p.solver);
    }
    case SchemeId::kDivStandard: {
      const auto w = traj.tail(2);
      const double h = div_spacing(p.steps);
      return {w[1].x + h, div_standard_step(w[0].u, w[1].u, h)};
    }
  }
  throw ArgumentError("unknown scheme");
}

}  // namespace detail

/// Seeds the scheme from its exact solution and advances it.  Step errors end
/// the run early; the points computed so far are kept.
inline RunResult run(SchemeId id, const SchemeParams& p) {
  validate(id, p);
  const RunMeta meta{id, p};
  std::vector<Point2> seed;
  std::size_t advances = 0;
  if (is_div_scheme(id)) {
    const auto s = init_div(p.steps);
    seed.assign(s.begin(), s.end());
    advances = static_cast<std::size_t>(p.steps) - 2;
  } else {
    const auto s = init_elastica(elastica_family(id, p), p);
    seed.assign(s.begin(), s.end());
    advances = static_cast<std::size_t>(p.steps);
  }

  RunResult result{Trajectory(std::move(seed), meta), std::nullopt};
  for (std::size_t n = 0; n < advances; ++n) {
    const std::size_t index = result.trajectory.size();
    try {
      const Point2 next = detail::advance(id, result.trajectory, p);
      if (!is_finite(next)) throw SolverFailure("non-finite step", std::numeric_limits<double>::quiet_NaN(), 0);
      result.trajectory.push_back(next);
    } catch (const SolverFailure& e) {
      result.failure = RunFailure{index, e.what(), e.residual()};
      break;
    } catch (const Error& e) {
      result.failure = RunFailure{index, e.what(), std::numeric_limits<double>::quiet_NaN()};
      break;
    }
  }
  return result;
}

}  // namespace ivs
