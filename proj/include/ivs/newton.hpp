#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "ivs/core.hpp"
#include "ivs/errors.hpp"
#include "ivs/params.hpp"

namespace ivs {

/// Residual of a two-equation stepper at a trial point, with its analytic
/// Jacobian with respect to that point (rows: equations, columns: x then u).
struct Residual2 {
  std::array<double, 2> f{};
  std::array<std::array<double, 2>, 2> J{};

  double norm() const { return std::max(std::abs(f[0]), std::abs(f[1])); }
};

struct NewtonReport {
  Point2 z;
  int iterations = 0;
  double residual = 0.0;
};

namespace detail {

/// Extra iterations taken after the residual test first passes, unless the
/// step has already shrunk below tolerance.  The equations are scaled so that
/// an absolute residual of 1e-13 can leave the root under-resolved when the
/// edges are short.
inline constexpr int kPolishIterations = 2;
inline constexpr int kMaxHalvings = 20;

template <class Eval>
std::pair<bool, Residual2> try_eval(Eval& eval, Point2 z) {
  try {
    Residual2 r = eval(z);
    const bool ok = std::isfinite(r.norm());
    return {ok, r};
  } catch (const DegenerateStencil&) {
    return {false, Residual2{}};
  }
}

}  // namespace detail

/// Damped Newton iteration on a 2x2 system.  Each step solves
/// (J + jac_reg I) d = -f and halves d until the residual norm decreases.
template <class Eval>
NewtonReport newton_solve(Eval&& eval, Point2 guess, const SolverConfig& cfg) {
  auto [ok, r] = detail::try_eval(eval, guess);
  if (!ok) throw SolverFailure("residual undefined at the initial guess", std::numeric_limits<double>::quiet_NaN(), 0);

  Point2 z = guess;
  double norm = r.norm();
  bool step_small = false;
  int polished = 0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    if (norm <= cfg.abs_tol) {
      if (step_small || polished >= detail::kPolishIterations) return {z, it, norm};
      ++polished;
    }
    const double a = r.J[0][0] + cfg.jac_reg;
    const double b = r.J[0][1];
    const double c = r.J[1][0];
    const double d = r.J[1][1] + cfg.jac_reg;
    const double det = a * d - b * c;
    if (det == 0.0 || !std::isfinite(det)) {
      if (norm <= cfg.abs_tol) return {z, it, norm};
      throw SolverFailure("singular Jacobian", norm, it);
    }
    const Point2 dir{-(d * r.f[0] - b * r.f[1]) / det, -(a * r.f[1] - c * r.f[0]) / det};
    // Correction at rounding level: the residual has hit its floor.
    if (norm_inf(dir) <= cfg.abs_tol * std::max(1.0, norm_inf(z))) {
      const Point2 last = z + dir;
      auto [last_ok, last_r] = detail::try_eval(eval, last);
      if (last_ok && last_r.norm() <= norm) return {last, it + 1, last_r.norm()};
      return {z, it, norm};
    }

    double t = 1.0;
    bool accepted = false;
    Point2 fallback = guess;
    Residual2 fallback_r{};
    bool have_fallback = false;
    for (int h = 0; h <= detail::kMaxHalvings; ++h, t *= 0.5) {
      const Point2 trial = z + t * dir;
      auto [trial_ok, trial_r] = detail::try_eval(eval, trial);
      if (!trial_ok) continue;
      if (!have_fallback) {
        fallback = trial;
        fallback_r = trial_r;
        have_fallback = true;
      }
      if (trial_r.norm() < norm) {
        step_small = norm_inf(trial - z) <= cfg.abs_tol * std::max(1.0, norm_inf(z));
        z = trial;
        r = trial_r;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (norm <= cfg.abs_tol) return {z, it, norm};
      if (!have_fallback) throw SolverFailure("residual undefined along the Newton direction", norm, it);
      // No decrease: take the longest admissible step and carry on.
      step_small = norm_inf(fallback - z) <= cfg.abs_tol * std::max(1.0, norm_inf(z));
      z = fallback;
      r = fallback_r;
    }
    norm = r.norm();
  }
  if (norm <= cfg.abs_tol) return {z, cfg.max_iter, norm};
  throw SolverFailure("Newton iteration did not converge (residual " + std::to_string(norm) + ")", norm,
                      cfg.max_iter);
}

}  // namespace ivs
