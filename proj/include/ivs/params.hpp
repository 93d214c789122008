#pragma once

#include <array>
#include <string>
#include <string_view>

#include "ivs/errors.hpp"

namespace ivs {

enum class SchemeId {
  kFreeIvs,          // scaled free-elastica invariant variational scheme
  kConstrainedIvs,   // arc-length constrained invariant variational scheme
  kInvariantNaive,   // invariant, non-variational curvature discretization
  kNoninvariantVar,  // variational but not rotation invariant
  kDivIvs,           // SL(2)-invariant variational scheme for u'' = 1/u^3
  kDivStandard,      // central second difference for u'' = 1/u^3
};

inline constexpr std::array<SchemeId, 6> kAllSchemes = {
    SchemeId::kFreeIvs,         SchemeId::kConstrainedIvs, SchemeId::kInvariantNaive,
    SchemeId::kNoninvariantVar, SchemeId::kDivIvs,         SchemeId::kDivStandard};

inline std::string_view to_string(SchemeId id) {
  switch (id) {
    case SchemeId::kFreeIvs: return "free-ivs";
    case SchemeId::kConstrainedIvs: return "constrained-ivs";
    case SchemeId::kInvariantNaive: return "invariant-naive";
    case SchemeId::kNoninvariantVar: return "noninvariant-var";
    case SchemeId::kDivIvs: return "div-ivs";
    case SchemeId::kDivStandard: return "div-standard";
  }
  return "unknown";
}

inline SchemeId parse_scheme(std::string_view name) {
  for (SchemeId id : kAllSchemes) {
    if (to_string(id) == name) return id;
  }
  throw ArgumentError("unknown scheme '" + std::string(name) + "'");
}

inline bool is_div_scheme(SchemeId id) {
  return id == SchemeId::kDivIvs || id == SchemeId::kDivStandard;
}

/// Elastica schemes that carry the arc-length constraint |z_{k+1} - z_k| = ell.
inline bool is_constrained_scheme(SchemeId id) {
  return id == SchemeId::kConstrainedIvs || id == SchemeId::kInvariantNaive ||
         id == SchemeId::kNoninvariantVar;
}

struct SolverConfig {
  double abs_tol = 1e-13;  // on the infinity norm of the residual
  int max_iter = 50;
  double jac_reg = 0.0;    // added to the Jacobian diagonal

  void validate() const {
    if (!(abs_tol > 0.0)) throw ArgumentError("abs_tol must be positive");
    if (max_iter < 1) throw ArgumentError("max_iter must be at least 1");
    if (!(jac_reg >= 0.0)) throw ArgumentError("jac_reg must be nonnegative");
  }
};

/// Regularization the free-elastica scheme runs with unless told otherwise.
inline constexpr double kFreeElasticaJacReg = 1e-3;
/// With the regularization dominating J, convergence is linear (about 0.9
/// per iteration at ell = 0.01), so the free scheme needs a larger budget.
inline constexpr int kFreeElasticaMaxIter = 400;

/// Run configuration.  For the elastica schemes `steps` counts advances past
/// the four seed points; for the divergence example it counts lattice points
/// on [-1, 1] (spacing 2/(steps-1)), two of which are seeds.
struct SchemeParams {
  double alpha = 4.0;
  double mu = -1.0;  // Lagrange multiplier is -alpha*mu
  double ell = 0.01;
  int steps = 500;
  double s0 = -2.0;
  SolverConfig solver{};
};

/// Default solver settings for a scheme: only the free elastica is regularized.
inline SolverConfig default_solver(SchemeId id) {
  SolverConfig cfg;
  if (id == SchemeId::kFreeIvs) {
    cfg.jac_reg = kFreeElasticaJacReg;
    cfg.max_iter = kFreeElasticaMaxIter;
  }
  return cfg;
}

inline SchemeParams default_params(SchemeId id) {
  SchemeParams p;
  p.solver = default_solver(id);
  if (is_div_scheme(id)) p.steps = 100;
  return p;
}

}  // namespace ivs
