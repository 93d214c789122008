#pragma once

// Jacobi elliptic functions and elliptic integrals in the parameter
// convention (second argument m, with sn(t, m) = sin am(t, m)), plus the
// closed-form elastica and divergence-example solutions built from them.
//
// Only real arguments with m < 1 are supported; negative m (imaginary
// modulus) is the case the elastica solutions need.

#include <boost/math/special_functions/ellint_rd.hpp>
#include <boost/math/special_functions/ellint_rf.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ivs/core.hpp"
#include "ivs/errors.hpp"

namespace ivs {

namespace detail {

inline void check_parameter(double m) {
  if (!std::isfinite(m) || m >= 1.0) {
    throw DomainError("elliptic parameter m = " + std::to_string(m) + " outside m < 1");
  }
}

struct Reduced {
  double r;  // in [-pi/2, pi/2]
  double n;  // number of half periods
};

inline Reduced reduce_amplitude(double phi) {
  const double n = std::round(phi / std::numbers::pi);
  return {phi - n * std::numbers::pi, n};
}

}  // namespace detail

/// Complete integral of the first kind K(m).
inline double ellint_K(double m) {
  detail::check_parameter(m);
  return boost::math::ellint_rf(0.0, 1.0 - m, 1.0);
}

/// Complete integral of the second kind E(m).
inline double ellint_E(double m) {
  detail::check_parameter(m);
  const double y = 1.0 - m;
  return boost::math::ellint_rf(0.0, y, 1.0) - m / 3.0 * boost::math::ellint_rd(0.0, y, 1.0);
}

/// F(phi | m) = int_0^phi (1 - m sin^2 t)^{-1/2} dt, for any real phi.
inline double ellint_F_inc(double phi, double m) {
  detail::check_parameter(m);
  const auto [r, n] = detail::reduce_amplitude(phi);
  const double s = std::sin(r);
  const double c = std::cos(r);
  const double part = s == 0.0 ? 0.0 : s * boost::math::ellint_rf(c * c, 1.0 - m * s * s, 1.0);
  return n == 0.0 ? part : part + 2.0 * n * ellint_K(m);
}

/// E(phi | m) = int_0^phi (1 - m sin^2 t)^{1/2} dt, for any real phi.
inline double ellint_E_inc(double phi, double m) {
  detail::check_parameter(m);
  const auto [r, n] = detail::reduce_amplitude(phi);
  const double s = std::sin(r);
  const double c = std::cos(r);
  double part = 0.0;
  if (s != 0.0) {
    const double x = c * c;
    const double y = 1.0 - m * s * s;
    part = s * boost::math::ellint_rf(x, y, 1.0) - m / 3.0 * s * s * s * boost::math::ellint_rd(x, y, 1.0);
  }
  return n == 0.0 ? part : part + 2.0 * n * ellint_E(m);
}

/// Amplitude am(t | m): the phi with F(phi | m) = t.  Newton on F, kept inside
/// the bracket given by the bounds of F' = (1 - m sin^2)^{-1/2}.
inline double jacobi_am(double t, double m) {
  detail::check_parameter(m);
  if (t == 0.0 || m == 0.0) return t;
  if (t < 0.0) return -jacobi_am(-t, m);

  const double stretch = std::sqrt(1.0 - m);
  double lo = std::min(t, t * stretch);
  double hi = std::max(t, t * stretch);
  lo -= 1e-12 * hi;
  hi += 1e-12 * hi;

  double phi = t;
  for (int it = 0; it < 100; ++it) {
    const double s = std::sin(phi);
    const double f = ellint_F_inc(phi, m) - t;
    if (f == 0.0) return phi;
    if (f < 0.0) {
      lo = phi;
    } else {
      hi = phi;
    }
    double next = phi - f * std::sqrt(1.0 - m * s * s);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double change = std::abs(next - phi);
    phi = next;
    if (change <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(phi))) break;
  }
  return phi;
}

inline double jacobi_sn(double t, double m) { return std::sin(jacobi_am(t, m)); }

inline double jacobi_cn(double t, double m) { return std::cos(jacobi_am(t, m)); }

inline double jacobi_dn(double t, double m) {
  const double s = jacobi_sn(t, m);
  return std::sqrt(1.0 - m * s * s);
}

// --- exact solutions ------------------------------------------------------

/// Closed-form solution families of kappa_ss + kappa^3/2 + alpha mu kappa = 0,
/// all parametrized by arc length.
enum class ElasticaFamily {
  kFree,   // mu = 0 written in the free-elastica form
  kCase1,  // -1 < mu < 1
  kCase2,  // mu = -1
  kCase3,  // mu < -1
};

inline std::string to_string(ElasticaFamily f) {
  switch (f) {
    case ElasticaFamily::kFree: return "free";
    case ElasticaFamily::kCase1: return "case1";
    case ElasticaFamily::kCase2: return "case2";
    case ElasticaFamily::kCase3: return "case3";
  }
  return "unknown";
}

inline ElasticaFamily family_for_mu(double mu) {
  if (!std::isfinite(mu) || mu >= 1.0) {
    throw ArgumentError("no elastica solution family for mu = " + std::to_string(mu));
  }
  if (mu == -1.0) return ElasticaFamily::kCase2;
  return mu < -1.0 ? ElasticaFamily::kCase3 : ElasticaFamily::kCase1;
}

struct ElasticaSolutionParams {
  double alpha = 4.0;
  double mu = -1.0;
  ElasticaFamily family = ElasticaFamily::kCase2;
  double a = 0.0;  // sqrt(2(1-mu)/alpha)
  double c = 0.0;  // sqrt(2|1+mu|/alpha)

  static ElasticaSolutionParams make(double alpha, double mu) {
    if (!(alpha > 0.0)) throw ArgumentError("alpha must be positive");
    ElasticaSolutionParams p;
    p.alpha = alpha;
    p.mu = mu;
    p.family = family_for_mu(mu);
    p.a = std::sqrt(2.0 * (1.0 - mu) / alpha);
    p.c = std::sqrt(2.0 * std::abs(1.0 + mu) / alpha);
    return p;
  }
};

inline Point2 exact_free_elastica(double s, double alpha) {
  if (!(alpha > 0.0)) throw ArgumentError("alpha must be positive");
  const double scale = std::sqrt(2.0 / alpha);
  const double t = std::sqrt(alpha / 2.0) * s;
  const double phi = jacobi_am(t, -1.0);
  return {scale * ellint_E_inc(phi, -1.0) - s, scale * std::sin(phi)};
}

inline Point2 exact_case1(double s, double alpha, double mu) {
  const auto p = ElasticaSolutionParams::make(alpha, mu);
  if (p.family != ElasticaFamily::kCase1) throw ArgumentError("case 1 needs -1 < mu < 1");
  const double m = -(p.a * p.a) / (p.c * p.c);
  const double phi = jacobi_am(0.5 * p.c * alpha * s, m);
  return {p.c * ellint_E_inc(phi, m) - s, p.a * std::sin(phi)};
}

inline Point2 exact_case2(double s, double alpha) {
  if (!(alpha > 0.0)) throw ArgumentError("alpha must be positive");
  const double r = std::sqrt(alpha);
  return {2.0 * std::tanh(r * s) / r - s, 2.0 / (std::cosh(r * s) * r)};
}

inline Point2 exact_case3(double s, double alpha, double mu) {
  const auto p = ElasticaSolutionParams::make(alpha, mu);
  if (p.family != ElasticaFamily::kCase3) throw ArgumentError("case 3 needs mu < -1");
  const double m = 1.0 - (p.a * p.a) / (p.c * p.c);
  const double phi = jacobi_am(0.5 * p.c * alpha * s, m);
  const double sn = std::sin(phi);
  return {p.c * ellint_E_inc(phi, m) + mu * s, p.c * std::sqrt(1.0 - m * sn * sn)};
}

inline Point2 exact_elastica(ElasticaFamily family, double s, double alpha, double mu) {
  switch (family) {
    case ElasticaFamily::kFree: return exact_free_elastica(s, alpha);
    case ElasticaFamily::kCase1: return exact_case1(s, alpha, mu);
    case ElasticaFamily::kCase2: return exact_case2(s, alpha);
    case ElasticaFamily::kCase3: return exact_case3(s, alpha, mu);
  }
  throw ArgumentError("unknown elastica family");
}

/// u(x) = sqrt(((A x + B)^2 + 1) / A), the general solution of u'' = 1/u^3.
inline double exact_div(double x, double A, double B) {
  if (!(A > 0.0)) throw ArgumentError("exact divergence solution needs A > 0");
  const double y = A * x + B;
  return std::sqrt((y * y + 1.0) / A);
}

// --- chord-length stepping --------------------------------------------------

using Curve = std::function<Point2(double)>;

/// Smallest s > s_prev with |curve(s) - curve(s_prev)| = ell, searched in
/// (s_prev, s_prev + 4 ell].
inline double arc_step_solve(const Curve& curve, double s_prev, double ell) {
  if (!(ell > 0.0)) throw ArgumentError("chord length must be positive");
  const Point2 anchor = curve(s_prev);
  const auto gap = [&](double s) { return distance(anchor, curve(s)) - ell; };

  constexpr int kScan = 64;
  const double width = 4.0 * ell / kScan;
  double lo = s_prev;
  double g_lo = -ell;
  for (int i = 1; i <= kScan; ++i) {
    const double hi = s_prev + i * width;
    const double g_hi = gap(hi);
    if (g_hi == 0.0) return hi;
    if (g_hi > 0.0) {
      std::uintmax_t iters = 200;
      const auto root = boost::math::tools::toms748_solve(
          gap, lo, hi, g_lo, g_hi, boost::math::tools::eps_tolerance<double>(), iters);
      // Keep whichever end has the smaller chord-length mismatch.
      return std::abs(gap(root.first)) <= std::abs(gap(root.second)) ? root.first : root.second;
    }
    lo = hi;
    g_lo = g_hi;
  }
  throw InitializationError("no chord of length " + std::to_string(ell) + " within 4 ell of s = " +
                            std::to_string(s_prev));
}

/// Parameters s_0 < s_1 < ... < s_{count-1} of consecutive points at chord distance ell.
inline std::vector<double> arc_parameters(const Curve& curve, double s0, double ell, std::size_t count) {
  std::vector<double> s;
  s.reserve(count);
  if (count == 0) return s;
  s.push_back(s0);
  while (s.size() < count) s.push_back(arc_step_solve(curve, s.back(), ell));
  return s;
}

}  // namespace ivs
