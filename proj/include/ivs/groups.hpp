#pragma once

// Symmetry groups of the two model problems and their discrete moving frames.
//
// SE(2) acts on the plane by rotation and translation.  The fractional-linear
// group acts by x -> (alpha x + beta)/(delta x + gamma), u -> u/(delta x + gamma)
// with alpha gamma - beta delta = 1.  Both frames are right frames: applying
// the frame of a stencil sends the stencil onto a fixed cross-section.

#include <cmath>
#include <numbers>
#include <span>

#include "ivs/core.hpp"
#include "ivs/errors.hpp"

namespace ivs {

template <std::size_t N>
using StencilWindow = std::span<const Point2, N>;

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  phi = std::remainder(phi, two_pi);
  if (phi <= -std::numbers::pi) phi += two_pi;
  return phi;
}

struct SE2Element {
  double a = 0.0;
  double b = 0.0;
  double phi = 0.0;

  SE2Element() = default;
  SE2Element(double a_, double b_, double phi_) : a(a_), b(b_), phi(normalize_angle(phi_)) {}
};

inline Point2 se2_apply(const SE2Element& g, Point2 p) {
  const double c = std::cos(g.phi);
  const double s = std::sin(g.phi);
  return {p.x * c - p.u * s + g.a, p.x * s + p.u * c + g.b};
}

/// The element acting as `outer` after `inner`.
inline SE2Element compose(const SE2Element& outer, const SE2Element& inner) {
  const Point2 t = se2_apply(outer, {inner.a, inner.b});
  return {t.x, t.u, outer.phi + inner.phi};
}

inline SE2Element inverse(const SE2Element& g) {
  const SE2Element rot{0.0, 0.0, -g.phi};
  const Point2 t = se2_apply(rot, {g.a, g.b});
  return {-t.x, -t.u, -g.phi};
}

/// Frame sending z0 to the origin and z1 onto the positive x-axis.
inline SE2Element se2_moving_frame(Point2 z0, Point2 z1) {
  const EdgeData e = make_edge(z0, z1);
  if (e.ell == 0.0) throw DegenerateStencil("SE(2) frame of coincident points");
  const double a = -(z0.x * e.dx + z0.u * e.du) / e.ell;
  const double b = (z0.x * e.du - z0.u * e.dx) / e.ell;
  return {a, b, -std::atan2(e.du, e.dx)};
}

struct SL2Element {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 1.0;
  double delta = 0.0;

  double det() const { return alpha * gamma - beta * delta; }
};

inline Point2 sl2_apply(const SL2Element& g, Point2 p) {
  const double den = g.delta * p.x + g.gamma;
  if (den == 0.0) throw SingularAction("fractional-linear action evaluated at its pole");
  return {(g.alpha * p.x + g.beta) / den, p.u / den};
}

/// Matrix product [[alpha, beta], [delta, gamma]] of outer times inner.
inline SL2Element compose(const SL2Element& outer, const SL2Element& inner) {
  return {
      .alpha = outer.alpha * inner.alpha + outer.beta * inner.delta,
      .beta = outer.alpha * inner.beta + outer.beta * inner.gamma,
      .gamma = outer.delta * inner.beta + outer.gamma * inner.gamma,
      .delta = outer.delta * inner.alpha + outer.gamma * inner.delta,
  };
}

inline SL2Element inverse(const SL2Element& g) {
  const double d = g.det();
  return {.alpha = g.gamma / d, .beta = -g.beta / d, .gamma = g.alpha / d, .delta = -g.delta / d};
}

/// Frame sending z0 to (0, 1) and z1 to ordinate 1.
inline SL2Element sl2_moving_frame(Point2 z0, Point2 z1) {
  const double dx = z1.x - z0.x;
  const double du = z1.u - z0.u;
  if (z0.u == 0.0) throw DegenerateStencil("SL(2) frame needs a nonzero ordinate");
  if (dx == 0.0) throw DegenerateStencil("SL(2) frame needs a non-vertical edge");
  return {
      .alpha = 1.0 / z0.u,
      .beta = -z0.x / z0.u,
      .gamma = (z0.u * dx - z0.x * du) / dx,
      .delta = du / dx,
  };
}

/// D_k^2 / (2 (ell_k ell_{k+1})^{5/2}): the discrete elastica Lagrangian
/// invariantized with the frames at k and k+1.
inline double invariant_elastica_lagrangian(StencilWindow<3> w) {
  const EdgeData e0 = make_edge(w[0], w[1]);
  const EdgeData e1 = make_edge(w[1], w[2]);
  if (e0.ell == 0.0 || e1.ell == 0.0) throw DegenerateStencil("elastica Lagrangian on a zero edge");
  const double d = cross_det(e0, e1);
  return d * d / (2.0 * std::pow(e0.ell * e1.ell, 2.5));
}

/// du^2/dx - dx/(u_k u_{k+1}); the telescoping zeta increment is dropped.
inline double invariant_div_lagrangian(StencilWindow<2> w) {
  const double dx = w[1].x - w[0].x;
  const double du = w[1].u - w[0].u;
  if (dx == 0.0) throw DegenerateStencil("divergence Lagrangian on a vertical edge");
  if (w[0].u == 0.0 || w[1].u == 0.0) throw DegenerateStencil("divergence Lagrangian at zero ordinate");
  return du * du / dx - dx / (w[0].u * w[1].u);
}

}  // namespace ivs
