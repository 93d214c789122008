#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ivs/errors.hpp"
#include "ivs/params.hpp"

namespace ivs {

/// A lattice sample z_k = (x_k, u_k).
struct Point2 {
  double x = 0.0;
  double u = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.u + b.u}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.u - b.u}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.u}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.u); }

inline double norm_inf(Point2 p) { return std::max(std::abs(p.x), std::abs(p.u)); }

inline double distance(Point2 a, Point2 b) { return std::hypot(b.x - a.x, b.u - a.u); }

/// Which scheme produced a trajectory, and with what parameters.
struct RunMeta {
  SchemeId scheme = SchemeId::kConstrainedIvs;
  SchemeParams params{};
};

/// Ordered lattice points z_0, z_1, ... of a scheme run.  Holds at least two
/// points, all finite.
class Trajectory {
 public:
  Trajectory(std::vector<Point2> points, RunMeta meta) : points_(std::move(points)), meta_(meta) {
    if (points_.size() < 2) throw ArgumentError("trajectory needs at least two points");
    for (const Point2& p : points_) check(p);
  }

  void push_back(Point2 p) {
    check(p);
    points_.push_back(p);
  }

  std::size_t size() const noexcept { return points_.size(); }
  const Point2& operator[](std::size_t k) const { return points_[k]; }
  const Point2& at(std::size_t k) const {
    if (k >= points_.size()) throw RangeError("lattice index " + std::to_string(k) + " out of range");
    return points_[k];
  }
  std::span<const Point2> points() const noexcept { return points_; }
  const RunMeta& meta() const noexcept { return meta_; }

  /// The `count` points ending at (and including) the last one.
  std::span<const Point2> tail(std::size_t count) const {
    return std::span<const Point2>(points_).last(count);
  }

 private:
  static void check(Point2 p) {
    if (!is_finite(p)) throw ArgumentError("non-finite point in trajectory");
  }

  std::vector<Point2> points_;
  RunMeta meta_;
};

/// Forward differences of one lattice edge, with ell = hypot(dx, du).
struct EdgeData {
  double dx = 0.0;
  double du = 0.0;
  double ell = 0.0;
};

inline EdgeData make_edge(Point2 from, Point2 to) {
  const double dx = to.x - from.x;
  const double du = to.u - from.u;
  return {dx, du, std::hypot(dx, du)};
}

inline EdgeData forward_diff(std::span<const Point2> points, std::size_t k) {
  if (points.size() < 2 || k > points.size() - 2) {
    throw RangeError("forward difference at index " + std::to_string(k) + " needs k+1 < " +
                     std::to_string(points.size()));
  }
  return make_edge(points[k], points[k + 1]);
}

inline EdgeData forward_diff(const Trajectory& traj, std::size_t k) {
  return forward_diff(traj.points(), k);
}

/// det [e0 e1] = dx0 du1 - dx1 du0.
inline double cross_det(const EdgeData& e0, const EdgeData& e1) { return e0.dx * e1.du - e1.dx * e0.du; }

enum class Component { kX, kU };

inline double component(Point2 p, Component c) { return c == Component::kX ? p.x : p.u; }

/// max_j |z_j - exact(j)| in the chosen component.
inline double linf_error(std::span<const Point2> points, const std::function<Point2(std::size_t)>& exact,
                         Component c) {
  if (points.empty()) throw ArgumentError("l-infinity error of an empty trajectory");
  double worst = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    worst = std::max(worst, std::abs(component(points[j], c) - component(exact(j), c)));
  }
  return worst;
}

inline double linf_error(const Trajectory& traj, const std::function<Point2(std::size_t)>& exact, Component c) {
  return linf_error(traj.points(), exact, c);
}

/// Experimental order of convergence between rows i and i+1.
inline double eoc(std::span<const double> errors, std::span<const double> scales, std::size_t i) {
  if (i + 1 >= errors.size() || i + 1 >= scales.size()) throw RangeError("eoc index out of range");
  for (std::size_t j : {i, i + 1}) {
    if (!(errors[j] > 0.0) || !(scales[j] > 0.0)) {
      throw ArgumentError("eoc needs strictly positive errors and scales");
    }
  }
  return std::log(errors[i + 1] / errors[i]) / std::log(scales[i + 1] / scales[i]);
}

}  // namespace ivs
