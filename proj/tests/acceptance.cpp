// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ivs/cli.hpp"
#include "oracles.hpp"

using namespace ivs;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool within(double got, double want, double rel) { return std::abs(got - want) <= rel * want; }

SchemeParams elastica(SchemeId id, double ell, double mu, int steps) {
  SchemeParams p = default_params(id);
  p.ell = ell;
  p.mu = mu;
  p.alpha = 4.0;
  p.steps = steps;
  return p;
}

std::span<const Point2, 4> win(std::span<const Point2> v, std::size_t at) {
  return std::span<const Point2, 4>(v.data() + at, 4);
}

std::array<Point2, 4> moved(const SE2Element& g, std::span<const Point2, 4> w) {
  return {se2_apply(g, w[0]), se2_apply(g, w[1]), se2_apply(g, w[2]), se2_apply(g, w[3])};
}

// --- 1 -------------------------------------------------------------------------

Verdict elastica_ladder() {
  Verdict v;
  const std::vector<double> want_x{2.98e-3, 7.14e-4, 1.74e-4, 4.24e-5};
  const std::vector<double> want_u{1.40e-2, 3.41e-3, 8.33e-4, 2.05e-4};
  const auto rep = cli::benchmark(SchemeId::kConstrainedIvs, elastica(SchemeId::kConstrainedIvs, 0.01, -1.0, 0),
                                  {0.02, 0.01, 0.005, 0.0025});
  v.require(!rep.failure, "solver failure");
  v.require(rep.rows.size() == 4, "incomplete ladder");
  if (rep.rows.size() != 4) return v;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& r = rep.rows[i];
    v.require(within(r.err_x, want_x[i], 0.10), "err_x row " + std::to_string(i) + fmt(" = %.3e", r.err_x));
    v.require(within(r.err_u, want_u[i], 0.10), "err_u row " + std::to_string(i) + fmt(" = %.3e", r.err_u));
    if (i > 0) {
      v.require(r.eoc_x >= 1.85 && r.eoc_x <= 2.15, "eoc_x" + fmt(" = %.3f", r.eoc_x));
      v.require(r.eoc_u >= 1.85 && r.eoc_u <= 2.15, "eoc_u" + fmt(" = %.3f", r.eoc_u));
    }
  }
  v.note("err_x(0.0025)" + fmt("=%.3e", rep.rows[3].err_x) + " err_u(0.0025)" + fmt("=%.3e", rep.rows[3].err_u) +
         " eoc_u" + fmt("=%.3f", rep.rows[3].eoc_u));
  return v;
}

// --- 2 -------------------------------------------------------------------------

Verdict div_ladder() {
  Verdict v;
  const std::vector<double> ladder{200, 400, 800, 1600};
  const std::vector<std::pair<SchemeId, std::vector<double>>> cases{
      {SchemeId::kDivIvs, {2.32e-6, 5.73e-7, 1.42e-7, 3.55e-8}},
      {SchemeId::kDivStandard, {8.50e-6, 2.11e-6, 5.27e-7, 1.32e-7}}};
  for (const auto& [id, want] : cases) {
    const auto rep = cli::benchmark(id, default_params(id), ladder);
    const std::string name(to_string(id));
    v.require(!rep.failure && rep.rows.size() == 4, name + " incomplete");
    if (rep.rows.size() != 4) continue;
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& r = rep.rows[i];
      v.require(within(r.err_u, want[i], 0.05), name + " err_u row " + std::to_string(i) + fmt(" = %.3e", r.err_u));
      if (i > 0) v.require(r.eoc_u >= 1.95 && r.eoc_u <= 2.05, name + " eoc" + fmt(" = %.3f", r.eoc_u));
    }
    v.note(name + " err_u(1600)" + fmt("=%.3e", rep.rows[3].err_u));
  }
  return v;
}

// --- 3 -------------------------------------------------------------------------

double worst(const DriftSeries& d) {
  const auto m = d.max_deviation();
  return *std::max_element(m.begin(), m.end());
}

Verdict conservation() {
  Verdict v;
  const auto c = run(SchemeId::kConstrainedIvs, elastica(SchemeId::kConstrainedIvs, 0.01, -1.0, 500));
  v.require(c.ok(), "constrained run failed");
  const double dc = worst(drift(c.trajectory, SchemeId::kConstrainedIvs));
  v.require(dc <= 1e-9, "constrained drift" + fmt(" = %.2e", dc));

  SchemeParams d = default_params(SchemeId::kDivIvs);
  d.steps = 100;
  const auto di = run(SchemeId::kDivIvs, d);
  v.require(di.ok(), "div-ivs run failed");
  const double ddi = worst(drift(di.trajectory, SchemeId::kDivIvs));
  v.require(ddi <= 1e-11, "div-ivs drift" + fmt(" = %.2e", ddi));

  const auto ds = run(SchemeId::kDivStandard, d);
  v.require(ds.ok(), "div-standard run failed");
  const double dds = drift(ds.trajectory, SchemeId::kDivStandard).max_deviation()[1];
  v.require(dds >= 1e-5, "div-standard C2 drift" + fmt(" = %.2e", dds));

  v.note("constrained" + fmt("=%.2e", dc) + " div-ivs" + fmt("=%.2e", ddi) + " div-standard C2" + fmt("=%.2e", dds));
  return v;
}

// --- 4 -------------------------------------------------------------------------

Verdict identities() {
  Verdict v;
  std::mt19937_64 rng(1001);

  double rel = 0.0;
  {
    std::uniform_real_distribution<double> x(-3, 3), u(-3, 3), h(-1, 1);
    for (int tested = 0; tested < 1000;) {
      const Point2 a{x(rng), u(rng)}, b{a.x + h(rng), u(rng)};
      if (std::abs(a.u * b.u) < 1e-3 || std::abs(b.x - a.x) < 1e-3) continue;
      const auto c = div_conserved(a, b);
      const double scale = std::max({1.0, c.c2 * c.c2 / 4, std::abs(c.c1 * c.c3)});
      rel = std::max(rel, std::abs(div_relation_residual(c, a, b)) / scale);
      ++tested;
    }
  }
  v.require(rel <= 1e-11, "div relation" + fmt(" = %.2e", rel));

  double jac = 0.0;
  for (double m : {-1.0, -0.5, 0.0, 0.3, 0.6, 0.9, 0.99}) {
    for (int i = -200; i <= 200; ++i) {
      const double t = 0.05 * i, sn = jacobi_sn(t, m), dn = jacobi_dn(t, m);
      jac = std::max(jac, std::abs(dn * dn + m * sn * sn - 1.0));
    }
  }
  v.require(jac <= 1e-11, "dn^2 + m sn^2" + fmt(" = %.2e", jac));

  double frame = 0.0;
  {
    std::uniform_real_distribution<double> d(-3, 3);
    for (int i = 0; i < 1000; ++i) {
      const Point2 z0{d(rng), d(rng)}, z1{d(rng), d(rng)};
      const SE2Element g = se2_moving_frame(z0, z1);
      frame = std::max({frame, norm_inf(se2_apply(g, z0)), std::abs(se2_apply(g, z1).u)});
    }
    std::uniform_real_distribution<double> x(-1, 1), u(0.5, 2), h(0.05, 0.5);
    for (int i = 0; i < 1000; ++i) {
      const Point2 z0{x(rng), u(rng)}, z1{z0.x + h(rng), u(rng)};
      const SL2Element g = sl2_moving_frame(z0, z1);
      frame = std::max({frame, norm_inf(sl2_apply(g, z0) - Point2{0, 1}), std::abs(sl2_apply(g, z1).u - 1.0)});
    }
  }
  v.require(frame <= 1e-12, "frame cross-section" + fmt(" = %.2e", frame));
  v.note("relation" + fmt("=%.1e", rel) + " jacobi" + fmt("=%.1e", jac) + " frames" + fmt("=%.1e", frame));
  return v;
}

// --- 5 -------------------------------------------------------------------------

Verdict equivariance() {
  Verdict v;
  std::mt19937_64 rng(1002);
  constexpr int kElements = 200;

  // Stencils are taken from runs of each scheme so that every step is one
  // the scheme actually takes.
  const auto se2_case = [&](SchemeId id, const SchemeParams& p, auto&& step) {
    const auto r = run(id, p);
    const auto& pts = r.trajectory.points();
    std::uniform_int_distribution<std::size_t> at(0, pts.size() - 4);
    double gap = 0.0;
    for (int i = 0; i < kElements; ++i) {
      const auto w = win(pts, at(rng));
      const auto g = oracle::random_se2(rng);
      const auto gw = moved(g, w);
      gap = std::max(gap, distance(step(std::span<const Point2, 4>(gw)), se2_apply(g, step(w))));
    }
    v.require(gap <= 1e-9, std::string(to_string(id)) + fmt(" gap = %.2e", gap));
    return gap;
  };

  const auto pf = default_params(SchemeId::kFreeIvs);
  const double gf = se2_case(SchemeId::kFreeIvs, pf, [&](auto w) { return step_free_elastica(w, pf.solver); });
  const auto pc = elastica(SchemeId::kConstrainedIvs, 0.01, -1.0, 500);
  const double gc = se2_case(SchemeId::kConstrainedIvs, pc, [&](auto w) { return constrained_elastica_step(w, pc); });
  const double gn =
      se2_case(SchemeId::kInvariantNaive, pc, [&](auto w) { return invariant_nonvariational_step(w, pc); });

  SchemeParams pd = default_params(SchemeId::kDivIvs);
  const auto rd = run(SchemeId::kDivIvs, pd);
  const auto& dp = rd.trajectory.points();
  std::uniform_int_distribution<std::size_t> at(0, dp.size() - 2);
  double gd = 0.0;
  for (int i = 0; i < kElements; ++i) {
    const std::size_t k = at(rng);
    const auto g = oracle::random_sl2(rng);
    const Point2 z = div_invariant_step(dp[k], dp[k + 1], pd.solver);
    const Point2 zg = div_invariant_step(sl2_apply(g, dp[k]), sl2_apply(g, dp[k + 1]), pd.solver);
    gd = std::max(gd, distance(zg, sl2_apply(g, z)));
  }
  v.require(gd <= 1e-8, fmt("div-ivs gap = %.2e", gd));

  // Generic stencil on the outgoing branch, rotated by 0.6 rad.
  const Curve c = elastica_curve(ElasticaFamily::kCase2, pc);
  const auto s = arc_parameters(c, -0.25, 0.01, 4);
  const std::vector<Point2> w{c(s[0]), c(s[1]), c(s[2]), c(s[3])};
  const SE2Element g(0.0, 0.0, 0.6);
  const auto gw = moved(g, win(w, 0));
  const double viol = distance(noninvariant_variational_step(std::span<const Point2, 4>(gw), pc),
                               se2_apply(g, noninvariant_variational_step(win(w, 0), pc)));
  v.require(viol > 1e-4, fmt("noninvariant violation = %.2e", viol));

  v.note("free" + fmt("=%.1e", gf) + " constrained" + fmt("=%.1e", gc) + " naive" + fmt("=%.1e", gn) + " div" +
         fmt("=%.1e", gd) + " noninvariant violation" + fmt("=%.2e", viol));
  return v;
}

// --- 6 -------------------------------------------------------------------------

Verdict jacobians() {
  Verdict v;
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> jit(-0.1, 0.1);
  double worst_free = 0, worst_con = 0, worst_naive = 0, worst_non = 0, worst_div = 0;
  for (int i = 0; i < 100; ++i) {
    auto pts = oracle::random_chain(rng, 5, 0.3, 1.0);
    for (auto& p : pts) p = p + Point2{jit(rng), jit(rng)};
    const auto eval = [&](Point2 z) { return free_elastica_residual(win(pts, 0), z); };
    worst_free = std::max(worst_free, oracle::jac_rel_diff(eval(pts[4]).J, oracle::fd_jacobian(eval, pts[4])));
  }
  const auto pc = elastica(SchemeId::kConstrainedIvs, 0.2, -0.7, 0);
  for (int i = 0; i < 100; ++i) {
    const auto pts = oracle::random_chain(rng, 5, 0.2, 1.0);
    for (ElBranch b : {ElBranch::kEx, ElBranch::kEu}) {
      const auto eval = [&](Point2 z) { return constrained_elastica_residual(win(pts, 0), z, pc, b); };
      worst_con = std::max(worst_con, oracle::jac_rel_diff(eval(pts[4]).J, oracle::fd_jacobian(eval, pts[4])));
    }
    const auto naive = [&](Point2 z) { return invariant_naive_residual(win(pts, 0), z, pc); };
    worst_naive = std::max(worst_naive, oracle::jac_rel_diff(naive(pts[4]).J, oracle::fd_jacobian(naive, pts[4])));
  }
  for (int i = 0; i < 100; ++i) {
    const auto pts = oracle::random_chain(rng, 5, 0.2, 0.25, -0.6, 0.6);
    for (ElBranch b : {ElBranch::kEx, ElBranch::kEu}) {
      const auto eval = [&](Point2 z) { return noninvariant_residual(win(pts, 0), z, pc, b); };
      worst_non = std::max(worst_non, oracle::jac_rel_diff(eval(pts[4]).J, oracle::fd_jacobian(eval, pts[4])));
    }
  }
  std::uniform_real_distribution<double> x(-1, 1), u(0.5, 2), h(0.05, 0.3);
  for (int i = 0; i < 100; ++i) {
    const Point2 a{x(rng), u(rng)};
    const Point2 b{a.x + h(rng), u(rng)};
    const Point2 c{b.x + h(rng), u(rng)};
    const auto eval = [&](Point2 z) { return div_invariant_residual(a, b, z); };
    worst_div = std::max(worst_div, oracle::jac_rel_diff(eval(c).J, oracle::fd_jacobian(eval, c)));
  }
  v.require(worst_free <= 1e-6, fmt("free = %.2e", worst_free));
  v.require(worst_con <= 1e-6, fmt("constrained = %.2e", worst_con));
  v.require(worst_naive <= 1e-6, fmt("naive = %.2e", worst_naive));
  v.require(worst_non <= 1e-6, fmt("noninvariant = %.2e", worst_non));
  v.require(worst_div <= 1e-6, fmt("div = %.2e", worst_div));
  v.note("max rel diff" + fmt(" %.1e", std::max({worst_free, worst_con, worst_naive, worst_non, worst_div})));
  return v;
}

// --- 7 -------------------------------------------------------------------------

// Largest distance from a run point to the exact curve, sampled densely.
double distance_to_curve(std::span<const Point2> pts, const Curve& c, double lo, double hi) {
  std::vector<Point2> dense;
  for (int i = 0; i <= 20000; ++i) dense.push_back(c(lo + (hi - lo) * i / 20000.0));
  double worst = 0.0;
  for (const Point2& p : pts) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point2& q : dense) best = std::min(best, distance(p, q));
    worst = std::max(worst, best);
  }
  return worst;
}

Verdict qualitative() {
  Verdict v;

  const auto pf = default_params(SchemeId::kFreeIvs);
  const auto rf = run(SchemeId::kFreeIvs, pf);
  v.require(rf.ok() && rf.trajectory.size() == static_cast<std::size_t>(pf.steps) + 4, "free run incomplete");
  // The exact trace over the run's arc length passes two maxima and two
  // minima in u; the run has to follow it through all four vertical tangents.
  const auto& fp = rf.trajectory.points();
  const Curve cf = elastica_curve(ElasticaFamily::kFree, pf);
  const double off = distance_to_curve(fp, cf, pf.s0, pf.s0 + 1.5 * pf.ell * pf.steps);
  double xmin = 1e9, xmax = -1e9, umax = -1e9;
  for (const Point2& q : fp) {
    xmin = std::min(xmin, q.x);
    xmax = std::max(xmax, q.x);
    umax = std::max(umax, q.u);
  }
  v.require(off < 0.05, fmt("free run leaves the exact trace by %.3f", off));
  v.require(xmin < -0.8 && xmax > 1.4 && umax > 0.6, "free run does not cover the loop");
  v.note(fmt("free run max distance to exact trace %.3f", off));

  const auto pn = elastica(SchemeId::kInvariantNaive, 0.01, -1.0, 500);
  const auto rn = run(SchemeId::kInvariantNaive, pn);
  v.require(rn.ok(), "naive run failed");
  const Curve cn = elastica_curve(ElasticaFamily::kCase2, pn);
  const auto sn = arc_parameters(cn, pn.s0, pn.ell, rn.trajectory.size());
  const double u_naive = rn.trajectory.points().back().u, u_exact = cn(sn.back()).u;
  v.require(std::abs(u_naive) > 0.3 && std::abs(u_exact) < 0.1, fmt("naive final u = %.3f", u_naive));

  const auto rv = run(SchemeId::kNoninvariantVar, pn);
  bool vertical = false;
  if (!rv.ok()) {
    const auto& p = rv.trajectory.points();
    const EdgeData e = make_edge(p[p.size() - 2], p.back());
    vertical = std::abs(e.dx) < 0.5 * e.ell;
    v.note("noninvariant fails at index " + std::to_string(rv.failure->index) +
           fmt(", last |dx|/l = %.2f", std::abs(e.dx) / e.ell));
  }
  v.require(!rv.ok() && vertical, "noninvariant run did not fail near a vertical tangent");

  for (double mu : {-1.2, 0.5, 0.0, -0.4, -0.65223, -0.9}) {
    const auto r = run(SchemeId::kConstrainedIvs, elastica(SchemeId::kConstrainedIvs, 0.01, mu, 1000));
    v.require(r.ok(), fmt("mu = %g failed", mu));
  }
  v.note(fmt("naive final u = %.3f", u_naive) + fmt(" (exact %.1e)", u_exact));
  return v;
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* name;
    Verdict (*fn)();
  };
  const Item items[] = {{1, "constrained elastica convergence ladder", elastica_ladder},
                        {2, "divergence example convergence ladder", div_ladder},
                        {3, "Noether drift audit", conservation},
                        {4, "identity suite", identities},
                        {5, "equivariance suite", equivariance},
                        {6, "Jacobian suite", jacobians},
                        {7, "qualitative regressions", qualitative}};
  int failed = 0;
  for (const auto& it : items) {
    Verdict v;
    try {
      v = it.fn();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d: %s  %s  [%s]\n", it.id, v.ok ? "PASS" : "FAIL", it.name, v.detail.c_str());
    std::fflush(stdout);
    if (!v.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
