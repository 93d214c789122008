#pragma once

// Front-end plumbing shared by the ivs executable and its tests: CSV
// serialization, the simulate / benchmark / exact commands and their exit
// codes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ivs/conserved.hpp"
#include "ivs/elliptic.hpp"
#include "ivs/schemes.hpp"

namespace ivs::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kSolverFailure = 3, kIoError = 4 };

class IoError : public Error {
 public:
  using Error::Error;
};

enum Emit : unsigned { kEmitTrajectory = 1u, kEmitDrift = 2u, kEmitInvariants = 4u };

inline unsigned parse_emit(const std::vector<std::string>& names) {
  unsigned mask = 0;
  for (const auto& n : names) {
    if (n == "trajectory") mask |= kEmitTrajectory;
    else if (n == "drift") mask |= kEmitDrift;
    else if (n == "invariants") mask |= kEmitInvariants;
    else throw ArgumentError("unknown emit target '" + n + "'");
  }
  return mask;
}

struct RunSpec {
  SchemeId scheme = SchemeId::kConstrainedIvs;
  SchemeParams params = default_params(SchemeId::kConstrainedIvs);
  std::filesystem::path out = ".";
  unsigned emit = kEmitTrajectory;

  void validate() const {
    ivs::validate(scheme, params);
    if (emit == 0) throw ArgumentError("nothing to emit");
  }
};

// --- CSV ------------------------------------------------------------------------

/// 17 significant digits, so every double survives a write/read cycle.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline double parse_real(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw IoError("malformed number '" + s + "'");
  }
  if (used != s.size()) throw IoError("malformed number '" + s + "'");
  return v;
}

namespace detail {

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& os, std::span<const Point2> pts) {
  os << "k,x,u\n";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    os << k << ',' << format_real(pts[k].x) << ',' << format_real(pts[k].u) << '\n';
  }
}

inline std::vector<Point2> read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "k,x,u") throw IoError("trajectory CSV must start with 'k,x,u'");
  std::vector<Point2> pts;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split(line);
    if (cells.size() != 3) throw IoError("trajectory row needs three columns: " + line);
    if (std::stoul(cells[0]) != pts.size()) throw IoError("trajectory rows out of order at " + cells[0]);
    pts.push_back({parse_real(cells[1]), parse_real(cells[2])});
  }
  return pts;
}

inline void write_drift_csv(std::ostream& os, const DriftSeries& d) {
  os << "k,dC1,dC2,dC3\n";
  for (std::size_t i = 0; i < d.k.size(); ++i) {
    const auto& v = d.deviation[i];
    os << d.k[i] << ',' << format_real(v[0]) << ',' << format_real(v[1]) << ',' << format_real(v[2]) << '\n';
  }
}

inline void write_invariants_csv(std::ostream& os, const std::vector<ConservedSample>& series) {
  os << "k,C1,C2,C3\n";
  for (const auto& s : series) {
    os << s.k << ',' << format_real(s.value.c1) << ',' << format_real(s.value.c2) << ',' << format_real(s.value.c3)
       << '\n';
  }
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

inline void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("write to " + path.string() + " failed");
}

// --- simulate ---------------------------------------------------------------------

struct SimulateOutcome {
  RunResult result;
  int exit_code = kOk;
};

/// Runs the spec and writes the requested CSVs into spec.out.  A solver
/// failure still writes everything computed up to the failing index.
inline SimulateOutcome simulate(const RunSpec& spec, std::ostream& log) {
  spec.validate();
  RunResult result = run(spec.scheme, spec.params);
  const auto pts = result.trajectory.points();

  if (spec.emit & kEmitTrajectory) {
    const auto path = spec.out / "trajectory.csv";
    auto os = open_output(path);
    write_trajectory_csv(os, pts);
    finish(os, path);
  }
  if (spec.emit & (kEmitDrift | kEmitInvariants)) {
    std::vector<ConservedSample> series;
    try {
      series = conserved_series(pts, spec.scheme, spec.params);
    } catch (const Error& e) {
      log << "conserved quantities unavailable: " << e.what() << '\n';
    }
    if (spec.emit & kEmitDrift) {
      const auto path = spec.out / "drift.csv";
      auto os = open_output(path);
      write_drift_csv(os, drift_of(series));
      finish(os, path);
    }
    if (spec.emit & kEmitInvariants) {
      const auto path = spec.out / "invariants.csv";
      auto os = open_output(path);
      write_invariants_csv(os, series);
      finish(os, path);
    }
  }

  log << to_string(spec.scheme) << ": " << pts.size() << " points";
  if (!result.ok()) {
    log << ", solver failure at index " << result.failure->index << ": " << result.failure->message << '\n';
    return {std::move(result), kSolverFailure};
  }
  log << '\n';
  return {std::move(result), kOk};
}

// --- benchmark --------------------------------------------------------------------

struct BenchRow {
  double scale = 0.0;
  int steps = 0;
  double err_x = std::numeric_limits<double>::quiet_NaN();
  double err_u = std::numeric_limits<double>::quiet_NaN();
  double eoc_x = std::numeric_limits<double>::quiet_NaN();
  double eoc_u = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
};

struct BenchReport {
  SchemeId scheme = SchemeId::kConstrainedIvs;
  std::vector<BenchRow> rows;  // decreasing scale
  std::optional<RunFailure> failure;
};

/// Edge lengths for the elastica schemes, lattice-point counts for the
/// divergence schemes.
inline std::vector<double> default_ladder(SchemeId id) {
  if (is_div_scheme(id)) return {100, 200, 400, 800, 1600};
  return {0.04, 0.02, 0.01, 0.005, 0.0025};
}

/// Elastica runs cover a fixed arc of length 4 whatever the edge length.
inline int elastica_ladder_steps(double ell) { return static_cast<int>(std::lround(4.0 / ell)); }

namespace detail {

struct RowRun {
  BenchRow row;
  std::optional<RunFailure> failure;
};

inline RowRun bench_row(SchemeId id, SchemeParams p, double rung) {
  const auto t0 = std::chrono::steady_clock::now();
  RowRun out;
  if (is_div_scheme(id)) {
    p.steps = static_cast<int>(std::lround(rung));
    out.row.scale = 1.0 / rung;
  } else {
    p.ell = rung;
    p.steps = elastica_ladder_steps(rung);
    out.row.scale = rung;
  }
  out.row.steps = p.steps;

  const RunResult r = run(id, p);
  out.failure = r.failure;
  const auto& t = r.trajectory;
  if (is_div_scheme(id)) {
    out.row.err_u = linf_error(
        t, [&](std::size_t k) { return Point2{t[k].x, exact_div(t[k].x, 1.0, 0.0)}; }, Component::kU);
  } else {
    const auto family = elastica_family(id, p);
    const Curve curve = elastica_curve(family, p);
    const auto s = arc_parameters(curve, p.s0, p.ell, t.size());
    const auto exact = [&](std::size_t k) { return curve(s[k]); };
    out.row.err_x = linf_error(t, exact, Component::kX);
    out.row.err_u = linf_error(t, exact, Component::kU);
  }
  out.row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline double eoc_or_nan(double e0, double e1, double s0, double s1) {
  if (!(e0 > 0.0) || !(e1 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double errs[2] = {e0, e1};
  const double scales[2] = {s0, s1};
  return eoc(errs, scales, 0);
}

}  // namespace detail

/// Runs every rung (in parallel), then fills the EOC columns.  A failed rung
/// ends the report at that row.
inline BenchReport benchmark(SchemeId id, const SchemeParams& base, std::vector<double> ladder) {
  if (ladder.size() < 2) throw ArgumentError("benchmark ladder needs at least two scales");
  // Decreasing scale: descending edge length, ascending point count.
  const bool ascending = is_div_scheme(id);
  std::sort(ladder.begin(), ladder.end(), [ascending](double a, double b) { return ascending ? a < b : a > b; });
  for (double r : ladder) {
    if (!(r > 0.0)) throw ArgumentError("ladder entries must be positive");
  }
  SchemeParams probe = base;
  if (is_div_scheme(id)) probe.steps = static_cast<int>(std::lround(ladder.front()));
  else probe.ell = ladder.front();
  validate(id, probe);

  std::vector<std::future<detail::RowRun>> jobs;
  for (double rung : ladder) jobs.push_back(std::async(std::launch::async, detail::bench_row, id, base, rung));

  BenchReport report{id, {}, std::nullopt};
  std::vector<detail::RowRun> runs;
  for (auto& j : jobs) runs.push_back(j.get());
  for (auto& r : runs) {
    if (!report.failure) {
      report.rows.push_back(r.row);
      report.failure = r.failure;
    }
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    auto& row = report.rows[i];
    const auto& prev = report.rows[i - 1];
    row.eoc_x = detail::eoc_or_nan(prev.err_x, row.err_x, prev.scale, row.scale);
    row.eoc_u = detail::eoc_or_nan(prev.err_u, row.err_u, prev.scale, row.scale);
  }
  return report;
}

inline void write_bench_csv(std::ostream& os, const BenchReport& rep) {
  os << "scale,steps,err_x,err_u,eoc_x,eoc_u\n";
  for (const auto& r : rep.rows) {
    os << format_real(r.scale) << ',' << r.steps << ',' << format_real(r.err_x) << ',' << format_real(r.err_u) << ','
       << format_real(r.eoc_x) << ',' << format_real(r.eoc_u) << '\n';
  }
}

inline int cmd_benchmark(const RunSpec& spec, const std::vector<double>& ladder, std::ostream& log) {
  const BenchReport rep = benchmark(spec.scheme, spec.params, ladder);
  const auto path = spec.out / "bench.csv";
  auto os = open_output(path);
  write_bench_csv(os, rep);
  finish(os, path);

  char buf[160];
  log << "scheme " << to_string(spec.scheme) << '\n';
  for (const auto& r : rep.rows) {
    std::snprintf(buf, sizeof buf,
                  "  scale %-9.4g steps %-5d err_x %-10.4g err_u %-10.4g eoc_x %-6.3f eoc_u %-6.3f %.3fs\n",
                  r.scale, r.steps, r.err_x, r.err_u, r.eoc_x, r.eoc_u, r.seconds);
    log << buf;
  }
  if (rep.failure) {
    log << "solver failure at index " << rep.failure->index << ": " << rep.failure->message << '\n';
    return kSolverFailure;
  }
  return kOk;
}

// --- exact --------------------------------------------------------------------------

struct ExactSpec {
  std::string family = "case2";  // free, case1, case2, case3 or div
  double alpha = 4.0;
  double mu = -1.0;
  double A = 1.0;
  double B = 0.0;
  double lo = -2.0;
  double hi = 2.0;
  int samples = 101;
  std::filesystem::path out = "exact.csv";
};

struct ExactSample {
  double t;  // arc parameter s, or abscissa x for the divergence family
  Point2 z;
};

inline std::vector<ExactSample> exact_samples(const ExactSpec& e) {
  if (e.samples < 1) throw ArgumentError("samples must be positive");
  if (!(e.hi >= e.lo)) throw ArgumentError("empty sample range");
  std::function<Point2(double)> f;
  if (e.family == "div") {
    if (!(e.A > 0.0)) throw ArgumentError("A must be positive");
    f = [&](double x) { return Point2{x, exact_div(x, e.A, e.B)}; };
  } else {
    if (!(e.alpha > 0.0)) throw ArgumentError("alpha must be positive");
    ElasticaFamily fam;
    if (e.family == "free") fam = ElasticaFamily::kFree;
    else if (e.family == "case1") fam = ElasticaFamily::kCase1;
    else if (e.family == "case2") fam = ElasticaFamily::kCase2;
    else if (e.family == "case3") fam = ElasticaFamily::kCase3;
    else throw ArgumentError("unknown family '" + e.family + "'");
    if (fam != ElasticaFamily::kFree && family_for_mu(e.mu) != fam) {
      throw ArgumentError("mu = " + format_real(e.mu) + " does not belong to " + e.family);
    }
    f = [&, fam](double s) { return exact_elastica(fam, s, e.alpha, e.mu); };
  }
  std::vector<ExactSample> out;
  for (int i = 0; i < e.samples; ++i) {
    const double t = e.samples == 1 ? e.lo : e.lo + (e.hi - e.lo) * i / (e.samples - 1);
    out.push_back({t, f(t)});
  }
  return out;
}

inline void write_exact_csv(std::ostream& os, const std::vector<ExactSample>& samples) {
  os << "t,x,u\n";
  for (const auto& s : samples) {
    os << format_real(s.t) << ',' << format_real(s.z.x) << ',' << format_real(s.z.u) << '\n';
  }
}

inline int cmd_exact(const ExactSpec& e) {
  const auto samples = exact_samples(e);
  auto os = open_output(e.out);
  write_exact_csv(os, samples);
  finish(os, e.out);
  return kOk;
}

}  // namespace ivs::cli
