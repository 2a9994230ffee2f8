#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fgl/besov.hpp"
#include "fgl/config.hpp"
#include "fgl/csv.hpp"
#include "fgl/grid.hpp"
#include "fgl/norms.hpp"
#include "fgl/rng.hpp"
#include "fgl/solver.hpp"
#include "fgl/sweeps.hpp"
#include "fgl/tensor.hpp"

namespace fgl::harness {

inline constexpr const char* kVersion = "0.1.0";

// Exit-code contract: 0 success, 1 assertion/property failure,
// 2 solver non-convergence, 64 config error.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kNoConvergence = 2,
  kConfigError = 64,
};

inline std::string utc_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Run record: config echo, per-stage status, output file list. Written once,
// atomically, at the end of the run.
class Manifest {
 public:
  Manifest(std::string command, const Config& cfg)
      : command_(std::move(command)), started_(utc_now()) {
    for (const auto& [k, v] : cfg.entries())
      config_echo_.push_back(k + " = " + v);
  }

  void stage(const std::string& name, bool ok, const std::string& msg = "") {
    stages_.push_back(name + " = " + (ok ? "ok" : "failed") +
                      (msg.empty() ? "" : ": " + msg));
  }

  void output(const std::filesystem::path& p) {
    outputs_.push_back(p.string());
  }

  void write(const std::filesystem::path& dir) const {
    const auto tmp = dir / "manifest.txt.tmp";
    const auto final_path = dir / "manifest.txt";
    {
      std::ofstream out(tmp);
      out << "# fgl run manifest\n";
      out << "version = " << kVersion << "\n";
      out << "command = " << command_ << "\n";
      out << "started_utc = " << started_ << "\n";
      out << "finished_utc = " << utc_now() << "\n";
      out << "[config]\n";
      for (const auto& line : config_echo_) out << line << "\n";
      out << "[stages]\n";
      for (const auto& line : stages_) out << line << "\n";
      out << "[outputs]\n";
      for (const auto& line : outputs_) out << line << "\n";
    }
    std::filesystem::rename(tmp, final_path);
  }

 private:
  std::string command_;
  std::string started_;
  std::vector<std::string> config_echo_;
  std::vector<std::string> stages_;
  std::vector<std::string> outputs_;
};

// ---------------------------------------------------------------------------
// config -> domain objects
// ---------------------------------------------------------------------------

// Touches every schema key so a config shared between subcommands still
// passes strict unknown-key rejection; typos remain fatal.
inline void consume_known_keys(const Config& cfg) {
  static const char* const kKnown[] = {
      "problem.dim",        "problem.m",
      "problem.N",          "problem.gamma",
      "problem.norm",       "problem.p",
      "problem.weights",    "problem.outer",
      "problem.outer_p",    "problem.f",
      "problem.f_scale",    "problem.boundary",
      "problem.boundary_slope", "problem.boundary_offset",
      "solver.eps0",        "solver.eps_levels",
      "solver.grad_tol",    "solver.max_iters",
      "solver.seed",        "solver.resume",
      "probe.margin",       "probe.max_steps",
      "probe.source",       "probe.field_csv",
      "probe.noise",        "sweep.gammas",
      "sweep.ps",           "geometry.ps",
      "geometry.dims",      "geometry.gammas",
      "geometry.v_taus",    "geometry.id_samples",
      "geometry.v_samples", "geometry.xr_samples",
      "geometry.tau_override", "geometry.sigma_override",
      "geometry.min_floor", "geometry.max_ceiling",
      "geometry.seed",      "output.dir",
  };
  for (const char* k : kKnown) (void)cfg.get_string(k, "");
  cfg.reject_unknown_keys();
}

inline NormFamily norm_from_config(const Config& cfg, int m) {
  const std::string kind = cfg.get_string("problem.norm", "euclidean");
  const double p = cfg.get_double("problem.p", 2.0);
  if (kind == "euclidean") return NormFamily::euclidean(m);
  if (kind == "lp") return NormFamily::lp(p, m);
  if (kind == "weighted_lp") {
    auto w = cfg.get_double_list("problem.weights", {});
    if (static_cast<int>(w.size()) != m)
      throw ConfigError("problem.weights must list m entries");
    return NormFamily::weighted_lp(p, std::move(w));
  }
  throw ConfigError("problem.norm must be euclidean | lp | weighted_lp");
}

inline TensorNormSpec tensor_from_config(const Config& cfg, NormFamily base,
                                         int dim) {
  const std::string outer = cfg.get_string("problem.outer", "l2_columns");
  if (outer == "l2_columns") return TensorNormSpec::l2_columns(std::move(base), dim);
  if (outer == "flat_lp")
    return TensorNormSpec::flat_lp(std::move(base),
                                   cfg.get_double("problem.outer_p", 2.0), dim);
  throw ConfigError("problem.outer must be l2_columns | flat_lp");
}

inline Field source_from_config(const Config& cfg, const Grid& grid, int m) {
  const std::string kind = cfg.get_string("problem.f", "zero");
  const double scale = cfg.get_double("problem.f_scale", 1.0);
  Field f(grid, m);
  for (int n = 0; n < grid.node_count(); ++n) {
    const auto x = grid.node_coords(n);
    auto row = f.node(n);
    for (int a = 0; a < m; ++a) {
      if (kind == "zero") {
        row[a] = 0.0;
      } else if (kind == "constant") {
        row[a] = scale;
      } else if (kind == "sines") {
        double v = scale / (a + 1);
        v *= std::sin(std::numbers::pi * x[0]);
        if (grid.dim == 2) v *= std::sin(std::numbers::pi * x[1]);
        row[a] = v;
      } else if (kind == "ramp") {
        row[a] = a == 0 ? scale * x[0] : 0.0;
      } else {
        throw ConfigError("problem.f must be zero | constant | sines | ramp");
      }
    }
  }
  return f;
}

inline Field boundary_from_config(const Config& cfg, const Grid& grid, int m) {
  const std::string kind = cfg.get_string("problem.boundary", "zero");
  Field bd(grid, m);
  if (kind == "zero") return bd;
  if (kind != "affine")
    throw ConfigError("problem.boundary must be zero | affine");

  // slope rows are per component, columns per space direction
  std::vector<double> slope(static_cast<std::size_t>(m) * grid.dim, 0.0);
  slope[0] = 1.0;  // default: first component ramps along x
  auto given = cfg.get_double_list("problem.boundary_slope", {});
  if (!given.empty()) {
    if (given.size() != slope.size())
      throw ConfigError("problem.boundary_slope must list m*dim entries");
    slope = std::move(given);
  }
  auto offset = cfg.get_double_list("problem.boundary_offset",
                                    std::vector<double>(m, 0.0));
  if (static_cast<int>(offset.size()) != m)
    throw ConfigError("problem.boundary_offset must list m entries");

  for (int n = 0; n < grid.node_count(); ++n) {
    const auto x = grid.node_coords(n);
    auto row = bd.node(n);
    for (int a = 0; a < m; ++a) {
      double v = offset[static_cast<std::size_t>(a)];
      for (int k = 0; k < grid.dim; ++k)
        v += slope[static_cast<std::size_t>(a) * grid.dim + k] * x[k];
      row[a] = v;
    }
  }
  return bd;
}

inline ProblemSpec problem_from_config(const Config& cfg) {
  const int dim = static_cast<int>(cfg.get_long("problem.dim", 1));
  const int m = static_cast<int>(cfg.get_long("problem.m", 1));
  const int n_side = static_cast<int>(cfg.get_long("problem.N", 65));
  const double gamma = cfg.get_double("problem.gamma", 2.0);
  Grid grid(dim, n_side);
  NormFamily base = norm_from_config(cfg, m);
  TensorNormSpec tensor = tensor_from_config(cfg, std::move(base), dim);
  Field f = source_from_config(cfg, grid, m);
  Field bd = boundary_from_config(cfg, grid, m);
  return ProblemSpec(grid, std::move(tensor), gamma, std::move(f),
                     std::move(bd));
}

inline SolverConfig solver_from_config(
    const Config& cfg, std::optional<std::uint64_t> seed_override) {
  SolverConfig sc;
  sc.eps0 = cfg.get_double("solver.eps0", sc.eps0);
  sc.eps_levels = static_cast<int>(cfg.get_long("solver.eps_levels", sc.eps_levels));
  sc.grad_tol = cfg.get_double("solver.grad_tol", sc.grad_tol);
  sc.max_iters = cfg.get_long("solver.max_iters", sc.max_iters);
  sc.seed = static_cast<std::uint64_t>(cfg.get_long("solver.seed", 42));
  if (seed_override) sc.seed = *seed_override;
  return sc;
}

// ---------------------------------------------------------------------------
// check-geometry
// ---------------------------------------------------------------------------

struct GeometrySuites {
  std::vector<double> ps;
  std::vector<long> dims;
  std::vector<double> gammas;
  std::vector<double> v_taus;
  long id_samples = 10000;
  long v_samples = 100000;
  long xr_samples = 100000;
  double tau_override = 0.0;
  double sigma_override = 0.0;
  double min_floor = 1e-3;   // convexity-type ratios must stay above this
  double max_ceiling = 1e3;  // smoothness-type ratios must stay below this
  std::uint64_t seed = 9001;
};

inline GeometrySuites geometry_from_config(
    const Config& cfg, std::optional<std::uint64_t> seed_override) {
  GeometrySuites s;
  s.ps = cfg.get_double_list("geometry.ps", {1.5, 2.0, 3.0, 4.0});
  for (double d : cfg.get_double_list("geometry.dims", {2, 4, 8}))
    s.dims.push_back(static_cast<long>(d));
  s.gammas = cfg.get_double_list("geometry.gammas", {1.5, 2.0, 3.0, 4.0});
  s.v_taus = cfg.get_double_list("geometry.v_taus", {-0.5, 0.0, 0.5, 1.0, 2.0});
  s.id_samples = cfg.get_long("geometry.id_samples", s.id_samples);
  s.v_samples = cfg.get_long("geometry.v_samples", s.v_samples);
  s.xr_samples = cfg.get_long("geometry.xr_samples", s.xr_samples);
  s.tau_override = cfg.get_double("geometry.tau_override", 0.0);
  s.sigma_override = cfg.get_double("geometry.sigma_override", 0.0);
  s.min_floor = cfg.get_double("geometry.min_floor", s.min_floor);
  s.max_ceiling = cfg.get_double("geometry.max_ceiling", s.max_ceiling);
  s.seed = static_cast<std::uint64_t>(cfg.get_long("geometry.seed", 9001));
  if (seed_override) s.seed = *seed_override;
  return s;
}

inline std::vector<std::string> ratio_report_row(const RatioReport& r,
                                                 bool pass) {
  return {r.kind,
          r.norm_label,
          fmt17(r.gamma),
          fmt17(r.exponent),
          std::to_string(r.samples),
          std::to_string(r.seed),
          fmt17(r.min_ratio),
          fmt17(r.max_ratio),
          std::to_string(r.skipped),
          pass ? "1" : "0"};
}

inline int run_check_geometry(const Config& cfg,
                              const std::filesystem::path& out_dir,
                              std::optional<std::uint64_t> seed_override,
                              std::ostream& log) {
  consume_known_keys(cfg);
  const GeometrySuites s = geometry_from_config(cfg, seed_override);
  std::filesystem::create_directories(out_dir);
  Manifest manifest("check-geometry", cfg);

  std::vector<std::string> failures;
  CsvWriter ratios(out_dir / "ratio_reports.csv");
  ratios.row({"kind", "norm", "gamma", "exponent", "samples", "seed",
              "min_ratio", "max_ratio", "skipped", "pass"});
  CsvWriter idcsv(out_dir / "identity_checks.csv");
  idcsv.row({"norm", "m", "gamma", "samples", "seed", "max_pairing_err",
             "max_dual_norm_err", "max_round_trip_err", "pass"});

  auto note_failure = [&](const std::string& what) {
    failures.push_back(what);
    log << "FAIL " << what << "\n";
  };

  std::uint64_t salt = 0;
  for (double p : s.ps) {
    for (long m : s.dims) {
      NormFamily norm = NormFamily::lp(p, static_cast<int>(m));
      if (s.tau_override > 0.0 || s.sigma_override > 0.0)
        norm = norm.with_declared_exponents(
            s.tau_override > 0.0 ? s.tau_override : norm.tau(),
            s.sigma_override > 0.0 ? s.sigma_override : norm.sigma());

      // duality-map identities
      for (double gamma : s.gammas) {
        const IdentityReport rep =
            identity_sweep(norm, gamma, s.id_samples, mix64(s.seed ^ ++salt));
        const bool ok = rep.max_pairing_err <= 1e-10 &&
                        rep.max_dual_norm_err <= 1e-10 &&
                        rep.max_round_trip_err <= 1e-10;
        idcsv.row({rep.norm_label, std::to_string(m), fmt17(gamma),
                   std::to_string(rep.samples), std::to_string(rep.seed),
                   fmt17(rep.max_pairing_err), fmt17(rep.max_dual_norm_err),
                   fmt17(rep.max_round_trip_err), ok ? "1" : "0"});
        if (!ok)
          note_failure("identity " + rep.norm_label + " m=" +
                       std::to_string(m) + " gamma=" + fmt17(gamma));
      }

      // V-functional two-sided comparison, with a doubled-sample stability run
      for (double tau : s.v_taus) {
        const std::uint64_t seed = mix64(s.seed ^ ++salt);
        const RatioReport r1 = v_ratio_sweep(norm, tau, s.v_samples, seed);
        const RatioReport r2 = v_ratio_sweep(norm, tau, 2 * s.v_samples, seed);
        bool ok = r1.min_ratio > 0.0 && std::isfinite(r1.max_ratio) &&
                  r2.min_ratio > 0.0 && std::isfinite(r2.max_ratio) &&
                  r1.min_ratio / r2.min_ratio <= 1.1 &&
                  r2.max_ratio / r1.max_ratio <= 1.1;
        if (tau == 0.0)
          ok = ok && r1.min_ratio == 1.0 && r1.max_ratio == 1.0 &&
               r2.min_ratio == 1.0 && r2.max_ratio == 1.0;
        ratios.row(ratio_report_row(r1, ok));
        ratios.row(ratio_report_row(r2, ok));
        if (!ok)
          note_failure("v_ratio " + norm.label() + " tau=" + fmt17(tau));
      }

      // duality-map convexity/smoothness certification, all four forms
      for (double gamma : s.gammas) {
        for (XuRoachCheck which :
             {XuRoachCheck::sigma_convex, XuRoachCheck::tau_smooth,
              XuRoachCheck::dual_convex, XuRoachCheck::dual_smooth}) {
          const RatioReport r = xu_roach_sweep(norm, gamma, which,
                                               s.xr_samples,
                                               mix64(s.seed ^ ++salt));
          const bool convex_type = which == XuRoachCheck::sigma_convex ||
                                   which == XuRoachCheck::dual_convex;
          const bool ok = convex_type
                              ? (r.min_ratio >= s.min_floor &&
                                 std::isfinite(r.max_ratio))
                              : (r.max_ratio <= s.max_ceiling);
          ratios.row(ratio_report_row(r, ok));
          if (!ok)
            note_failure(std::string(to_string(which)) + " " + norm.label() +
                         " m=" + std::to_string(m) + " gamma=" + fmt17(gamma));
        }
      }
    }
  }

  manifest.output(out_dir / "ratio_reports.csv");
  manifest.output(out_dir / "identity_checks.csv");
  manifest.stage("check-geometry", failures.empty(),
                 failures.empty() ? "" : std::to_string(failures.size()) +
                                             " suite(s) failed");
  manifest.write(out_dir);
  if (!failures.empty()) {
    log << failures.size() << " geometry suite(s) failed\n";
    return kCheckFailed;
  }
  log << "all geometry suites passed\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveArtifacts {
  ProblemSpec spec;
  SolverConfig solver;
  SolveReport report;
};

inline SolveArtifacts solve_from_config(
    const Config& cfg, std::optional<std::uint64_t> seed_override) {
  ProblemSpec spec = problem_from_config(cfg);
  SolverConfig sc = solver_from_config(cfg, seed_override);
  const std::string resume = cfg.get_string("solver.resume", "");
  SolveReport rep;
  if (!resume.empty()) {
    const Field init = read_field_csv(resume);
    rep = minimize(spec, sc, &init);
  } else {
    rep = minimize(spec, sc);
  }
  return {std::move(spec), sc, std::move(rep)};
}

inline void write_solve_outputs(const SolveArtifacts& art,
                                const std::filesystem::path& out_dir,
                                Manifest& manifest) {
  write_field_csv(out_dir / "solution.csv", art.report.u);
  manifest.output(out_dir / "solution.csv");

  {
    CsvWriter tr(out_dir / "energy_trace.csv");
    tr.row({"iteration", "energy"});
    for (std::size_t i = 0; i < art.report.energy_trace.size(); ++i)
      tr.row({std::to_string(i + 1), fmt17(art.report.energy_trace[i])});
  }
  manifest.output(out_dir / "energy_trace.csv");

  {
    CsvWriter sm(out_dir / "solve_summary.csv");
    sm.row({"gamma", "dim", "N", "m", "converged", "iterations", "final_eps",
            "weak_residual", "final_energy"});
    sm.row({fmt17(art.spec.gamma), std::to_string(art.spec.grid.dim),
            std::to_string(art.spec.grid.nodes_per_side),
            std::to_string(art.spec.components()),
            art.report.converged ? "1" : "0",
            std::to_string(art.report.iterations), fmt17(art.report.final_eps),
            fmt17(art.report.weak_residual),
            art.report.energy_trace.empty()
                ? fmt17(energy(art.spec, 0.0, art.report.u))
                : fmt17(art.report.energy_trace.back())});
  }
  manifest.output(out_dir / "solve_summary.csv");
}

inline int run_solve(const Config& cfg, const std::filesystem::path& out_dir,
                     std::optional<std::uint64_t> seed_override,
                     std::ostream& log) {
  consume_known_keys(cfg);
  std::filesystem::create_directories(out_dir);
  Manifest manifest("solve", cfg);
  SolveArtifacts art = solve_from_config(cfg, seed_override);
  write_solve_outputs(art, out_dir, manifest);

  const bool ok = art.report.converged &&
                  art.report.weak_residual <= 10.0 * art.solver.grad_tol;
  manifest.stage("solve", ok,
                 ok ? "" : art.report.converged ? "weak residual too large"
                                                : "not converged");
  manifest.write(out_dir);
  log << (ok ? "solve converged" : "solve did not converge") << ": iterations="
      << art.report.iterations << " weak_residual="
      << fmt17(art.report.weak_residual) << "\n";
  return ok ? kOk : kNoConvergence;
}

// ---------------------------------------------------------------------------
// probe
// ---------------------------------------------------------------------------

inline std::vector<std::string> regularity_row_csv(const RegularityRow& row) {
  return {to_string(row.pred.quantity),
          fmt17(row.pred.integrability),
          fmt17(row.pred.alpha),
          fmt17(row.est.alpha_hat),
          fmt17(row.est.r_squared),
          fmt17(row.est.window_lo) + ":" + fmt17(row.est.window_hi),
          row.used_refit ? "1" : "0",
          row.capped ? "1" : "0",
          row.pass ? "1" : "0",
          row.note};
}

inline void write_regularity_csv(const std::filesystem::path& path,
                                 const std::vector<RegularityRow>& rows) {
  CsvWriter w(path);
  w.row({"quantity", "p", "predicted_alpha", "measured_alpha", "r_squared",
         "window", "used_refit", "capped", "pass", "note"});
  for (const auto& row : rows) w.row(regularity_row_csv(row));
}

inline int run_probe(const Config& cfg, const std::filesystem::path& out_dir,
                     std::optional<std::uint64_t> seed_override,
                     std::ostream& log) {
  consume_known_keys(cfg);
  std::filesystem::create_directories(out_dir);
  Manifest manifest("probe", cfg);

  ProbeConfig pc;
  pc.margin = cfg.get_double("probe.margin", pc.margin);
  pc.max_steps = static_cast<int>(cfg.get_long("probe.max_steps", 0));
  const std::string source = cfg.get_string("probe.source", "solve");

  std::optional<ProblemSpec> spec;
  Field u;
  bool solver_converged = true;
  if (source == "solve") {
    SolveArtifacts art = solve_from_config(cfg, seed_override);
    write_solve_outputs(art, out_dir, manifest);
    solver_converged = art.report.converged;
    manifest.stage("solve", solver_converged);
    u = std::move(art.report.u);
    spec.emplace(std::move(art.spec));
  } else if (source == "random") {
    spec.emplace(problem_from_config(cfg));
    const double noise = cfg.get_double("probe.noise", 1.0);
    const std::uint64_t seed = seed_override
                                   ? *seed_override
                                   : static_cast<std::uint64_t>(
                                         cfg.get_long("solver.seed", 42));
    u = Field(spec->grid, spec->components());
    Rng g(mix64(seed ^ 0x5eedf1e1d5ull));
    for (double& v : u.v) v = g.uniform(-noise, noise);
    impose_boundary(u, spec->boundary);
  } else if (source == "file") {
    spec.emplace(problem_from_config(cfg));
    const std::string path = cfg.get_string("probe.field_csv", "");
    if (path.empty())
      throw ConfigError("probe.source=file requires probe.field_csv");
    u = read_field_csv(path);
    if (!(u.grid == spec->grid) || u.m != spec->components())
      throw ConfigError("probe.field_csv does not match the problem shape");
  } else {
    throw ConfigError("probe.source must be solve | random | file");
  }

  const std::vector<RegularityRow> rows = regularity_report(*spec, u, pc);
  write_regularity_csv(out_dir / "regularity.csv", rows);
  manifest.output(out_dir / "regularity.csv");

  bool all_pass = true;
  for (const auto& row : rows) {
    if (!row.pass) {
      all_pass = false;
      log << "FAIL row " << to_string(row.pred.quantity) << ": measured "
          << fmt17(row.est.alpha_hat) << " < predicted "
          << fmt17(row.pred.alpha) << " - 0.1"
          << (row.note.empty() ? "" : " (" + row.note + ")") << "\n";
    }
  }
  manifest.stage("probe", all_pass);
  manifest.write(out_dir);
  if (!solver_converged) {
    log << "probe ran on a non-converged solve\n";
    return kNoConvergence;
  }
  log << (all_pass ? "all regularity rows pass\n" : "regularity rows failed\n");
  return all_pass ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

inline int run_sweep(const Config& cfg, const std::filesystem::path& out_dir,
                     std::optional<std::uint64_t> seed_override,
                     std::ostream& log) {
  consume_known_keys(cfg);
  std::filesystem::create_directories(out_dir);
  Manifest manifest("sweep", cfg);
  // validate the shared template once so config errors exit before any cell
  (void)problem_from_config(cfg);
  (void)solver_from_config(cfg, seed_override);

  const std::vector<double> gammas =
      cfg.get_double_list("sweep.gammas", {2.0, 3.0, 4.0});
  const std::vector<double> ps = cfg.get_double_list("sweep.ps", {2.0, 3.0});
  ProbeConfig pc;
  pc.margin = cfg.get_double("probe.margin", pc.margin);
  pc.max_steps = static_cast<int>(cfg.get_long("probe.max_steps", 0));

  CsvWriter sw(out_dir / "sweep.csv");
  sw.row({"gamma", "p", "quantity", "integrability", "predicted_alpha",
          "measured_alpha", "r_squared", "window", "capped", "pass",
          "converged", "note"});

  bool all_cells_completed = true;
  for (double gamma : gammas) {
    for (double p : ps) {
      Config cell = cfg;
      cell.set("problem.gamma", fmt17(gamma));
      cell.set("problem.norm", "lp");
      cell.set("problem.p", fmt17(p));
      const std::string cell_name =
          "gamma=" + fmt17(gamma) + ",p=" + fmt17(p);
      try {
        SolveArtifacts art = solve_from_config(cell, seed_override);
        const std::vector<RegularityRow> rows =
            regularity_report(art.spec, art.report.u, pc);
        for (const auto& row : rows) {
          sw.row({fmt17(gamma), fmt17(p), to_string(row.pred.quantity),
                  fmt17(row.pred.integrability), fmt17(row.pred.alpha),
                  fmt17(row.est.alpha_hat), fmt17(row.est.r_squared),
                  fmt17(row.est.window_lo) + ":" + fmt17(row.est.window_hi),
                  row.capped ? "1" : "0", row.pass ? "1" : "0",
                  art.report.converged ? "1" : "0", row.note});
        }
        manifest.stage("cell " + cell_name, true);
      } catch (const std::exception& e) {
        all_cells_completed = false;
        manifest.stage("cell " + cell_name, false, e.what());
        log << "cell " << cell_name << " failed: " << e.what() << "\n";
      }
    }
  }

  manifest.output(out_dir / "sweep.csv");
  manifest.stage("sweep", all_cells_completed);
  manifest.write(out_dir);
  log << (all_cells_completed ? "sweep completed\n" : "sweep had failed cells\n");
  return all_cells_completed ? kOk : kCheckFailed;
}

}  // namespace fgl::harness
