#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sgdg/config.hpp"
#include "sgdg/experiments.hpp"
#include "sgdg/time_stepper.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace sgdg;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// NaN is not representable in JSON; missing results become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json setup_json(const ProblemSetup& s) {
  json j;
  j["problem"] = std::string(problem_name(s.problem));
  j["d"] = s.dim;
  j["N"] = s.max_level;
  j["k"] = s.degree;
  if (s.problem == Problem::projection_study) return j;
  j["flux"] = std::string(flux_name(s.flux));
  j["cfl"] = s.cfl;
  j["T"] = s.final_time;
  if (s.problem == Problem::solid_rotation || s.problem == Problem::deformational) {
    j["center"] = s.initial.center;
    j["radius"] = s.initial.radius;
  }
  if (s.problem == Problem::deformational) j["period"] = s.flow_period;
  if (is_vlasov(s.problem)) {
    j["amplitude"] = s.initial.amplitude;
    j["wave_number"] = s.initial.wave_number;
    j["L"] = s.x_length;
    j["v_cut"] = s.v_cut;
    j["reversal"] = s.reversal;
  }
  if (is_relaxation(s.problem)) {
    j["L"] = s.half_width;
    j["v_cut"] = s.v_cut;
    j["tau"] = s.relax.tau;
    j["theta"] = s.relax.theta;
  }
  return j;
}

int active_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void apply_workers(int workers) {
#ifdef _OPENMP
  if (workers > 0) omp_set_num_threads(workers);
#else
  (void)workers;
#endif
}

fs::path output_dir(const RunConfig& c) {
  const char* env = std::getenv("SGDG_OUTPUT_DIR");
  fs::path dir = env && *env ? fs::path(env) : fs::path(c.output_dir);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  os << j.dump(2) << '\n';
  if (!os) throw std::runtime_error("cannot write " + path.string());
}

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_t%.6f.txt", t);
  return buf;
}

void write_table(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "N,h,DOF,error,order\n";
  for (const auto& r : rows) {
    os << r.level << ',' << format_double(r.h) << ',' << r.dof << ',' << format_double(r.error) << ','
       << (r.order ? format_double(*r.order) : "") << '\n';
  }
}

void print_table(const std::vector<ConvergenceRow>& rows) {
  std::printf("%4s %12s %10s %12s %8s\n", "N", "h", "DOF", "L2 error", "order");
  for (const auto& r : rows) {
    std::printf("%4d %12.4e %10lld %12.4e", r.level, r.h, static_cast<long long>(r.dof), r.error);
    if (r.order) {
      std::printf(" %8.2f\n", *r.order);
    } else {
      std::printf(" %8s\n", "--");
    }
  }
}

json rows_json(const std::vector<ConvergenceRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json j;
    j["N"] = r.level;
    j["h"] = r.h;
    j["DOF"] = r.dof;
    j["error"] = number(r.error);
    j["order"] = r.order ? number(*r.order) : json(nullptr);
    j["dt"] = r.dt;
    j["wall_seconds"] = r.wall_seconds;
    out.push_back(j);
  }
  return out;
}

int cmd_run(const std::string& path) {
  RunConfig c = load_config(path);
  require_run_fields(c);
  validate(c.setup);
  apply_workers(c.workers);
  const fs::path dir = output_dir(c);
  json meta;
  meta["command"] = "run";
  meta["config"] = path;
  meta["parameters"] = setup_json(c.setup);
  meta["workers"] = active_workers();

  std::ofstream series;
  RunHooks hooks;
  const bool simulated = c.setup.problem != Problem::projection_study;
  if (simulated && c.series_stride > 0) {
    series.open(dir / "series.csv");
    write_series_header(series);
    hooks.stride = c.series_stride;
    hooks.series = [&series](const SeriesRow& r) { write_series_row(series, r); };
    meta["series"] = "series.csv";
  }
  json snapshots = json::array();
  if (simulated && !c.snapshot_times.empty()) {
    fs::create_directories(dir / "snapshots");
    hooks.snapshot_times = c.snapshot_times;
    hooks.snapshot = [&](double t, const SparseGridFunction& u) {
      const std::string name = snapshot_name(t);
      std::ofstream os(dir / "snapshots" / name);
      write_snapshot(os, u, c.snapshot_resolution, t);
      snapshots.push_back("snapshots/" + name);
    };
  }
  try {
    const RunResult r = run_problem(c.setup, hooks);
    meta["dof"] = r.dof;
    meta["dt"] = r.dt;
    meta["steps"] = r.steps;
    meta["final_time"] = r.final_time;
    meta["error"] = number(r.error);
    meta["wall_seconds"] = r.wall_seconds;
    json summary;
    for (const auto& [k, v] : r.summary) summary[k] = number(v);
    meta["summary"] = summary;
    meta["snapshots"] = snapshots;
    meta["status"] = "ok";
    write_json(dir / "metadata.json", meta);
    std::printf("%s: DOF %lld, dt %.4e, %d steps, L2 error %.6e, %.2f s\n", std::string(problem_name(c.setup.problem)).c_str(),
                static_cast<long long>(r.dof), r.dt, r.steps, r.error, r.wall_seconds);
  } catch (const NumericalFailure& e) {
    meta["status"] = "numerical_failure";
    meta["message"] = e.what();
    meta["last_good_time"] = e.time();
    meta["snapshots"] = snapshots;
    write_json(dir / "metadata.json", meta);
    throw;
  }
  return 0;
}

int cmd_converge(const std::string& path) {
  RunConfig c = load_config(path);
  const auto [n_min, n_max] = level_range(c);
  apply_workers(c.workers);
  const fs::path dir = output_dir(c);
  std::vector<ConvergenceRow> rows;
  if (c.setup.problem == Problem::projection_study) {
    rows = projection_study(c.setup.dim, c.setup.degree, n_min, n_max);
  } else {
    if (is_relaxation(c.setup.problem)) {
      throw ConfigError("problem.name: relaxation runs have no error reference; use run");
    }
    rows = convergence_study(c.setup, n_min, n_max, [](const ConvergenceRow& r) {
      std::fprintf(stderr, "N=%d done: error %.4e (%.1f s)\n", r.level, r.error, r.wall_seconds);
    });
  }
  print_table(rows);
  std::ofstream table(dir / "convergence.csv");
  write_table(table, rows);
  json meta;
  meta["command"] = "converge";
  meta["config"] = path;
  auto params = setup_json(c.setup);
  params.erase("N");
  params["N_min"] = n_min;
  params["N_max"] = n_max;
  if (is_vlasov(c.setup.problem)) params["reversal"] = true;
  meta["parameters"] = params;
  meta["workers"] = active_workers();
  meta["rows"] = rows_json(rows);
  meta["table"] = "convergence.csv";
  meta["status"] = "ok";
  write_json(dir / "metadata.json", meta);
  return 0;
}

int cmd_project_study(const std::string& path) {
  RunConfig c = load_config(path);
  if (c.setup.problem != Problem::projection_study) {
    throw ConfigError("problem.name: project-study needs problem projection-study");
  }
  const auto [n_min, n_max] = level_range(c);
  apply_workers(c.workers);
  const fs::path dir = output_dir(c);
  const auto rows = projection_study(c.setup.dim, c.setup.degree, n_min, n_max);
  print_table(rows);
  json meta;
  meta["command"] = "project-study";
  meta["config"] = path;
  meta["parameters"] = {{"d", c.setup.dim}, {"k", c.setup.degree}, {"N_min", n_min}, {"N_max", n_max}};
  meta["rows"] = rows_json(rows);
  if (rows.size() >= 2) {
    const double slope = fitted_slope(rows);
    meta["fitted_slope"] = slope;
    std::printf("fitted slope of log2(error) vs N: %.3f\n", slope);
  }
  std::ofstream table(dir / "convergence.csv");
  write_table(table, rows);
  meta["table"] = "convergence.csv";
  meta["status"] = "ok";
  write_json(dir / "metadata.json", meta);
  return 0;
}

int cmd_dof(int n, int k, int d) {
  if (n < 0 || n > SparseLayout::kMaxLevel || k < 0 || d < 1 || d > SparseLayout::kMaxDim) {
    throw ConfigError("dof: expected 0 <= N <= " + std::to_string(SparseLayout::kMaxLevel) + ", k >= 0, 1 <= D <= " +
                      std::to_string(SparseLayout::kMaxDim));
  }
  std::printf("%lld\n", static_cast<long long>(dof_count(n, k, d)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse grid discontinuous Galerkin solver for transport and kinetic problems"};
  app.require_subcommand(1);
  std::string config;
  auto* run = app.add_subcommand("run", "Run one configured problem");
  run->add_option("config", config, "Configuration file")->required();
  auto* converge = app.add_subcommand("converge", "Convergence table over N_min..N_max");
  converge->add_option("config", config, "Configuration file")->required();
  auto* study = app.add_subcommand("project-study", "L2 projection error study");
  study->add_option("config", config, "Configuration file")->required();
  int n = 0, k = 0, d = 0;
  auto* dof = app.add_subcommand("dof", "Degrees of freedom of the sparse space");
  dof->add_option("N", n, "Maximum level sum")->required();
  dof->add_option("K", k, "Polynomial degree")->required();
  dof->add_option("D", d, "Dimension")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  try {
    if (*run) return cmd_run(config);
    if (*converge) return cmd_converge(config);
    if (*study) return cmd_project_study(config);
    if (*dof) return cmd_dof(n, k, d);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    std::fprintf(stderr, "numerical failure: %s (last finite state at t = %.17g)\n", e.what(), e.time());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
