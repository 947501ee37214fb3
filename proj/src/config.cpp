#include "sgdg/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>

namespace sgdg {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& field, const std::string& what) { throw ConfigError(field + ": " + what); }

int to_int(const std::string& field, const std::string& text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) bad(field, "expected an integer, got '" + text + "'");
  return v;
}

// A number, optionally scaled by pi: "0.5", "pi", "2pi", "2*pi".
double to_double(const std::string& field, const std::string& text) {
  std::string s = text;
  double scale = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    scale = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
    if (s.empty()) return scale;
  }
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) bad(field, "expected a number, got '" + text + "'");
  return v * scale;
}

std::vector<double> to_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = trim(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (item.empty()) bad(field, "empty list entry in '" + text + "'");
    out.push_back(to_double(field, item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Which problems a key applies to.
using Applies = std::function<bool(Problem)>;

bool any(Problem) { return true; }
bool simulated(Problem p) { return p != Problem::projection_study; }
bool bell(Problem p) { return p == Problem::solid_rotation || p == Problem::deformational; }
bool kinetic(Problem p) { return is_vlasov(p) || is_relaxation(p); }
bool deform(Problem p) { return p == Problem::deformational; }

const std::map<std::string, std::map<std::string, Applies>>& schema() {
  static const std::map<std::string, std::map<std::string, Applies>> s{
      {"problem", {{"name", any}, {"d", any}}},
      {"discretization", {{"N", any}, {"k", any}, {"flux", simulated}}},
      {"time", {{"T", simulated}, {"cfl", simulated}}},
      {"initial", {{"center", bell}, {"radius", bell}, {"amplitude", is_vlasov}, {"wave_number", is_vlasov}}},
      {"domain", {{"L", kinetic}, {"v_cut", kinetic}, {"period", deform}}},
      {"relaxation", {{"tau", is_relaxation}, {"theta", is_relaxation}}},
      {"convergence", {{"N_min", any}, {"N_max", any}}},
      {"output", {{"dir", any}, {"series_stride", simulated}, {"snapshot_times", simulated}, {"snapshot_resolution", simulated}}},
      {"parallel", {{"workers", any}}},
  };
  return s;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
  }

  // Flatten and check the structure before interpreting anything.
  std::map<std::string, std::string> values;
  for (const auto& [section, body] : tree) {
    if (body.empty()) bad(section, "key outside any section");
    const auto sec = schema().find(section);
    if (sec == schema().end()) bad("[" + section + "]", "unknown section");
    for (const auto& [key, leaf] : body) {
      if (!sec->second.count(key)) bad(section + "." + key, "unknown key");
      values[section + "." + key] = trim(leaf.data());
    }
  }
  const auto get = [&values](const std::string& k) -> const std::string* {
    const auto it = values.find(k);
    return it == values.end() ? nullptr : &it->second;
  };

  const std::string* name = get("problem.name");
  if (!name) bad("problem.name", "required");
  Problem problem;
  try {
    problem = parse_problem(*name);
  } catch (const std::invalid_argument& e) {
    bad("problem.name", e.what());
  }
  for (const auto& [full, text] : values) {
    const auto dot = full.find('.');
    const auto& applies = schema().at(full.substr(0, dot)).at(full.substr(dot + 1));
    if (!applies(problem)) bad(full, "not used by problem " + std::string(problem_name(problem)));
  }

  RunConfig c;
  int dim = 0;
  if (const auto* v = get("problem.d")) {
    dim = to_int("problem.d", *v);
    if (dim < 1) bad("problem.d", "must be positive");
  }
  try {
    c.setup = default_setup(problem, dim);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem.") + e.what());
  }
  ProblemSetup& s = c.setup;
  if (const auto* v = get("discretization.N")) {
    s.max_level = to_int("discretization.N", *v);
    c.level_set = true;
  }
  if (const auto* v = get("discretization.k")) {
    s.degree = to_int("discretization.k", *v);
    c.degree_set = true;
  }
  if (const auto* v = get("discretization.flux")) {
    try {
      s.flux = parse_flux(*v);
    } catch (const std::invalid_argument& e) {
      bad("discretization.flux", e.what());
    }
  }
  if (const auto* v = get("domain.period")) {
    s.flow_period = to_double("domain.period", *v);
    s.final_time = s.flow_period;
  }
  if (const auto* v = get("time.T")) s.final_time = to_double("time.T", *v);
  if (const auto* v = get("time.cfl")) s.cfl = to_double("time.cfl", *v);
  if (const auto* v = get("initial.center")) s.initial.center = to_list("initial.center", *v);
  if (const auto* v = get("initial.radius")) s.initial.radius = to_double("initial.radius", *v);
  if (const auto* v = get("initial.amplitude")) s.initial.amplitude = to_double("initial.amplitude", *v);
  if (const auto* v = get("initial.wave_number")) s.initial.wave_number = to_double("initial.wave_number", *v);
  if (const auto* v = get("domain.L")) {
    const double l = to_double("domain.L", *v);
    if (is_vlasov(problem)) {
      s.x_length = l;
    } else {
      s.half_width = l;
    }
  }
  if (const auto* v = get("domain.v_cut")) s.v_cut = to_double("domain.v_cut", *v);
  if (const auto* v = get("relaxation.tau")) s.relax.tau = to_double("relaxation.tau", *v);
  if (const auto* v = get("relaxation.theta")) s.relax.theta = to_double("relaxation.theta", *v);
  if (const auto* v = get("convergence.N_min")) c.n_min = to_int("convergence.N_min", *v);
  if (const auto* v = get("convergence.N_max")) c.n_max = to_int("convergence.N_max", *v);
  if (const auto* v = get("output.dir")) {
    if (v->empty()) bad("output.dir", "must not be empty");
    c.output_dir = *v;
  }
  if (const auto* v = get("output.series_stride")) {
    c.series_stride = to_int("output.series_stride", *v);
    if (c.series_stride < 0) bad("output.series_stride", "must be non-negative");
  }
  if (const auto* v = get("output.snapshot_times")) {
    c.snapshot_times = to_list("output.snapshot_times", *v);
    for (double t : c.snapshot_times) {
      if (!(t >= 0.0)) bad("output.snapshot_times", "times must be non-negative");
    }
  }
  if (const auto* v = get("output.snapshot_resolution")) {
    c.snapshot_resolution = to_int("output.snapshot_resolution", *v);
    if (c.snapshot_resolution < 2) bad("output.snapshot_resolution", "must be at least 2");
  }
  if (const auto* v = get("parallel.workers")) {
    c.workers = to_int("parallel.workers", *v);
    if (c.workers < 0) bad("parallel.workers", "must be non-negative");
  }

  // Field-level checks of the resolved setup (N and k may still be defaults here).
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.n_min && c.n_max && *c.n_min > *c.n_max) bad("convergence.N_min", "must not exceed N_max");
  for (const auto& n : {c.n_min, c.n_max}) {
    if (n && (*n < 0 || *n > SparseLayout::kMaxLevel)) bad("convergence", "levels must be in [0, " + std::to_string(SparseLayout::kMaxLevel) + "]");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  return parse_config(in);
}

void require_run_fields(const RunConfig& c) {
  if (!c.level_set) bad("discretization.N", "required");
  if (!c.degree_set) bad("discretization.k", "required");
}

std::pair<int, int> level_range(const RunConfig& c) {
  if (!c.degree_set) bad("discretization.k", "required");
  if (c.n_min.has_value() != c.n_max.has_value()) bad("convergence", "N_min and N_max go together");
  if (c.n_min) return {*c.n_min, *c.n_max};
  if (!c.level_set) bad("convergence.N_min", "required (or discretization.N for a single row)");
  return {c.setup.max_level, c.setup.max_level};
}

}  // namespace sgdg
