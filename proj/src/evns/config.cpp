#include "evns/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "evns/initial_data.hpp"

namespace evns::config {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

/// Plain number, or a number with an 'h' suffix (grid-spacing units,
/// resolved once N and L are known).
struct Length {
  double value = 0.0;
  bool in_h_units = false;
  double resolve(double h) const { return in_h_units ? value * h : value; }
};

Length parse_length(const std::string& raw) {
  std::string s = trim(raw);
  Length l;
  if (!s.empty() && (s.back() == 'h' || s.back() == 'H')) {
    l.in_h_units = true;
    s.pop_back();
  }
  try {
    std::size_t pos = 0;
    l.value = std::stod(s, &pos);
    require(pos == trim(s).size(), "trailing characters");
  } catch (const std::exception&) {
    throw invalid_input("malformed numeric value: " + raw);
  }
  return l;
}

long parse_int(const std::string& raw) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(trim(raw), &pos);
    require(pos == trim(raw).size(), "trailing characters");
    return v;
  } catch (const std::exception&) {
    throw invalid_input("malformed integer value: " + raw);
  }
}

double parse_double(const std::string& raw) {
  const Length l = parse_length(raw);
  require(!l.in_h_units, "grid-unit suffix not allowed here: " + raw);
  return l.value;
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

solver::EddyViscosity RunSpec::eddy() const {
  if (a_kind == "zero") return solver::EddyViscosity::zero();
  if (a_kind == "bump")
    return solver::EddyViscosity::bump(a_amplitude, a_radius);
  throw invalid_input("unknown A_kind: " + a_kind);
}

spectral::SpectralVector RunSpec::build_u0(
    std::shared_ptr<const spectral::Grid3> grid) const {
  if (u0_kind == "shear_mode")
    return spectral::shear_mode(grid, u0_amplitude, u0_mode);
  if (u0_kind == "taylor_green")
    return spectral::taylor_green(grid, u0_amplitude);
  if (u0_kind == "localized_vortex")
    return spectral::localized_vortex(grid, u0_amplitude, u0_radius);
  if (u0_kind == "random_smooth")
    return spectral::random_smooth(grid, u0_amplitude, u0_corr, seed);
  throw invalid_input("unknown or missing u0_kind: '" + u0_kind + "'");
}

void RunSpec::validate_for_run() const {
  solver.validate();
  require(!u0_kind.empty(), "u0_kind is required");
  if (a_kind == "bump") {
    require(a_radius > 0.0, "A_radius must be positive for the bump");
    require(a_radius < 0.5 * solver.box, "A_radius must fit inside the box");
  }
}

void RunSpec::validate_for_sweep() const {
  validate_for_run();
  require(eps_list.size() >= 2, "eps_list needs at least two entries");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    require(eps_list[i] < eps_list[i - 1],
            "eps_list must be strictly decreasing");
  require(!sweep_sample_times.empty(), "sweep_sample_times is required");
}

RunSpec parse_config_text(const std::string& text) {
  static const std::set<std::string> known = {
      "nu",          "eps",           "N",
      "L",           "T",             "dt",
      "picard_tol",  "picard_max",    "A_kind",
      "A_radius",    "A_amplitude",   "u0_kind",
      "u0_amplitude","u0_mode",       "u0_radius",
      "u0_corr",     "seed",          "out_dir",
      "dealias",     "hm_max",        "hm_every",
      "tail_r1",     "tail_r2",       "snapshot_times",
      "eps_list",    "sweep_sample_times", "sweep_ball_radius"};

  RunSpec spec;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos,
            "line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    require(known.count(key) == 1, "unknown key '" + key + "'");
    pairs.emplace_back(key, value);
  }

  // First pass pins the grid so 'h'-suffixed lengths can resolve.
  for (const auto& [key, value] : pairs) {
    if (key == "N") spec.solver.n = static_cast<std::size_t>(parse_int(value));
    if (key == "L") spec.solver.box = parse_double(value);
  }
  const double h = spec.solver.spacing();
  const auto as_len = [h](const std::string& v) {
    return parse_length(v).resolve(h);
  };

  for (const auto& [key, value] : pairs) {
    if (key == "N" || key == "L") continue;
    if (key == "nu") spec.solver.nu = parse_double(value);
    else if (key == "eps") spec.solver.eps = as_len(value);
    else if (key == "T") spec.solver.horizon = parse_double(value);
    else if (key == "dt") spec.solver.dt = parse_double(value);
    else if (key == "picard_tol") spec.solver.picard_tol = parse_double(value);
    else if (key == "picard_max") spec.solver.picard_max = static_cast<int>(parse_int(value));
    else if (key == "dealias") spec.solver.dealias = parse_int(value) != 0;
    else if (key == "hm_max") spec.solver.hm_max = static_cast<int>(parse_int(value));
    else if (key == "hm_every") spec.solver.hm_every = static_cast<int>(parse_int(value));
    else if (key == "tail_r1") spec.solver.tail_r1 = as_len(value);
    else if (key == "tail_r2") spec.solver.tail_r2 = as_len(value);
    else if (key == "snapshot_times") {
      for (const auto& v : split_list(value))
        spec.solver.snapshot_times.push_back(parse_double(v));
    } else if (key == "A_kind") spec.a_kind = value;
    else if (key == "A_radius") spec.a_radius = as_len(value);
    else if (key == "A_amplitude") spec.a_amplitude = parse_double(value);
    else if (key == "u0_kind") spec.u0_kind = value;
    else if (key == "u0_amplitude") spec.u0_amplitude = parse_double(value);
    else if (key == "u0_mode") spec.u0_mode = static_cast<int>(parse_int(value));
    else if (key == "u0_radius") spec.u0_radius = as_len(value);
    else if (key == "u0_corr") spec.u0_corr = parse_double(value);
    else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_int(value));
    else if (key == "out_dir") spec.out_dir = value;
    else if (key == "eps_list") {
      for (const auto& v : split_list(value))
        spec.eps_list.push_back(as_len(v));
    } else if (key == "sweep_sample_times") {
      for (const auto& v : split_list(value))
        spec.sweep_sample_times.push_back(parse_double(v));
    } else if (key == "sweep_ball_radius") {
      spec.sweep_ball_radius = as_len(value);
    }
  }
  return spec;
}

RunSpec parse_config_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace evns::config
