#include "hfric/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hfric/errors.hpp"

namespace hfric::sim {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (trim(v.substr(used)).empty() && std::isfinite(d)) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  }
  return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("key '" + key + "': " + what);
}

} // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<KeyInfo>& config_keys() {
  static const std::vector<KeyInfo> keys = {
      {"b", "mm", "skid width; 0 = lambda (sine) or 10 (profile file)"},
      {"h", "mm", "skid height; 0 = 0.75 b"},
      {"m_x", "-", "elements along the contact side; 0 = 128 (sine) or 2^k >= b/dx (file)"},
      {"n_levels", "-", "2:1 coarsening levels; -1 = coarsest element b/32"},
      {"boundary", "-", "periodic | free_sides"},
      {"material", "-", "single-arm | three-arm | path to a material file"},
      {"profile", "-", "sine | path to a two-column profile file"},
      {"lambda", "mm", "sine wavelength"},
      {"a", "mm", "sine amplitude, z = a (1 - cos(2 pi x / lambda))"},
      {"rho", "-", "profile down-sampling factor"},
      {"s_filter", "mm", "Gaussian S-filter cutoff; 0 = off"},
      {"invert_profile", "-", "flip profile elevations (true/false)"},
      {"p0", "MPa", "pressure on the bottom face"},
      {"t_s1", "-", "Phase I steps"},
      {"T1", "s", "Phase I duration and ramp length; auto = balance rule at the largest frequency"},
      {"velocities", "mm/s", "comma-separated sliding velocities"},
      {"v_center", "mm/s", "generator centre, used when velocities is empty; 0 = v* of the slowest arm"},
      {"v_count", "-", "generator point count"},
      {"v_decades", "-", "generator half-span in decades"},
      {"n_lambda", "-", "plateau travel in wavelengths (sine)"},
      {"L", "mm", "plateau travel on a profile file; 0 = as far as the profile allows"},
      {"advance_fraction", "-", "profile advance per step as a fraction of b/m_x (sine) or dx (file)"},
      {"penalty", "MPa/mm", "paper_text (100 E_inst / h) | paper_fig9 (10 E_inst / h) | value"},
      {"solver", "-", "condensed | full"},
      {"max_contact_iter", "-", "active-set iterations per step"},
      {"out_dir", "-", "output directory"},
      {"dump_fields", "-", "write mesh and final field VTK (true/false)"},
      {"contact_trace", "-", "write final contact trace CSV (true/false)"},
      {"plots", "-", "write SVG plots (true/false)"},
      {"jobs", "-", "parallel runs in a sweep; 0 = all cores"},
  };
  return keys;
}

std::string keys_help() {
  std::ostringstream os;
  os << "Config keys (key = value, also accepted as --set key=value):\n";
  for (const auto& k : config_keys()) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-17s [%-6s] %s\n", k.key.c_str(), k.unit.c_str(),
                  k.help.c_str());
    os << line;
  }
  return os.str();
}

void set_key(SimulationConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "b") {
    c.b = to_double(key, v);
    require(c.b >= 0.0, key, "must be >= 0");
  } else if (key == "h") {
    c.h = to_double(key, v);
    require(c.h >= 0.0, key, "must be >= 0");
  } else if (key == "m_x") {
    c.m_x = to_int(key, v);
    require(c.m_x >= 0, key, "must be >= 0");
  } else if (key == "n_levels") {
    c.n_levels = to_int(key, v);
    require(c.n_levels >= -1, key, "must be >= -1");
  } else if (key == "boundary") {
    if (v == "periodic") c.boundary = fem::Boundary::periodic;
    else if (v == "free_sides") c.boundary = fem::Boundary::free_sides;
    else throw ConfigError("key 'boundary': expected periodic or free_sides");
  } else if (key == "material") {
    require(!v.empty(), key, "empty");
    c.material = v;
    resolve_material(c);
  } else if (key == "profile") {
    require(!v.empty(), key, "empty");
    if (v == "sine") {
      c.profile = ProfileKind::sine;
      c.profile_file.clear();
    } else {
      c.profile = ProfileKind::file;
      c.profile_file = v;
    }
  } else if (key == "lambda") {
    c.lambda = to_double(key, v);
    require(c.lambda > 0.0, key, "must be > 0");
  } else if (key == "a") {
    c.a = to_double(key, v);
    require(c.a >= 0.0, key, "must be >= 0");
  } else if (key == "rho") {
    c.rho = to_int(key, v);
    require(c.rho >= 1, key, "must be >= 1");
  } else if (key == "s_filter") {
    c.s_filter = to_double(key, v);
    require(c.s_filter >= 0.0, key, "must be >= 0");
  } else if (key == "invert_profile") {
    c.invert_profile = to_bool(key, v);
  } else if (key == "p0") {
    c.p0 = to_double(key, v);
    require(c.p0 >= 0.0, key, "must be >= 0");
  } else if (key == "t_s1") {
    c.t_s1 = to_int(key, v);
    require(c.t_s1 >= 1, key, "must be >= 1");
  } else if (key == "T1") {
    if (v == "auto") {
      c.T1_auto = true;
    } else {
      c.T1 = to_double(key, v);
      c.T1_auto = false;
      require(c.T1 > 0.0, key, "must be > 0 or auto");
    }
  } else if (key == "velocities") {
    c.velocities.clear();
    for (const auto& s : split_list(v)) {
      const double x = to_double(key, s);
      require(x > 0.0, key, "velocities must be > 0");
      c.velocities.push_back(x);
    }
  } else if (key == "v_center") {
    c.v_center = to_double(key, v);
    require(c.v_center >= 0.0, key, "must be >= 0");
  } else if (key == "v_count") {
    c.v_count = to_int(key, v);
    require(c.v_count >= 1, key, "must be >= 1");
  } else if (key == "v_decades") {
    c.v_decades = to_double(key, v);
    require(c.v_decades >= 0.0, key, "must be >= 0");
  } else if (key == "n_lambda") {
    c.n_lambda = to_double(key, v);
    require(c.n_lambda > 0.0, key, "must be > 0");
  } else if (key == "L") {
    c.L = to_double(key, v);
    require(c.L >= 0.0, key, "must be >= 0");
  } else if (key == "advance_fraction") {
    c.advance_fraction = to_double(key, v);
    require(c.advance_fraction > 0.0, key, "must be > 0");
  } else if (key == "penalty") {
    if (v != "paper_text" && v != "paper_fig9") {
      require(to_double(key, v) > 0.0, key, "must be > 0");
    }
    c.penalty = v;
  } else if (key == "solver") {
    if (v == "condensed") c.solver = SolverKind::condensed;
    else if (v == "full") c.solver = SolverKind::full;
    else throw ConfigError("key 'solver': expected condensed or full");
  } else if (key == "max_contact_iter") {
    c.max_contact_iter = to_int(key, v);
    require(c.max_contact_iter >= 1, key, "must be >= 1");
  } else if (key == "out_dir") {
    require(!v.empty(), key, "empty");
    c.out_dir = v;
  } else if (key == "dump_fields") {
    c.dump_fields = to_bool(key, v);
  } else if (key == "contact_trace") {
    c.contact_trace = to_bool(key, v);
  } else if (key == "plots") {
    c.plots = to_bool(key, v);
  } else if (key == "jobs") {
    c.jobs = to_int(key, v);
    require(c.jobs >= 0, key, "must be >= 0");
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void apply_text(SimulationConfig& cfg, const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, n, "expected 'key = value'");
    try {
      set_key(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ParseError(source, n, e.what());
    }
  }
}

void apply_file(SimulationConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_text(cfg, ss.str(), path);
}

std::map<std::string, std::string> to_kv(const SimulationConfig& c) {
  std::map<std::string, std::string> kv;
  auto d = [](double x) { return format_double(x); };
  auto bl = [](bool x) { return std::string(x ? "true" : "false"); };
  kv["b"] = d(c.b);
  kv["h"] = d(c.h);
  kv["m_x"] = std::to_string(c.m_x);
  kv["n_levels"] = std::to_string(c.n_levels);
  kv["boundary"] = c.boundary == fem::Boundary::periodic ? "periodic" : "free_sides";
  kv["material"] = c.material;
  kv["profile"] = c.profile == ProfileKind::sine ? "sine" : c.profile_file;
  kv["lambda"] = d(c.lambda);
  kv["a"] = d(c.a);
  kv["rho"] = std::to_string(c.rho);
  kv["s_filter"] = d(c.s_filter);
  kv["invert_profile"] = bl(c.invert_profile);
  kv["p0"] = d(c.p0);
  kv["t_s1"] = std::to_string(c.t_s1);
  kv["T1"] = c.T1_auto ? "auto" : d(c.T1);
  std::string vl;
  for (std::size_t i = 0; i < c.velocities.size(); ++i) vl += (i ? "," : "") + d(c.velocities[i]);
  kv["velocities"] = vl;
  kv["v_center"] = d(c.v_center);
  kv["v_count"] = std::to_string(c.v_count);
  kv["v_decades"] = d(c.v_decades);
  kv["n_lambda"] = d(c.n_lambda);
  kv["L"] = d(c.L);
  kv["advance_fraction"] = d(c.advance_fraction);
  kv["penalty"] = c.penalty;
  kv["solver"] = c.solver == SolverKind::condensed ? "condensed" : "full";
  kv["max_contact_iter"] = std::to_string(c.max_contact_iter);
  kv["out_dir"] = c.out_dir;
  kv["dump_fields"] = bl(c.dump_fields);
  kv["contact_trace"] = bl(c.contact_trace);
  kv["plots"] = bl(c.plots);
  kv["jobs"] = std::to_string(c.jobs);
  return kv;
}

std::string to_text(const SimulationConfig& c) {
  const auto kv = to_kv(c);
  std::ostringstream os;
  // Material first so a later file entry cannot be shadowed.
  for (const auto& k : config_keys()) {
    const auto it = kv.find(k.key);
    if (it == kv.end()) continue;
    if (k.key == "velocities" && it->second.empty()) continue;
    os << k.key << " = " << it->second << "\n";
  }
  return os.str();
}

SimulationConfig preset(const std::string& name) {
  SimulationConfig c;
  if (name == "single-arm") {
    return c;
  }
  if (name == "three-arm") {
    c.material = "three-arm";
    c.prony = material::three_arm();
    c.T1_auto = true;
    c.velocities = {100.0};
    return c;
  }
  if (name == "rough") {
    c.material = "three-arm";
    c.prony = material::three_arm();
    c.profile = ProfileKind::file;
    c.b = 10.0;
    c.p0 = 2.0;
    c.T1_auto = true;
    c.boundary = fem::Boundary::free_sides;
    c.v_center = 1.0e4;
    c.v_count = 20;
    c.v_decades = 1.0;
    return c;
  }
  throw ConfigError("unknown preset '" + name + "' (single-arm, three-arm, rough)");
}

void resolve_material(SimulationConfig& c) {
  if (c.material == "single-arm") c.prony = material::single_arm();
  else if (c.material == "three-arm") c.prony = material::three_arm();
  else c.prony = material::load_material(c.material);
  material::validate(c.prony);
}

std::vector<double> velocity_list(const SimulationConfig& c) {
  if (!c.velocities.empty()) return c.velocities;
  double centre = c.v_center;
  if (centre <= 0.0) {
    if (c.prony.arms.empty()) throw ConfigError("no velocities and no arm to centre the generator on");
    centre = material::critical_velocity(c.prony.max_tau(), c.lambda);
  }
  std::vector<double> v;
  if (c.v_count == 1) return {centre};
  for (int i = 0; i < c.v_count; ++i) {
    const double s = -c.v_decades + 2.0 * c.v_decades * i / (c.v_count - 1);
    v.push_back(centre * std::pow(10.0, s));
  }
  return v;
}

} // namespace hfric::sim
