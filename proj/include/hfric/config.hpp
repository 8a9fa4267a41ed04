#pragma once

#include <map>
#include <string>
#include <vector>

#include "hfric/dofmap.hpp"
#include "hfric/material.hpp"

namespace hfric::sim {

enum class ProfileKind { sine, file };
enum class SolverKind { condensed, full };

// Every run parameter. Zero-valued geometry entries mean "derive from the
// profile" (see resolve rules in the key table).
struct SimulationConfig {
  // Skid geometry and mesh.
  double b = 0.0;      // mm, 0 = lambda (sine) or 10 mm (file)
  double h = 0.0;      // mm, 0 = 0.75 b
  int m_x = 0;         // 0 = 128 (sine) or next power of two of b / dx (file)
  int n_levels = -1;   // -1 = coarsest element b/32
  fem::Boundary boundary = fem::Boundary::periodic;

  // Material.
  std::string material = "single-arm";  // preset name or file path
  material::PronySeries prony = material::single_arm();

  // Rigid profile.
  ProfileKind profile = ProfileKind::sine;
  std::string profile_file;
  double lambda = 0.019634954084936207;  // mm, 2 pi / 320
  double a = 2.0e-3;                      // mm
  int rho = 1;
  double s_filter = 0.0;  // mm, 0 = no S-filter
  bool invert_profile = false;

  // Loading and motion.
  double p0 = 10.0;  // MPa
  int t_s1 = 100;
  double T1 = 0.16150688;  // s
  bool T1_auto = false;
  std::vector<double> velocities;  // mm/s
  double v_center = 0.0;  // mm/s, generator used when velocities is empty
  int v_count = 9;
  double v_decades = 1.0;  // generator half-span in decades
  double n_lambda = 4.0;   // plateau travel in wavelengths (sine)
  double L = 0.0;          // mm, plateau travel (file), 0 = as far as the profile allows
  double advance_fraction = 0.2;

  // Contact and numerics.
  std::string penalty = "paper_text";  // paper_text | paper_fig9 | value in MPa/mm
  SolverKind solver = SolverKind::condensed;
  int max_contact_iter = 50;

  // Output.
  std::string out_dir = ".";
  bool dump_fields = false;
  bool contact_trace = false;
  bool plots = true;
  int jobs = 0;  // 0 = all cores
};

struct KeyInfo {
  std::string key;
  std::string unit;
  std::string help;
};

// Documented keys, in file order.
const std::vector<KeyInfo>& config_keys();
std::string keys_help();

// Applies one key. Throws ConfigError.
void set_key(SimulationConfig& cfg, const std::string& key, const std::string& value);

// `key = value` lines, '#' comments. Throws ConfigError / ParseError.
void apply_file(SimulationConfig& cfg, const std::string& path);
void apply_text(SimulationConfig& cfg, const std::string& text, const std::string& source);

// Resolved key-value representation (round-trips through apply_text).
std::map<std::string, std::string> to_kv(const SimulationConfig& cfg);
std::string to_text(const SimulationConfig& cfg);

// single-arm | three-arm | rough.
SimulationConfig preset(const std::string& name);

// Loads the material named by cfg.material (preset or file) into cfg.prony.
void resolve_material(SimulationConfig& cfg);

// Velocity list from `velocities` or the log-spaced generator.
std::vector<double> velocity_list(const SimulationConfig& cfg);

std::string format_double(double v);

} // namespace hfric::sim
