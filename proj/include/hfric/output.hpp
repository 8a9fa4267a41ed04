#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hfric/simulation.hpp"
#include "hfric/sweep.hpp"

namespace hfric::io {

namespace fs = std::filesystem;

inline constexpr const char* kVersion = "0.1.0";

// "timeseries_100.csv" for v = 100 mm/s (%.6g).
std::string timeseries_name(double v);

// step, t_s, y1_mm, P_Npmm, Q_Npmm, mu
void write_timeseries(const fs::path& path, const std::vector<sim::StepRecord>& series);
// v_mmps, mu_avg, contact_fraction_mean, energy_gap; failed runs keep the
// velocity with "nan" entries.
void write_sweep(const fs::path& path, const std::vector<sim::FrictionResult>& runs);
// Per-point trace: x, g_n, p_n, slope, active.
void write_contact_trace(const fs::path& path, const mpjr::InterfaceLayer& layer);
// Legacy VTK unstructured grid with nodal displacement and per-element
// accumulated dissipation density.
void write_vtk(const fs::path& path, const sim::Model& model, const sim::RunState& state);

struct Curve {
  std::string name;
  std::vector<double> x, y;
  bool dashed = false;
  bool markers = false;
};

struct Plot {
  std::string title, xlabel, ylabel;
  bool log_x = false;
  std::vector<Curve> curves;
};

void write_svg(const fs::path& path, const Plot& plot);

// 64-bit FNV-1a of the file bytes, 16 hex digits.
std::string fnv1a_file(const fs::path& path);
std::string fnv1a(const std::string& bytes);

// Run manifest. `begin` writes it with status "running"; `finish` rewrites it
// with outputs, timings and status.
class Manifest {
public:
  Manifest(fs::path path, std::string command, std::vector<std::string> argv);
  void set_config(const sim::SimulationConfig& cfg);
  void add_input(const fs::path& p);
  void add_output(const fs::path& p);
  void add_failure(const std::string& what);
  void add_note(const std::string& key, nlohmann::json value);
  void begin();
  void finish(const std::string& status, double seconds);
  const nlohmann::json& json() const { return j_; }

private:
  void flush() const;
  fs::path path_;
  nlohmann::json j_;
};

// Reads argv back from a manifest.
std::vector<std::string> manifest_argv(const fs::path& path);

std::string fmt(double v);  // %.17g

} // namespace hfric::io
