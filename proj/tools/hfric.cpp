// hfric: roughness reports, material tables, benchmark and rough-profile
// friction sweeps.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "hfric/config.hpp"
#include "hfric/errors.hpp"
#include "hfric/material.hpp"
#include "hfric/output.hpp"
#include "hfric/profile.hpp"
#include "hfric/roughness.hpp"
#include "hfric/simulation.hpp"
#include "hfric/sweep.hpp"
#include "hfric/synthetic.hpp"

namespace fs = std::filesystem;
using namespace hfric;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<int> int_list(const std::string& s, const char* what) {
  std::vector<int> v;
  for (const auto& t : split(s)) {
    try {
      std::size_t used = 0;
      const int x = std::stoi(t, &used);
      if (used != t.size() || x < 1) throw std::invalid_argument(t);
      v.push_back(x);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": expected positive integers, got '" + s + "'");
    }
  }
  return v;
}

bool is_count(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

// Options shared by the simulation commands.
struct SimOptions {
  std::string config_file;
  std::vector<std::string> sets;
  std::string velocities;
  std::string out_dir;
  std::string penalty, solver, T1, boundary;
  double p0 = -1, v_center = -1, L = -1, lambda = -1, a = -1, b = -1, h = -1;
  int v_count = -1, jobs = -1, t_s1 = -1, n_levels = -2;
  double n_lambda = -1;
  bool dump_fields = false, contact_trace = false, no_plots = false;
};

void add_sim_options(CLI::App* app, SimOptions& o) {
  app->add_option("--config", o.config_file, "key = value config file")->check(CLI::ExistingFile);
  app->add_option("--set", o.sets, "override one config key, key=value (repeatable)");
  app->add_option("--velocities", o.velocities,
                  "mm/s list (e.g. 10,100.0) or a bare integer N for N log-spaced values");
  app->add_option("--v-center", o.v_center, "generator centre, mm/s");
  app->add_option("--v-count", o.v_count, "generator point count");
  app->add_option("--p0", o.p0, "bottom pressure, MPa");
  app->add_option("--T1", o.T1, "Phase I duration in s, or auto");
  app->add_option("--t-s1", o.t_s1, "Phase I steps");
  app->add_option("--L", o.L, "plateau travel on a profile file, mm");
  app->add_option("--n-lambda", o.n_lambda, "plateau travel in wavelengths (sine)");
  app->add_option("--lambda", o.lambda, "sine wavelength, mm");
  app->add_option("--a", o.a, "sine amplitude, mm");
  app->add_option("--width", o.b, "skid width b, mm");
  app->add_option("--height", o.h, "skid height h, mm");
  app->add_option("--n-levels", o.n_levels, "mesh coarsening levels (-1 = auto)");
  app->add_option("--boundary", o.boundary, "periodic | free_sides");
  app->add_option("--penalty", o.penalty, "paper_text | paper_fig9 | value in MPa/mm");
  app->add_option("--solver", o.solver, "condensed | full");
  app->add_option("--jobs", o.jobs, "parallel runs (default: all cores)");
  app->add_option("--out-dir", o.out_dir, "output directory");
  app->add_flag("--dump-fields", o.dump_fields, "write mesh CSV and final-state VTK per velocity");
  app->add_flag("--contact-trace", o.contact_trace, "write the final contact trace per velocity");
  app->add_flag("--no-plots", o.no_plots, "skip SVG plots");
  app->footer(sim::keys_help());
}

void apply_sim_options(sim::SimulationConfig& c, const SimOptions& o) {
  if (!o.config_file.empty()) sim::apply_file(c, o.config_file);
  auto set = [&](const char* k, const std::string& v) { sim::set_key(c, k, v); };
  auto num = [](double v) { return sim::format_double(v); };
  if (!o.velocities.empty()) {
    if (is_count(o.velocities)) {
      c.velocities.clear();
      set("v_count", o.velocities);
    } else {
      set("velocities", o.velocities);
    }
  }
  if (o.v_center >= 0) {
    c.velocities.clear();
    set("v_center", num(o.v_center));
  }
  if (o.v_count >= 0) {
    c.velocities.clear();
    set("v_count", std::to_string(o.v_count));
  }
  if (o.p0 >= 0) set("p0", num(o.p0));
  if (!o.T1.empty()) set("T1", o.T1);
  if (o.t_s1 >= 0) set("t_s1", std::to_string(o.t_s1));
  if (o.L >= 0) set("L", num(o.L));
  if (o.n_lambda >= 0) set("n_lambda", num(o.n_lambda));
  if (o.lambda >= 0) set("lambda", num(o.lambda));
  if (o.a >= 0) set("a", num(o.a));
  if (o.b >= 0) set("b", num(o.b));
  if (o.h >= 0) set("h", num(o.h));
  if (o.n_levels >= -1) set("n_levels", std::to_string(o.n_levels));
  if (!o.boundary.empty()) set("boundary", o.boundary);
  if (!o.penalty.empty()) set("penalty", o.penalty);
  if (!o.solver.empty()) set("solver", o.solver);
  if (o.jobs >= 0) set("jobs", std::to_string(o.jobs));
  if (!o.out_dir.empty()) set("out_dir", o.out_dir);
  if (o.dump_fields) c.dump_fields = true;
  if (o.contact_trace) c.contact_trace = true;
  if (o.no_plots) c.plots = false;
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    sim::set_key(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
}

int jobs_of(const sim::SimulationConfig& c) { return c.jobs > 0 ? c.jobs : omp_get_num_procs(); }

void report_progress(std::size_t, const sim::FrictionResult& r) {
  if (r.error.empty()) {
    std::fprintf(stderr, "  v = %-12.6g mu_avg = %-12.6g energy gap = %.3g\n", r.v, r.mu_avg, r.audit.gap);
  } else {
    std::fprintf(stderr, "  v = %-12.6g FAILED: %s\n", r.v, r.error.c_str());
  }
}

// Runs one sweep and writes its files into cfg.out_dir. Returns the failure count.
int sweep_to_dir(const sim::SimulationConfig& cfg, io::Manifest& man, sim::SweepResult* keep = nullptr,
                 sim::Model* model_out = nullptr) {
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  sim::Model model = sim::build_model(cfg);
  const auto velocities = sim::velocity_list(model.cfg);
  std::fprintf(stderr, "sweep: %zu velocities, m_x = %d, b = %g mm, h = %g mm, eps_n = %g MPa/mm\n",
               velocities.size(), model.cfg.m_x, model.cfg.b, model.cfg.h, model.eps_n);
  const bool states = cfg.dump_fields || cfg.contact_trace;
  auto res = sim::run_sweep(model, velocities, jobs_of(cfg), states, report_progress);
  std::fprintf(stderr, "  T1 = %.9g s, Phase I P = %.9g N/mm\n", res.T1, res.phase1.P_end);

  int failures = 0;
  for (const auto& r : res.runs) {
    if (!r.error.empty()) {
      ++failures;
      man.add_failure("v = " + io::fmt(r.v) + ": " + r.error);
      continue;
    }
    const fs::path ts = dir / io::timeseries_name(r.v);
    io::write_timeseries(ts, r.series);
    man.add_output(ts);
    for (const auto& w : r.warnings) man.add_failure("warning, v = " + io::fmt(r.v) + ": " + w);
    char tag[40];
    std::snprintf(tag, sizeof tag, "%.6g", r.v);
    if (cfg.contact_trace) {
      const fs::path p = dir / (std::string("contact_") + tag + ".csv");
      io::write_contact_trace(p, r.final_state.layer);
      man.add_output(p);
    }
    if (cfg.dump_fields) {
      const fs::path p = dir / (std::string("fields_") + tag + ".vtk");
      io::write_vtk(p, model, r.final_state);
      man.add_output(p);
    }
  }
  if (cfg.dump_fields) {
    fem::write_mesh_csv(model.bulk.mesh, dir / "mesh_nodes.csv", dir / "mesh_quads.csv");
    man.add_output(dir / "mesh_nodes.csv");
    man.add_output(dir / "mesh_quads.csv");
  }
  const fs::path sw = dir / "sweep.csv";
  io::write_sweep(sw, res.runs);
  man.add_output(sw);

  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : res.runs) {
    nlohmann::json j = {{"v", r.v}, {"mu_avg", r.mu_avg}, {"dt", r.dt}, {"ramp_steps", r.ramp_steps},
                        {"plateau_steps", r.plateau_steps}, {"t_a", r.window.t_a}, {"t_b", r.window.t_b},
                        {"W_ext", r.audit.W_ext}, {"E_diss", r.audit.E_diss}, {"energy_gap", r.audit.gap},
                        {"elastic", r.audit.elastic}};
    if (!r.error.empty()) j["error"] = r.error;
    runs.push_back(j);
  }
  man.add_note("T1_s", res.T1);
  man.add_note("phase1_P_Npmm", res.phase1.P_end);
  man.add_note("eps_n_MPa_per_mm", model.eps_n);
  man.add_note("m_x", model.cfg.m_x);
  man.add_note("runs", runs);
  if (keep) *keep = std::move(res);
  if (model_out) *model_out = std::move(model);
  return failures;
}

void plot_mu_t(const fs::path& path, const sim::FrictionResult& r) {
  io::Plot p;
  char t[96];
  std::snprintf(t, sizeof t, "Instant friction coefficient, v = %.4g mm/s", r.v);
  p.title = t;
  p.xlabel = "t [s]";
  p.ylabel = "mu = Q/P";
  io::Curve c{"mu(t)", {}, {}, false, false};
  for (const auto& s : r.series) {
    c.x.push_back(s.t);
    c.y.push_back(s.mu);
  }
  io::Curve m{"mean over window", {r.window.t_a, r.window.t_b}, {r.mu_avg, r.mu_avg}, true, false};
  p.curves = {c, m};
  io::write_svg(path, p);
}

// -------------------------------------------------------------------------

struct RoughnessArgs {
  std::string file;
  int sections = 5;
  double height_disc = 0.10, spacing_disc = 0.01, s_filter = 0.0;
  bool csv = false;
  std::string json_out;
};

int cmd_roughness(const RoughnessArgs& a) {
  const auto raw = profile::load_profile(a.file, a.csv ? profile::Format::csv : profile::Format::xy_text);
  const profile::Profile p =
      a.s_filter > 0.0 ? profile::primary_profile(raw, a.s_filter) : profile::rebase(profile::level(raw));
  const auto rep = roughness::roughness_report(p, a.sections, {a.height_disc, a.spacing_disc});
  std::cout << roughness::to_table(rep);
  const fs::path out = a.json_out.empty() ? fs::path("roughness.json") : fs::path(a.json_out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream js(out);
  if (!js) throw InputError("cannot write '" + out.string() + "'");
  auto j = roughness::to_json(rep);
  j["source"] = a.file;
  j["s_filter_mm"] = a.s_filter;
  js << j.dump(2) << '\n';
  return kExitOk;
}

struct MaterialArgs {
  std::string file, preset = "single-arm", fit, out;
  bool table = false, t1 = false;
  double omega = 0.0;
  int arms = 3, points = 61;
  double tmin = 1e-12, tmax = 1e2, wmin = 1e-2, wmax = 1e12;
};

std::vector<material::ComplexModulusSample> load_samples(const std::string& path) {
  // Reuses the two-column reader's tokenizer rules: omega, storage, loss.
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::vector<material::ComplexModulusSample> s;
  std::string line;
  std::size_t n = 0;
  bool header_ok = true;
  while (std::getline(in, line)) {
    ++n;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    for (char& c : line) if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream ls(line);
    double w, e1, e2;
    if (!(ls >> w)) {
      if (line.find_first_not_of(' ') == std::string::npos) continue;
      if (header_ok) {
        header_ok = false;
        continue;
      }
      throw ParseError(path, n, "expected omega, storage, loss");
    }
    if (!(ls >> e1 >> e2)) throw ParseError(path, n, "expected omega, storage, loss");
    header_ok = false;
    s.push_back({w, e1, e2});
  }
  return s;
}

int cmd_material(const MaterialArgs& a) {
  if (!a.fit.empty()) {
    const auto samples = load_samples(a.fit);
    const auto r = material::fit_prony(samples, a.arms);
    const fs::path out = a.out.empty() ? fs::path("fitted.mat") : fs::path(a.out);
    std::ofstream f(out);
    if (!f) throw InputError("cannot write '" + out.string() + "'");
    material::write_material(f, r.series);
    std::printf("fitted %zu arms to %zu samples -> %s\nresidual = %.17g\n", r.series.arms.size(),
                samples.size(), out.string().c_str(), r.residual);
    return kExitOk;
  }
  material::PronySeries m;
  if (!a.file.empty()) m = material::load_material(a.file);
  else if (a.preset == "single-arm") m = material::single_arm();
  else if (a.preset == "three-arm") m = material::three_arm();
  else throw ConfigError("unknown material preset '" + a.preset + "'");
  material::validate(m);

  if (a.t1) {
    if (!(a.omega > 0.0)) throw ConfigError("--t1 needs --omega > 0");
    const double t1 = material::optimal_t1(m, a.omega);
    std::printf("T1 = %.17g s\nresidual = %.3e MPa\n", t1, material::t1_residual(m, a.omega, t1));
  }
  if (a.table || !a.t1) {
    const fs::path out = a.out.empty() ? fs::path() : fs::path(a.out);
    std::ofstream f;
    std::ostream* os = &std::cout;
    if (!out.empty()) {
      f.open(out);
      if (!f) throw InputError("cannot write '" + out.string() + "'");
      os = &f;
    }
    *os << "t_s,E_t_MPa,omega_radps,storage_MPa,loss_MPa\n";
    *os << "0," << io::fmt(material::relaxation_modulus(m, 0.0)) << ",0,"
        << io::fmt(material::complex_modulus(m, 0.0).storage) << ",0\n";
    for (int i = 0; i < a.points; ++i) {
      const double s = a.points > 1 ? double(i) / (a.points - 1) : 0.0;
      const double t = a.tmin * std::pow(a.tmax / a.tmin, s);
      const double w = a.wmin * std::pow(a.wmax / a.wmin, s);
      const auto c = material::complex_modulus(m, w);
      *os << io::fmt(t) << ',' << io::fmt(material::relaxation_modulus(m, t)) << ',' << io::fmt(w) << ','
          << io::fmt(c.storage) << ',' << io::fmt(c.loss) << '\n';
    }
  }
  return kExitOk;
}

struct BenchArgs {
  std::string preset = "single-arm";
  std::string mx;
  SimOptions sim;
};

int cmd_benchmark(const BenchArgs& a, const std::vector<std::string>& argv) {
  const auto t0 = Clock::now();
  sim::SimulationConfig cfg = sim::preset(a.preset);
  apply_sim_options(cfg, a.sim);
  if (cfg.profile != sim::ProfileKind::sine) throw ConfigError("benchmark runs on the sine profile");
  const fs::path dir = cfg.out_dir;
  io::Manifest man(dir / "run.json", "benchmark", argv);
  man.set_config(cfg);
  if (!a.sim.config_file.empty()) man.add_input(a.sim.config_file);
  if (cfg.material != "single-arm" && cfg.material != "three-arm") man.add_input(cfg.material);
  man.begin();

  int failures = 0;
  if (!a.mx.empty()) {
    const auto list = int_list(a.mx, "--mx");
    std::ofstream conv;
    fs::create_directories(dir);
    conv.open(dir / "convergence.csv");
    conv << "m_x,v_mmps,mu_avg,energy_gap\n";
    io::Plot plot;
    plot.title = "Mesh convergence of the averaged friction coefficient";
    plot.xlabel = "v [mm/s]";
    plot.ylabel = "mu_avg";
    plot.log_x = true;
    for (int m : list) {
      sim::SimulationConfig c = cfg;
      c.m_x = m;
      c.n_levels = -1;
      c.out_dir = (dir / ("mx_" + std::to_string(m))).string();
      sim::set_key(c, "n_levels", "-1");
      sim::SweepResult res;
      failures += sweep_to_dir(c, man, &res);
      io::Curve cv{"m_x = " + std::to_string(m), {}, {}, false, true};
      for (const auto& r : res.runs) {
        conv << m << ',' << io::fmt(r.v) << ',' << (r.error.empty() ? io::fmt(r.mu_avg) : "nan") << ','
             << (r.error.empty() ? io::fmt(r.audit.gap) : "nan") << '\n';
        if (r.error.empty()) {
          cv.x.push_back(r.v);
          cv.y.push_back(r.mu_avg);
        }
      }
      plot.curves.push_back(cv);
    }
    conv.close();
    man.add_output(dir / "convergence.csv");
    if (cfg.plots) {
      io::write_svg(dir / "convergence.svg", plot);
      man.add_output(dir / "convergence.svg");
    }
  } else {
    sim::SweepResult res;
    sim::Model model;
    failures = sweep_to_dir(cfg, man, &res, &model);
    // Closed-form overlay for single-arm materials.
    const bool one_arm = model.cfg.prony.arms.size() == 1;
    io::Curve sim_c{"simulation", {}, {}, false, true}, eq_c{"closed form", {}, {}, true, false};
    for (const auto& r : res.runs) {
      if (!r.error.empty()) continue;
      sim_c.x.push_back(r.v);
      sim_c.y.push_back(r.mu_avg);
    }
    if (one_arm) {
      const auto w = sim::winkler_u0(model, res.phase1);
      const auto& arm = model.cfg.prony.arms[0];
      std::ofstream an(dir / "analytic.csv");
      an << "v_mmps,mu_closed_form\n";
      const auto vs = sim::velocity_list(model.cfg);
      const double lo = *std::min_element(vs.begin(), vs.end());
      const double hi = *std::max_element(vs.begin(), vs.end());
      for (int i = 0; i <= 100; ++i) {
        const double v = lo * std::pow(hi / lo, i / 100.0);
        const double mu = sim::analytic_mu_sine(arm.E, model.cfg.prony.E_inst(), model.cfg.a, w.u0,
                                                model.cfg.lambda, arm.tau, v);
        an << io::fmt(v) << ',' << io::fmt(mu) << '\n';
        eq_c.x.push_back(v);
        eq_c.y.push_back(mu);
      }
      an.close();
      man.add_output(dir / "analytic.csv");
      man.add_note("u0_mapping", {{"E_ref", w.E_ref}, {"l_eq", w.l_eq}, {"u0", w.u0}});
    }
    if (cfg.plots) {
      io::Plot p;
      p.title = "Averaged friction coefficient";
      p.xlabel = "v [mm/s]";
      p.ylabel = "mu_avg";
      p.log_x = true;
      p.curves.push_back(sim_c);
      if (one_arm) p.curves.push_back(eq_c);
      io::write_svg(dir / "mu_v.svg", p);
      man.add_output(dir / "mu_v.svg");
      // mu(t) at the velocity closest to the centre of the list.
      const sim::FrictionResult* best = nullptr;
      const auto vs = sim::velocity_list(model.cfg);
      const double centre = vs[vs.size() / 2];
      for (const auto& r : res.runs) {
        if (r.error.empty() && (!best || std::abs(std::log(r.v / centre)) < std::abs(std::log(best->v / centre)))) {
          best = &r;
        }
      }
      if (best) {
        plot_mu_t(dir / "mu_t.svg", *best);
        man.add_output(dir / "mu_t.svg");
      }
    }
  }
  man.finish(failures ? "partial" : "ok", seconds_since(t0));
  return failures ? kExitNumerical : kExitOk;
}

struct SlideArgs {
  std::string profile, material, rho = "1";
  bool short_run = false, invert = false;
  double s_filter = -1;
  SimOptions sim;
};

int cmd_slide(const SlideArgs& a, const std::vector<std::string>& argv) {
  const auto t0 = Clock::now();
  sim::SimulationConfig base = sim::preset("rough");
  sim::set_key(base, "profile", a.profile);
  if (!a.material.empty()) sim::set_key(base, "material", a.material);
  if (a.s_filter >= 0) sim::set_key(base, "s_filter", sim::format_double(a.s_filter));
  if (a.invert) base.invert_profile = true;
  apply_sim_options(base, a.sim);
  if (base.profile != sim::ProfileKind::file) throw ConfigError("slide needs a profile file");
  if (!fs::exists(base.profile_file)) throw InputError("profile file '" + base.profile_file + "' not found");

  const auto rhos = int_list(a.rho, "--rho");
  const fs::path dir = base.out_dir;
  io::Manifest man(dir / "run.json", "slide", argv);
  man.set_config(base);
  man.add_input(base.profile_file);
  if (!a.sim.config_file.empty()) man.add_input(a.sim.config_file);
  if (base.material != "single-arm" && base.material != "three-arm") man.add_input(base.material);
  man.begin();

  // Several factors share the mesh of the finest one.
  if (rhos.size() > 1 && base.m_x == 0) {
    sim::SimulationConfig c = base;
    c.rho = *std::min_element(rhos.begin(), rhos.end());
    const auto raw = profile::load_profile(c.profile_file);
    auto p = c.s_filter > 0 ? profile::primary_profile(raw, c.s_filter) : profile::rebase(profile::level(raw));
    p = profile::downsample(p, c.rho);
    const double b = c.b > 0 ? c.b : 10.0;
    base.m_x = std::max(32, 1 << static_cast<int>(std::ceil(std::log2(b / p.dx_mean - 1e-9))));
  }

  int failures = 0;
  std::ofstream ds;
  io::Plot plot;
  plot.title = "Averaged friction coefficient";
  plot.xlabel = "v [mm/s]";
  plot.ylabel = "mu_avg";
  plot.log_x = true;
  if (rhos.size() > 1) {
    fs::create_directories(dir);
    ds.open(dir / "downsampling.csv");
    ds << "rho,dx_mean_mm,m_x,v_mmps,mu_avg\n";
  }
  for (int rho : rhos) {
    sim::SimulationConfig c = base;
    c.rho = rho;
    if (rhos.size() > 1) c.out_dir = (dir / ("rho_" + std::to_string(rho))).string();
    if (a.short_run && c.L == 0.0) c.L = 2.0 * (c.b > 0 ? c.b : 10.0);
    sim::SweepResult res;
    sim::Model model;
    failures += sweep_to_dir(c, man, &res, &model);
    io::Curve cv{"rho = " + std::to_string(rho), {}, {}, false, true};
    for (const auto& r : res.runs) {
      if (ds.is_open()) {
        ds << rho << ',' << io::fmt(model.feature) << ',' << model.cfg.m_x << ',' << io::fmt(r.v) << ','
           << (r.error.empty() ? io::fmt(r.mu_avg) : "nan") << '\n';
      }
      if (r.error.empty()) {
        cv.x.push_back(r.v);
        cv.y.push_back(r.mu_avg);
      }
    }
    plot.curves.push_back(cv);
    if (c.plots && !res.runs.empty()) {
      const auto& mid = res.runs[res.runs.size() / 2];
      if (mid.error.empty()) {
        plot_mu_t(fs::path(c.out_dir) / "mu_t.svg", mid);
        man.add_output(fs::path(c.out_dir) / "mu_t.svg");
      }
    }
  }
  if (ds.is_open()) {
    ds.close();
    man.add_output(dir / "downsampling.csv");
  }
  if (base.plots) {
    io::write_svg(dir / "mu_v.svg", plot);
    man.add_output(dir / "mu_v.svg");
  }
  man.finish(failures ? "partial" : "ok", seconds_since(t0));
  return failures ? kExitNumerical : kExitOk;
}

struct SynthArgs {
  std::string kind = "fractal", out = "synthetic.xy";
  synthetic::FractalParams fp;
};

int cmd_synth(const SynthArgs& a) {
  profile::RawProfile raw;
  if (a.kind == "fractal") {
    raw = synthetic::filtered_fractal(a.fp);
  } else if (a.kind == "multisine") {
    raw = synthetic::multi_sine(a.fp.n, a.fp.dx, {{0.2, 4.0, 0.3}, {0.08, 1.3, 1.1}, {0.03, 0.45, 2.0}});
  } else {
    throw ConfigError("--kind expects fractal or multisine");
  }
  profile::write_profile(fs::path(a.out), profile::rebase(raw));
  std::printf("wrote %zu points to %s\n", raw.points.size(), a.out.c_str());
  return kExitOk;
}

int run(int argc, char** argv);

int dispatch(const std::vector<std::string>& args) {
  std::vector<std::string> storage = args;
  std::vector<char*> ptrs;
  for (auto& s : storage) ptrs.push_back(s.data());
  return run(static_cast<int>(ptrs.size()), ptrs.data());
}

int run(int argc, char** argv) {
  std::vector<std::string> full(argv, argv + argc);
  CLI::App app{"Hysteretic friction of a viscoelastic skid on rigid profiles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", io::kVersion);

  RoughnessArgs ra;
  auto* rough = app.add_subcommand("roughness", "roughness parameters of a profile file");
  rough->add_option("file", ra.file, "two-column profile, mm")->required();
  rough->add_option("--sections", ra.sections, "sampling sections for Ppt/Pvt/Pz");
  rough->add_option("--height-disc", ra.height_disc, "element height discrimination, fraction of Pt");
  rough->add_option("--spacing-disc", ra.spacing_disc, "element spacing discrimination, fraction of length");
  rough->add_option("--s-filter", ra.s_filter, "Gaussian S-filter cutoff, mm (0 = off)");
  rough->add_flag("--csv", ra.csv, "file has a header row");
  rough->add_option("--json", ra.json_out, "JSON report path (default roughness.json)");

  MaterialArgs ma;
  auto* mat = app.add_subcommand("material", "relaxation and dynamic modulus tables, T1, Prony fits");
  mat->add_option("--file", ma.file, "material file")->check(CLI::ExistingFile);
  mat->add_option("--preset", ma.preset, "single-arm | three-arm");
  mat->add_flag("--table", ma.table, "E(t), storage and loss moduli over log grids (CSV)");
  mat->add_flag("--t1", ma.t1, "balance-rule Phase I duration at --omega");
  mat->add_option("--omega", ma.omega, "rad/s");
  mat->add_option("--fit", ma.fit, "CSV of omega, storage, loss to fit")->check(CLI::ExistingFile);
  mat->add_option("--arms", ma.arms, "arms for --fit");
  mat->add_option("--out", ma.out, "output file");
  mat->add_option("--points", ma.points, "table rows");
  mat->add_option("--tmin", ma.tmin, "s");
  mat->add_option("--tmax", ma.tmax, "s");
  mat->add_option("--wmin", ma.wmin, "rad/s");
  mat->add_option("--wmax", ma.wmax, "rad/s");

  BenchArgs ba;
  auto* bench = app.add_subcommand("benchmark", "sinusoid benchmark sweep");
  bench->add_option("--preset", ba.preset, "single-arm | three-arm");
  bench->add_option("--mx", ba.mx, "comma-separated m_x list for a convergence study");
  add_sim_options(bench, ba.sim);

  SlideArgs sa;
  auto* slide = app.add_subcommand("slide", "sliding sweep on a measured or synthetic profile");
  slide->add_option("profile", sa.profile, "two-column profile, mm")->required();
  slide->add_option("--material", sa.material, "single-arm | three-arm | material file");
  slide->add_option("--rho", sa.rho, "down-sampling factor or comma-separated list");
  slide->add_option("--s-filter", sa.s_filter, "Gaussian S-filter cutoff, mm");
  slide->add_flag("--short", sa.short_run, "plateau travel 2 b (one skid length averaged)");
  slide->add_flag("--invert", sa.invert, "flip profile elevations");
  add_sim_options(slide, sa.sim);

  std::string manifest, rerun_out;
  auto* rerun = app.add_subcommand("rerun", "repeat the run recorded in a run.json");
  rerun->add_option("manifest", manifest, "run.json")->required();
  rerun->add_option("--out-dir", rerun_out, "write into another directory");

  SynthArgs ya;
  auto* synth = app.add_subcommand("synth", "write a deterministic synthetic profile");
  synth->add_option("--kind", ya.kind, "fractal | multisine");
  synth->add_option("--n", ya.fp.n, "points");
  synth->add_option("--dx", ya.fp.dx, "spacing, mm");
  synth->add_option("--rms", ya.fp.rms, "rms height, mm (fractal)");
  synth->add_option("--lambda-min", ya.fp.lambda_min, "shortest wavelength, mm (fractal)");
  synth->add_option("--lambda-max", ya.fp.lambda_max, "longest wavelength, mm (fractal)");
  synth->add_option("--out", ya.out, "output file");

  // Every subcommand documents the full key table.
  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; }))
    if (sub->get_footer().empty()) sub->footer(sim::keys_help());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (*rough) return cmd_roughness(ra);
  if (*mat) return cmd_material(ma);
  if (*bench) return cmd_benchmark(ba, full);
  if (*slide) return cmd_slide(sa, full);
  if (*synth) return cmd_synth(ya);
  if (*rerun) {
    auto args = io::manifest_argv(manifest);
    if (args.size() < 2) throw InputError("manifest '" + manifest + "' has no command line");
    if (!rerun_out.empty()) {
      for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--out-dir" && i + 1 < args.size()) args.erase(args.begin() + i, args.begin() + i + 2);
        else if (args[i].rfind("--out-dir=", 0) == 0) args.erase(args.begin() + i);
        else ++i;
      }
      args.push_back("--out-dir");
      args.push_back(rerun_out);
    }
    return dispatch(args);
  }
  return kExitInput;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hfric::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
