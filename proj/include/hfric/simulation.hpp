#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hfric/assembly.hpp"
#include "hfric/condensed.hpp"
#include "hfric/config.hpp"
#include "hfric/mpjr.hpp"
#include "hfric/profile.hpp"
#include "hfric/viscoelastic.hpp"

namespace hfric::sim {

// Everything that is fixed for a configuration and shared read-only between
// the runs of a sweep.
struct Model {
  SimulationConfig cfg;
  fem::BulkModel bulk;
  fem::UnitSystem unit;
  std::shared_ptr<const fem::TopSolver> solver;
  std::vector<int> top_dofs;
  mpjr::InterfaceLayer layer;  // template, copied per run
  std::shared_ptr<const mpjr::RigidSurface> surface;
  std::shared_ptr<const profile::Profile> profile;  // file profiles only
  Eigen::VectorXd f_unit;  // bottom load for p = 1 MPa
  double eps_n = 0.0;      // MPa/mm
  double y2 = 0.0;         // mm, vertical placement of the profile
  double x_origin = 0.0;   // mm, profile abscissa under the skid's x = 0 at rest
  double feature = 0.0;    // mm, b/m_x (sine) or dx_mean (file)
  double advance = 0.0;    // mm per Phase II step
};

// Loads the profile and material, builds mesh, stiffness and solver.
// Resolves b, h, m_x defaults. Throws InputError.
Model build_model(const SimulationConfig& cfg);

// Penalty parameter for the preset names or an explicit value.
double penalty_value(const SimulationConfig& cfg);

// Rule used by T1 = auto: balance at the largest excited frequency, 2 pi v_max
// / lambda_min, with lambda_min = lambda (sine) or 2 dx_mean (file).
double auto_t1(const material::PronySeries& m, double v_max, double lambda_min);
double resolve_t1(const Model& model, const std::vector<double>& velocities);

// One time-series row.
struct StepRecord {
  int step = 0;
  double t = 0.0;
  double y1 = 0.0;
  double P = 0.0;
  double Q = 0.0;
  double mu = 0.0;
  double v_inst = 0.0;
  double dissipated = 0.0;  // accumulated bulk dissipation, mJ/mm
  double contact_fraction = 0.0;
  double max_penetration = 0.0;
  int iterations = 0;
};

// Mutable state of one run.
struct RunState {
  fem::ViscoState visco;
  Eigen::VectorXd u;      // equation-space displacement
  Eigen::VectorXd u_top;  // top vertical displacements
  mpjr::InterfaceLayer layer;
  mpjr::ContactState contact;
  fem::StepWorkspace work;
  double t = 0.0;
  double dissipated = 0.0;
  int step = 0;
};

RunState initial_state(const Model& model);

// Advances `st` to t_new under bottom pressure p with the profile at `y`.
StepRecord advance_step(const Model& model, RunState& st, double t_new, double p,
                        const mpjr::MotionSample& y);

struct Phase1Result {
  RunState state;
  std::vector<StepRecord> series;
  double T1 = 0.0;
  double P_end = 0.0;
  double approach = 0.0;  // mm, mean top minus mean bottom vertical displacement (> 0 compressed)
  double du_harmonic = 0.0;  // mm, first-harmonic amplitude of the top displacement (sine)
  double dp_harmonic = 0.0;  // MPa, first-harmonic amplitude of the contact pressure (sine)
};

// Linear pressure ramp 0 -> p0 over t_s1 steps of T1 / t_s1, profile at rest.
Phase1Result run_phase1(const Model& model, double T1);

struct Window {
  int first = 0;  // index into series, inclusive
  int last = 0;   // inclusive
  double t_a = 0.0;
  double t_b = 0.0;
};

struct EnergyAudit {
  double W_ext = 0.0;   // mJ/mm, integral of Q v over the window
  double E_diss = 0.0;  // mJ/mm, increase of bulk dissipation over the window
  double gap = 0.0;
  bool elastic = false;  // both vanish; gap reported as 0
};

struct FrictionResult {
  double v = 0.0;
  double T1 = 0.0;
  double dt = 0.0;
  int ramp_steps = 0;
  int plateau_steps = 0;
  std::vector<StepRecord> series;  // Phase II only
  Window window;
  double mu_avg = 0.0;
  double contact_fraction_mean = 0.0;
  EnergyAudit audit;
  std::string error;  // non-empty when the run failed
  std::vector<std::string> warnings;
  RunState final_state;
};

// Ramp of length T1 then plateau at v. A failure in the contact loop or on
// the profile edge is rethrown.
FrictionResult run_phase2(const Model& model, const Phase1Result& phase1, double v);

// Discards the first lambda (sine) or b (file) of plateau travel.
// `plateau_begin` is the first plateau row in `series`. Throws WindowTooShort.
Window steady_window(const std::vector<StepRecord>& series, int plateau_begin, double advance,
                     double discard, double min_length);

double window_mean_mu(const std::vector<StepRecord>& series, const Window& w);

EnergyAudit energy_audit(const std::vector<StepRecord>& series, const Window& w);

// Closed form for the sinusoid with a single arm:
//   pi E1 a^2 w tau / (E_inst u0 lambda (1 + w^2 tau^2)), w = 2 pi v / lambda
double analytic_mu_sine(double E1, double E_inst, double a, double u0, double lambda, double tau,
                        double v);

// Far-field approach for the closed form, from the end of Phase I: the
// apparent modulus E_ref = p0 h C / approach with C = (1+nu)(1-2nu)/(1-nu),
// the equivalent column length l = E_ref du / dp from the first harmonics of
// the top displacement and the contact pressure, and u0 = p0 l / E_inst.
struct WinklerMapping {
  double E_ref = 0.0;
  double l_eq = 0.0;
  double u0 = 0.0;
};
WinklerMapping winkler_u0(const Model& model, const Phase1Result& phase1);

} // namespace hfric::sim
