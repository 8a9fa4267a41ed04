#include "hfric/simulation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "hfric/errors.hpp"
#include "hfric/kernels.hpp"
#include "hfric/material.hpp"
#include "hfric/spline.hpp"

namespace hfric::sim {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int next_pow2(double x) {
  const auto n = static_cast<unsigned>(std::max(1.0, std::ceil(x - 1e-9)));
  return static_cast<int>(std::bit_ceil(n));
}

// Trapezoid-weighted mean of the vertical displacement along a node row.
double row_mean_u2(const fem::BulkModel& bulk, const std::vector<int>& nodes, const Eigen::VectorXd& u) {
  double s = 0.0, w = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const int a = nodes[i], b = nodes[i + 1];
    const double dx = bulk.mesh.nodes[b].x1 - bulk.mesh.nodes[a].x1;
    const int da = bulk.dofs.dof(a, 1), db = bulk.dofs.dof(b, 1);
    const double ua = da >= 0 ? u[da] : bulk.dofs.prescribed_value[a][1];
    const double ub = db >= 0 ? u[db] : bulk.dofs.prescribed_value[b][1];
    s += 0.5 * dx * (ua + ub);
    w += dx;
  }
  return w > 0.0 ? s / w : 0.0;
}

} // namespace

double penalty_value(const SimulationConfig& cfg) {
  const double Ei = cfg.prony.E_inst();
  if (cfg.penalty == "paper_text") return 100.0 * Ei / cfg.h;
  if (cfg.penalty == "paper_fig9") return 10.0 * Ei / cfg.h;
  return std::stod(cfg.penalty);
}

Model build_model(const SimulationConfig& in) {
  Model M;
  M.cfg = in;
  SimulationConfig& c = M.cfg;
  material::validate(c.prony);

  if (c.profile == ProfileKind::sine) {
    if (c.b == 0.0) c.b = c.lambda;
    if (c.h == 0.0) c.h = 0.75 * c.b;
    if (c.m_x == 0) c.m_x = 128;
    if (c.boundary == fem::Boundary::periodic) {
      const double periods = c.b / c.lambda;
      if (std::abs(periods - std::round(periods)) > 1e-9 * std::max(1.0, periods)) {
        throw ConfigError("periodic sides need b to be a whole number of wavelengths");
      }
    }
    M.surface = std::make_shared<mpjr::SineSurface>(c.lambda, c.a);
    M.feature = c.b / c.m_x;
    M.x_origin = 0.0;
  } else {
    if (c.profile_file.empty()) throw ConfigError("profile file not set");
    const auto raw = profile::load_profile(c.profile_file);
    profile::Profile p = c.s_filter > 0.0 ? profile::primary_profile(raw, c.s_filter)
                                          : profile::rebase(profile::level(raw));
    p = profile::downsample(p, c.rho);
    if (c.b == 0.0) c.b = 10.0;
    if (c.h == 0.0) c.h = 0.75 * c.b;
    if (c.m_x == 0) c.m_x = std::max(32, next_pow2(c.b / p.dx_mean));
    if (p.length() <= c.b) {
      throw ProfileExhausted("profile (" + std::to_string(p.length()) + " mm) is not longer than the skid");
    }
    M.surface = std::make_shared<mpjr::SplineSurface>(profile::build_spline(p),
                                                      c.invert_profile ? -1.0 : 1.0);
    M.feature = p.dx_mean;
    M.x_origin = p.length() - c.b;
    M.profile = std::make_shared<profile::Profile>(std::move(p));
  }
  if (c.n_levels < 0) c.n_levels = fem::default_levels(c.m_x);
  M.advance = c.advance_fraction * M.feature;
  M.eps_n = penalty_value(c);
  if (!(M.eps_n > 0.0)) throw ConfigError("penalty must be positive");

  fem::Mesh mesh = fem::build_block_mesh(c.b, c.h, c.m_x, c.n_levels);
  const auto supports = fem::skid_supports(mesh);
  M.bulk = fem::make_bulk_model(std::move(mesh), c.boundary, supports, c.prony.nu);
  M.unit = fem::assemble_unit(M.bulk);
  M.top_dofs = fem::top_vertical_dofs(M.bulk.mesh, M.bulk.dofs);
  if (c.solver == SolverKind::condensed) {
    M.solver = std::make_shared<fem::CondensedSolver>(M.unit.K, M.top_dofs);
  } else {
    M.solver = std::make_shared<fem::FullSolver>(M.unit.K, M.top_dofs);
  }
  M.layer = mpjr::make_interface(M.bulk.mesh, M.bulk.dofs, M.top_dofs);
  M.f_unit = fem::bottom_pressure_load(M.bulk, 1.0);
  // The profile is lifted until its lowest value at a contact point touches
  // the undeformed top, so an unloaded skid stays exactly at rest.
  double lowest = std::numeric_limits<double>::infinity();
  for (double x : M.layer.x) lowest = std::min(lowest, M.surface->z(x + M.x_origin));
  M.y2 = -lowest;
  return M;
}

double auto_t1(const material::PronySeries& m, double v_max, double lambda_min) {
  return material::optimal_t1(m, kTwoPi * v_max / lambda_min);
}

double resolve_t1(const Model& model, const std::vector<double>& velocities) {
  const auto& c = model.cfg;
  if (!c.T1_auto) return c.T1;
  if (velocities.empty()) throw ConfigError("T1 = auto needs at least one velocity");
  const double v_max = *std::max_element(velocities.begin(), velocities.end());
  const double lambda_min = c.profile == ProfileKind::sine ? c.lambda : 2.0 * model.feature;
  return auto_t1(c.prony, v_max, lambda_min);
}

RunState initial_state(const Model& model) {
  RunState st;
  st.visco = fem::ViscoState(model.bulk.n_points(), model.cfg.prony.arms.size());
  st.u = Eigen::VectorXd::Zero(model.bulk.dofs.n_dofs);
  st.u_top = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.top_dofs.size()));
  st.layer = model.layer;
  return st;
}

StepRecord advance_step(const Model& model, RunState& st, double t_new, double p,
                        const mpjr::MotionSample& y) {
  const auto& m = model.cfg.prony;
  const double dt = t_new - st.t;
  if (!(dt > 0.0)) throw NumericalError("time step must be positive");
  const auto coef = fem::step_coefficients(m, dt);

  Eigen::VectorXd f = p * model.f_unit;
  if (!m.arms.empty()) f -= kernels::history_forces(model.bulk, m, coef, st.visco);
  if (model.unit.f_prescribed.size() == f.size()) f += coef.E_tangent * model.unit.f_prescribed;
  model.solver->set_step(st.work, coef.E_tangent, f);

  mpjr::evaluate_profile(st.layer, *model.surface, y, model.x_origin);
  mpjr::corrected_gap(st.layer, st.u_top);
  st.u_top = mpjr::solve_contact(*model.solver, st.work, st.layer, model.eps_n, st.contact,
                                 model.cfg.max_contact_iter);
  st.u = model.solver->displacement(st.work, st.u_top);
  st.dissipated += kernels::update_state(model.bulk, m, coef, st.visco, st.u);
  st.t = t_new;
  ++st.step;

  StepRecord r;
  r.step = st.step;
  r.t = t_new;
  r.y1 = y.y1;
  r.P = st.contact.P;
  r.Q = st.contact.Q;
  r.mu = r.P > 0.0 ? r.Q / r.P : 0.0;
  r.v_inst = y.v_inst;
  r.dissipated = st.dissipated;
  r.contact_fraction = st.contact.contact_fraction;
  r.max_penetration = st.contact.max_penetration;
  r.iterations = st.contact.iterations;
  return r;
}

Phase1Result run_phase1(const Model& model, double T1) {
  const auto& c = model.cfg;
  if (!(T1 > 0.0)) throw ConfigError("T1 must be positive");
  Phase1Result out;
  out.T1 = T1;
  out.state = initial_state(model);
  const mpjr::MotionLaw law{0.0, T1, T1, model.y2};
  for (int k = 1; k <= c.t_s1; ++k) {
    const double t = T1 * k / c.t_s1;
    const double p = c.p0 * static_cast<double>(k) / c.t_s1;
    out.series.push_back(advance_step(model, out.state, t, p, mpjr::motion_law_eval(law, t)));
  }
  out.P_end = out.state.contact.P;

  const auto& mesh = model.bulk.mesh;
  out.approach = row_mean_u2(model.bulk, mesh.bottom_nodes, out.state.u) -
                 row_mean_u2(model.bulk, mesh.top_nodes, out.state.u);

  if (c.profile == ProfileKind::sine) {
    const double k = kTwoPi / c.lambda;
    double su = 0.0, w = 0.0;
    for (std::size_t i = 0; i + 1 < mesh.top_nodes.size(); ++i) {
      const int a = mesh.top_nodes[i], b = mesh.top_nodes[i + 1];
      const double xa = mesh.nodes[a].x1, xb = mesh.nodes[b].x1;
      const double ua = out.state.u[model.bulk.dofs.dof(a, 1)];
      const double ub = out.state.u[model.bulk.dofs.dof(b, 1)];
      su += 0.5 * (xb - xa) * (ua * std::cos(k * xa) + ub * std::cos(k * xb));
      w += xb - xa;
    }
    double sp = 0.0;
    const auto& L = out.state.layer;
    for (std::size_t q = 0; q < L.size(); ++q) sp += L.weight[q] * L.pressure[q] * std::cos(k * L.x[q]);
    out.du_harmonic = std::abs(2.0 * su / w);
    out.dp_harmonic = std::abs(2.0 * sp / w);
  }
  return out;
}

Window steady_window(const std::vector<StepRecord>& series, int plateau_begin, double advance,
                     double discard, double period) {
  const int n_plateau = static_cast<int>(series.size()) - plateau_begin;
  const int n_discard = static_cast<int>(std::lround(discard / advance));
  const int remaining = n_plateau - n_discard;
  int n_window = remaining;
  if (period > 0.0) {
    const double cycles = std::floor(remaining * advance / period + 1e-9);
    n_window = cycles >= 1.0 ? static_cast<int>(std::lround(cycles * period / advance)) : 0;
  }
  if (n_window < 1 || n_discard < 1) {
    throw WindowTooShort("plateau of " + std::to_string(n_plateau) +
                         " steps leaves no complete averaging window after discarding " +
                         std::to_string(n_discard));
  }
  Window w;
  w.first = plateau_begin + n_discard;
  w.last = w.first + n_window - 1;
  w.t_a = series[w.first - 1].t;
  w.t_b = series[w.last].t;
  return w;
}

double window_mean_mu(const std::vector<StepRecord>& series, const Window& w) {
  double s = 0.0;
  int n = 0;
  for (int i = w.first; i <= w.last; ++i) {
    if (series[i].P > 0.0) {
      s += series[i].mu;
      ++n;
    }
  }
  return n > 0 ? s / n : 0.0;
}

EnergyAudit energy_audit(const std::vector<StepRecord>& series, const Window& w) {
  EnergyAudit a;
  for (int i = w.first; i <= w.last; ++i) {
    const auto& p = series[i - 1];
    const auto& q = series[i];
    a.W_ext += 0.5 * (p.Q * p.v_inst + q.Q * q.v_inst) * (q.t - p.t);
  }
  a.E_diss = series[w.last].dissipated - series[w.first - 1].dissipated;
  const double scale = std::max(std::abs(a.W_ext), std::abs(a.E_diss));
  if (a.E_diss == 0.0 || scale < 1e-300) {
    a.elastic = true;
    a.gap = 0.0;
  } else {
    a.gap = std::abs(a.W_ext - a.E_diss) / scale;
  }
  return a;
}

FrictionResult run_phase2(const Model& model, const Phase1Result& ph1, double v) {
  const auto& c = model.cfg;
  if (!(v > 0.0)) throw ConfigError("velocity must be positive");
  FrictionResult r;
  r.v = v;
  r.T1 = ph1.T1;
  r.dt = model.advance / v;
  const double T_ramp = ph1.T1;
  r.ramp_steps = std::max(1, static_cast<int>(std::lround(T_ramp / r.dt)));
  const double dt_ramp = T_ramp / r.ramp_steps;
  const double ramp_travel = 0.5 * v * T_ramp;

  double travel = 0.0;
  if (c.profile == ProfileKind::sine) {
    travel = c.n_lambda * c.lambda;
  } else {
    const double room = model.x_origin - model.surface->x_min() - ramp_travel;
    travel = c.L > 0.0 ? c.L : room - 2.0 * model.advance;
    if (travel > room + 1e-9 * room || travel <= 0.0) {
      throw ProfileExhausted("plateau travel " + std::to_string(travel) + " mm exceeds the " +
                             std::to_string(std::max(0.0, room)) + " mm left on the profile");
    }
  }
  r.plateau_steps = static_cast<int>(std::lround(travel / model.advance));

  const mpjr::MotionLaw law{v, ph1.T1, T_ramp, model.y2};
  RunState st = ph1.state;
  r.series.reserve(static_cast<std::size_t>(r.ramp_steps + r.plateau_steps));
  for (int k = 1; k <= r.ramp_steps; ++k) {
    const double t = ph1.T1 + (k == r.ramp_steps ? T_ramp : k * dt_ramp);
    r.series.push_back(advance_step(model, st, t, c.p0, mpjr::motion_law_eval(law, t)));
  }
  const double t0 = ph1.T1 + T_ramp;
  for (int k = 1; k <= r.plateau_steps; ++k) {
    const double t = t0 + k * r.dt;
    r.series.push_back(advance_step(model, st, t, c.p0, mpjr::motion_law_eval(law, t)));
  }
  if (auto* s = dynamic_cast<const mpjr::SplineSurface*>(model.surface.get())) {
    if (s->clamp_log().warned()) r.warnings.push_back(s->clamp_log().message());
  }

  const bool sine = c.profile == ProfileKind::sine;
  r.window = steady_window(r.series, r.ramp_steps, model.advance, sine ? c.lambda : c.b,
                           sine ? c.lambda : 0.0);
  r.mu_avg = window_mean_mu(r.series, r.window);
  double cf = 0.0;
  for (int i = r.window.first; i <= r.window.last; ++i) cf += r.series[i].contact_fraction;
  r.contact_fraction_mean = cf / (r.window.last - r.window.first + 1);
  r.audit = energy_audit(r.series, r.window);
  r.final_state = std::move(st);
  return r;
}

double analytic_mu_sine(double E1, double E_inst, double a, double u0, double lambda, double tau,
                        double v) {
  const double w = kTwoPi * v / lambda;
  const double wt = w * tau;
  return std::numbers::pi * E1 * a * a * wt / (E_inst * u0 * lambda * (1.0 + wt * wt));
}

WinklerMapping winkler_u0(const Model& model, const Phase1Result& ph1) {
  const auto& c = model.cfg;
  WinklerMapping w;
  const double nu = c.prony.nu;
  const double C = (1.0 + nu) * (1.0 - 2.0 * nu) / (1.0 - nu);
  if (!(ph1.approach > 0.0) || !(ph1.dp_harmonic > 0.0)) {
    throw NumericalError("Phase I state does not support the far-field mapping");
  }
  w.E_ref = c.p0 * c.h * C / ph1.approach;
  w.l_eq = w.E_ref * ph1.du_harmonic / ph1.dp_harmonic;
  w.u0 = c.p0 * w.l_eq / c.prony.E_inst();
  return w;
}

} // namespace hfric::sim
