#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "hfric/condensed.hpp"
#include "hfric/dofmap.hpp"
#include "hfric/mesh.hpp"
#include "hfric/spline.hpp"

namespace hfric::mpjr {

// Rigid profile elevation z(x) in its own frame, mm.
class RigidSurface {
public:
  virtual ~RigidSurface() = default;
  virtual double z(double x) const = 0;
  virtual double slope(double x) const = 0;
  virtual bool periodic() const = 0;
  virtual double x_min() const = 0;
  virtual double x_max() const = 0;
  // Lowest elevation over [x0, x1].
  virtual double min_over(double x0, double x1) const = 0;
};

// z = a (1 - cos(2 pi x / lambda)); minimum 0 at x = 0.
class SineSurface final : public RigidSurface {
public:
  SineSurface(double lambda, double a) : lambda_(lambda), a_(a) {}
  double z(double x) const override;
  double slope(double x) const override;
  bool periodic() const override { return true; }
  double x_min() const override { return -1e300; }
  double x_max() const override { return 1e300; }
  double min_over(double x0, double x1) const override;
  double lambda() const { return lambda_; }
  double amplitude() const { return a_; }

private:
  double lambda_, a_;
};

// Cubic-spline interpolated measured profile.
class SplineSurface final : public RigidSurface {
public:
  explicit SplineSurface(profile::SplineTable table, double sign = 1.0);
  double z(double x) const override;
  double slope(double x) const override;
  bool periodic() const override { return false; }
  double x_min() const override { return table_.x_min(); }
  double x_max() const override { return table_.x_max(); }
  double min_over(double x0, double x1) const override;
  const profile::ClampLog& clamp_log() const { return clamp_; }
  const profile::SplineTable& table() const { return table_; }

private:
  profile::SplineTable table_;
  double sign_;
  mutable profile::ClampLog clamp_;
};

// Rigid translation of the profile: rest during Phase I (t <= T1), smoothstep
// velocity ramp over T_ramp, then constant velocity v.
struct MotionLaw {
  double v = 0.0;       // mm/s
  double T1 = 0.0;      // s
  double T_ramp = 0.0;  // s
  double y2 = 0.0;      // mm, vertical placement
};

struct MotionSample {
  double y1 = 0.0;
  double y2 = 0.0;
  double v_inst = 0.0;
};

MotionSample motion_law_eval(const MotionLaw& m, double t);

// Zero-thickness interface elements on the skid top, two Gauss points each.
struct InterfaceLayer {
  std::size_t n_elements = 0;
  double b = 0.0;
  // Free sides: the skid may rotate about a bottom point, so the active set
  // must hold a point on each half of the top.
  bool rocking = false;
  // Per quadrature point q (2 per element):
  std::vector<double> x;       // skid-frame abscissa, mm
  std::vector<double> weight;  // tributary length, mm
  std::vector<int> la, lb;     // local top-dof indices of the tied lower nodes
  std::vector<double> Na, Nb;
  std::vector<int> element;
  // State after the last evaluation:
  std::vector<double> zeta;    // rigid surface elevation at the point, mm
  std::vector<double> slope;   // dz/dx at the point
  std::vector<double> gap;     // corrected normal gap, mm
  std::vector<double> pressure;  // MPa
  std::vector<std::uint8_t> active;

  std::size_t size() const { return x.size(); }
};

// `top_dofs` is the list returned by fem::top_vertical_dofs; nodes sharing an
// equation (periodic corner) map to the same local index.
InterfaceLayer make_interface(const fem::Mesh& mesh, const fem::DofMap& dofs,
                              const std::vector<int>& top_dofs);

// Places the profile for the current time: x_local = x - y1 + x_origin.
// Fills zeta and slope. Throws ProfileExhausted when the skid would leave a
// finite profile.
void evaluate_profile(InterfaceLayer& layer, const RigidSurface& surface, const MotionSample& y,
                      double x_origin);

// g = zeta - u2(x) at every point, u2 interpolated from the top dofs.
void corrected_gap(InterfaceLayer& layer, const Eigen::VectorXd& u_top);

double penalty_traction(double gap, double eps_n);

struct ContactState {
  std::vector<std::uint8_t> active;
  double P = 0.0;  // N/mm
  double Q = 0.0;  // N/mm
  double max_penetration = 0.0;  // mm
  double contact_fraction = 0.0;
  int iterations = 0;
};

// Fills pressure from the gaps and integrates P = sum w p, Q = sum w p slope.
void interface_forces(InterfaceLayer& layer, double eps_n, ContactState& state);

// Penalty springs for the points flagged in `active`.
std::vector<fem::TopSpring> springs(const InterfaceLayer& layer, const std::vector<std::uint8_t>& active,
                                    double eps_n);

// Resolves the piecewise-linear penalty law for one step by active-set
// iteration, starting from `state.active`. Throws ContactLoopDiverged.
Eigen::VectorXd solve_contact(const fem::TopSolver& solver, fem::StepWorkspace& work,
                              InterfaceLayer& layer, double eps_n, ContactState& state,
                              int max_iter = 50);

} // namespace hfric::mpjr
