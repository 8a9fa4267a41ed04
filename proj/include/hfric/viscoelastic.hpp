#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "hfric/material.hpp"

namespace hfric::fem {

using Voigt = std::array<double, 3>;  // (11, 22, 12), engineering shear

// Per-step constants of the exponential integrator.
struct StepCoefficients {
  double dt = 0.0;
  double E_tangent = 0.0;  // E0 + sum E_i g_i
  std::vector<double> decay;  // e_i = exp(-dt / tau_i)
  std::vector<double> gain;   // g_i = (tau_i / dt)(1 - e_i)
};

StepCoefficients step_coefficients(const material::PronySeries& m, double dt);

// Internal variables at n_points quadrature points, structure-of-arrays.
// Arm-major storage: eps_v[(arm * n_points + p) * 3 + c].
struct ViscoState {
  std::size_t n_points = 0;
  std::size_t n_arms = 0;
  std::vector<double> eps;        // total strain, 3 per point
  std::vector<double> eps_v;      // viscous strain per arm, 3 per point
  std::vector<double> dissipated;  // accumulated dissipation density, MPa

  ViscoState() = default;
  ViscoState(std::size_t points, std::size_t arms);

  const double* strain(std::size_t p) const { return &eps[3 * p]; }
  const double* viscous(std::size_t arm, std::size_t p) const {
    return &eps_v[(arm * n_points + p) * 3];
  }
};

struct PointUpdate {
  Voigt stress{};
  double dissipation = 0.0;  // density increment over the step, MPa
};

// Updates point p to strain eps_new over one step. Stress is
// C(nu) (E0 eps_new + sum E_i (eps_new - eps_v_i')). The strain is taken as
// linear in time over the step, for which the arm recurrence and the
// dissipation integral are exact.
PointUpdate constitutive_update(const material::PronySeries& m, const StepCoefficients& c,
                                ViscoState& state, std::size_t p, const Voigt& eps_new);

// Consistent tangent E_tangent * C(nu), row-major.
std::array<double, 9> tangent(const material::PronySeries& m, const StepCoefficients& c);

// Part of the stress that does not depend on eps_new:
//   stress = E_tangent C eps_new + history_stress(...)
Voigt history_stress(const material::PronySeries& m, const StepCoefficients& c,
                     const ViscoState& state, std::size_t p);

} // namespace hfric::fem
