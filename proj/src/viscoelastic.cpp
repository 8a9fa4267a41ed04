#include "hfric/viscoelastic.hpp"

#include <algorithm>
#include <cmath>

#include "hfric/errors.hpp"
#include "hfric/quadrature.hpp"

namespace hfric::fem {
namespace {

inline double quad_form(const std::array<double, 9>& C, const double* a, const double* b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) s += a[i] * C[3 * i + j] * b[j];
  }
  return s;
}

} // namespace

StepCoefficients step_coefficients(const material::PronySeries& m, double dt) {
  if (!(dt > 0.0)) throw InputError("time step must be positive");
  StepCoefficients c;
  c.dt = dt;
  c.E_tangent = m.E0;
  for (const auto& a : m.arms) {
    const double x = dt / a.tau;
    const double one_minus_e = -std::expm1(-x);
    const double g = one_minus_e / x;
    c.decay.push_back(std::exp(-x));
    c.gain.push_back(g);
    c.E_tangent += a.E * g;
  }
  return c;
}

ViscoState::ViscoState(std::size_t points, std::size_t arms)
    : n_points(points), n_arms(arms), eps(3 * points, 0.0), eps_v(3 * points * arms, 0.0),
      dissipated(points, 0.0) {}

PointUpdate constitutive_update(const material::PronySeries& m, const StepCoefficients& c,
                                ViscoState& state, std::size_t p, const Voigt& eps_new) {
  const auto C = unit_plane_strain(m.nu);
  double* eps = &state.eps[3 * p];
  const double d_eps[3] = {eps_new[0] - eps[0], eps_new[1] - eps[1], eps_new[2] - eps[2]};

  double sig_strain[3] = {m.E0 * eps_new[0], m.E0 * eps_new[1], m.E0 * eps_new[2]};
  double dissipation = 0.0;
  for (std::size_t i = 0; i < m.arms.size(); ++i) {
    const auto& arm = m.arms[i];
    double* ev = &state.eps_v[(i * state.n_points + p) * 3];
    const double e = c.decay[i];
    const double g = c.gain[i];
    const double x = c.dt / arm.tau;
    double w0[3], w1[3], beta[3], A[3];
    for (int k = 0; k < 3; ++k) {
      w0[k] = eps[k] - ev[k];
      w1[k] = e * w0[k] + g * d_eps[k];
      beta[k] = d_eps[k] / x;
      A[k] = w0[k] - beta[k];
    }
    const double one_minus_e = -std::expm1(-x);
    const double one_minus_e2 = -std::expm1(-2.0 * x);
    const double d = arm.E * (0.5 * one_minus_e2 * quad_form(C, A, A) +
                              2.0 * one_minus_e * quad_form(C, A, beta) +
                              x * quad_form(C, beta, beta));
    dissipation += std::max(0.0, d);
    for (int k = 0; k < 3; ++k) {
      ev[k] = eps_new[k] - w1[k];
      sig_strain[k] += arm.E * w1[k];
    }
  }
  for (int k = 0; k < 3; ++k) eps[k] = eps_new[k];
  state.dissipated[p] += dissipation;

  PointUpdate out;
  for (int i = 0; i < 3; ++i) {
    out.stress[i] = C[3 * i] * sig_strain[0] + C[3 * i + 1] * sig_strain[1] + C[3 * i + 2] * sig_strain[2];
  }
  out.dissipation = dissipation;
  return out;
}

std::array<double, 9> tangent(const material::PronySeries& m, const StepCoefficients& c) {
  auto C = unit_plane_strain(m.nu);
  for (double& v : C) v *= c.E_tangent;
  return C;
}

Voigt history_stress(const material::PronySeries& m, const StepCoefficients& c,
                     const ViscoState& state, std::size_t p) {
  const auto C = unit_plane_strain(m.nu);
  const double* eps = state.strain(p);
  double s[3] = {0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < m.arms.size(); ++i) {
    const double* ev = state.viscous(i, p);
    for (int k = 0; k < 3; ++k) {
      const double w = eps[k] - ev[k];
      s[k] += m.arms[i].E * (c.decay[i] * w - c.gain[i] * eps[k]);
    }
  }
  Voigt out{};
  for (int i = 0; i < 3; ++i) out[i] = C[3 * i] * s[0] + C[3 * i + 1] * s[1] + C[3 * i + 2] * s[2];
  return out;
}

} // namespace hfric::fem
