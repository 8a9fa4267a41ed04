#include "hfric/kernels.hpp"

#include <Eigen/Dense>

#include "hfric/quadrature.hpp"

namespace hfric::kernels {
namespace {

inline fem::Voigt gauss_strain(const fem::GaussGeom& g, const std::array<double, 8>& ue) {
  fem::Voigt s{0.0, 0.0, 0.0};
  for (int k = 0; k < 4; ++k) {
    s[0] += g.dNdx[k] * ue[2 * k];
    s[1] += g.dNdy[k] * ue[2 * k + 1];
    s[2] += g.dNdy[k] * ue[2 * k] + g.dNdx[k] * ue[2 * k + 1];
  }
  return s;
}

inline void add_bt_sigma(const fem::GaussGeom& g, const fem::Voigt& sig, double* fe) {
  for (int k = 0; k < 4; ++k) {
    fe[2 * k] += g.wdet * (g.dNdx[k] * sig[0] + g.dNdy[k] * sig[2]);
    fe[2 * k + 1] += g.wdet * (g.dNdy[k] * sig[1] + g.dNdx[k] * sig[2]);
  }
}

long n_elem(const BulkModel& model) { return static_cast<long>(model.n_elements()); }

} // namespace

std::vector<std::array<double, 64>> element_stiffness_all(const BulkModel& model) {
  std::vector<std::array<double, 64>> out(model.n_elements());
  const long ne = n_elem(model);
#pragma omp parallel for schedule(static)
  for (long e = 0; e < ne; ++e) out[e] = fem::element_unit_stiffness(model, static_cast<std::size_t>(e));
  return out;
}

Eigen::VectorXd history_forces(const BulkModel& model, const PronySeries& m,
                               const StepCoefficients& c, const ViscoState& state) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(model.dofs.n_dofs);
  if (m.arms.empty()) return f;
  const long ne = n_elem(model);
  std::vector<std::array<double, 8>> fe(model.n_elements());
#pragma omp parallel for schedule(static)
  for (long e = 0; e < ne; ++e) {
    std::array<double, 8> acc{};
    for (int g = 0; g < 4; ++g) {
      const std::size_t p = 4 * static_cast<std::size_t>(e) + g;
      add_bt_sigma(model.gauss[p], fem::history_stress(m, c, state, p), acc.data());
    }
    fe[e] = acc;
  }
  for (std::size_t e = 0; e < fe.size(); ++e) {
    for (int a = 0; a < 8; ++a) {
      const int d = model.edof[e][a];
      if (d >= 0) f[d] += fe[e][a];
    }
  }
  return f;
}

double update_state(const BulkModel& model, const PronySeries& m, const StepCoefficients& c,
                    ViscoState& state, const Eigen::VectorXd& u) {
  const long ne = n_elem(model);
  std::vector<double> de(model.n_elements(), 0.0);
#pragma omp parallel for schedule(static)
  for (long e = 0; e < ne; ++e) {
    const auto ue = fem::element_displacements(model, static_cast<std::size_t>(e), u.data());
    double acc = 0.0;
    for (int g = 0; g < 4; ++g) {
      const std::size_t p = 4 * static_cast<std::size_t>(e) + g;
      const fem::Voigt eps = gauss_strain(model.gauss[p], ue);
      acc += fem::constitutive_update(m, c, state, p, eps).dissipation * model.gauss[p].wdet;
    }
    de[e] = acc;
  }
  double total = 0.0;
  for (double d : de) total += d;
  return total;
}

std::vector<double> point_strains(const BulkModel& model, const Eigen::VectorXd& u) {
  std::vector<double> out(3 * model.n_points());
  const long ne = n_elem(model);
#pragma omp parallel for schedule(static)
  for (long e = 0; e < ne; ++e) {
    const auto ue = fem::element_displacements(model, static_cast<std::size_t>(e), u.data());
    for (int g = 0; g < 4; ++g) {
      const std::size_t p = 4 * static_cast<std::size_t>(e) + g;
      const fem::Voigt s = gauss_strain(model.gauss[p], ue);
      for (int k = 0; k < 3; ++k) out[3 * p + k] = s[k];
    }
  }
  return out;
}

namespace reference {

std::vector<std::array<double, 64>> element_stiffness_all(const BulkModel& model) {
  // Independent form: K_e = sum_g wdet B^T C B with explicit 3x8 matrices.
  const auto C = fem::unit_plane_strain(model.nu);
  std::vector<std::array<double, 64>> out(model.n_elements());
  for (std::size_t e = 0; e < model.n_elements(); ++e) {
    Eigen::Matrix<double, 8, 8> K = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix3d Cm;
    Cm << C[0], C[1], C[2], C[3], C[4], C[5], C[6], C[7], C[8];
    for (int g = 0; g < 4; ++g) {
      const auto& gg = model.gauss[4 * e + g];
      Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
      for (int k = 0; k < 4; ++k) {
        B(0, 2 * k) = gg.dNdx[k];
        B(1, 2 * k + 1) = gg.dNdy[k];
        B(2, 2 * k) = gg.dNdy[k];
        B(2, 2 * k + 1) = gg.dNdx[k];
      }
      K += gg.wdet * B.transpose() * Cm * B;
    }
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) out[e][8 * a + b] = K(a, b);
    }
  }
  return out;
}

Eigen::VectorXd history_forces(const BulkModel& model, const PronySeries& m,
                               const StepCoefficients& c, const ViscoState& state) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(model.dofs.n_dofs);
  if (m.arms.empty()) return f;
  for (std::size_t e = 0; e < model.n_elements(); ++e) {
    for (int g = 0; g < 4; ++g) {
      const std::size_t p = 4 * e + g;
      const fem::Voigt sig = fem::history_stress(m, c, state, p);
      double fe[8] = {};
      add_bt_sigma(model.gauss[p], sig, fe);
      for (int a = 0; a < 8; ++a) {
        const int d = model.edof[e][a];
        if (d >= 0) f[d] += fe[a];
      }
    }
  }
  return f;
}

double update_state(const BulkModel& model, const PronySeries& m, const StepCoefficients& c,
                    ViscoState& state, const Eigen::VectorXd& u) {
  double total = 0.0;
  for (std::size_t e = 0; e < model.n_elements(); ++e) {
    const auto ue = fem::element_displacements(model, e, u.data());
    for (int g = 0; g < 4; ++g) {
      const std::size_t p = 4 * e + g;
      const fem::Voigt eps = gauss_strain(model.gauss[p], ue);
      total += fem::constitutive_update(m, c, state, p, eps).dissipation * model.gauss[p].wdet;
    }
  }
  return total;
}

std::vector<double> point_strains(const BulkModel& model, const Eigen::VectorXd& u) {
  std::vector<double> out(3 * model.n_points());
  for (std::size_t e = 0; e < model.n_elements(); ++e) {
    const auto ue = fem::element_displacements(model, e, u.data());
    for (int g = 0; g < 4; ++g) {
      const fem::Voigt s = gauss_strain(model.gauss[4 * e + g], ue);
      for (int k = 0; k < 3; ++k) out[3 * (4 * e + g) + k] = s[k];
    }
  }
  return out;
}

} // namespace reference
} // namespace hfric::kernels
