#pragma once

#include <array>

namespace hfric::fem {

inline constexpr double kGaussPt = 0.57735026918962576451;  // 1/sqrt(3)

// 2x2 Gauss points (weights 1) in counterclockwise order.
inline constexpr std::array<std::array<double, 2>, 4> kGauss2x2 = {{
    {-kGaussPt, -kGaussPt},
    {kGaussPt, -kGaussPt},
    {kGaussPt, kGaussPt},
    {-kGaussPt, kGaussPt},
}};

inline constexpr std::array<double, 4> kXiNode = {-1.0, 1.0, 1.0, -1.0};
inline constexpr std::array<double, 4> kEtaNode = {-1.0, -1.0, 1.0, 1.0};

struct QuadJacobian {
  double det = 0.0;
  std::array<double, 4> dNdx{};  // d N_k / d x1
  std::array<double, 4> dNdy{};  // d N_k / d x2
};

inline QuadJacobian quad_jacobian(const std::array<double, 4>& x, const std::array<double, 4>& y,
                                  double xi, double eta) {
  std::array<double, 4> dxi{}, deta{};
  for (int k = 0; k < 4; ++k) {
    dxi[k] = 0.25 * kXiNode[k] * (1.0 + eta * kEtaNode[k]);
    deta[k] = 0.25 * kEtaNode[k] * (1.0 + xi * kXiNode[k]);
  }
  double j11 = 0, j12 = 0, j21 = 0, j22 = 0;
  for (int k = 0; k < 4; ++k) {
    j11 += dxi[k] * x[k];
    j12 += dxi[k] * y[k];
    j21 += deta[k] * x[k];
    j22 += deta[k] * y[k];
  }
  QuadJacobian J;
  J.det = j11 * j22 - j12 * j21;
  const double inv = 1.0 / J.det;
  for (int k = 0; k < 4; ++k) {
    J.dNdx[k] = inv * (j22 * dxi[k] - j12 * deta[k]);
    J.dNdy[k] = inv * (-j21 * dxi[k] + j11 * deta[k]);
  }
  return J;
}

// Plane-strain isotropic stiffness for unit Young's modulus, Voigt order
// (11, 22, 12) with engineering shear strain.
inline std::array<double, 9> unit_plane_strain(double nu) {
  const double f = 1.0 / ((1.0 + nu) * (1.0 - 2.0 * nu));
  return {f * (1.0 - nu), f * nu, 0.0,
          f * nu, f * (1.0 - nu), 0.0,
          0.0, 0.0, f * 0.5 * (1.0 - 2.0 * nu)};
}

} // namespace hfric::fem
