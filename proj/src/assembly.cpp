#include "hfric/assembly.hpp"

#include "hfric/errors.hpp"
#include "hfric/kernels.hpp"
#include "hfric/quadrature.hpp"

namespace hfric::fem {

BulkModel make_bulk_model(Mesh mesh, Boundary boundary, const std::vector<Prescribed>& prescribed,
                          double nu) {
  BulkModel model;
  model.dofs = make_dofmap(mesh, boundary, prescribed);
  model.mesh = std::move(mesh);
  model.nu = nu;
  const auto& quads = model.mesh.quads;
  model.edof.resize(quads.size());
  model.gauss.resize(4 * quads.size());
  for (std::size_t e = 0; e < quads.size(); ++e) {
    std::array<double, 4> x{}, y{};
    for (int k = 0; k < 4; ++k) {
      const int n = quads[e][k];
      x[k] = model.mesh.nodes[n].x1;
      y[k] = model.mesh.nodes[n].x2;
      model.edof[e][2 * k] = model.dofs.dof(n, 0);
      model.edof[e][2 * k + 1] = model.dofs.dof(n, 1);
    }
    for (int g = 0; g < 4; ++g) {
      const double xi = kGauss2x2[g][0], eta = kGauss2x2[g][1];
      const QuadJacobian J = quad_jacobian(x, y, xi, eta);
      if (!(J.det > 0.0)) {
        throw InvalidGrading("element " + std::to_string(e) + " has a non-positive Jacobian");
      }
      GaussGeom& gg = model.gauss[4 * e + g];
      gg.dNdx = J.dNdx;
      gg.dNdy = J.dNdy;
      gg.wdet = J.det;
      for (int k = 0; k < 4; ++k) {
        const double N = 0.25 * (1.0 + xi * kXiNode[k]) * (1.0 + eta * kEtaNode[k]);
        gg.x1 += N * x[k];
        gg.x2 += N * y[k];
      }
    }
  }
  return model;
}

std::array<double, 8> element_displacements(const BulkModel& model, std::size_t e, const double* u) {
  std::array<double, 8> ue{};
  const auto& q = model.mesh.quads[e];
  for (int k = 0; k < 4; ++k) {
    for (int c = 0; c < 2; ++c) {
      const int d = model.edof[e][2 * k + c];
      ue[2 * k + c] = d >= 0 ? u[d] : model.dofs.prescribed_value[q[k]][c];
    }
  }
  return ue;
}

std::array<double, 64> element_unit_stiffness(const BulkModel& model, std::size_t e) {
  const auto C = unit_plane_strain(model.nu);
  std::array<double, 64> ke{};
  for (int g = 0; g < 4; ++g) {
    const GaussGeom& gg = model.gauss[4 * e + g];
    // B is 3x8; CB = C * B.
    double B[3][8] = {};
    for (int k = 0; k < 4; ++k) {
      B[0][2 * k] = gg.dNdx[k];
      B[1][2 * k + 1] = gg.dNdy[k];
      B[2][2 * k] = gg.dNdy[k];
      B[2][2 * k + 1] = gg.dNdx[k];
    }
    double CB[3][8];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 8; ++j) CB[i][j] = C[3 * i] * B[0][j] + C[3 * i + 1] * B[1][j] + C[3 * i + 2] * B[2][j];
    }
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) {
        ke[8 * a + b] += gg.wdet * (B[0][a] * CB[0][b] + B[1][a] * CB[1][b] + B[2][a] * CB[2][b]);
      }
    }
  }
  return ke;
}

UnitSystem assemble_unit(const BulkModel& model) {
  const auto kes = kernels::element_stiffness_all(model);
  const int n = model.dofs.n_dofs;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(64 * kes.size());
  UnitSystem out;
  out.f_prescribed = Eigen::VectorXd::Zero(n);
  for (std::size_t e = 0; e < kes.size(); ++e) {
    const auto& q = model.mesh.quads[e];
    for (int a = 0; a < 8; ++a) {
      const int r = model.edof[e][a];
      if (r < 0) continue;
      for (int b = 0; b < 8; ++b) {
        const int c = model.edof[e][b];
        if (c >= 0) {
          trip.emplace_back(r, c, kes[e][8 * a + b]);
        } else {
          const double up = model.dofs.prescribed_value[q[b / 2]][b % 2];
          if (up != 0.0) out.f_prescribed[r] -= kes[e][8 * a + b] * up;
        }
      }
    }
  }
  out.K.resize(n, n);
  out.K.setFromTriplets(trip.begin(), trip.end());
  return out;
}

LinearSystem assemble(const BulkModel& model, const material::PronySeries& m,
                      const StepCoefficients& c, const ViscoState& state,
                      const Eigen::VectorXd& f_ext) {
  UnitSystem unit = assemble_unit(model);
  LinearSystem sys;
  sys.K = c.E_tangent * unit.K;
  sys.rhs = f_ext - kernels::history_forces(model, m, c, state) + c.E_tangent * unit.f_prescribed;
  sys.u = Eigen::VectorXd::Zero(model.dofs.n_dofs);
  return sys;
}

namespace {

Eigen::VectorXd edge_load(const BulkModel& model, const std::vector<int>& nodes, double p) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(model.dofs.n_dofs);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const int a = nodes[i], b = nodes[i + 1];
    const double len = model.mesh.nodes[b].x1 - model.mesh.nodes[a].x1;
    for (int n : {a, b}) {
      const int d = model.dofs.dof(n, 1);
      if (d >= 0) f[d] += 0.5 * p * len;
    }
  }
  return f;
}

} // namespace

Eigen::VectorXd bottom_pressure_load(const BulkModel& model, double p) {
  return edge_load(model, model.mesh.bottom_nodes, p);
}

Eigen::VectorXd top_pressure_load(const BulkModel& model, double p) {
  return edge_load(model, model.mesh.top_nodes, -p);
}

} // namespace hfric::fem
