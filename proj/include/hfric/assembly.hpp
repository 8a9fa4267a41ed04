#pragma once

#include <array>
#include <vector>

#include <Eigen/Sparse>

#include "hfric/dofmap.hpp"
#include "hfric/mesh.hpp"
#include "hfric/viscoelastic.hpp"

namespace hfric::fem {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Shape-function derivatives and weight at one bulk Gauss point.
struct GaussGeom {
  std::array<double, 4> dNdx{};
  std::array<double, 4> dNdy{};
  double wdet = 0.0;  // quadrature weight times det J, mm^2
  double x1 = 0.0, x2 = 0.0;
};

// Mesh, equation numbering and precomputed element geometry.
struct BulkModel {
  Mesh mesh;
  DofMap dofs;
  std::vector<std::array<int, 8>> edof;  // (u1, u2) per local node, -1 if prescribed
  std::vector<GaussGeom> gauss;           // 4 per element, element-major
  double nu = 0.3;

  std::size_t n_elements() const { return mesh.quads.size(); }
  std::size_t n_points() const { return gauss.size(); }
};

BulkModel make_bulk_model(Mesh mesh, Boundary boundary, const std::vector<Prescribed>& prescribed,
                          double nu);

// Element displacement vector (8 entries) from an equation-space vector.
std::array<double, 8> element_displacements(const BulkModel& model, std::size_t e,
                                            const double* u);

// Unit-modulus element stiffness, 8x8 row-major.
std::array<double, 64> element_unit_stiffness(const BulkModel& model, std::size_t e);

// Global stiffness for E = 1 and the associated load from nonzero prescribed
// displacements (also for E = 1).
struct UnitSystem {
  SparseMatrix K;
  Eigen::VectorXd f_prescribed;
};
UnitSystem assemble_unit(const BulkModel& model);

struct LinearSystem {
  SparseMatrix K;
  Eigen::VectorXd rhs;
  Eigen::VectorXd u;
};

// K = E_tangent * K_unit; rhs = f_ext - f_history + E_tangent * f_prescribed.
LinearSystem assemble(const BulkModel& model, const material::PronySeries& m,
                      const StepCoefficients& c, const ViscoState& state,
                      const Eigen::VectorXd& f_ext);

// Uniform pressure on the bottom edge, pushing in +x2 (consistent nodal loads).
Eigen::VectorXd bottom_pressure_load(const BulkModel& model, double p);

// Uniform pressure on the top edge, pushing in -x2.
Eigen::VectorXd top_pressure_load(const BulkModel& model, double p);

} // namespace hfric::fem
