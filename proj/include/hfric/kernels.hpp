#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "hfric/assembly.hpp"

// Data-parallel loops of the time step. Each OpenMP kernel writes per-element
// results into a buffer and reduces them serially in element order, so the
// output does not depend on the thread count. The `reference` namespace holds
// plain serial versions used as test oracles and benchmark baselines.
namespace hfric::kernels {

using fem::BulkModel;
using fem::StepCoefficients;
using fem::ViscoState;
using material::PronySeries;

// All unit-modulus element stiffness matrices, element-major.
std::vector<std::array<double, 64>> element_stiffness_all(const BulkModel& model);

// f_hist = sum over points of B^T history_stress * wdet, equation space.
Eigen::VectorXd history_forces(const BulkModel& model, const PronySeries& m,
                               const StepCoefficients& c, const ViscoState& state);

// Advances every Gauss point to the strain of `u` (equation space) and returns
// the dissipation increment integrated over the skid, mJ/mm.
double update_state(const BulkModel& model, const PronySeries& m, const StepCoefficients& c,
                    ViscoState& state, const Eigen::VectorXd& u);

// Strain at every Gauss point, 3 per point.
std::vector<double> point_strains(const BulkModel& model, const Eigen::VectorXd& u);

namespace reference {
std::vector<std::array<double, 64>> element_stiffness_all(const BulkModel& model);
Eigen::VectorXd history_forces(const BulkModel& model, const PronySeries& m,
                               const StepCoefficients& c, const ViscoState& state);
double update_state(const BulkModel& model, const PronySeries& m, const StepCoefficients& c,
                    ViscoState& state, const Eigen::VectorXd& u);
std::vector<double> point_strains(const BulkModel& model, const Eigen::VectorXd& u);
} // namespace reference

} // namespace hfric::kernels
