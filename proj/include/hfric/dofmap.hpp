#pragma once

#include <array>
#include <vector>

#include "hfric/mesh.hpp"

namespace hfric::fem {

enum class Boundary { periodic, free_sides };

struct Prescribed {
  int node = 0;
  int component = 0;  // 0 = u1, 1 = u2
  double value = 0.0;  // mm
};

// Global equation numbering. node_dof[n][c] is the equation index of
// displacement component c at node n, or -1 when the component is prescribed.
struct DofMap {
  std::vector<std::array<int, 2>> node_dof;
  int n_dofs = 0;
  std::vector<std::pair<int, int>> periodic_pairs;  // (right node, left node)
  std::vector<Prescribed> prescribed;
  // Prescribed value per (node, component); zero unless listed.
  std::vector<std::array<double, 2>> prescribed_value;

  int dof(int node, int comp) const { return node_dof[node][comp]; }
};

// Right-edge nodes share the equations of the same-height left-edge nodes when
// `boundary` is periodic. Prescribed components are eliminated.
DofMap make_dofmap(const Mesh& mesh, Boundary boundary, const std::vector<Prescribed>& prescribed);

// Skid support: u1 = 0 along the bottom edge; vertical motion left to contact.
std::vector<Prescribed> skid_supports(const Mesh& mesh);

// Equation indices of the vertical top-side displacements, one per distinct
// equation, in top-node order.
std::vector<int> top_vertical_dofs(const Mesh& mesh, const DofMap& dofs);

// Expands an equation-space vector into per-node (u1, u2).
std::vector<std::array<double, 2>> expand(const DofMap& dofs, const std::vector<double>& u);

} // namespace hfric::fem
