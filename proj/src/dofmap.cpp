#include "hfric/dofmap.hpp"

#include "hfric/errors.hpp"

namespace hfric::fem {

DofMap make_dofmap(const Mesh& mesh, Boundary boundary, const std::vector<Prescribed>& prescribed) {
  const std::size_t n = mesh.nodes.size();
  DofMap d;
  d.node_dof.assign(n, {0, 0});
  d.prescribed = prescribed;
  d.prescribed_value.assign(n, {0.0, 0.0});
  for (const auto& p : prescribed) {
    if (p.node < 0 || static_cast<std::size_t>(p.node) >= n || p.component < 0 || p.component > 1) {
      throw InputError("prescribed displacement refers to an unknown node/component");
    }
    d.node_dof[p.node][p.component] = -1;
    d.prescribed_value[p.node][p.component] = p.value;
  }

  std::vector<int> master(n, -1);
  if (boundary == Boundary::periodic) {
    if (mesh.left_nodes.size() != mesh.right_nodes.size()) {
      throw InvalidGrading("periodic sides need matching left/right edge nodes");
    }
    for (std::size_t i = 0; i < mesh.left_nodes.size(); ++i) {
      const int r = mesh.right_nodes[i], l = mesh.left_nodes[i];
      if (mesh.nodes[r].x2 != mesh.nodes[l].x2) {
        throw InvalidGrading("periodic pairing: edge node heights differ");
      }
      master[r] = l;
      d.periodic_pairs.emplace_back(r, l);
    }
  }

  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (master[i] >= 0) continue;
    for (int c = 0; c < 2; ++c) {
      if (d.node_dof[i][c] == -1) continue;
      d.node_dof[i][c] = next++;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (master[i] < 0) continue;
    for (int c = 0; c < 2; ++c) {
      // A component prescribed on either partner stays prescribed.
      const int md = d.node_dof[master[i]][c];
      if (d.node_dof[i][c] == -1 || md == -1) {
        d.node_dof[i][c] = -1;
      } else {
        d.node_dof[i][c] = md;
      }
    }
  }
  d.n_dofs = next;
  return d;
}

std::vector<Prescribed> skid_supports(const Mesh& mesh) {
  std::vector<Prescribed> p;
  for (int n : mesh.bottom_nodes) p.push_back({n, 0, 0.0});
  return p;
}

std::vector<int> top_vertical_dofs(const Mesh& mesh, const DofMap& dofs) {
  std::vector<int> t;
  for (int n : mesh.top_nodes) {
    const int d = dofs.dof(n, 1);
    if (d < 0) continue;
    bool seen = false;
    for (int x : t) seen = seen || x == d;
    if (!seen) t.push_back(d);
  }
  return t;
}

std::vector<std::array<double, 2>> expand(const DofMap& dofs, const std::vector<double>& u) {
  std::vector<std::array<double, 2>> out(dofs.node_dof.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int c = 0; c < 2; ++c) {
      const int d = dofs.node_dof[i][c];
      out[i][c] = d >= 0 ? u[static_cast<std::size_t>(d)] : dofs.prescribed_value[i][c];
    }
  }
  return out;
}

} // namespace hfric::fem
