#include <algorithm>
#include <cmath>
#include <numbers>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "hfric/dofmap.hpp"
#include "hfric/errors.hpp"
#include "hfric/mesh.hpp"
#include "hfric/quadrature.hpp"

using namespace hfric;
using namespace hfric::fem;

namespace {

// Every edge used by one quad only must lie on the outer boundary; otherwise
// the mesh has a hanging node or a gap.
void expect_conforming(const Mesh& m) {
  std::map<std::pair<int, int>, int> uses;
  for (const auto& q : m.quads) {
    for (int k = 0; k < 4; ++k) {
      int a = q[k], b = q[(k + 1) % 4];
      if (a > b) std::swap(a, b);
      ++uses[{a, b}];
    }
  }
  const double tol = 1e-12 * (m.b + m.h);
  for (const auto& [e, n] : uses) {
    ASSERT_LE(n, 2);
    if (n == 2) continue;
    const Node& p = m.nodes[e.first];
    const Node& q = m.nodes[e.second];
    const bool boundary = (std::abs(p.x1) < tol && std::abs(q.x1) < tol) ||
                          (std::abs(p.x1 - m.b) < tol && std::abs(q.x1 - m.b) < tol) ||
                          (std::abs(p.x2) < tol && std::abs(q.x2) < tol) ||
                          (std::abs(p.x2 + m.h) < tol && std::abs(q.x2 + m.h) < tol);
    EXPECT_TRUE(boundary) << "interior edge used once: " << e.first << "-" << e.second;
  }
}

double min_detj_oracle(const Mesh& m, double* area) {
  double mn = 1e300;
  *area = 0.0;
  for (const auto& q : m.quads) {
    std::array<double, 4> x{}, y{};
    for (int k = 0; k < 4; ++k) {
      x[k] = m.nodes[q[k]].x1;
      y[k] = m.nodes[q[k]].x2;
    }
    for (const auto& g : kGauss2x2) {
      const double d = quad_jacobian(x, y, g[0], g[1]).det;
      mn = std::min(mn, d);
      *area += d;
    }
  }
  return mn;
}

} // namespace

TEST(Mesh, UniformFourByFour) {
  const Mesh m = build_block_mesh(1.0, 1.0, 4, 0);
  EXPECT_EQ(m.nodes.size(), 25u);
  EXPECT_EQ(m.quads.size(), 16u);
  EXPECT_EQ(m.top_nodes.size(), 5u);
  EXPECT_TRUE(audit(m).ok);
  expect_conforming(m);
}

TEST(Mesh, OneLevelGrading) {
  const Mesh m = build_block_mesh(1.0, 1.0, 8, 1);
  const MeshAudit a = audit(m);
  EXPECT_TRUE(a.ok) << (a.problems.empty() ? "" : a.problems.front());
  double area = 0;
  const double mn = min_detj_oracle(m, &area);
  EXPECT_GT(mn, 0.0);
  EXPECT_NEAR(a.min_detj, mn, 1e-12);
  EXPECT_NEAR(area, 1.0, 1e-12);
  EXPECT_EQ(m.top_nodes.size(), 9u);
  EXPECT_LT(a.top_spacing_error, 1e-12);
  EXPECT_GE(m.refined_depth, 2 * a.coarsest_size - 1e-12);
  // Top band cells are b/8 wide, bottom cells b/4.
  auto width = [&](const Quad& q) {
    double lo = 1e300, hi = -1e300;
    for (int n : q) lo = std::min(lo, m.nodes[n].x1), hi = std::max(hi, m.nodes[n].x1);
    return hi - lo;
  };
  for (const auto& q : m.quads) {
    bool top = false, bottom = false;
    for (int n : q) top |= m.nodes[n].x2 == 0.0, bottom |= m.nodes[n].x2 == -1.0;
    if (top) EXPECT_NEAR(width(q), 0.125, 1e-12);
    if (bottom) EXPECT_NEAR(width(q), 0.25, 1e-12);
  }
  expect_conforming(m);
}

TEST(Mesh, BenchmarkMeshMultiLevel) {
  const double b = 2 * std::numbers::pi / 320, h = 0.75 * b;
  const int levels = default_levels(128);
  EXPECT_EQ(levels, 2);
  const Mesh m = build_block_mesh(b, h, 128, levels);
  const MeshAudit a = audit(m);
  EXPECT_TRUE(a.ok);
  double area = 0;
  EXPECT_GT(min_detj_oracle(m, &area), 0.0);
  EXPECT_NEAR(area, b * h, 1e-12 * b * h);
  EXPECT_EQ(m.top_nodes.size(), 129u);
  for (std::size_t i = 1; i < m.top_nodes.size(); ++i) {
    EXPECT_GT(m.nodes[m.top_nodes[i]].x1, m.nodes[m.top_nodes[i - 1]].x1);
    EXPECT_EQ(m.nodes[m.top_nodes[i]].x2, 0.0);
  }
  expect_conforming(m);
}

TEST(Mesh, CounterClockwiseQuads) {
  const Mesh m = build_block_mesh(3.0, 2.0, 64, 1);
  for (const auto& q : m.quads) {
    double s = 0;
    for (int k = 0; k < 4; ++k) {
      const Node& a = m.nodes[q[k]];
      const Node& b = m.nodes[q[(k + 1) % 4]];
      s += a.x1 * b.x2 - b.x1 * a.x2;
    }
    EXPECT_GT(s, 0.0);
  }
}

TEST(Mesh, InvalidGrading) {
  EXPECT_THROW(build_block_mesh(1.0, 1.0, 6, 2), InvalidGrading);
  EXPECT_THROW(build_block_mesh(1.0, 1.0, 0, 0), InvalidGrading);
  EXPECT_THROW(build_block_mesh(1.0, -1.0, 8, 0), InvalidGrading);
  // Too shallow for the graded layers.
  EXPECT_THROW(build_block_mesh(1.0, 0.05, 64, 3), InvalidGrading);
}

TEST(Mesh, CsvDump) {
  const Mesh m = build_block_mesh(1.0, 1.0, 8, 1);
  const auto dir = std::filesystem::temp_directory_path() / "hfric_mesh_test";
  std::filesystem::create_directories(dir);
  write_mesh_csv(m, dir / "nodes.csv", dir / "quads.csv");
  auto lines = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    std::string s;
    std::size_t n = 0;
    while (std::getline(in, s)) ++n;
    return n;
  };
  EXPECT_EQ(lines(dir / "nodes.csv"), m.nodes.size() + 1);
  EXPECT_EQ(lines(dir / "quads.csv"), m.quads.size() + 1);
  std::filesystem::remove_all(dir);
}

TEST(DofMap, PeriodicPairsShareEquations) {
  const Mesh m = build_block_mesh(1.0, 0.75, 32, 1);
  const DofMap d = make_dofmap(m, Boundary::periodic, skid_supports(m));
  ASSERT_EQ(m.left_nodes.size(), m.right_nodes.size());
  EXPECT_EQ(d.periodic_pairs.size(), m.left_nodes.size());
  for (std::size_t i = 0; i < m.left_nodes.size(); ++i) {
    const int l = m.left_nodes[i], r = m.right_nodes[i];
    EXPECT_EQ(m.nodes[l].x2, m.nodes[r].x2);
    EXPECT_EQ(d.dof(l, 0), d.dof(r, 0));
    EXPECT_EQ(d.dof(l, 1), d.dof(r, 1));
  }
  // Bottom horizontal components are prescribed.
  for (int n : m.bottom_nodes) {
    EXPECT_EQ(d.dof(n, 0), -1);
    EXPECT_GE(d.dof(n, 1), 0);
  }
  std::set<int> used;
  for (const auto& nd : d.node_dof)
    for (int c : nd)
      if (c >= 0) used.insert(c);
  EXPECT_EQ(static_cast<int>(used.size()), d.n_dofs);
  EXPECT_EQ(*used.rbegin(), d.n_dofs - 1);

  const auto top = top_vertical_dofs(m, d);
  EXPECT_EQ(top.size(), 32u);
}

TEST(DofMap, FreeSides) {
  const Mesh m = build_block_mesh(1.0, 0.75, 32, 1);
  const DofMap d = make_dofmap(m, Boundary::free_sides, skid_supports(m));
  EXPECT_TRUE(d.periodic_pairs.empty());
  const int free_count = static_cast<int>(2 * m.nodes.size() - m.bottom_nodes.size());
  EXPECT_EQ(d.n_dofs, free_count);
  EXPECT_EQ(top_vertical_dofs(m, d).size(), 33u);
}

TEST(DofMap, PrescribedValuesAndExpand) {
  const Mesh m = build_block_mesh(1.0, 1.0, 4, 0);
  std::vector<Prescribed> pres{{m.top_nodes[0], 1, 0.25}, {m.bottom_nodes[0], 0, -0.5}};
  const DofMap d = make_dofmap(m, Boundary::free_sides, pres);
  EXPECT_EQ(d.n_dofs, 2 * 25 - 2);
  std::vector<double> u(static_cast<std::size_t>(d.n_dofs));
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 + static_cast<double>(i);
  const auto nodal = expand(d, u);
  EXPECT_EQ(nodal[m.top_nodes[0]][1], 0.25);
  EXPECT_EQ(nodal[m.bottom_nodes[0]][0], -0.5);
  for (std::size_t n = 0; n < nodal.size(); ++n)
    for (int c = 0; c < 2; ++c)
      if (d.dof(static_cast<int>(n), c) >= 0) EXPECT_EQ(nodal[n][c], u[d.dof(static_cast<int>(n), c)]);
}
