#include "hfric/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "hfric/errors.hpp"
#include "hfric/quadrature.hpp"

namespace hfric::fem {
namespace {

struct Builder {
  Mesh& m;
  std::vector<int> row;  // current lower boundary, x1-sorted
  double y = 0.0;

  int add(double x1, double x2) {
    m.nodes.push_back({x1, x2});
    return static_cast<int>(m.nodes.size()) - 1;
  }

  std::vector<int> new_row(int cells, double y_new) {
    std::vector<int> r(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) r[i] = add(i == cells ? m.b : m.b * i / cells, y_new);
    return r;
  }

  void uniform_layer(double y_new) {
    const int cells = static_cast<int>(row.size()) - 1;
    std::vector<int> below = new_row(cells, y_new);
    for (int i = 0; i < cells; ++i) m.quads.push_back({below[i], below[i + 1], row[i + 1], row[i]});
    row = std::move(below);
    y = y_new;
  }

  // Four fine cells over two coarse cells, six quads per group.
  void transition_layer(double y_new) {
    const int fine = static_cast<int>(row.size()) - 1;
    const int coarse = fine / 2;
    std::vector<int> below = new_row(coarse, y_new);
    const double y_mid = 0.5 * (y + y_new);
    for (int g = 0; g < fine / 4; ++g) {
      const int t0 = row[4 * g], t1 = row[4 * g + 1], t2 = row[4 * g + 2];
      const int t3 = row[4 * g + 3], t4 = row[4 * g + 4];
      const int b0 = below[2 * g], b2 = below[2 * g + 1], b4 = below[2 * g + 2];
      const int m1 = add(m.nodes[t1].x1, y_mid);
      const int c = add(m.nodes[t2].x1, y_mid);
      const int m3 = add(m.nodes[t3].x1, y_mid);
      m.quads.push_back({b0, m1, t1, t0});
      m.quads.push_back({b0, b2, c, m1});
      m.quads.push_back({m1, c, t2, t1});
      m.quads.push_back({b2, b4, m3, c});
      m.quads.push_back({c, m3, t3, t2});
      m.quads.push_back({m3, b4, t4, t3});
    }
    row = std::move(below);
    y = y_new;
  }
};

double quad_area(const Mesh& m, const Quad& q) {
  double a = 0.0;
  for (int k = 0; k < 4; ++k) {
    const Node& p = m.nodes[q[k]];
    const Node& r = m.nodes[q[(k + 1) % 4]];
    a += p.x1 * r.x2 - r.x1 * p.x2;
  }
  return 0.5 * a;
}

} // namespace

int default_levels(int m_x) {
  int levels = 0;
  while (m_x > 32 && m_x % 2 == 0) {
    m_x /= 2;
    ++levels;
  }
  return levels;
}

Mesh build_block_mesh(double b, double h, int m_x, int n_levels) {
  if (!(b > 0.0) || !(h > 0.0)) throw InvalidGrading("mesh: b and h must be positive");
  if (m_x < 1 || n_levels < 0) throw InvalidGrading("mesh: need m_x >= 1 and n_levels >= 0");
  if (n_levels > 0 && m_x % (1 << (n_levels + 1)) != 0) {
    throw InvalidGrading("mesh: m_x = " + std::to_string(m_x) + " is not a multiple of 2^(n_levels+1) = " +
                         std::to_string(1 << (n_levels + 1)) + " required by the 2:1 transition layers");
  }
  Mesh m;
  m.b = b;
  m.h = h;
  m.m_x = m_x;
  m.n_levels = n_levels;
  Builder bld{m, {}, 0.0};
  bld.row = bld.new_row(m_x, 0.0);
  m.top_nodes = bld.row;

  const double s0 = b / m_x;
  if (n_levels == 0) {
    const int rows = std::max(1, static_cast<int>(std::lround(h / s0)));
    for (int r = 1; r <= rows; ++r) bld.uniform_layer(r == rows ? -h : -h * r / rows);
    m.refined_depth = h;
  } else {
    const int fine_rows = 1 << (n_levels + 1);
    double used = 0.0;
    auto step = [&](double H, bool transition) {
      used += H;
      if (used > h * (1.0 + 1e-12)) {
        throw InvalidGrading("mesh: graded layers need depth " + std::to_string(used) +
                             " mm > h = " + std::to_string(h) + " mm");
      }
      if (transition) bld.transition_layer(-used);
      else bld.uniform_layer(-used);
    };
    for (int r = 0; r < fine_rows; ++r) step(s0, false);
    m.refined_depth = used;
    double s = s0;
    for (int level = 1; level <= n_levels; ++level) {
      step(s, true);
      s *= 2.0;
      if (level < n_levels) step(s, false);
    }
    const double rest = h - used;
    if (rest < 0.5 * s) {
      throw InvalidGrading("mesh: only " + std::to_string(rest) + " mm left below the graded zone, need at least half a coarse cell (" +
                           std::to_string(0.5 * s) + " mm)");
    }
    const int rows = std::max(1, static_cast<int>(std::lround(rest / s)));
    const double y0 = bld.y;
    for (int r = 1; r <= rows; ++r) bld.uniform_layer(r == rows ? -h : y0 - rest * r / rows);
  }
  m.bottom_nodes = bld.row;

  for (int i = 0; i < static_cast<int>(m.nodes.size()); ++i) {
    if (m.nodes[i].x1 == 0.0) m.left_nodes.push_back(i);
    if (m.nodes[i].x1 == b) m.right_nodes.push_back(i);
  }
  auto by_height = [&](int a, int c) { return m.nodes[a].x2 < m.nodes[c].x2; };
  std::sort(m.left_nodes.begin(), m.left_nodes.end(), by_height);
  std::sort(m.right_nodes.begin(), m.right_nodes.end(), by_height);

  m.element_sizes.reserve(m.quads.size());
  for (const auto& q : m.quads) m.element_sizes.push_back(std::sqrt(quad_area(m, q)));
  return m;
}

MeshAudit audit(const Mesh& m) {
  MeshAudit a;
  a.min_detj = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < m.quads.size(); ++e) {
    std::array<double, 4> x{}, y{};
    for (int k = 0; k < 4; ++k) {
      x[k] = m.nodes[m.quads[e][k]].x1;
      y[k] = m.nodes[m.quads[e][k]].x2;
    }
    for (int g = 0; g < 4; ++g) {
      const double dj = quad_jacobian(x, y, kGauss2x2[g][0], kGauss2x2[g][1]).det;
      a.min_detj = std::min(a.min_detj, dj);
      if (!(dj > 0.0)) {
        a.ok = false;
        a.problems.push_back("non-positive Jacobian in element " + std::to_string(e));
      }
    }
  }
  if (m.top_nodes.size() != static_cast<std::size_t>(m.m_x) + 1) {
    a.ok = false;
    a.problems.push_back("top side does not carry m_x + 1 nodes");
  }
  const double dx = m.top_spacing();
  for (std::size_t i = 0; i + 1 < m.top_nodes.size(); ++i) {
    const double d = m.nodes[m.top_nodes[i + 1]].x1 - m.nodes[m.top_nodes[i]].x1;
    a.top_spacing_error = std::max(a.top_spacing_error, std::abs(d - dx));
  }
  if (a.top_spacing_error > 1e-12 * m.b) {
    a.ok = false;
    a.problems.push_back("top nodes are not equally spaced");
  }
  for (double s : m.element_sizes) a.coarsest_size = std::max(a.coarsest_size, s);
  if (m.n_levels > 0 && m.refined_depth < 2.0 * a.coarsest_size * (1.0 - 1e-9)) {
    a.ok = false;
    a.problems.push_back("refined zone shallower than twice the coarsest element");
  }
  if (m.left_nodes.size() != m.right_nodes.size()) {
    a.ok = false;
    a.problems.push_back("left and right edges carry different node counts");
  } else {
    for (std::size_t i = 0; i < m.left_nodes.size(); ++i) {
      if (m.nodes[m.left_nodes[i]].x2 != m.nodes[m.right_nodes[i]].x2) {
        a.ok = false;
        a.problems.push_back("left/right edge node heights differ");
        break;
      }
    }
  }
  return a;
}

void write_mesh_csv(const Mesh& m, const std::filesystem::path& nodes_csv,
                    const std::filesystem::path& quads_csv) {
  std::ofstream nf(nodes_csv);
  std::ofstream qf(quads_csv);
  if (!nf || !qf) throw InputError("cannot write mesh CSV files");
  nf << "id,x1_mm,x2_mm\n";
  char buf[96];
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, m.nodes[i].x1, m.nodes[i].x2);
    nf << buf;
  }
  qf << "id,n0,n1,n2,n3\n";
  for (std::size_t e = 0; e < m.quads.size(); ++e) {
    const auto& q = m.quads[e];
    qf << e << ',' << q[0] << ',' << q[1] << ',' << q[2] << ',' << q[3] << '\n';
  }
}

} // namespace hfric::fem
