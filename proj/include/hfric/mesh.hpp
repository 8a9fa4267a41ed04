#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace hfric::fem {

struct Node {
  double x1 = 0.0;  // mm
  double x2 = 0.0;  // mm, 0 on the contact side, -h at the bottom
};

using Quad = std::array<int, 4>;  // counterclockwise

// Rectangular skid [0, b] x [-h, 0] meshed with bilinear quads, fine under the
// contact side (x2 = 0) and coarsened 2:1 per level toward the bottom.
struct Mesh {
  std::vector<Node> nodes;
  std::vector<Quad> quads;
  std::vector<int> top_nodes;     // x1-sorted, m_x + 1 entries
  std::vector<int> bottom_nodes;  // x1-sorted
  std::vector<int> left_nodes;    // x2-sorted ascending
  std::vector<int> right_nodes;   // x2-sorted ascending, same heights as left
  std::vector<double> element_sizes;  // mm, sqrt(area)
  double b = 0.0;
  double h = 0.0;
  int m_x = 0;
  int n_levels = 0;
  double refined_depth = 0.0;  // mm, depth of the finest band

  double top_spacing() const { return b / m_x; }
};

// Levels such that the coarsest element is b/32 wide (0 when m_x <= 32).
int default_levels(int m_x);

// Throws InvalidGrading.
Mesh build_block_mesh(double b, double h, int m_x, int n_levels);

struct MeshAudit {
  bool ok = true;
  double min_detj = 0.0;         // over all 2x2 Gauss points
  double top_spacing_error = 0.0;  // max |dx - b/m_x| along the top
  double coarsest_size = 0.0;
  std::vector<std::string> problems;
};
MeshAudit audit(const Mesh& m);

void write_mesh_csv(const Mesh& m, const std::filesystem::path& nodes_csv,
                    const std::filesystem::path& quads_csv);

} // namespace hfric::fem
