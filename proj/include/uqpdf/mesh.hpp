#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace uqpdf {

// Structured grid of 9-node bi-quadratic quadrilaterals on the unit square.
// The coarse grid (level 0) is 2x2 elements; each refinement level splits
// every element at the edge midpoints, quadrupling the element count.
//
// Nodes live on the (2*cells_per_side + 1)^2 lattice and are numbered
// lexicographically (x fastest). Element connectivity is the element's own
// 3x3 node sub-lattice in row-major order, i.e. local node 3*jy + jx sits at
// lattice offset (jx, jy) from the element's lower-left node.
struct StructuredQuadMesh {
  int refinement_level = 0;
  int cells_per_side = 0;
  int nodes_per_side = 0;
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 9>> elements;
  std::vector<int> boundary_nodes;  // ascending node ids
  std::vector<bool> is_boundary;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }
  double spacing() const { return 1.0 / cells_per_side; }
};

inline constexpr int kMaxRefinementLevel = 6;

StructuredQuadMesh build_mesh(int refinement_level);

}  // namespace uqpdf
