#include "uqpdf/mesh.hpp"

#include <string>

#include "uqpdf/errors.hpp"

namespace uqpdf {

StructuredQuadMesh build_mesh(int refinement_level) {
  if (refinement_level < 0 || refinement_level > kMaxRefinementLevel) {
    throw ConfigError("refinement level " + std::to_string(refinement_level) +
                      " outside [0, " + std::to_string(kMaxRefinementLevel) + "]");
  }

  StructuredQuadMesh mesh;
  mesh.refinement_level = refinement_level;
  mesh.cells_per_side = 2 << refinement_level;  // 2 * 2^level
  mesh.nodes_per_side = 2 * mesh.cells_per_side + 1;

  const int nps = mesh.nodes_per_side;
  const double dx = 1.0 / (nps - 1);  // power of two, exact in binary

  mesh.nodes.reserve(static_cast<size_t>(nps) * nps);
  mesh.is_boundary.assign(static_cast<size_t>(nps) * nps, false);
  for (int j = 0; j < nps; ++j) {
    for (int i = 0; i < nps; ++i) {
      mesh.nodes.emplace_back(i * dx, j * dx);
      if (i == 0 || j == 0 || i == nps - 1 || j == nps - 1) {
        const int id = j * nps + i;
        mesh.is_boundary[id] = true;
        mesh.boundary_nodes.push_back(id);
      }
    }
  }

  mesh.elements.reserve(static_cast<size_t>(mesh.cells_per_side) * mesh.cells_per_side);
  for (int ey = 0; ey < mesh.cells_per_side; ++ey) {
    for (int ex = 0; ex < mesh.cells_per_side; ++ex) {
      std::array<int, 9> conn{};
      for (int jy = 0; jy < 3; ++jy) {
        for (int jx = 0; jx < 3; ++jx) {
          conn[3 * jy + jx] = (2 * ey + jy) * nps + (2 * ex + jx);
        }
      }
      mesh.elements.push_back(conn);
    }
  }
  return mesh;
}

}  // namespace uqpdf
