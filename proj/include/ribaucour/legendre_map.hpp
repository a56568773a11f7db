#pragma once

#include <array>
#include <vector>

#include "complex_grid.hpp"
#include "lie_core.hpp"

namespace ribaucour {

struct LegendreMap {
  QuadComplex grid;
  std::vector<ContactElement> elements;  // indexed by VertexId

  const ContactElement& at(VertexId v) const { return elements.at(v); }

  Sphere curvature_sphere(EdgeId e, const Tolerances& tol = {}) const {
    auto [u, v] = grid.edge_vertices(e);
    return contact_intersect(elements.at(u), elements.at(v), tol);
  }

  // s_ij, s_jk, s_kl, s_il
  std::array<Sphere, 4> face_curvature_spheres(FaceId f, const Tolerances& tol = {}) const {
    auto e = grid.face_edges(f);
    return {curvature_sphere(e[0], tol), curvature_sphere(e[1], tol), curvature_sphere(e[2], tol),
            curvature_sphere(e[3], tol)};
  }
};

}  // namespace ribaucour
