#pragma once

// ASCII OBJ writers. Samples that fail to decode are written as a vertex at
// the origin, listed in a comment and left out of every face.

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cyclide.hpp"

namespace ribaucour {

struct ObjMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::vector<std::size_t>> faces;  // 0-based
  std::vector<std::size_t> degenerate;          // vertex ids with no decoded position

  std::string str(const std::string& comment = {}) const {
    std::ostringstream o;
    o.precision(17);
    if (!comment.empty()) o << "# " << comment << "\n";
    o << "# vertices " << vertices.size() << " faces " << faces.size() << "\n";
    if (!degenerate.empty()) {
      o << "# degenerate";
      for (std::size_t v : degenerate) o << ' ' << v + 1;
      o << "\n";
    }
    for (const auto& v : vertices) o << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << "\n";
    for (const auto& f : faces) {
      o << 'f';
      for (std::size_t v : f) o << ' ' << v + 1;
      o << "\n";
    }
    return o.str();
  }
};

namespace detail {
inline void add_grid_faces(ObjMesh& mesh, const std::vector<char>& bad, std::size_t base, std::size_t nu, std::size_t nv,
                           bool wrap, bool quads) {
  std::size_t eu = wrap ? nu : nu - 1, ev = wrap ? nv : nv - 1;
  auto id = [&](std::size_t u, std::size_t v) { return (u % nu) * nv + (v % nv); };
  for (std::size_t u = 0; u < eu; ++u)
    for (std::size_t v = 0; v < ev; ++v) {
      std::size_t a = id(u, v), b = id(u + 1, v), c = id(u + 1, v + 1), d = id(u, v + 1);
      if (bad[a] || bad[b] || bad[c] || bad[d]) continue;
      if (quads) {
        mesh.faces.push_back({base + a, base + b, base + c, base + d});
      } else {
        mesh.faces.push_back({base + a, base + b, base + c});
        mesh.faces.push_back({base + a, base + c, base + d});
      }
    }
}
}  // namespace detail

// Quad mesh of a point-sphere net: vertex(a,b) -> OBJ vertex b(m+1)+a+1.
inline ObjMesh net_mesh(const QuadComplex& g, const std::vector<std::optional<Eigen::Vector3d>>& points) {
  ObjMesh mesh;
  std::vector<char> bad(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    mesh.vertices.push_back(points[i].value_or(Eigen::Vector3d::Zero()));
    if (!points[i]) {
      bad[i] = 1;
      mesh.degenerate.push_back(i);
    }
  }
  for (FaceId f = 0; f < g.face_count(); ++f) {
    auto v = g.face_vertices(f);
    if (bad[v[0]] || bad[v[1]] || bad[v[2]] || bad[v[3]]) continue;
    mesh.faces.push_back({v[0], v[1], v[2], v[3]});
  }
  return mesh;
}

inline std::optional<Eigen::Vector3d> decode_point(const Sphere& s, const MoebiusFrame& frame, const Tolerances& tol) {
  try {
    auto d = sphere_decode(s, frame, tol);
    if (auto* e = std::get_if<EuclideanSphere>(&d)) return e->center;
  } catch (const Error&) {
  }
  return std::nullopt;
}

inline ObjMesh envelope_mesh(const LegendreMap& f, const MoebiusFrame& frame = MoebiusFrame::standard(),
                             const Tolerances& tol = {}) {
  std::vector<std::optional<Eigen::Vector3d>> pts;
  for (const ContactElement& el : f.elements) {
    try {
      pts.push_back(decode_point(point_sphere(el, frame, tol), frame, tol));
    } catch (const Error&) {
      pts.push_back(std::nullopt);
    }
  }
  return net_mesh(f.grid, pts);
}

// Vertex spheres of a congruence read as points (their centers).
inline ObjMesh congruence_mesh(const RCongruence& r, const MoebiusFrame& frame = MoebiusFrame::standard(),
                               const Tolerances& tol = {}) {
  std::vector<std::optional<Eigen::Vector3d>> pts;
  for (const Sphere& s : r.spheres) pts.push_back(decode_point(s, frame, tol));
  return net_mesh(r.grid, pts);
}

// Latitude/longitude sphere: res longitudes, res-1 latitude rings plus two
// poles, so res(res-1)+2 vertices and 2res(res-1) triangles per sphere.
inline void append_sphere(ObjMesh& mesh, const Eigen::Vector3d& c, double radius, std::size_t res) {
  std::size_t base = mesh.vertices.size();
  double rr = std::abs(radius);
  mesh.vertices.push_back(c + Eigen::Vector3d(0, 0, rr));
  for (std::size_t i = 1; i < res; ++i) {
    double th = std::numbers::pi * static_cast<double>(i) / static_cast<double>(res);
    for (std::size_t k = 0; k < res; ++k) {
      double ph = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(res);
      mesh.vertices.push_back(c + rr * Eigen::Vector3d(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)));
    }
  }
  mesh.vertices.push_back(c - Eigen::Vector3d(0, 0, rr));
  std::size_t south = mesh.vertices.size() - 1;
  auto ring = [&](std::size_t i, std::size_t k) { return base + 1 + (i - 1) * res + (k % res); };
  for (std::size_t k = 0; k < res; ++k) mesh.faces.push_back({base, ring(1, k), ring(1, k + 1)});
  for (std::size_t i = 1; i + 1 < res; ++i)
    for (std::size_t k = 0; k < res; ++k) {
      mesh.faces.push_back({ring(i, k), ring(i + 1, k), ring(i + 1, k + 1)});
      mesh.faces.push_back({ring(i, k), ring(i + 1, k + 1), ring(i, k + 1)});
    }
  for (std::size_t k = 0; k < res; ++k) mesh.faces.push_back({ring(res - 1, k), south, ring(res - 1, k + 1)});
}

// Every sphere of a congruence; planes and the point at infinity are listed as degenerate.
inline ObjMesh spheres_mesh(const std::vector<Sphere>& spheres, std::size_t res,
                            const MoebiusFrame& frame = MoebiusFrame::standard(), const Tolerances& tol = {}) {
  if (res < 3) throw Error(Errc::BadId, "sphere resolution must be at least 3");
  ObjMesh mesh;
  for (std::size_t i = 0; i < spheres.size(); ++i) {
    std::optional<EuclideanSphere> e;
    try {
      auto d = sphere_decode(spheres[i], frame, tol);
      if (auto* x = std::get_if<EuclideanSphere>(&d)) e = *x;
    } catch (const Error&) {
    }
    if (e) append_sphere(mesh, e->center, e->radius, res);
    else mesh.degenerate.push_back(i);  // index of the sphere, not a vertex
  }
  return mesh;
}

// Triangulated cyclide patch on the res x res sample torus.
inline ObjMesh cyclide_mesh(const DupinCyclide& c, std::size_t res, const MoebiusFrame& frame = MoebiusFrame::standard(),
                            const Tolerances& tol = {}) {
  if (res < 3) throw Error(Errc::BadId, "cyclide resolution must be at least 3");
  CyclideSample s = sample_cyclide(c, frame, res, tol);
  ObjMesh mesh;
  std::vector<char> bad(s.points.size(), 0);
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    mesh.vertices.push_back(s.points[i].value_or(Eigen::Vector3d::Zero()));
    if (!s.points[i]) {
      bad[i] = 1;
      mesh.degenerate.push_back(i);
    }
  }
  detail::add_grid_faces(mesh, bad, 0, res, res, true, false);
  return mesh;
}

}  // namespace ribaucour
