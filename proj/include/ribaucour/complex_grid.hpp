#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "tolerances.hpp"

namespace ribaucour {

using VertexId = std::size_t;
using EdgeId = std::size_t;
using FaceId = std::size_t;

// Rectangular quad grid with (m+1) x (n+1) vertices (a, b), 0 <= a <= m,
// 0 <= b <= n. Family-1 edges join (a,b)-(a+1,b), family-2 edges (a,b)-(a,b+1).
// Face (a,b) has corners i=(a,b), j=(a+1,b), k=(a+1,b+1), l=(a,b+1).
class QuadComplex {
 public:
  QuadComplex() = default;
  QuadComplex(std::size_t m, std::size_t n) : m_(m), n_(n) {
    if (m == 0 || n == 0) throw Error(Errc::BadId, "grid needs at least one face");
  }

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::size_t vertex_count() const { return (m_ + 1) * (n_ + 1); }
  std::size_t face_count() const { return m_ * n_; }
  std::size_t edge_count() const { return m_ * (n_ + 1) + n_ * (m_ + 1); }

  VertexId vertex(std::size_t a, std::size_t b) const {
    if (a > m_ || b > n_) throw Error(Errc::BadId, "vertex out of range");
    return b * (m_ + 1) + a;
  }
  std::array<std::size_t, 2> vertex_coords(VertexId v) const {
    check_vertex(v);
    return {v % (m_ + 1), v / (m_ + 1)};
  }

  FaceId face(std::size_t a, std::size_t b) const {
    if (a >= m_ || b >= n_) throw Error(Errc::BadId, "face out of range");
    return b * m_ + a;
  }
  std::array<std::size_t, 2> face_coords(FaceId f) const {
    check_face(f);
    return {f % m_, f / m_};
  }

  // (i, j, k, l): (ij),(kl) in family 1, (jk),(il) in family 2
  std::array<VertexId, 4> face_vertices(FaceId f) const {
    auto [a, b] = face_coords(f);
    return {vertex(a, b), vertex(a + 1, b), vertex(a + 1, b + 1), vertex(a, b + 1)};
  }

  EdgeId edge1(std::size_t a, std::size_t b) const {
    if (a >= m_ || b > n_) throw Error(Errc::BadId, "family-1 edge out of range");
    return b * m_ + a;
  }
  EdgeId edge2(std::size_t a, std::size_t b) const {
    if (a > m_ || b >= n_) throw Error(Errc::BadId, "family-2 edge out of range");
    return m_ * (n_ + 1) + b * (m_ + 1) + a;
  }
  int edge_family(EdgeId e) const {
    if (e >= edge_count()) throw Error(Errc::BadId, "edge out of range");
    return e < m_ * (n_ + 1) ? 1 : 2;
  }
  std::array<VertexId, 2> edge_vertices(EdgeId e) const {
    if (edge_family(e) == 1) {
      std::size_t a = e % m_, b = e / m_;
      return {vertex(a, b), vertex(a + 1, b)};
    }
    std::size_t r = e - m_ * (n_ + 1);
    std::size_t a = r % (m_ + 1), b = r / (m_ + 1);
    return {vertex(a, b), vertex(a, b + 1)};
  }
  EdgeId edge_between(VertexId u, VertexId v) const {
    auto [a0, b0] = vertex_coords(u);
    auto [a1, b1] = vertex_coords(v);
    if (b0 == b1 && (a0 + 1 == a1 || a1 + 1 == a0)) return edge1(std::min(a0, a1), b0);
    if (a0 == a1 && (b0 + 1 == b1 || b1 + 1 == b0)) return edge2(a0, std::min(b0, b1));
    throw Error(Errc::BadId, "vertices are not adjacent");
  }
  // (ij), (jk), (kl), (il) of a face
  std::array<EdgeId, 4> face_edges(FaceId f) const {
    auto [a, b] = face_coords(f);
    return {edge1(a, b), edge2(a + 1, b), edge1(a, b + 1), edge2(a, b)};
  }
  std::vector<FaceId> edge_faces(EdgeId e) const {
    std::vector<FaceId> out;
    auto [u, v] = edge_vertices(e);
    auto [a, b] = vertex_coords(u);
    if (edge_family(e) == 1) {
      if (b > 0) out.push_back(face(a, b - 1));
      if (b < n_) out.push_back(face(a, b));
    } else {
      if (a > 0) out.push_back(face(a - 1, b));
      if (a < m_) out.push_back(face(a, b));
    }
    (void)v;
    return out;
  }
  std::vector<FaceId> vertex_faces(VertexId v) const {
    auto [a, b] = vertex_coords(v);
    std::vector<FaceId> out;
    for (int db = -1; db <= 0; ++db)
      for (int da = -1; da <= 0; ++da) {
        long fa = static_cast<long>(a) + da, fb = static_cast<long>(b) + db;
        if (fa >= 0 && fb >= 0 && fa < static_cast<long>(m_) && fb < static_cast<long>(n_))
          out.push_back(face(static_cast<std::size_t>(fa), static_cast<std::size_t>(fb)));
      }
    return out;
  }

  // dir 1: vertices (0..m, index); dir 2: vertices (index, 0..n)
  std::vector<VertexId> coordinate_line(int dir, std::size_t index) const {
    std::vector<VertexId> out;
    if (dir == 1) {
      if (index > n_) throw Error(Errc::BadId, "line index out of range");
      for (std::size_t a = 0; a <= m_; ++a) out.push_back(vertex(a, index));
    } else if (dir == 2) {
      if (index > m_) throw Error(Errc::BadId, "line index out of range");
      for (std::size_t b = 0; b <= n_; ++b) out.push_back(vertex(index, b));
    } else {
      throw Error(Errc::BadId, "direction must be 1 or 2");
    }
    return out;
  }
  std::size_t line_count(int dir) const { return dir == 1 ? n_ + 1 : m_ + 1; }

  // faces between the dir-lines index and index+1
  std::vector<FaceId> coordinate_ribbon(int dir, std::size_t index) const {
    std::vector<FaceId> out;
    if (dir == 1) {
      if (index >= n_) throw Error(Errc::BadId, "ribbon index out of range");
      for (std::size_t a = 0; a < m_; ++a) out.push_back(face(a, index));
    } else if (dir == 2) {
      if (index >= m_) throw Error(Errc::BadId, "ribbon index out of range");
      for (std::size_t b = 0; b < n_; ++b) out.push_back(face(index, b));
    } else {
      throw Error(Errc::BadId, "direction must be 1 or 2");
    }
    return out;
  }
  std::size_t ribbon_count(int dir) const { return dir == 1 ? n_ : m_; }

  // Axis-aligned rectangles (i, j, j', i') in cyclic order; max_extent bounds
  // the side lengths (0 = no bound).
  std::vector<std::array<VertexId, 4>> parameter_rectangles(std::size_t max_extent = 0) const {
    std::vector<std::array<VertexId, 4>> out;
    for (std::size_t b0 = 0; b0 < n_; ++b0)
      for (std::size_t b1 = b0 + 1; b1 <= n_; ++b1)
        for (std::size_t a0 = 0; a0 < m_; ++a0)
          for (std::size_t a1 = a0 + 1; a1 <= m_; ++a1) {
            if (max_extent && (a1 - a0 > max_extent || b1 - b0 > max_extent)) continue;
            out.push_back({vertex(a0, b0), vertex(a1, b0), vertex(a1, b1), vertex(a0, b1)});
          }
    return out;
  }

 private:
  void check_vertex(VertexId v) const {
    if (v >= vertex_count()) throw Error(Errc::BadId, "vertex id " + std::to_string(v));
  }
  void check_face(FaceId f) const {
    if (f >= face_count()) throw Error(Errc::BadId, "face id " + std::to_string(f));
  }

  std::size_t m_ = 1, n_ = 1;
};

}  // namespace ribaucour
