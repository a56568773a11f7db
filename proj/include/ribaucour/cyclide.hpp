#pragma once

#include <cmath>
#include <deque>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "envelope.hpp"

namespace ribaucour {

// Two Lorentz-orthogonal (2,1)-planes; D1 and D2 hold the two curvature
// sphere families. Bases are orthonormal in the auxiliary metric.
struct DupinCyclide {
  Basis6 D1, D2;
};

namespace detail {
inline Basis6 onb3(const Basis6& b, const Tolerances& tol, const char* what) {
  Basis6 o = orthonormalize(b, tol.rank);
  if (o.cols() != 3) throw Error(Errc::RankDefect, std::string(what) + " is not 3-dimensional");
  return o;
}

inline void require_21(const Basis6& onb, const Tolerances& tol, const char* what) {
  Signature s = signature(onb, tol.light);
  if (!(s.pos == 2 && s.neg == 1)) throw Error(Errc::WrongSignature, std::string(what) + " is not a (2,1)-plane");
}

// (s + D) ∩ n^perp
inline Basis6 meet_complex(const Vec6& s, const Basis6& d, const Vec6& n, const Tolerances& tol) {
  Basis6 b = orthonormalize(hcat(columns({s.normalized()}), d), tol.rank);
  if (b.cols() != 4) throw Error(Errc::IntersectionDegenerate, "curvature sphere already in the plane");
  Eigen::MatrixXd row = (metric() * n.normalized()).transpose() * b;
  Eigen::MatrixXd k = null_space(row, tol.rank);
  if (k.cols() != 3) throw Error(Errc::IntersectionDegenerate, "plane lies in the complex");
  return orthonormalize(Basis6(b * k), tol.rank);
}
}  // namespace detail

inline DupinCyclide cyclide_from_plane(const Basis6& d1, const Tolerances& tol = {}) {
  DupinCyclide c;
  c.D1 = detail::onb3(d1, tol, "D1");
  detail::require_21(c.D1, tol, "D1");
  c.D2 = detail::onb3(lorentz_complement(c.D1, tol.rank), tol, "D2");
  detail::require_21(c.D2, tol, "D2");
  return c;
}

// worst |<x,y>| over x in D1, y in D2, and rank of D1 + D2
struct CyclideCheck {
  double orthogonality;
  int rank;
  bool ok(const Tolerances& tol = {}) const { return orthogonality <= tol.light && rank == 6; }
};

inline CyclideCheck check_cyclide(const DupinCyclide& c, const Tolerances& tol = {}) {
  return {(c.D1.transpose() * metric() * c.D2).cwiseAbs().maxCoeff(), numeric_rank(hcat(c.D1, c.D2), tol.rank)};
}

// D1 = span of the face's R-spheres; D2 holds the spheres touching all four.
inline DupinCyclide cyclide_from_face(const RCongruence& r, FaceId f, const Tolerances& tol = {}) {
  auto s = r.face_spheres(f);
  return cyclide_from_plane(columns({s[0], s[1], s[2], s[3]}), tol);
}

// Face-cyclides of a Legendre face: D1 = span(s_ij, s_kl, x(t)) with x(t) on
// the unit circle of the Euclidean complement of span(s_ij, s_kl) inside
// {s_jk, s_il}^perp. t = 0 is the first complement direction.
inline DupinCyclide face_cyclide_family(const LegendreMap& f, FaceId fid, double t, const Tolerances& tol = {}) {
  auto s = f.face_curvature_spheres(fid, tol);
  if (proj_dist(s[0], s[2]) <= tol.rank || proj_dist(s[1], s[3]) <= tol.rank)
    throw Error(Errc::UmbilicFace, "opposite curvature spheres coincide");
  Basis6 w = orthonormalize(lorentz_complement(columns({s[1], s[3]}), tol.rank), tol.rank);
  Basis6 p = orthonormalize(columns({s[0], s[2]}), tol.rank);
  if (w.cols() != 4 || p.cols() != 2) throw Error(Errc::RankDefect, "curvature spheres of the face are dependent");
  Basis6 e = orthonormalize(Basis6(w - p * (p.transpose() * w)), tol.rank);
  if (e.cols() != 2) throw Error(Errc::RankDefect, "no room for a face-cyclide");
  Vec6 e1 = e.col(0), e2 = e.col(1);
  detail::fix_sign(e1);
  detail::fix_sign(e2);
  Vec6 x = std::cos(t) * e1 + std::sin(t) * e2;
  return cyclide_from_plane(hcat(p, columns({x})), tol);
}

// ---------------------------------------------------------------- cyclidic nets

struct CyclidicNet {
  QuadComplex grid;
  std::vector<DupinCyclide> faces;
};

struct CyclidicReport {
  double membership = 0.0;  // s_ij, s_kl in D1; s_jk, s_il in D2
  double sharing = 0.0;     // adjacent faces share the contact elements along the common edge
  double orthogonality = 0.0;
  bool ok(const Tolerances& tol = {}) const {
    return membership <= tol.closure && sharing <= tol.closure && orthogonality <= tol.closure;
  }
};

inline CyclidicReport check_cyclidic(const LegendreMap& f, const CyclidicNet& net, const Tolerances& tol = {}) {
  const QuadComplex& g = f.grid;
  CyclidicReport rep;
  for (FaceId fid = 0; fid < g.face_count(); ++fid) {
    const DupinCyclide& d = net.faces[fid];
    auto s = f.face_curvature_spheres(fid, tol);
    rep.membership = std::max({rep.membership, span_residual(d.D1, s[0]), span_residual(d.D1, s[2]),
                               span_residual(d.D2, s[1]), span_residual(d.D2, s[3])});
    rep.orthogonality = std::max(rep.orthogonality, check_cyclide(d, tol).orthogonality);
    auto [a, b] = g.face_coords(fid);
    // across a family-2 edge the curvature line on s_jk is span(s_jk, D1)
    if (a + 1 < g.m()) {
      const DupinCyclide& e = net.faces[g.face(a + 1, b)];
      Basis6 x = orthonormalize(hcat(columns({s[1]}), d.D1), tol.rank);
      Basis6 y = orthonormalize(hcat(columns({s[1]}), e.D1), tol.rank);
      rep.sharing = std::max(rep.sharing, subspace_distance(x, y));
    }
    if (b + 1 < g.n()) {
      const DupinCyclide& e = net.faces[g.face(a, b + 1)];
      Basis6 x = orthonormalize(hcat(columns({s[2]}), d.D2), tol.rank);
      Basis6 y = orthonormalize(hcat(columns({s[2]}), e.D2), tol.rank);
      rep.sharing = std::max(rep.sharing, subspace_distance(x, y));
    }
  }
  return rep;
}

// Face-by-face propagation from one face-cyclide. Across a family-2 edge with
// curvature sphere s: D1' = (s + D1) ∩ n1'^perp; across a family-1 edge:
// D2' = (s + D2) ∩ n2'^perp.
inline CyclidicNet propagate_cyclidic(const LegendreMap& f, FaceId f0, const DupinCyclide& initial,
                                      const RCongruence& source, const Tolerances& tol = {}) {
  const QuadComplex& g = f.grid;
  std::vector<FaceComplexes> fc = all_face_complexes(source, tol);
  CyclidicNet net{g, std::vector<DupinCyclide>(g.face_count())};
  std::vector<char> known(g.face_count(), 0);
  net.faces[f0] = initial;
  known[f0] = 1;
  std::deque<FaceId> queue{f0};
  while (!queue.empty()) {
    FaceId cur = queue.front();
    queue.pop_front();
    for (EdgeId e : g.face_edges(cur)) {
      for (FaceId nb : g.edge_faces(e)) {
        if (known[nb]) continue;
        Sphere s = f.curvature_sphere(e, tol);
        DupinCyclide d;
        if (g.edge_family(e) == 2) {
          d.D1 = detail::meet_complex(s, net.faces[cur].D1, fc[nb].n1, tol);
          d.D2 = detail::onb3(lorentz_complement(d.D1, tol.rank), tol, "D2");
        } else {
          d.D2 = detail::meet_complex(s, net.faces[cur].D2, fc[nb].n2, tol);
          d.D1 = detail::onb3(lorentz_complement(d.D2, tol.rank), tol, "D1");
        }
        net.faces[nb] = d;
        known[nb] = 1;
        queue.push_back(nb);
      }
    }
  }
  return net;
}

inline double cyclidic_distance(const CyclidicNet& a, const CyclidicNet& b) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.faces.size(); ++i)
    w = std::max({w, subspace_distance(a.faces[i].D1, b.faces[i].D1), subspace_distance(a.faces[i].D2, b.faces[i].D2)});
  return w;
}

inline Basis6 reflect_plane(const Vec6& n, const Basis6& d, const Tolerances& tol = {}) {
  Basis6 out(6, d.cols());
  for (Eigen::Index c = 0; c < d.cols(); ++c) out.col(c) = reflect(n, Vec6(d.col(c))).normalized();
  return orthonormalize(out, tol.rank);
}

inline CyclidicNet map_cyclidic_sigma3(const CyclidicNet& net, const RibaucourPair& pair, const Tolerances& tol = {}) {
  CyclidicNet out{net.grid, std::vector<DupinCyclide>(net.faces.size())};
  for (FaceId fid = 0; fid < net.faces.size(); ++fid)
    out.faces[fid] = {reflect_plane(pair.n3[fid], net.faces[fid].D1, tol), reflect_plane(pair.n3[fid], net.faces[fid].D2, tol)};
  return out;
}

// ---------------------------------------------------------------- R-cyclides
//
// The vertical face over an edge (uv) of a Ribaucour pair has the curvature
// spheres s_uv, s^_uv (in R) and r_u, r_v (in R~). R-cyclides are returned
// with D1 = R and D2 = R~.

struct VerticalFace {
  Sphere s, shat, ru, rv;
};

inline VerticalFace vertical_face(const RibaucourPair& pair, EdgeId e, const Tolerances& tol = {}) {
  auto [u, v] = pair.r.grid.edge_vertices(e);
  return {pair.f.curvature_sphere(e, tol), pair.fhat.curvature_sphere(e, tol), pair.r.at(u), pair.r.at(v)};
}

// One-parameter family: R~ = span(r_u, r_v, x(t)) inside span(s, s^)^perp.
inline DupinCyclide r_cyclide(const RibaucourPair& pair, EdgeId e, double t, const Tolerances& tol = {}) {
  VerticalFace vf = vertical_face(pair, e, tol);
  Basis6 w = orthonormalize(lorentz_complement(columns({vf.s, vf.shat}), tol.rank), tol.rank);
  Basis6 p = orthonormalize(columns({vf.ru, vf.rv}), tol.rank);
  if (w.cols() != 4 || p.cols() != 2) throw Error(Errc::WrongSignature, "vertical face is degenerate");
  Basis6 c = orthonormalize(Basis6(w - p * (p.transpose() * w)), tol.rank);
  if (c.cols() != 2) throw Error(Errc::WrongSignature, "R-spheres are not in admissible position");
  Vec6 e1 = c.col(0), e2 = c.col(1);
  detail::fix_sign(e1);
  detail::fix_sign(e2);
  DupinCyclide rt = cyclide_from_plane(hcat(p, columns({Vec6(std::cos(t) * e1 + std::sin(t) * e2)})), tol);
  return {rt.D2, rt.D1};
}

// The member fixed by a cyclidic net of f: the vertical curvature spheres are
// the sigma3-fixed spheres of the contact elements along the net's curvature
// line, so R~ = (s + D) ∩ n3^perp with D the transversal family of the face.
inline DupinCyclide r_cyclide_canonical(const RibaucourPair& pair, const CyclidicNet& net, EdgeId e,
                                        const Tolerances& tol = {}) {
  const QuadComplex& g = pair.r.grid;
  FaceId fid = g.edge_faces(e).front();
  Sphere s = pair.f.curvature_sphere(e, tol);
  const DupinCyclide& d = net.faces[fid];
  Basis6 rt = detail::meet_complex(s, g.edge_family(e) == 1 ? d.D2 : d.D1, pair.n3[fid], tol);
  DupinCyclide c = cyclide_from_plane(rt, tol);
  return {c.D2, c.D1};
}

// Channel pairs: the R-spheres of family-1 line b span C_b, and the R-cyclide
// R~ = C_b, R = C_b^perp serves every vertical face over that line.
inline DupinCyclide r_cyclide_constant(const RCongruence& r, std::size_t line, const Tolerances& tol = {}) {
  auto verts = r.grid.coordinate_line(1, line);
  Basis6 m(6, static_cast<Eigen::Index>(verts.size()));
  for (std::size_t i = 0; i < verts.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = r.at(verts[i]).normalized();
  DupinCyclide c = cyclide_from_plane(m, tol);
  return {c.D2, c.D1};
}

// Is the vertical face (s, s^, r_u, r_v) carried by the cyclide?
inline double r_cyclide_residual(const DupinCyclide& c, const VerticalFace& vf) {
  return std::max({span_residual(c.D1, vf.s), span_residual(c.D1, vf.shat), span_residual(c.D2, vf.ru),
                   span_residual(c.D2, vf.rv)});
}

// ---------------------------------------------------------------- sampling

struct CyclideSample {
  std::size_t resolution = 0;
  std::vector<std::optional<Eigen::Vector3d>> points;  // u-major, resolution^2; empty where decoding fails
  std::size_t skipped = 0;
  double max_radius = 0.0;  // decoded point spheres should have radius 0

  const std::optional<Eigen::Vector3d>& at(std::size_t u, std::size_t v) const { return points[u * resolution + v]; }
};

inline CyclideSample sample_cyclide(const DupinCyclide& c, const MoebiusFrame& frame, std::size_t resolution,
                                    const Tolerances& tol = {}) {
  require_standard(frame);
  CyclideSample out;
  out.resolution = resolution;
  out.points.reserve(resolution * resolution);
  for (std::size_t u = 0; u < resolution; ++u) {
    Vec6 s = conic_point(c.D1, 2 * std::numbers::pi * static_cast<double>(u) / static_cast<double>(resolution));
    for (std::size_t v = 0; v < resolution; ++v) {
      Vec6 w = conic_point(c.D2, 2 * std::numbers::pi * static_cast<double>(v) / static_cast<double>(resolution));
      std::optional<Eigen::Vector3d> x;
      try {
        auto d = sphere_decode(point_sphere(ContactElement::image(s, w), frame, tol), frame);
        if (auto* e = std::get_if<EuclideanSphere>(&d)) {
          x = e->center;
          out.max_radius = std::max(out.max_radius, std::abs(e->radius));
        }
      } catch (const Error&) {
      }
      if (!x) ++out.skipped;
      out.points.push_back(x);
    }
  }
  return out;
}

}  // namespace ribaucour
