#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cyclide.hpp"

namespace ribaucour {

// ---------------------------------------------------------------- osculating complexes

namespace detail {
// i', i, j, j' along the coordinate line through edge e
inline std::array<VertexId, 4> line_quadruple(const QuadComplex& g, EdgeId e) {
  auto [u, v] = g.edge_vertices(e);
  auto [a, b] = g.vertex_coords(u);
  if (g.edge_family(e) == 1) {
    if (a == 0 || a + 2 > g.m()) throw Error(Errc::BadId, "osculating complex needs an interior edge");
    return {g.vertex(a - 1, b), u, v, g.vertex(a + 2, b)};
  }
  if (b == 0 || b + 2 > g.n()) throw Error(Errc::BadId, "osculating complex needs an interior edge");
  return {g.vertex(a, b - 1), u, v, g.vertex(a, b + 2)};
}
}  // namespace detail

// t = span{f_i', f_i, f_j, f_j'}^perp
inline LinearComplex osculating_complex(const LegendreMap& f, const MoebiusFrame& frame, EdgeId e,
                                        const Tolerances& tol = {}) {
  auto q = detail::line_quadruple(f.grid, e);
  Basis6 pts(6, 4);
  Basis6 all(6, 8);
  for (int k = 0; k < 4; ++k) {
    const ContactElement& el = f.at(q[k]);
    pts.col(k) = point_sphere(el, frame, tol);
    all.col(2 * k) = el.b1();
    all.col(2 * k + 1) = el.b2();
  }
  if (numeric_rank(pts, tol.rank) < 4) throw Error(Errc::CircularQuadruple, "point spheres are concircular");
  Eigen::MatrixXd k = null_space(Eigen::MatrixXd((metric() * all).transpose()), tol.rank);
  if (k.cols() != 1) throw Error(Errc::CircularQuadruple, "osculating complex is not unique");
  Vec6 t = k.col(0);
  detail::fix_sign(t);
  return classify_complex(t, tol);
}

struct LineVerdict {
  std::size_t line = 0;
  bool spherical = false;
  double spread = 0.0;  // worst projective distance between osculating complexes on the line
  std::optional<LinearComplex> complex;
  std::optional<DecodedComplex> decoded;
  std::string error;
};

// Per coordinate line of family dir: spherical iff the osculating complexes agree.
inline std::vector<LineVerdict> detect_spherical_lines(const LegendreMap& f, const MoebiusFrame& frame, int dir,
                                                       const Tolerances& tol = {}) {
  const QuadComplex& g = f.grid;
  std::vector<LineVerdict> out;
  std::size_t len = dir == 1 ? g.m() : g.n();
  for (std::size_t line = 0; line < g.line_count(dir); ++line) {
    LineVerdict v;
    v.line = line;
    if (len < 3) {
      v.error = "line too short for osculating complexes";
      out.push_back(v);
      continue;
    }
    try {
      std::vector<Vec6> ts;
      for (std::size_t s = 1; s + 2 <= len; ++s) {
        EdgeId e = dir == 1 ? g.edge1(s, line) : g.edge2(line, s);
        ts.push_back(osculating_complex(f, frame, e, tol).rep);
      }
      for (const Vec6& t : ts) v.spread = std::max(v.spread, proj_dist(t, ts.front()));
      v.spherical = v.spread <= tol.proj;
      if (v.spherical) {
        v.complex = classify_complex(ts.front(), tol);
        try {
          v.decoded = decode_complex(*v.complex, frame, tol);
        } catch (const Error& e) {
          v.error = e.what();
        }
      }
    } catch (const Error& e) {
      v.error = e.what();
    }
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------- channel surfaces

namespace detail {
inline Basis6 line_span(const RCongruence& r, std::size_t line, const Tolerances& tol) {
  auto verts = r.grid.coordinate_line(1, line);
  Basis6 m(6, static_cast<Eigen::Index>(verts.size()));
  for (std::size_t i = 0; i < verts.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = r.at(verts[i]).normalized();
  return orthonormalize(m, tol.rank);
}

// n2 of every face of family-1 ribbon b, and their worst projective spread
inline std::pair<Vec6, double> ribbon_n2(const RCongruence& r, std::size_t b, const Tolerances& tol) {
  const QuadComplex& g = r.grid;
  Vec6 first = face_complexes(r, g.face(0, b), tol).n2;
  double spread = 0.0;
  for (std::size_t a = 1; a < g.m(); ++a) spread = std::max(spread, proj_dist(face_complexes(r, g.face(a, b), tol).n2, first));
  return {first.normalized(), spread};
}
}  // namespace detail

struct ConstantCurvatureVerdict {
  bool ok = false;
  std::vector<Vec6> generators;  // constant curvature sphere per family-1 line
  std::vector<Vec6> n2;          // per family-1 ribbon
  double ribbon_spread = 0.0;
  double line_residual = 0.0;    // worst |<r, s_b>| over the line
  double cross_check = 0.0;      // n2 against span(s_b, s_b+1) and span(r_j, r_k)
  std::string reason;
};

inline ConstantCurvatureVerdict detect_constant_curvature_envelope(const RCongruence& r, const Tolerances& tol = {}) {
  const QuadComplex& g = r.grid;
  ConstantCurvatureVerdict v;
  try {
    for (std::size_t b = 0; b < g.n(); ++b) {
      auto [n, spread] = detail::ribbon_n2(r, b, tol);
      v.n2.push_back(n);
      v.ribbon_spread = std::max(v.ribbon_spread, spread);
    }
    if (v.ribbon_spread > tol.proj) {
      v.reason = "n2 varies along a family-1 ribbon";
      return v;
    }
    Basis6 c0 = detail::line_span(r, 0, tol);
    if (c0.cols() > 5) {
      v.reason = "line 0 spans the whole space";
      return v;
    }
    auto s0 = lightlike_in(lorentz_complement(c0, tol.rank), tol.light);
    if (!s0) {
      v.reason = "line 0 is not in a parabolic complex";
      return v;
    }
    // the constant spheres of one envelope are carried from line to line by n2
    v.generators.push_back(*s0);
    for (std::size_t b = 0; b < g.n(); ++b) v.generators.push_back(reflect(v.n2[b], v.generators[b]).normalized());
    for (std::size_t b = 0; b <= g.n(); ++b)
      for (VertexId u : g.coordinate_line(1, b))
        v.line_residual = std::max(v.line_residual, std::abs(inner(r.at(u).normalized(), v.generators[b])));
    if (v.line_residual > tol.light) {
      v.reason = "a family-1 line is not in a parabolic complex";
      return v;
    }
    for (std::size_t b = 0; b < g.n(); ++b) {
      auto fv = g.face_vertices(g.face(0, b));
      double x = span_residual(orthonormalize(columns({v.generators[b], v.generators[b + 1]}), tol.rank), v.n2[b]);
      double y = span_residual(orthonormalize(columns({r.at(fv[1]), r.at(fv[2])}), tol.rank), v.n2[b]);
      v.cross_check = std::max({v.cross_check, x, y});
    }
    v.ok = true;
  } catch (const Error& e) {
    v.reason = e.what();
  }
  return v;
}

struct TwoChannelVerdict {
  bool ok = false;
  std::vector<Basis6> C;  // (2,1)-plane of the R-spheres per family-1 line
  double ribbon_spread = 0.0;
  std::string reason;
};

inline TwoChannelVerdict detect_two_channel(const RCongruence& r, const Tolerances& tol = {}) {
  const QuadComplex& g = r.grid;
  TwoChannelVerdict v;
  try {
    for (std::size_t b = 0; b < g.n(); ++b) v.ribbon_spread = std::max(v.ribbon_spread, detail::ribbon_n2(r, b, tol).second);
    if (v.ribbon_spread > tol.proj) {
      v.reason = "n2 varies along a family-1 ribbon";
      return v;
    }
    for (std::size_t b = 0; b <= g.n(); ++b) {
      Basis6 c = detail::line_span(r, b, tol);
      Signature s = signature(c, tol.light);
      if (c.cols() != 3 || s.pos != 2 || s.neg != 1) {
        v.reason = "R-spheres of line " + std::to_string(b) + " do not span a (2,1)-plane";
        v.C.clear();
        return v;
      }
      v.C.push_back(c);
    }
    v.ok = true;
  } catch (const Error& e) {
    v.reason = e.what();
  }
  return v;
}

// One member of the family of channel envelopes: start from span(r_v, s) at
// vertex (0, line) with s at angle theta on the conic of C_line^perp.
inline LegendreMap construct_channel_envelope(const RCongruence& r, std::size_t line, double theta,
                                              const Tolerances& tol = {}) {
  TwoChannelVerdict v = detect_two_channel(r, tol);
  if (!v.ok) throw Error(Errc::NotTwoChannel, v.reason);
  if (line >= v.C.size()) throw Error(Errc::BadId, "no such family-1 line");
  Basis6 perp = orthonormalize(lorentz_complement(v.C[line], tol.rank), tol.rank);
  Vec6 s = conic_point(perp, theta);
  VertexId v0 = r.grid.vertex(0, line);
  return propagate(r, v0, ContactElement(r.at(v0), s), tol);
}

inline std::vector<LegendreMap> construct_channel_envelopes(const RCongruence& r, std::size_t line, std::size_t count,
                                                            double theta0 = 0.0, const Tolerances& tol = {}) {
  std::vector<LegendreMap> out;
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(construct_channel_envelope(
        r, line, theta0 + 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count), tol));
  return out;
}

struct ChannelVerdict {
  bool channel = false;
  double constancy = 0.0;  // worst projective spread of s along a line of family dir
  double plane = 0.0;      // worst rank-3 residual of the transversal curvature spheres per ribbon
  std::string reason;
};

// Channel with circular direction dir: the curvature spheres of the dir-edges
// are constant per line and the other ones span a (2,1)-plane per ribbon.
inline ChannelVerdict channel_check(const LegendreMap& f, int dir = 1, const Tolerances& tol = {}) {
  const QuadComplex& g = f.grid;
  ChannelVerdict v;
  try {
    std::size_t along = dir == 1 ? g.m() : g.n();
    for (std::size_t line = 0; line < g.line_count(dir); ++line) {
      auto edge = [&](std::size_t s) { return dir == 1 ? g.edge1(s, line) : g.edge2(line, s); };
      Sphere s0 = f.curvature_sphere(edge(0), tol);
      for (std::size_t s = 1; s < along; ++s)
        v.constancy = std::max(v.constancy, proj_dist(f.curvature_sphere(edge(s), tol), s0));
    }
    bool planes = true;
    for (std::size_t rib = 0; rib < g.ribbon_count(dir); ++rib) {
      Basis6 m(6, static_cast<Eigen::Index>(along + 1));
      for (std::size_t s = 0; s <= along; ++s)
        m.col(static_cast<Eigen::Index>(s)) = f.curvature_sphere(dir == 1 ? g.edge2(s, rib) : g.edge1(rib, s), tol);
      Eigen::VectorXd sv = singular_values(m);
      if (sv.size() > 3) v.plane = std::max(v.plane, sv[3] / sv[0]);
      Basis6 c = orthonormalize(m, tol.rank);
      Signature sg = signature(c, tol.light);
      if (c.cols() != 3 || sg.pos != 2 || sg.neg != 1) planes = false;
    }
    v.channel = v.constancy <= tol.proj && planes;
    if (!v.channel)
      v.reason = v.constancy > tol.proj ? "curvature spheres vary along a line" : "transversal curvature spheres leave a (2,1)-plane";
  } catch (const Error& e) {
    v.reason = e.what();
  }
  return v;
}

}  // namespace ribaucour
