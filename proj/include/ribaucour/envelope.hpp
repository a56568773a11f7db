#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "legendre_map.hpp"
#include "r_congruence.hpp"

namespace ribaucour {

inline std::vector<FaceComplexes> all_face_complexes(const RCongruence& r, const Tolerances& tol = {}) {
  std::vector<FaceComplexes> out;
  out.reserve(r.grid.face_count());
  for (FaceId f = 0; f < r.grid.face_count(); ++f) out.push_back(face_complexes(r, f, tol));
  return out;
}

// ---------------------------------------------------------------- Legendre maps

struct LegendreReport {
  std::vector<std::optional<Errc>> edge_error;  // per EdgeId
  std::vector<Sphere> curvature;                // per EdgeId (zero on failure)
  std::vector<double> circularity;              // per face: 4th/1st singular value of the point spheres
  bool ok() const {
    return std::none_of(edge_error.begin(), edge_error.end(), [](const auto& e) { return e.has_value(); });
  }
};

inline LegendreReport validate_legendre(const LegendreMap& f, const MoebiusFrame& frame = MoebiusFrame::standard(),
                                        const Tolerances& tol = {}) {
  const QuadComplex& g = f.grid;
  LegendreReport rep;
  rep.edge_error.resize(g.edge_count());
  rep.curvature.assign(g.edge_count(), Vec6::Zero());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    try {
      rep.curvature[e] = f.curvature_sphere(e, tol);
    } catch (const Error& err) {
      rep.edge_error[e] = err.code();
    }
  }
  rep.circularity.assign(g.face_count(), 1.0);
  for (FaceId fc = 0; fc < g.face_count(); ++fc) {
    auto q = g.face_vertices(fc);
    try {
      Eigen::Matrix<double, 6, 4> m;
      for (int c = 0; c < 4; ++c) m.col(c) = point_sphere(f.at(q[c]), frame, tol);
      Eigen::VectorXd s = singular_values(m);
      rep.circularity[fc] = s[3] / s[0];
    } catch (const Error&) {
    }
  }
  return rep;
}

// ---------------------------------------------------------------- propagation

// Transport f0 along a vertex path, using for each edge the first face that contains it.
inline ContactElement transport(const RCongruence& r, const std::vector<FaceComplexes>& fc,
                                const std::vector<VertexId>& path, const ContactElement& f0) {
  const QuadComplex& g = r.grid;
  ContactElement cur = f0;
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    EdgeId e = g.edge_between(path[s], path[s + 1]);
    FaceId face = g.edge_faces(e).front();
    cur = reflect(g.edge_family(e) == 1 ? fc[face].n1 : fc[face].n2, cur);
  }
  return cur;
}

struct PropagationReport {
  double closure = 0.0;     // worst face-edge mismatch
  double membership = 0.0;  // worst r_i outside f_i
  FaceId worst_face = 0;
};

inline double face_closure(const LegendreMap& f, const FaceComplexes& c, const std::array<VertexId, 4>& q) {
  auto d = [&](const Vec6& n, VertexId a, VertexId b) { return distance(reflect(n, f.at(a)), f.at(b)); };
  return std::max({d(c.n1, q[0], q[1]), d(c.n1, q[3], q[2]), d(c.n2, q[0], q[3]), d(c.n2, q[1], q[2])});
}

inline LegendreMap propagate(const RCongruence& r, VertexId v0, const ContactElement& f0, const Tolerances& tol = {},
                             PropagationReport* report = nullptr) {
  if (!f0.contains(r.at(v0), tol)) throw Error(Errc::SphereNotInElement, "initial element does not contain r_v0");
  const QuadComplex& g = r.grid;
  std::vector<FaceComplexes> fc = all_face_complexes(r, tol);
  LegendreMap out{g, std::vector<ContactElement>(g.vertex_count())};
  std::vector<char> known(g.vertex_count(), 0);
  out.elements[v0] = f0;
  known[v0] = 1;
  std::deque<VertexId> queue{v0};
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    auto [a, b] = g.vertex_coords(v);
    std::vector<VertexId> nb;
    if (a > 0) nb.push_back(g.vertex(a - 1, b));
    if (a < g.m()) nb.push_back(g.vertex(a + 1, b));
    if (b > 0) nb.push_back(g.vertex(a, b - 1));
    if (b < g.n()) nb.push_back(g.vertex(a, b + 1));
    for (VertexId w : nb) {
      if (known[w]) continue;
      out.elements[w] = transport(r, fc, {v, w}, out.elements[v]);
      known[w] = 1;
      queue.push_back(w);
    }
  }
  PropagationReport rep;
  for (FaceId f = 0; f < g.face_count(); ++f) {
    double c = face_closure(out, fc[f], g.face_vertices(f));
    if (c > rep.closure) {
      rep.closure = c;
      rep.worst_face = f;
    }
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) rep.membership = std::max(rep.membership, out.at(v).residual(r.at(v)));
  if (report) *report = rep;
  if (rep.closure > tol.closure)
    throw Error(Errc::ClosureFailure, "face " + std::to_string(rep.worst_face) + " residual " + std::to_string(rep.closure));
  return out;
}

// Element through r_v0 spanned with a chosen partner sphere.
inline ContactElement element_through(const Sphere& r, const Sphere& partner, const Tolerances& tol = {}) {
  return ContactElement(r, partner, tol);
}

// The contact elements through r form a 2-sphere; parametrize them by
// spherical angles in a fixed frame of r^perp / r.
inline ContactElement element_at_angles(const Sphere& r, double theta, double phi, const Tolerances& tol = {}) {
  Vec6 u = r.normalized();
  Basis6 w = lorentz_complement(columns({u}), tol.rank);
  w = orthonormalize(Basis6(w - u * (u.transpose() * w)), tol.rank);  // r^perp / r, signature (3,1)
  Eigen::MatrixXd gm = w.transpose() * metric() * w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gm);
  Eigen::MatrixXd v = es.eigenvectors();
  Eigen::VectorXd l = es.eigenvalues();
  for (int i = 0; i < 4; ++i) detail::fix_sign(v.col(i));
  Eigen::VectorXd c = v.col(0) / std::sqrt(-l[0]) + std::sin(theta) * std::cos(phi) * v.col(1) / std::sqrt(l[1]) +
                      std::sin(theta) * std::sin(phi) * v.col(2) / std::sqrt(l[2]) +
                      std::cos(theta) * v.col(3) / std::sqrt(l[3]);
  return ContactElement(u, Vec6(w * c), tol);
}

// ---------------------------------------------------------------- verification

struct EnvelopeReport {
  double membership = 0.0;  // r_i in f_i
  double inversion = 0.0;   // sigma1/sigma2 map the elements of each face
  double swap = 0.0;        // sigma2(s_ij) ~ s_kl, sigma1(s_jk) ~ s_li
  FaceId worst_face = 0;
  bool ok(const Tolerances& tol = {}) const {
    return membership <= tol.closure && inversion <= tol.closure && swap <= tol.closure;
  }
};

inline EnvelopeReport verify_envelope(const LegendreMap& f, const RCongruence& r, const Tolerances& tol = {}) {
  const QuadComplex& g = r.grid;
  EnvelopeReport rep;
  for (VertexId v = 0; v < g.vertex_count(); ++v) rep.membership = std::max(rep.membership, f.at(v).residual(r.at(v)));
  for (FaceId fid = 0; fid < g.face_count(); ++fid) {
    FaceComplexes c = face_complexes(r, fid, tol);
    auto q = g.face_vertices(fid);
    double inv = face_closure(f, c, q);
    double sw = std::numeric_limits<double>::infinity();  // no curvature spheres: not a Legendre face
    try {
      auto s = f.face_curvature_spheres(fid, tol);
      sw = std::max(proj_dist(reflect(c.n2, s[0]), s[2]), proj_dist(reflect(c.n1, s[1]), s[3]));
    } catch (const Error&) {
    }
    if (std::max(inv, sw) > std::max(rep.inversion, rep.swap)) rep.worst_face = fid;
    rep.inversion = std::max(rep.inversion, inv);
    rep.swap = std::max(rep.swap, sw);
  }
  return rep;
}

// Curvature spheres of opposite edges lie in a common complex: s_ij, s_kl in
// n1^perp and s_jk, s_il in n2^perp, for every envelope of r.
inline double opposite_curvature_complexes(const RCongruence& r, const std::vector<LegendreMap>& envelopes,
                                           const Tolerances& tol = {}) {
  double worst = 0.0;
  std::vector<FaceComplexes> fc = all_face_complexes(r, tol);
  for (const auto& f : envelopes)
    for (FaceId fid = 0; fid < r.grid.face_count(); ++fid) {
      auto s = f.face_curvature_spheres(fid, tol);
      worst = std::max({worst, std::abs(rel_inner(s[0], fc[fid].n1)), std::abs(rel_inner(s[2], fc[fid].n1)),
                        std::abs(rel_inner(s[1], fc[fid].n2)), std::abs(rel_inner(s[3], fc[fid].n2))});
    }
  return worst;
}

inline LinearComplex edge_moebius(const RCongruence& r, const MoebiusFrame& frame, EdgeId e, const Tolerances& tol = {}) {
  auto [i, j] = r.grid.edge_vertices(e);
  Vec6 ri = r.at(i).normalized(), rj = r.at(j).normalized();
  if (std::abs(inner(frame.p, ri)) <= tol.contact * frame.p.norm() ||
      std::abs(inner(frame.p, rj)) <= tol.contact * frame.p.norm())
    throw Error(Errc::PointSphereInput, "R-sphere is a point sphere");
  Vec6 m = inner(frame.p, rj) * ri - inner(frame.p, ri) * rj;
  LinearComplex c = classify_complex(m, tol);
  if (c.kind == ComplexKind::parabolic) throw Error(Errc::LightlikeComplex, "edge complex is lightlike");
  return c;
}

// ---------------------------------------------------------------- umbilics

struct UmbilicCertificate {
  FaceId face;
  Sphere sphere;       // the common curvature sphere
  double spread;       // worst pairwise distance of the four curvature spheres
  double orthogonality;  // worst |<s, r_i>| (relative): s lies in the R-span's complement
};

inline std::vector<UmbilicCertificate> umbilic_faces(const LegendreMap& f, const RCongruence& r, const Tolerances& tol = {}) {
  std::vector<UmbilicCertificate> out;
  for (FaceId fid = 0; fid < f.grid.face_count(); ++fid) {
    auto s = f.face_curvature_spheres(fid, tol);
    double spread = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) spread = std::max(spread, proj_dist(s[a], s[b]));
    if (spread > tol.closure) continue;
    double orth = 0.0;
    for (const auto& x : r.face_spheres(fid)) orth = std::max(orth, std::abs(rel_inner(s[0], x)));
    out.push_back({fid, s[0].normalized(), spread, orth});
  }
  return out;
}

// ---------------------------------------------------------------- spherical envelopes

// Envelope whose contact elements all lie in the elliptic fixed complex a;
// theta selects the initial element on the conic of admissible partners.
inline LegendreMap spherical_envelope(const RCongruence& r, const LinearComplex& a, double theta, VertexId v0 = 0,
                                      const Tolerances& tol = {}) {
  if (a.kind != ComplexKind::elliptic) throw Error(Errc::NotElliptic, "fixed complex is not elliptic");
  for (const auto& s : r.spheres)
    if (std::abs(rel_inner(s, a.rep)) > tol.rank) throw Error(Errc::NotElliptic, "complex is not fixed by the congruence");
  Vec6 u = r.at(v0).normalized();
  Basis6 w = lorentz_complement(columns({u, a.rep.normalized()}), tol.rank);
  w = orthonormalize(Basis6(w - u * (u.transpose() * w)), tol.rank);
  Vec6 partner = conic_point(w, theta);
  return propagate(r, v0, ContactElement(u, partner, tol), tol);
}

// ---------------------------------------------------------------- Ribaucour pairs

struct RibaucourPair {
  LegendreMap f, fhat;
  RCongruence r;
  std::vector<Vec6> n3;  // per face
};

struct PairReport {
  double swap = 0.0;         // corresponding curvature spheres interchanged
  double fixes = 0.0;        // R-spheres fixed
  double elements = 0.0;     // f_v mapped to fhat_v
  double orthogonal = 0.0;   // |<n3,n1>|, |<n3,n2>|, |<n1,n2>| relative
};

inline RibaucourPair sigma3_field(const LegendreMap& f, const LegendreMap& fhat, const RCongruence& r,
                                  const Tolerances& tol = {}, PairReport* report = nullptr) {
  const QuadComplex& g = r.grid;
  RibaucourPair pair{f, fhat, r, std::vector<Vec6>(g.face_count())};
  PairReport rep;
  for (FaceId fid = 0; fid < g.face_count(); ++fid) {
    auto s = f.face_curvature_spheres(fid, tol);
    auto h = fhat.face_curvature_spheres(fid, tol);
    Eigen::Matrix<double, 6, 4> m;
    m << s[0].normalized(), h[0].normalized(), s[2].normalized(), h[2].normalized();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    Eigen::Vector4d sv = svd.singularValues();
    if (!(sv[2] > tol.rank * sv[0]) || sv[3] > tol.rank * sv[0])
      throw Error(Errc::NotAPair, "curvature spheres of the two envelopes are not in position at face " + std::to_string(fid));
    Eigen::Vector4d c = svd.matrixV().col(3);
    Vec6 n3 = c[0] * m.col(0) + c[1] * m.col(1);
    if (classify_complex(n3, tol).kind == ComplexKind::parabolic)
      throw Error(Errc::NotAPair, "sigma3 complex is lightlike at face " + std::to_string(fid));
    pair.n3[fid] = n3;

    for (int e = 0; e < 4; ++e)
      rep.swap = std::max({rep.swap, proj_dist(reflect(n3, s[e]), h[e]), proj_dist(reflect(n3, h[e]), s[e])});
    auto q = g.face_vertices(fid);
    for (VertexId v : q) {
      rep.fixes = std::max(rep.fixes, proj_dist(reflect(n3, r.at(v)), r.at(v)));
      rep.elements = std::max(rep.elements, distance(reflect(n3, f.at(v)), fhat.at(v)));
    }
    FaceComplexes fc = face_complexes(r, fid, tol);
    double a = std::abs(rel_inner(n3, fc.n1)), b = std::abs(rel_inner(n3, fc.n2)), d = std::abs(rel_inner(fc.n1, fc.n2));
    rep.orthogonal = std::max({rep.orthogonal, a, b, d});
  }
  if (report) *report = rep;
  return pair;
}

struct PartnerResult {
  LegendreMap ghat;
  double spread;  // worst disagreement of the facewise images at a vertex
};

inline PartnerResult pair_partner(const RibaucourPair& pair, const LegendreMap& g, const Tolerances& tol = {},
                                  bool strict = false) {
  const QuadComplex& grid = pair.r.grid;
  PartnerResult out{LegendreMap{grid, std::vector<ContactElement>(grid.vertex_count())}, 0.0};
  for (VertexId v = 0; v < grid.vertex_count(); ++v) {
    auto faces = grid.vertex_faces(v);
    ContactElement first = reflect(pair.n3[faces.front()], g.at(v));
    for (std::size_t k = 1; k < faces.size(); ++k)
      out.spread = std::max(out.spread, distance(first, reflect(pair.n3[faces[k]], g.at(v))));
    out.ghat.elements[v] = first;
  }
  if (strict && out.spread > tol.closure)
    throw Error(Errc::InconsistentPartner, "facewise partners disagree by " + std::to_string(out.spread));
  return out;
}

// ---------------------------------------------------------------- permutability

struct PermutabilityVertex {
  double cosphericity;   // worst |<p, r>| over the four point spheres
  double circularity;    // 4th/1st singular value of the four point spheres
  bool circular;
  double span_residual;  // distance of f12_v from span(f_v, f1_v, f2_v)
  Signature span_signature;
};

inline std::vector<PermutabilityVertex> permutability_report(const RCongruence& r, const LegendreMap& f,
                                                             const LegendreMap& f1, const LegendreMap& f2,
                                                             const LegendreMap& f12,
                                                             const MoebiusFrame& frame = MoebiusFrame::standard(),
                                                             const Tolerances& tol = {}) {
  std::vector<PermutabilityVertex> out;
  for (VertexId v = 0; v < r.grid.vertex_count(); ++v) {
    PermutabilityVertex pv{};
    Eigen::Matrix<double, 6, 4> m;
    const LegendreMap* maps[4] = {&f, &f1, &f2, &f12};
    for (int c = 0; c < 4; ++c) {
      m.col(c) = point_sphere(maps[c]->at(v), frame, tol);
      pv.cosphericity = std::max(pv.cosphericity, std::abs(rel_inner(m.col(c), r.at(v))));
    }
    Eigen::VectorXd s = singular_values(m);
    pv.circularity = s[3] / s[0];
    pv.circular = pv.circularity <= tol.closure;
    Basis6 span = orthonormalize(hcat(hcat(f.at(v).basis(), f1.at(v).basis()), f2.at(v).basis()), tol.rank);
    pv.span_signature = signature(span, tol.light);
    pv.span_residual = std::max(span_residual(span, f12.at(v).b1()), span_residual(span, f12.at(v).b2()));
    out.push_back(pv);
  }
  return out;
}

inline std::vector<LegendreMap> family_sample(const RCongruence& r, VertexId v0, const std::vector<ContactElement>& gamma0,
                                              const Tolerances& tol = {}) {
  std::vector<LegendreMap> out;
  out.reserve(gamma0.size());
  for (const auto& e : gamma0) out.push_back(propagate(r, v0, e, tol));
  return out;
}

}  // namespace ribaucour
