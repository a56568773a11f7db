#pragma once

#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "complex_grid.hpp"
#include "legendre_map.hpp"
#include "lie_core.hpp"

namespace ribaucour {

struct RCongruence {
  QuadComplex grid;
  std::vector<Sphere> spheres;  // indexed by VertexId

  const Sphere& at(VertexId v) const { return spheres.at(v); }
  std::array<Sphere, 4> face_spheres(FaceId f) const {
    auto v = grid.face_vertices(f);
    return {spheres.at(v[0]), spheres.at(v[1]), spheres.at(v[2]), spheres.at(v[3])};
  }
};

// ---------------------------------------------------------------- face complexes

struct FaceComplexes {
  Vec6 n1, n2;
  std::array<double, 4> coeffs;  // scalings of the unit representatives
  std::array<Vec6, 4> scaled;    // r~i - r~j + r~k - r~l = 0
  double residual;
};

inline FaceComplexes face_complexes(const std::array<Sphere, 4>& r, const Tolerances& tol = {}) {
  Eigen::Matrix<double, 6, 4> m;
  for (int c = 0; c < 4; ++c) m.col(c) = normalized(r[c], tol);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  Eigen::Vector4d s = svd.singularValues();
  if (s[3] > tol.rank * s[0] || !(s[2] > tol.rank * s[0]))
    throw Error(Errc::KernelDegenerate, "face spheres do not span a plane");
  Eigen::Vector4d c = svd.matrixV().col(3);
  if (c[0] < 0) c = -c;
  for (int i = 0; i < 4; ++i)
    if (std::abs(c[i]) < tol.rank)
      throw Error(Errc::KernelDegenerate, "a face sphere lies in the span of two others");
  FaceComplexes fc;
  fc.coeffs = {c[0], -c[1], c[2], -c[3]};
  for (int i = 0; i < 4; ++i) fc.scaled[i] = fc.coeffs[i] * m.col(i);
  fc.n1 = fc.scaled[0] - fc.scaled[1];
  fc.n2 = fc.scaled[0] - fc.scaled[3];
  fc.residual = (fc.scaled[0] - fc.scaled[1] + fc.scaled[2] - fc.scaled[3]).norm();
  return fc;
}

inline FaceComplexes face_complexes(const RCongruence& r, FaceId f, const Tolerances& tol = {}) {
  return face_complexes(r.face_spheres(f), tol);
}

inline double face_cross_ratio(const FaceComplexes& fc, const Tolerances& tol = {}) {
  if (classify_complex(fc.n1, tol).kind == ComplexKind::parabolic ||
      classify_complex(fc.n2, tol).kind == ComplexKind::parabolic)
    throw Error(Errc::ParabolicComplex, "face complex is parabolic");
  return -inner(fc.n1, fc.n1) / inner(fc.n2, fc.n2);
}

inline double face_cross_ratio(const RCongruence& r, FaceId f, const Tolerances& tol = {}) {
  return face_cross_ratio(face_complexes(r, f, tol), tol);
}

enum class FaceClass { both_elliptic, both_hyperbolic, mixed };

inline std::string_view face_class_name(FaceClass c) {
  switch (c) {
    case FaceClass::both_elliptic: return "both-elliptic";
    case FaceClass::both_hyperbolic: return "both-hyperbolic";
    case FaceClass::mixed: return "mixed";
  }
  return "?";
}

inline FaceClass classify_face(const RCongruence& r, FaceId f, const Tolerances& tol = {}) {
  FaceComplexes fc = face_complexes(r, f, tol);
  ComplexKind k1 = classify_complex(fc.n1, tol).kind, k2 = classify_complex(fc.n2, tol).kind;
  if (k1 == ComplexKind::parabolic || k2 == ComplexKind::parabolic)
    throw Error(Errc::ParabolicComplex, "face complex is parabolic");
  if (k1 != k2) return FaceClass::mixed;
  return k1 == ComplexKind::elliptic ? FaceClass::both_elliptic : FaceClass::both_hyperbolic;
}

// ---------------------------------------------------------------- validation

struct FaceReport {
  FaceId face = 0;
  bool ok = false;
  std::optional<Errc> error;
  std::string message;
  SystemSignature signature = SystemSignature::s21;
  int delta = 0;
  double cross_ratio = std::numeric_limits<double>::quiet_NaN();
  std::optional<FaceClass> face_class;
};

struct CongruenceReport {
  std::vector<FaceReport> faces;
  bool ok() const {
    for (const auto& f : faces)
      if (!f.ok) return false;
    return true;
  }
};

inline CongruenceReport validate(const RCongruence& r, const Tolerances& tol = {}) {
  CongruenceReport rep;
  if (r.spheres.size() != r.grid.vertex_count())
    throw Error(Errc::BadId, "sphere count does not match the grid");
  for (FaceId f = 0; f < r.grid.face_count(); ++f) {
    FaceReport fr;
    fr.face = f;
    try {
      auto s = r.face_spheres(f);
      for (const auto& x : s)
        if (!is_lightlike(x, tol)) throw Error(Errc::NotLightlike, "vertex sphere is not lightlike");
      LinearSystem ls = span_system(s[0], s[1], s[2], s[3], tol);
      fr.signature = ls.signature;
      fr.delta = ls.delta;
      fr.ok = true;
      try {
        FaceComplexes fc = face_complexes(s, tol);
        fr.cross_ratio = face_cross_ratio(fc, tol);
        fr.face_class = classify_face(r, f, tol);
      } catch (const Error&) {
        // parabolic face complexes: valid face, no cross-ratio
      }
    } catch (const Error& e) {
      fr.ok = false;
      fr.error = e.code();
      fr.message = e.what();
    }
    rep.faces.push_back(fr);
  }
  return rep;
}

// ---------------------------------------------------------------- constructions

enum class ChoiceMode { lambda, cross_ratio };

struct FaceChoices {
  ChoiceMode mode = ChoiceMode::cross_ratio;
  std::vector<double> values;  // one per face, or a single value for all faces

  double at(FaceId f) const { return values.size() == 1 ? values[0] : values.at(f); }
};

// Lambda producing the target face cross-ratio x for known r_i, r_j, r_l.
inline double lambda_for_cross_ratio(const Sphere& ri, const Sphere& rj, const Sphere& rl, double x) {
  return (1.0 - x) * inner(ri, rl) / inner(rj, rl);
}

namespace detail {
inline void require_chain(const std::vector<Sphere>& c, const Tolerances& tol) {
  for (const auto& s : c)
    if (!is_lightlike(s, tol)) throw Error(Errc::NotLightlike, "curve sphere is not lightlike");
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (in_contact(c[i], c[i + 1], tol)) throw Error(Errc::TangentSpheres, "consecutive curve spheres touch");
}
}  // namespace detail

// c1: spheres on the family-1 line b = 0, c2: spheres on the family-2 line
// a = 0. lambda is taken relative to the stored unit representatives.
inline RCongruence construct_from_curves(const std::vector<Sphere>& c1, const std::vector<Sphere>& c2,
                                         const FaceChoices& choices, const Tolerances& tol = {}) {
  if (c1.size() < 2 || c2.size() < 2) throw Error(Errc::BadId, "curves need at least two spheres");
  detail::require_chain(c1, tol);
  detail::require_chain(c2, tol);
  if (proj_dist(c1[0], c2[0]) > tol.rank)
    throw Error(Errc::DegenerateConfiguration, "curves do not share the corner sphere");
  RCongruence r{QuadComplex(c1.size() - 1, c2.size() - 1), {}};
  const QuadComplex& g = r.grid;
  r.spheres.assign(g.vertex_count(), Vec6::Zero());
  for (std::size_t a = 0; a <= g.m(); ++a) r.spheres[g.vertex(a, 0)] = c1[a].normalized();
  for (std::size_t b = 1; b <= g.n(); ++b) r.spheres[g.vertex(0, b)] = c2[b].normalized();
  if (choices.values.size() != 1 && choices.values.size() != g.face_count())
    throw Error(Errc::BadId, "need one choice per face");

  for (std::size_t b = 0; b < g.n(); ++b)
    for (std::size_t a = 0; a < g.m(); ++a) {
      FaceId f = g.face(a, b);
      auto v = g.face_vertices(f);
      const Vec6 &ri = r.spheres[v[0]], &rj = r.spheres[v[1]], &rl = r.spheres[v[3]];
      if (in_contact(rj, rl, tol)) throw Error(Errc::TangencyCreated, "diagonal spheres touch at face " + std::to_string(f));
      double lambda = choices.mode == ChoiceMode::lambda ? choices.at(f)
                                                         : lambda_for_cross_ratio(ri, rj, rl, choices.at(f));
      if (lambda == 0.0 || !std::isfinite(lambda)) throw Error(Errc::InvalidLambda, "lambda at face " + std::to_string(f));
      Vec6 n = ri - lambda * rj;
      if (classify_complex(n, tol).kind == ComplexKind::parabolic)
        throw Error(Errc::InvalidLambda, "lightlike complex at face " + std::to_string(f));
      Vec6 rk = reflect(n, rl).normalized();
      if (in_contact(rk, rj, tol) || in_contact(rk, rl, tol))
        throw Error(Errc::TangencyCreated, "new sphere touches a neighbour at face " + std::to_string(f));
      r.spheres[v[2]] = rk;
    }
  return r;
}

// Sweep a family-1 line through the given inversions: line b+1 is the image of
// line b under ribbon[b]. Every family-1 ribbon then carries a constant n2.
inline RCongruence sweep_congruence(const std::vector<Sphere>& line0, const std::vector<Vec6>& ribbon,
                                    const Tolerances& tol = {}) {
  if (line0.size() < 2 || ribbon.empty()) throw Error(Errc::BadId, "sweep needs a line and at least one inversion");
  detail::require_chain(line0, tol);
  RCongruence r{QuadComplex(line0.size() - 1, ribbon.size()), {}};
  const QuadComplex& g = r.grid;
  r.spheres.assign(g.vertex_count(), Vec6::Zero());
  for (std::size_t a = 0; a <= g.m(); ++a) r.spheres[g.vertex(a, 0)] = line0[a].normalized();
  for (std::size_t b = 0; b < g.n(); ++b) {
    if (classify_complex(ribbon[b], tol).kind == ComplexKind::parabolic)
      throw Error(Errc::LightlikeComplex, "sweep inversion is parabolic");
    for (std::size_t a = 0; a <= g.m(); ++a)
      r.spheres[g.vertex(a, b + 1)] = reflect(ribbon[b], r.spheres[g.vertex(a, b)]).normalized();
  }
  return r;
}

inline Sphere complete_face(const ContactElement& fi, const ContactElement& fj, const ContactElement& fk,
                            const ContactElement& fl, const Sphere& ri, const Sphere& rj, const Sphere& rl,
                            const Tolerances& tol = {}) {
  if (!fi.contains(ri, tol) || !fj.contains(rj, tol) || !fl.contains(rl, tol))
    throw Error(Errc::SphereNotInElement, "prescribed sphere is not in its contact element");
  Sphere sij = contact_intersect(fi, fj, tol), sjk = contact_intersect(fj, fk, tol);
  Sphere skl = contact_intersect(fk, fl, tol), sil = contact_intersect(fi, fl, tol);
  if (proj_dist(sij, skl) <= tol.rank || proj_dist(sjk, sil) <= tol.rank)
    throw Error(Errc::UmbilicFace, "opposite curvature spheres coincide");
  if (proj_dist(ri, sij) <= tol.rank || proj_dist(ri, sil) <= tol.rank || proj_dist(rj, sij) <= tol.rank ||
      proj_dist(rl, sil) <= tol.rank || proj_dist(rl, skl) <= tol.rank)
    throw Error(Errc::DegenerateChoice, "prescribed sphere equals a curvature sphere");
  LinearComplex a = [&] {
    try {
      return unique_inversion(sil, ri, sij, rl, skl, tol);
    } catch (const Error& e) {
      throw Error(Errc::DegenerateChoice, e.what());
    }
  }();
  Vec6 rk = reflect(a.rep, rj);
  // the image lies in f_k in exact arithmetic; remove the drift
  rk = fk.basis() * (fk.basis().transpose() * rk);
  if (!(rk.norm() > tol.zero)) throw Error(Errc::DegenerateChoice, "completed sphere vanishes");
  return rk.normalized();
}

inline RCongruence congruence_from_legendre(const LegendreMap& f, const std::vector<Sphere>& line1,
                                            const std::vector<Sphere>& line2, const Tolerances& tol = {}) {
  const QuadComplex& g = f.grid;
  if (line1.size() != g.m() + 1 || line2.size() != g.n() + 1)
    throw Error(Errc::BadId, "prescribed lines do not match the grid");
  if (proj_dist(line1[0], line2[0]) > tol.rank)
    throw Error(Errc::DegenerateConfiguration, "lines do not share the corner sphere");
  RCongruence r{g, std::vector<Sphere>(g.vertex_count(), Vec6::Zero())};
  for (std::size_t a = 0; a <= g.m(); ++a) r.spheres[g.vertex(a, 0)] = line1[a].normalized();
  for (std::size_t b = 1; b <= g.n(); ++b) r.spheres[g.vertex(0, b)] = line2[b].normalized();
  for (std::size_t a = 0; a <= g.m(); ++a)
    if (!f.at(g.vertex(a, 0)).contains(line1[a], tol))
      throw Error(Errc::SphereNotInElement, "prescribed sphere outside its contact element");
  for (std::size_t b = 0; b <= g.n(); ++b)
    if (!f.at(g.vertex(0, b)).contains(line2[b], tol))
      throw Error(Errc::SphereNotInElement, "prescribed sphere outside its contact element");
  for (std::size_t b = 0; b < g.n(); ++b)
    for (std::size_t a = 0; a < g.m(); ++a) {
      auto v = g.face_vertices(g.face(a, b));
      r.spheres[v[2]] = complete_face(f.at(v[0]), f.at(v[1]), f.at(v[2]), f.at(v[3]), r.spheres[v[0]],
                                      r.spheres[v[1]], r.spheres[v[3]], tol);
    }
  return r;
}

// ---------------------------------------------------------------- fixed complexes

struct FixedComplex {
  LinearComplex complex;
  int complement_dim;  // 1 when the generator is unique
};

inline std::optional<FixedComplex> detect_fixed_complex(const RCongruence& r, const Tolerances& tol = {}) {
  Basis6 m(6, static_cast<Eigen::Index>(r.spheres.size()));
  for (std::size_t i = 0; i < r.spheres.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = r.spheres[i].normalized();
  Basis6 k = lorentz_complement(m, tol.rank);
  if (k.cols() == 0) return std::nullopt;
  Vec6 a = k.col(0);
  detail::fix_sign(a);
  return FixedComplex{classify_complex(a, tol), static_cast<int>(k.cols())};
}

// ---------------------------------------------------------------- Moutard lifts

struct MoutardLift {
  std::vector<Vec6> mu;        // per vertex
  std::vector<double> lambda;  // per face: lambda * (mu_l - mu_j) = mu_k - mu_i
  double residual;
};

namespace detail {
// r_k = alpha r_i + beta r_j + gamma r_l for unit representatives
inline Eigen::Vector3d face_coefficients(const std::array<Sphere, 4>& s) {
  Eigen::Matrix<double, 6, 3> m;
  m << s[0].normalized(), s[1].normalized(), s[3].normalized();
  return m.colPivHouseholderQr().solve(Vec6(s[2].normalized()));
}
}  // namespace detail

// One scaling per checkerboard colour is free; both are fixed to 1 on the
// first face's i and j corners.
inline std::optional<MoutardLift> moutard_lift(const RCongruence& r, const Tolerances& tol = {}) {
  const QuadComplex& g = r.grid;
  std::vector<Eigen::Vector3d> coef(g.face_count());
  for (FaceId f = 0; f < g.face_count(); ++f) coef[f] = detail::face_coefficients(r.face_spheres(f));
  std::vector<double> t(g.vertex_count(), 0.0);
  std::vector<char> known(g.vertex_count(), 0);
  std::deque<VertexId> queue;
  for (VertexId v0 : {g.vertex(0, 0), g.vertex(1, 0)}) {
    t[v0] = 1.0;
    known[v0] = 1;
    queue.push_back(v0);
  }
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (FaceId f : g.vertex_faces(v)) {
      auto q = g.face_vertices(f);
      const Eigen::Vector3d& c = coef[f];
      auto set = [&](VertexId w, double val) {
        if (!known[w]) {
          t[w] = val;
          known[w] = 1;
          queue.push_back(w);
        }
      };
      if (v == q[0]) set(q[2], t[v] / c[0]);
      else if (v == q[2]) set(q[0], t[v] * c[0]);
      else if (v == q[1]) set(q[3], -t[v] * c[2] / c[1]);
      else if (v == q[3]) set(q[1], -t[v] * c[1] / c[2]);
    }
  }
  MoutardLift lift;
  lift.mu.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) lift.mu[v] = t[v] * r.spheres[v].normalized();
  lift.lambda.resize(g.face_count());
  lift.residual = 0.0;
  for (FaceId f = 0; f < g.face_count(); ++f) {
    auto q = g.face_vertices(f);
    Vec6 dik = lift.mu[q[2]] - lift.mu[q[0]], djl = lift.mu[q[3]] - lift.mu[q[1]];
    double lam = dik.dot(djl) / djl.squaredNorm();
    lift.lambda[f] = lam;
    double scale = std::max({lift.mu[q[0]].norm(), lift.mu[q[1]].norm(), lift.mu[q[2]].norm(), lift.mu[q[3]].norm()});
    lift.residual = std::max(lift.residual, (dik - lam * djl).norm() / scale);
  }
  if (!(lift.residual <= tol.closure)) return std::nullopt;
  return lift;
}

inline LinearComplex sigma_delta(const MoutardLift& lift, const QuadComplex& g, FaceId f, const Tolerances& tol = {}) {
  auto q = g.face_vertices(f);
  Vec6 d = lift.mu[q[2]] - lift.mu[q[0]];
  LinearComplex c = classify_complex(d, tol);
  if (c.kind == ComplexKind::parabolic) throw Error(Errc::LightlikeDiagonal, "diagonal complex is lightlike");
  return c;
}

// e_uv = -<mu_u, mu_v> on every edge; per face cr = e_ij / e_jk.
struct EdgeLabels {
  std::vector<double> e;  // per EdgeId
};

inline EdgeLabels edge_labels(const MoutardLift& lift, const QuadComplex& g) {
  EdgeLabels out;
  out.e.resize(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.edge_vertices(e);
    out.e[e] = -inner(lift.mu[u], lift.mu[v]);
  }
  return out;
}

struct MultiLift {
  std::vector<Vec6> r;  // r_i - r_j + r_j' - r_i' = 0 on every parameter rectangle
  double residual;
};

inline std::optional<MultiLift> multi_r_lift(const RCongruence& rc, const Tolerances& tol = {}) {
  const QuadComplex& g = rc.grid;
  std::vector<std::array<double, 4>> coeff(g.face_count());
  for (FaceId f = 0; f < g.face_count(); ++f) {
    try {
      coeff[f] = face_complexes(rc, f, tol).coeffs;
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  std::vector<double> t(g.vertex_count(), 0.0);
  std::vector<char> known(g.vertex_count(), 0);
  std::deque<VertexId> queue{g.vertex(0, 0)};
  t[g.vertex(0, 0)] = 1.0;
  known[g.vertex(0, 0)] = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (FaceId f : g.vertex_faces(v)) {
      auto q = g.face_vertices(f);
      int pos = 0;
      while (q[pos] != v) ++pos;
      double scale = t[v] / coeff[f][pos];
      for (int c = 0; c < 4; ++c)
        if (!known[q[c]]) {
          t[q[c]] = scale * coeff[f][c];
          known[q[c]] = 1;
          queue.push_back(q[c]);
        }
    }
  }
  MultiLift out;
  out.r.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) out.r[v] = t[v] * rc.spheres[v].normalized();
  out.residual = 0.0;
  for (const auto& q : g.parameter_rectangles()) {
    Vec6 s = out.r[q[0]] - out.r[q[1]] + out.r[q[2]] - out.r[q[3]];
    double scale = std::max({out.r[q[0]].norm(), out.r[q[1]].norm(), out.r[q[2]].norm(), out.r[q[3]].norm()});
    out.residual = std::max(out.residual, s.norm() / scale);
  }
  if (!(out.residual <= tol.closure)) return std::nullopt;
  return out;
}

// Alternate the sign along every second family-1 line.
inline MoutardLift moutard_from_multi(const MultiLift& ml, const QuadComplex& g) {
  MoutardLift lift;
  lift.mu.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) lift.mu[v] = (g.vertex_coords(v)[1] % 2 ? -1.0 : 1.0) * ml.r[v];
  lift.lambda.assign(g.face_count(), 1.0);
  lift.residual = 0.0;
  for (FaceId f = 0; f < g.face_count(); ++f) {
    auto q = g.face_vertices(f);
    Vec6 dik = lift.mu[q[2]] - lift.mu[q[0]], djl = lift.mu[q[3]] - lift.mu[q[1]];
    double lam = dik.dot(djl) / djl.squaredNorm();
    lift.lambda[f] = lam;
    lift.residual = std::max(lift.residual, (dik - lam * djl).norm() / std::max(dik.norm(), djl.norm()));
  }
  return lift;
}

}  // namespace ribaucour
