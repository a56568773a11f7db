#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <variant>

#include "linalg.hpp"

namespace ribaucour {

// Spheres are lightlike points of the projective light cone; any nonzero
// multiple is the same sphere.
using Sphere = Vec6;

enum class ComplexKind { parabolic, hyperbolic, elliptic };

struct LinearComplex {
  Vec6 rep;
  ComplexKind kind;
};

struct MoebiusFrame {
  Vec6 p;  // point sphere complex, <p,p> = -1
  Vec6 q;  // lightlike, <p,q> = 0; the point at infinity

  static MoebiusFrame standard() {
    MoebiusFrame f;
    f.p << 0, 0, 0, 0, 0, 1;
    f.q << 1, -1, 0, 0, 0, 0;
    return f;
  }
  bool is_standard(double eps = 1e-12) const {
    MoebiusFrame s = standard();
    return (p - s.p).norm() <= eps && (q - s.q).norm() <= eps;
  }
};

inline bool is_lightlike(const Vec6& x, const Tolerances& tol = {}) {
  return std::abs(inner(x, x)) <= tol.light * x.squaredNorm();
}

inline bool in_contact(const Vec6& x, const Vec6& y, const Tolerances& tol = {}) {
  return std::abs(inner(x, y)) <= tol.contact * x.norm() * y.norm();
}

inline bool proj_equal(const Vec6& x, const Vec6& y, const Tolerances& tol = {}) {
  return proj_dist(x, y) <= tol.proj;
}

inline LinearComplex classify_complex(const Vec6& a, const Tolerances& tol = {}) {
  if (!(a.norm() > tol.zero)) throw Error(Errc::ZeroVector, "complex representative is zero");
  double q = inner(a, a);
  double band = tol.light * a.squaredNorm();
  ComplexKind k = q > band ? ComplexKind::elliptic
                : q < -band ? ComplexKind::hyperbolic
                            : ComplexKind::parabolic;
  return {a, k};
}

inline std::string_view kind_name(ComplexKind k) {
  switch (k) {
    case ComplexKind::parabolic: return "parabolic";
    case ComplexKind::hyperbolic: return "hyperbolic";
    case ComplexKind::elliptic: return "elliptic";
  }
  return "?";
}

// Reflection in a^perp; no checks, a must not be lightlike.
inline Vec6 reflect(const Vec6& a, const Vec6& x) { return x - (2.0 * inner(x, a) / inner(a, a)) * a; }

inline Mat6 inversion_matrix(const Vec6& a) {
  return Mat6::Identity() - (2.0 / inner(a, a)) * a * (metric() * a).transpose();
}

inline Vec6 lie_inversion(const LinearComplex& a, const Vec6& x) {
  if (a.kind == ComplexKind::parabolic)
    throw Error(Errc::ParabolicComplex, "Lie inversion needs a non-parabolic complex");
  return reflect(a.rep, x);
}

inline bool commute(const LinearComplex& a, const LinearComplex& b, const Tolerances& tol = {}) {
  if (a.kind == ComplexKind::parabolic || b.kind == ComplexKind::parabolic)
    throw Error(Errc::ParabolicComplex, "commute needs non-parabolic complexes");
  // orthogonal, or the same inversion
  return std::abs(inner(a.rep, b.rep)) <= tol.proj * a.rep.norm() * b.rep.norm() ||
         proj_dist(a.rep, b.rep) <= tol.proj;
}

// Operator-level version: max deviation of the two compositions on the unit basis.
inline double commutator_defect(const Vec6& a, const Vec6& b) {
  Mat6 c = inversion_matrix(a) * inversion_matrix(b) - inversion_matrix(b) * inversion_matrix(a);
  return c.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------- contact elements

class ContactElement {
 public:
  ContactElement() = default;

  ContactElement(const Vec6& a, const Vec6& b, const Tolerances& tol = {}) {
    Basis6 m = columns({normalized(a, tol), normalized(b, tol)});
    Eigen::Vector2d s = singular_values(m);
    if (!(s[1] > tol.rank * s[0]))
      throw Error(Errc::DegenerateElement, "contact element spanned by one sphere");
    Basis6 onb = orthonormalize(m, 0.0);
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j)
        if (std::abs(inner(onb.col(i), onb.col(j))) > tol.light)
          throw Error(Errc::NotIsotropic, "spanning spheres are not in oriented contact");
    basis_ = onb;
  }

  // Images of an element under a Lie inversion are isotropic by construction;
  // skipping the check keeps badly conditioned inversions usable.
  static ContactElement image(const Vec6& a, const Vec6& b) {
    ContactElement f;
    f.basis_ = orthonormalize(columns({a.normalized(), b.normalized()}), 1e-12);
    if (f.basis_.cols() != 2) throw Error(Errc::DegenerateElement, "image element collapsed");
    return f;
  }

  const Eigen::Matrix<double, 6, 2>& basis() const { return basis_; }
  Vec6 b1() const { return basis_.col(0); }
  Vec6 b2() const { return basis_.col(1); }

  double residual(const Vec6& x) const { return span_residual(basis_, x); }
  bool contains(const Vec6& x, const Tolerances& tol = {}) const { return residual(x) <= tol.rank; }

  // Element of the pencil that is not x (the basis vector furthest from x).
  Vec6 partner_of(const Vec6& x) const {
    Vec6 u = x.normalized();
    Vec6 c1 = basis_.col(0), c2 = basis_.col(1);
    Vec6 w = std::abs(c1.dot(u)) < std::abs(c2.dot(u)) ? c1 : c2;
    w -= w.dot(u) * u;
    return w.normalized();
  }

  friend double distance(const ContactElement& f, const ContactElement& g) {
    return subspace_distance(f.basis_, g.basis_);
  }

 private:
  Eigen::Matrix<double, 6, 2> basis_ = Eigen::Matrix<double, 6, 2>::Zero();
};

inline ContactElement reflect(const Vec6& a, const ContactElement& f) {
  return ContactElement::image(reflect(a, f.b1()), reflect(a, f.b2()));
}

inline Sphere contact_intersect(const ContactElement& f, const ContactElement& g, const Tolerances& tol = {}) {
  Basis6 m = hcat(f.basis(), g.basis());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  Eigen::Vector4d s = svd.singularValues();
  if (s[3] > tol.rank * s[0]) throw Error(Errc::DisjointElements, "contact elements share no sphere");
  if (!(s[2] > tol.rank * s[0])) throw Error(Errc::EqualElements, "contact elements coincide");
  // f c1 + g c2 = 0, so f c1 is the common sphere
  Eigen::Vector4d c = svd.matrixV().col(3);
  return Vec6(f.basis() * c.head<2>()).normalized();
}

inline Sphere point_sphere(const ContactElement& f, const MoebiusFrame& frame, const Tolerances& tol = {}) {
  Vec6 x = inner(f.b2(), frame.p) * f.b1() - inner(f.b1(), frame.p) * f.b2();
  if (!(x.norm() > tol.rank)) throw Error(Errc::DegenerateElement, "contact element lies in the point sphere complex");
  return x.normalized();
}

// ---------------------------------------------------------------- inversions

inline LinearComplex inversion_for_pair(const Sphere& r, const Sphere& rbar, double lambda, const Tolerances& tol = {}) {
  if (in_contact(r, rbar, tol)) throw Error(Errc::TangentSpheres, "spheres are in oriented contact");
  if (lambda == 0.0) throw Error(Errc::LightlikeComplex, "lambda must be nonzero");
  Vec6 n = r - lambda * rbar;
  LinearComplex c = classify_complex(n, tol);
  if (c.kind == ComplexKind::parabolic) throw Error(Errc::LightlikeComplex, "lambda makes the complex lightlike");
  return c;
}

namespace detail {
// Coefficients of s in the basis (u, v), with the fit residual.
inline std::pair<Eigen::Vector2d, double> decompose2(const Vec6& s, const Vec6& u, const Vec6& v) {
  Basis6 m = columns({u, v});
  Eigen::Vector2d c = m.colPivHouseholderQr().solve(s);
  double res = (m * c - s).norm() / s.norm();
  return {c, res};
}
}  // namespace detail

// The inversion a with sigma_a(r) ~ rbar and sigma_a(t) ~ tbar, where s is the
// common sphere of the contact elements span(r,t) and span(rbar,tbar).
inline LinearComplex unique_inversion(const Sphere& s, const Sphere& r, const Sphere& t,
                                      const Sphere& rbar, const Sphere& tbar, const Tolerances& tol = {}) {
  for (const Vec6* x : {&r, &t, &rbar, &tbar})
    if (proj_dist(*x, s) <= tol.rank)
      throw Error(Errc::DegenerateConfiguration, "a sphere coincides with the common sphere");
  auto [c, res] = detail::decompose2(s, r, t);
  auto [cb, resb] = detail::decompose2(s, rbar, tbar);
  if (res > tol.rank || resb > tol.rank)
    throw Error(Errc::DegenerateConfiguration, "common sphere is not in both contact elements");
  Vec6 a = c[0] * r - cb[0] * rbar;
  double scale = std::abs(c[0]) * r.norm() + std::abs(cb[0]) * rbar.norm();
  if (a.norm() <= tol.rank * scale) {
    if (proj_dist(t, tbar) > tol.rank)
      throw Error(Errc::DegenerateConfiguration, "r is fixed but t is not");
    // identity on both elements: any non-lightlike a orthogonal to r and t
    Basis6 k = lorentz_complement(columns({r.normalized(), t.normalized()}), tol.rank);
    Eigen::MatrixXd g = k.transpose() * metric() * k;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    Eigen::VectorXd v = es.eigenvectors().col(g.rows() - 1);
    detail::fix_sign(v);
    return classify_complex(Vec6(k * v).normalized(), tol);
  }
  LinearComplex out = classify_complex(a, tol);
  if (out.kind == ComplexKind::parabolic)
    throw Error(Errc::DegenerateConfiguration, "resulting complex is lightlike");
  return out;
}

// ---------------------------------------------------------------- linear systems

enum class SystemSignature { s21, s12 };

struct LinearSystem {
  std::array<Sphere, 3> basis;
  SystemSignature signature;
  int delta;
};

inline LinearSystem span_system(const Sphere& r1, const Sphere& r2, const Sphere& r3, const Sphere& r4,
                                const Tolerances& tol = {}) {
  std::array<Vec6, 4> r = {r1.normalized(), r2.normalized(), r3.normalized(), r4.normalized()};
  Basis6 m(6, 4);
  for (int i = 0; i < 4; ++i) m.col(i) = r[i];
  int rk = numeric_rank(m, tol.rank);
  if (rk != 3) throw Error(Errc::RankNot3, "four spheres span rank " + std::to_string(rk));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (in_contact(r[i], r[j], tol)) throw Error(Errc::TangentSpheres, "two spheres of the system touch");
  LinearSystem ls;
  ls.basis = {r[0], r[1], r[2]};
  if (numeric_rank(columns({r[0], r[1], r[2]}), tol.rank) < 3) ls.basis = {r[0], r[1], r[3]};
  const auto& b = ls.basis;
  double prod = inner(b[0], b[1]) * inner(b[1], b[2]) * inner(b[2], b[0]);
  ls.delta = prod < 0 ? -1 : 1;
  Signature sg = signature(orthonormalize(m, tol.rank), tol.light);
  ls.signature = sg.pos == 2 ? SystemSignature::s21 : SystemSignature::s12;
  return ls;
}

// ---------------------------------------------------------------- cross-ratios
//
// One convention throughout: for radii R1..R4 of spheres in a contact element
//   cr = (R1-R2)(R3-R4) / ((R2-R3)(R4-R1)),
// which is negative for four spheres in cyclic order. In terms of
// r3 = a r1 + b r2, r4 = a' r1 + b' r2 it reads (a b' - b a') / (a b').

inline double cross_ratio_radii(double R1, double R2, double R3, double R4) {
  int inf = std::isinf(R1) + std::isinf(R2) + std::isinf(R3) + std::isinf(R4);
  if (inf > 1) throw Error(Errc::DegenerateDenominator, "more than one infinite radius");
  double num, den;
  if (std::isinf(R1)) { num = -(R3 - R4); den = R2 - R3; }
  else if (std::isinf(R2)) { num = -(R3 - R4); den = R4 - R1; }
  else if (std::isinf(R3)) { num = -(R1 - R2); den = R4 - R1; }
  else if (std::isinf(R4)) { num = -(R1 - R2); den = R2 - R3; }
  else { num = (R1 - R2) * (R3 - R4); den = (R2 - R3) * (R4 - R1); }
  if (den == 0.0) throw Error(Errc::DegenerateDenominator, "radii cross-ratio denominator vanishes");
  return num / den;
}

inline double cross_ratio_contact(const Sphere& r1, const Sphere& r2, const Sphere& r3, const Sphere& r4,
                                  const Tolerances& tol = {}) {
  std::array<Vec6, 4> r = {r1.normalized(), r2.normalized(), r3.normalized(), r4.normalized()};
  Basis6 m(6, 4);
  for (int i = 0; i < 4; ++i) m.col(i) = r[i];
  if (numeric_rank(m, tol.rank) > 2) throw Error(Errc::NotCoplanar, "spheres do not lie in one contact element");
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      if (std::abs(inner(r[i], r[j])) > tol.contact)
        throw Error(Errc::NotCoplanar, "spheres are not mutually in oriented contact");
  if (proj_dist(r[0], r[1]) <= tol.rank) throw Error(Errc::DegenerateBasis, "r1 and r2 coincide");
  auto [c3, e3] = detail::decompose2(r[2], r[0], r[1]);
  auto [c4, e4] = detail::decompose2(r[3], r[0], r[1]);
  double den = c3[0] * c4[1];
  if (std::abs(den) <= tol.rank * (std::abs(c3[0]) + std::abs(c3[1])) * (std::abs(c4[0]) + std::abs(c4[1])))
    throw Error(Errc::DegenerateDenominator, "r3 ~ r2 or r4 ~ r1");
  return (c3[0] * c4[1] - c3[1] * c4[0]) / den;
}

// Four spheres of a linear system: replace r2..r4 by their contact partners
// inside a contact element f through r1, then take the contact cross-ratio.
inline double cross_ratio_system(const Sphere& r1, const Sphere& r2, const Sphere& r3, const Sphere& r4,
                                 const ContactElement& f, const Tolerances& tol = {}) {
  if (!f.contains(r1, tol)) throw Error(Errc::SphereNotInElement, "f does not contain r1");
  Vec6 a = r1.normalized();
  Vec6 w = f.partner_of(a);
  std::array<Vec6, 3> s;
  std::array<const Vec6*, 3> in = {&r2, &r3, &r4};
  bool all_in_f = true;
  for (int i = 0; i < 3; ++i) {
    Vec6 ri = in[i]->normalized();
    if (f.contains(ri, tol)) {
      s[i] = ri;
    } else {
      all_in_f = false;
      s[i] = inner(w, ri) * a - inner(a, ri) * w;
    }
  }
  if (!all_in_f) span_system(r1, r2, r3, r4, tol);
  return cross_ratio_contact(a, s[0], s[1], s[2], tol);
}

inline double cross_ratio_inversion(const LinearComplex& a, const Sphere& s1, const Sphere& s2,
                                    const Tolerances& tol = {}) {
  if (a.kind == ComplexKind::parabolic) throw Error(Errc::ParabolicComplex, "complex is parabolic");
  double a1 = inner(s1, a.rep), a2 = inner(s2, a.rep);
  if (std::abs(a1) <= tol.contact * s1.norm() * a.rep.norm() || std::abs(a2) <= tol.contact * s2.norm() * a.rep.norm())
    throw Error(Errc::SphereInComplex, "sphere lies in the complex");
  return inner(s1, s2) * inner(a.rep, a.rep) / (2.0 * a1 * a2);
}

// ---------------------------------------------------------------- Euclidean model
//
// Standard frame only: q = (1,-1,0,0,0,0), p = e6. A finite sphere is
// normalized so that a1 + a2 = 1 (that is <a,q> = -1); then the center is
// (a3,a4,a5) and the signed radius is <a,p> = -a6.

struct EuclideanSphere {
  Eigen::Vector3d center;
  double radius;
};
struct EuclideanPlane {
  Eigen::Vector3d normal;  // unit
  double offset;           // plane: normal . x = offset
};
struct PointAtInfinity {};

using DecodedSphere = std::variant<EuclideanSphere, EuclideanPlane, PointAtInfinity>;

inline void require_standard(const MoebiusFrame& frame) {
  if (!frame.is_standard()) throw Error(Errc::UnsupportedFrame, "Euclidean decoding needs the standard frame");
}

inline Sphere sphere_encode(const Eigen::Vector3d& c, double radius, const MoebiusFrame& frame = MoebiusFrame::standard(),
                            const Tolerances& tol = {}) {
  require_standard(frame);
  double c2 = c.squaredNorm(), r2 = radius * radius;
  Vec6 s;
  s << (1.0 + c2 - r2) / 2.0, (1.0 - c2 + r2) / 2.0, c[0], c[1], c[2], -radius;
  if (!is_lightlike(s, tol)) throw Error(Errc::NotLightlike, "encoded sphere is not lightlike");
  return s;
}

inline Sphere plane_encode(const Eigen::Vector3d& normal, double offset) {
  Eigen::Vector3d n = normal.normalized();
  Vec6 s;
  s << offset, -offset, n[0], n[1], n[2], -1.0;
  return s;
}

inline DecodedSphere sphere_decode(const Sphere& s, const MoebiusFrame& frame = MoebiusFrame::standard(),
                                   const Tolerances& tol = {}) {
  require_standard(frame);
  if (!is_lightlike(s, tol)) throw Error(Errc::NotLightlike, "decoding a non-lightlike vector");
  double w = s[0] + s[1];
  if (std::abs(w) > tol.light * s.norm()) {
    Vec6 a = s / w;
    return EuclideanSphere{Eigen::Vector3d(a[2], a[3], a[4]), -a[5]};
  }
  Eigen::Vector3d n(s[2], s[3], s[4]);
  if (n.norm() <= tol.light * s.norm()) return PointAtInfinity{};
  double k = -1.0 / s[5];
  return EuclideanPlane{(k * n).normalized(), k * s[0]};
}

struct DecodedComplex {
  Eigen::Vector3d center;
  double R;      // radius of the sphere s_R
  double r;      // <a,p> after normalization
  double gamma;  // constant oriented angle, cos(gamma) = r / R
};

inline DecodedComplex decode_complex(const LinearComplex& a, const MoebiusFrame& frame = MoebiusFrame::standard(),
                                     const Tolerances& tol = {}) {
  require_standard(frame);
  if (a.kind != ComplexKind::elliptic) throw Error(Errc::NotElliptic, "complex is not elliptic");
  double w = a.rep[0] + a.rep[1];
  if (std::abs(w) <= tol.light * a.rep.norm()) throw Error(Errc::PlaneComplex, "complex is centered on a plane");
  Vec6 n = a.rep / w;
  DecodedComplex d;
  d.center = Eigen::Vector3d(n[2], n[3], n[4]);
  d.R = std::sqrt(std::abs(1.0 + d.center.squaredNorm() - 2.0 * n[0]));
  d.r = inner(n, frame.p);
  d.gamma = std::acos(std::clamp(d.r / d.R, -1.0, 1.0));
  return d;
}

}  // namespace ribaucour
