#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>

#include "tolerances.hpp"

namespace ribaucour {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Basis6 = Eigen::Matrix<double, 6, Eigen::Dynamic>;

inline const Mat6& metric() {
  static const Mat6 j = [] {
    Vec6 d;
    d << -1, 1, 1, 1, 1, -1;
    return Mat6(d.asDiagonal());
  }();
  return j;
}

inline double inner(const Vec6& x, const Vec6& y) {
  return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3] + x[4] * y[4] - x[5] * y[5];
}

inline Vec6 unit_vec(int i) {
  Vec6 e = Vec6::Zero();
  e[i] = 1.0;
  return e;
}

inline Vec6 normalized(const Vec6& x, const Tolerances& tol = {}) {
  double n = x.norm();
  if (!(n > tol.zero)) throw Error(Errc::ZeroVector, "representative has vanishing norm");
  return x / n;
}

// Distance between the projective points of x and y (unit representatives, up to sign).
inline double proj_dist(const Vec6& x, const Vec6& y) {
  Vec6 a = x.normalized(), b = y.normalized();
  return std::min((a - b).norm(), (a + b).norm());
}

// Lorentz inner product of unit representatives.
inline double rel_inner(const Vec6& x, const Vec6& y) { return inner(x, y) / (x.norm() * y.norm()); }

inline Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
}

inline int numeric_rank(const Eigen::MatrixXd& m, double rel) {
  Eigen::VectorXd s = singular_values(m);
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel * s[0]) ++r;
  return r;
}

// Columns spanning the kernel of m.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index r = 0;
  if (s.size() > 0 && s[0] > 0.0)
    while (r < s.size() && s[r] > rel * s[0]) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

inline Basis6 orthonormalize(const Basis6& b, double rel) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index r = 0;
  if (s.size() > 0 && s[0] > 0.0)
    while (r < s.size() && s[r] > rel * s[0]) ++r;
  return svd.matrixU().leftCols(r);
}

// All x with <x, b_i> = 0 for every column b_i.
inline Basis6 lorentz_complement(const Basis6& b, double rel) {
  Eigen::MatrixXd m = b.transpose() * metric();
  return null_space(m, rel);
}

inline Basis6 hcat(const Basis6& a, const Basis6& b) {
  Basis6 out(6, a.cols() + b.cols());
  out << a, b;
  return out;
}

inline Basis6 columns(std::initializer_list<Vec6> vs) {
  Basis6 out(6, static_cast<Eigen::Index>(vs.size()));
  Eigen::Index c = 0;
  for (const Vec6& v : vs) out.col(c++) = v;
  return out;
}

// Distance of the unit vector along x from the span of an orthonormal basis.
inline double span_residual(const Basis6& onb, const Vec6& x) {
  Vec6 u = x.normalized();
  return (u - onb * (onb.transpose() * u)).norm();
}

// Frobenius distance of orthogonal projectors; both bases orthonormal.
inline double subspace_distance(const Basis6& a, const Basis6& b) {
  return (a * a.transpose() - b * b.transpose()).norm();
}

struct Signature {
  int pos = 0, neg = 0, null = 0;
  bool operator==(const Signature&) const = default;
};

inline Signature signature(const Basis6& onb, double rel) {
  Eigen::MatrixXd g = onb.transpose() * metric() * onb;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  Signature s;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double l = es.eigenvalues()[i];
    if (l > rel) ++s.pos;
    else if (l < -rel) ++s.neg;
    else ++s.null;
  }
  return s;
}

namespace detail {
inline void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index k;
  v.cwiseAbs().maxCoeff(&k);
  if (v[k] < 0) v = -v;
}
}  // namespace detail

// Diagonalized form on a (2,1)-plane: columns are Lorentz-orthogonal with
// <e0,e0> = -1, <e1,e1> = <e2,e2> = 1.
inline Eigen::Matrix<double, 6, 3> conic_frame(const Basis6& onb) {
  if (onb.cols() != 3) throw Error(Errc::WrongSignature, "conic needs a 3-dimensional subspace");
  Eigen::Matrix3d g = onb.transpose() * metric() * onb;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
  Eigen::Vector3d l = es.eigenvalues();
  if (!(l[0] < 0 && l[1] > 0 && l[2] > 0))
    throw Error(Errc::WrongSignature, "subspace is not of signature (2,1)");
  Eigen::Matrix3d v = es.eigenvectors();
  Eigen::Matrix<double, 6, 3> out;
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd c = v.col(i);
    detail::fix_sign(c);
    out.col(i) = onb * c / std::sqrt(std::abs(l[i]));
  }
  return out;
}

// Lightlike point of a (2,1)-plane at angle theta on its conic.
inline Vec6 conic_point(const Basis6& onb, double theta) {
  Eigen::Matrix<double, 6, 3> e = conic_frame(onb);
  Vec6 x = e.col(0) + std::cos(theta) * e.col(1) + std::sin(theta) * e.col(2);
  return x.normalized();
}

inline double conic_angle(const Basis6& onb, const Vec6& x) {
  Eigen::Matrix<double, 6, 3> e = conic_frame(onb);
  double c0 = -inner(x, e.col(0));
  return std::atan2(inner(x, e.col(2)) / c0, inner(x, e.col(1)) / c0);
}

// Some lightlike vector of the subspace, if the restricted form admits one.
inline std::optional<Vec6> lightlike_in(const Basis6& onb, double rel) {
  Eigen::MatrixXd g = onb.transpose() * metric() * onb;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const Eigen::VectorXd& l = es.eigenvalues();
  Eigen::MatrixXd v = es.eigenvectors();
  Eigen::Index n = l.size();
  if (n == 0) return std::nullopt;
  for (Eigen::Index i = 0; i < n; ++i) detail::fix_sign(v.col(i));
  // a null direction of the restricted form first
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if (std::abs(l[i]) < std::abs(l[best])) best = i;
  if (std::abs(l[best]) <= rel) return Vec6((onb * v.col(best)).normalized());
  if (l[0] < 0 && l[n - 1] > 0) {
    Vec6 x = onb * (v.col(0) / std::sqrt(-l[0]) + v.col(n - 1) / std::sqrt(l[n - 1]));
    return x.normalized();
  }
  return std::nullopt;
}

}  // namespace ribaucour
