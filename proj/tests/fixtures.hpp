#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <ribaucour/envelope.hpp>

namespace fixtures {

using namespace ribaucour;

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double a = -1.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(gen); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen); }
  Vec6 vec() {
    Vec6 v;
    for (int i = 0; i < 6; ++i) v[i] = normal();
    return v;
  }
  Eigen::Vector3d vec3(double s = 1.0) { return {s * normal(), s * normal(), s * normal()}; }
  // lightlike: (|u| cos t, u, |u| sin t)
  Vec6 lightlike() {
    Eigen::Vector4d u(normal(), normal(), normal(), normal());
    double t = uniform(0, 2 * std::numbers::pi);
    Vec6 x;
    x << u.norm() * std::cos(t), u[0], u[1], u[2], u[3], u.norm() * std::sin(t);
    return x;
  }
  // a finite Euclidean sphere with moderate data
  Vec6 sphere() { return sphere_encode(vec3(), uniform(0.2, 2.0) * (uniform() < 0 ? -1 : 1)); }
  // random non-lightlike vector of a given kind (+1 elliptic, -1 hyperbolic)
  Vec6 complex(int kind) {
    for (;;) {
      Vec6 v = vec();
      double q = inner(v, v) / v.squaredNorm();
      if (kind > 0 && q > 0.05) return v;
      if (kind < 0 && q < -0.05) return v;
    }
  }
  Vec6 nonparabolic() {
    for (;;) {
      Vec6 v = vec();
      if (std::abs(inner(v, v)) > 0.05 * v.squaredNorm()) return v;
    }
  }
};

// Random lightlike vector orthogonal to every column of b.
inline Vec6 lightlike_orthogonal_to(Rng& rng, const Basis6& b) {
  Basis6 k = lorentz_complement(b, 1e-10);
  for (;;) {
    Eigen::VectorXd c1(k.cols()), c2(k.cols());
    for (Eigen::Index i = 0; i < k.cols(); ++i) {
      c1[i] = rng.normal();
      c2[i] = rng.normal();
    }
    Vec6 x = k * c1, y = k * c2;
    double A = inner(y, y), B = 2 * inner(x, y), C = inner(x, x);
    double D = B * B - 4 * A * C;
    if (D > 0 && std::abs(A) > 1e-6) {
      Vec6 z = x + ((-B + std::sqrt(D)) / (2 * A)) * y;
      // reject vectors that are (nearly) in the span of b
      Basis6 onb = orthonormalize(b, 1e-10);
      if (span_residual(onb, z) > 1e-3) return z.normalized();
    }
  }
}

inline ContactElement random_element_through(Rng& rng, const Vec6& r) {
  return ContactElement(r, lightlike_orthogonal_to(rng, columns({r})));
}

// Round torus, axis z, core radius A, tube radius b. Tube spheres form one
// curvature-sphere family, the spheres centred on the axis the other.
struct Torus {
  double A = 2.0, b = 0.7;
  Vec6 tube(double phi) const { return sphere_encode(Eigen::Vector3d(A * std::cos(phi), A * std::sin(phi), 0.0), b); }
  // sphere centred on the axis touching the torus along the parallel at psi
  // Spheres tangent at a torus point P with normal N are sph(P - rho N, rho);
  // the axial one has rho = b + A / cos(psi).
  Vec6 axial(double psi) const {
    double rho = b + A / std::cos(psi);
    return sphere_encode(Eigen::Vector3d(0, 0, -A * std::tan(psi)), rho);
  }
  Eigen::Vector3d point(double phi, double psi) const {
    return {(A + b * std::cos(psi)) * std::cos(phi), (A + b * std::cos(psi)) * std::sin(phi), b * std::sin(psi)};
  }
  double implicit(const Eigen::Vector3d& x) const {
    double q = std::hypot(x[0], x[1]) - A;
    return q * q + x[2] * x[2] - b * b;
  }
  ContactElement element(double phi, double psi) const { return ContactElement(tube(phi), axial(psi)); }
};

// Point spheres of four points.
inline std::array<Vec6, 4> point_quad(const std::array<Eigen::Vector3d, 4>& x) {
  return {sphere_encode(x[0], 0.0), sphere_encode(x[1], 0.0), sphere_encode(x[2], 0.0), sphere_encode(x[3], 0.0)};
}

inline Eigen::Vector3d circle_point(const Eigen::Vector3d& c, double rad, const Eigen::Vector3d& u,
                                    const Eigen::Vector3d& v, double t) {
  return c + rad * (std::cos(t) * u + std::sin(t) * v);
}

// Lorentz transform (I - X)^-1 (I + X) with X = J S, S antisymmetric.
inline Mat6 lorentz(Rng& rng, double scale) {
  Mat6 s;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) s(i, j) = rng.normal() * scale;
  Mat6 x = metric() * (s - s.transpose());
  return (Mat6::Identity() - x).inverse() * (Mat6::Identity() + x);
}

inline ContactElement apply(const Mat6& L, const ContactElement& f) {
  return ContactElement(L * f.b1(), L * f.b2());
}

// Euclidean parallel transform: signed radii grow by d. Linear on R^{4,2}.
inline Mat6 parallel(double d) {
  Mat6 m = Mat6::Identity();
  m(0, 5) = d;
  m(0, 0) -= d * d / 2;
  m(0, 1) -= d * d / 2;
  m(1, 5) = -d;
  m(1, 0) += d * d / 2;
  m(1, 1) += d * d / 2;
  m(5, 0) = -d;
  m(5, 1) = -d;
  return m;
}

// Curvature-line lattice of a torus, offset by d and moved by a Lorentz map.
// The vertex spheres sph(P, d) form an R-congruence; the offset torus
// elements are one of its envelopes.
struct TorusNet {
  std::size_t m = 6, n = 5;
  double d = 0.3;
  Mat6 L = Mat6::Identity();
  Torus torus;
  double phi0 = 0.0, dphi = 0.25, psi0 = 0.3, dpsi = 0.35;
  double jitter = 0.3;  // uneven spacing, relative to the step; breaks the rotational symmetry

  double phi(std::size_t a) const {
    double x = static_cast<double>(a);
    return phi0 + dphi * (x + jitter * std::sin(2.3 * x));
  }
  double psi(std::size_t b) const {
    double x = static_cast<double>(b);
    return psi0 + dpsi * (x + jitter * std::sin(1.9 * x + 0.5));
  }
  QuadComplex grid() const { return QuadComplex(m, n); }
  Mat6 map() const { return L * parallel(d); }

  RCongruence congruence() const {
    QuadComplex g = grid();
    RCongruence r{g, std::vector<Sphere>(g.vertex_count())};
    for (std::size_t b = 0; b <= n; ++b)
      for (std::size_t a = 0; a <= m; ++a)
        r.spheres[g.vertex(a, b)] = (map() * sphere_encode(torus.point(phi(a), psi(b)), 0.0)).normalized();
    return r;
  }
  LegendreMap envelope() const {
    QuadComplex g = grid();
    LegendreMap f{g, std::vector<ContactElement>(g.vertex_count())};
    for (std::size_t b = 0; b <= n; ++b)
      for (std::size_t a = 0; a <= m; ++a) f.elements[g.vertex(a, b)] = apply(map(), torus.element(phi(a), psi(b)));
    return f;
  }
};

// r(a,b) = r00 + u_a + v_b with u in W1, v in its Lorentz complement: every
// parameter rectangle satisfies r_i - r_j + r_j' - r_i' = 0.
struct MultiNet {
  RCongruence r;
  std::vector<Vec6> lift;
};

inline MultiNet multi_net(Rng& rng, std::size_t m, std::size_t n) {
  Vec6 r00 = rng.lightlike();
  auto step = [&](int first) {
    for (;;) {
      Vec6 dvec = Vec6::Zero();
      for (int c = first; c < first + 3; ++c) dvec[c] = rng.normal();
      if (std::abs(inner(dvec, dvec)) < 0.2 * dvec.squaredNorm()) continue;
      double t = -2.0 * inner(r00, dvec) / inner(dvec, dvec);
      if (std::abs(t) < 0.2 || std::abs(t) > 5) continue;
      return Vec6(t * dvec);
    }
  };
  QuadComplex g(m, n);
  std::vector<Vec6> u(m + 1, Vec6::Zero()), v(n + 1, Vec6::Zero());
  for (std::size_t a = 1; a <= m; ++a) u[a] = step(0);
  for (std::size_t b = 1; b <= n; ++b) v[b] = step(3);
  MultiNet out{RCongruence{g, std::vector<Sphere>(g.vertex_count())}, std::vector<Vec6>(g.vertex_count())};
  for (std::size_t b = 0; b <= n; ++b)
    for (std::size_t a = 0; a <= m; ++a) {
      Vec6 x = r00 + u[a] + v[b];
      out.lift[g.vertex(a, b)] = x;
      out.r.spheres[g.vertex(a, b)] = x.normalized();
    }
  return out;
}


// Möbius reflection in the plane {x : N.x = h}
inline Vec6 mirror(const Eigen::Vector3d& normal, double h) {
  Eigen::Vector3d nn = normal.normalized();
  Vec6 v;
  v << h, -h, nn[0], nn[1], nn[2], 0.0;
  return v;
}

// Two-channel congruence: tube spheres of a torus on line 0, every further
// line the mirror image of the previous one in a slightly tilted plane.
struct ChannelNet {
  std::size_t m = 6, n = 5;
  Mat6 L = Mat6::Identity();
  double d = 0.2;
  Torus torus;
  double dphi = 0.3, jitter = 0.3;

  double phi(std::size_t a) const {
    double x = static_cast<double>(a);
    return dphi * (x + jitter * std::sin(2.3 * x));
  }
  Mat6 map() const { return L * parallel(d); }
  std::vector<Vec6> ribbon() const {
    std::vector<Vec6> out;
    for (std::size_t b = 0; b < n; ++b) {
      double x = static_cast<double>(b);
      Vec6 v = mirror(Eigen::Vector3d(0.15 * std::sin(1.7 * x + 0.3), 0.1 * std::cos(x), 1.0), 0.18 + 0.35 * x);
      out.push_back(map() * v);
    }
    return out;
  }
  RCongruence congruence() const {
    std::vector<Sphere> line0;
    for (std::size_t a = 0; a <= m; ++a) line0.push_back(map() * torus.tube(phi(a)));
    return sweep_congruence(line0, ribbon());
  }
};

}  // namespace fixtures
