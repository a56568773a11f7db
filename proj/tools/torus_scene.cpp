// Writes the bundled torus scene to stdout: a curvature-line lattice of a
// round torus as a Legendre map, plus tangent spheres of radius rho along the
// two first lines, ready for `construct --legendre`.

#include <cmath>
#include <iostream>

#include <ribaucour/scene.hpp>

using namespace ribaucour;

int main() {
  const std::size_t m = 6, n = 5;
  const double A = 2.0, b = 0.7, rho = 0.3;
  // uneven spacing so nothing is rotationally symmetric
  auto phi = [](std::size_t a) { double x = double(a); return 0.25 * (x + 0.3 * std::sin(2.3 * x)); };
  auto psi = [](std::size_t k) { double x = double(k); return 0.3 + 0.35 * (x + 0.3 * std::sin(1.9 * x + 0.5)); };
  auto point = [&](double u, double v) {
    return Eigen::Vector3d((A + b * std::cos(v)) * std::cos(u), (A + b * std::cos(v)) * std::sin(u), b * std::sin(v));
  };
  auto normal = [&](double u, double v) {
    return Eigen::Vector3d(std::cos(v) * std::cos(u), std::cos(v) * std::sin(u), std::sin(v));
  };
  auto tube = [&](double u) { return SphereEntry::from_euclid({A * std::cos(u), A * std::sin(u), 0}, b); };
  auto axial = [&](double v) { return SphereEntry::from_euclid({0, 0, -A * std::tan(v)}, b + A / std::cos(v)); };
  auto tangent = [&](double u, double v) { return SphereEntry::from_euclid(point(u, v) - rho * normal(u, v), rho); };

  Scene s;
  s.m = m;
  s.n = n;
  NamedSpheres l1{"line1", {}}, l2{"line2", {}};
  for (std::size_t a = 0; a <= m; ++a) l1.spheres.push_back(tangent(phi(a), psi(0)));
  for (std::size_t k = 0; k <= n; ++k) l2.spheres.push_back(tangent(phi(0), psi(k)));
  s.curves = {l1, l2};
  // another point of the corner R-sphere, for a second envelope
  Eigen::Vector3d c0 = point(phi(0), psi(0)) - rho * normal(phi(0), psi(0));
  Eigen::Vector3d w = Eigen::Vector3d(0.3, -0.5, 0.8).normalized();
  s.elements.push_back({"corner", SphereEntry::from_euclid(c0 + rho * w, 0.0), tangent(phi(0), psi(0))});
  NamedEnvelope f{"torus", {}};
  for (std::size_t k = 0; k <= n; ++k)
    for (std::size_t a = 0; a <= m; ++a) f.elements.emplace_back(tube(phi(a)), axial(psi(k)));
  s.envelopes.push_back(f);
  std::cout << format_scene(s);
}
