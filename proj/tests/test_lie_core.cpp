#include <gtest/gtest.h>

#include <array>
#include <numbers>

#include "fixtures.hpp"

using namespace ribaucour;
using fixtures::Rng;

namespace {

Vec6 v6(double a, double b, double c, double d, double e, double f) {
  Vec6 x;
  x << a, b, c, d, e, f;
  return x;
}

// spheres tangent at x0 with unit normal n: sph(x0 - R n, R)
Vec6 pencil_sphere(const Eigen::Vector3d& x0, const Eigen::Vector3d& n, double R) {
  return sphere_encode(x0 - R * n, R);
}

}  // namespace

TEST(Inner, Examples) {
  EXPECT_EQ(inner(unit_vec(0), unit_vec(0)), -1.0);
  EXPECT_EQ(inner(v6(1, 1, 0, 0, 0, 0), v6(1, 1, 0, 0, 0, 0)), 0.0);
  MoebiusFrame fr = MoebiusFrame::standard();
  EXPECT_EQ(inner(fr.q, fr.p), 0.0);
  EXPECT_EQ(inner(fr.p, fr.p), -1.0);
}

TEST(Inner, MatchesMetricMatrix) {
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    Vec6 x = rng.vec(), y = rng.vec();
    EXPECT_NEAR(inner(x, y), x.dot(metric() * y), 1e-12);
    EXPECT_DOUBLE_EQ(inner(x, y), inner(y, x));
  }
}

TEST(ClassifyComplex, Examples) {
  EXPECT_EQ(classify_complex(v6(1, -1, 0, 0, 0, 0)).kind, ComplexKind::parabolic);
  EXPECT_EQ(classify_complex(unit_vec(5)).kind, ComplexKind::hyperbolic);
  EXPECT_EQ(classify_complex(unit_vec(1)).kind, ComplexKind::elliptic);
  EXPECT_THROW(classify_complex(Vec6::Zero()), Error);
}

TEST(LieInversion, Examples) {
  Vec6 x = v6(1, 1, 0, 0, 0, 0);
  EXPECT_TRUE(lie_inversion(classify_complex(unit_vec(5)), x).isApprox(x));
  // x - 2 <x,e2>/<e2,e2> e2 = (1,1,..) - 2 e2
  EXPECT_TRUE(lie_inversion(classify_complex(unit_vec(1)), x).isApprox(v6(1, -1, 0, 0, 0, 0)));
  try {
    lie_inversion(classify_complex(v6(1, 1, 0, 0, 0, 0)), x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ParabolicComplex);
  }
}

TEST(LieInversion, InvolutionIsometryFixedComplex) {
  Rng rng(2);
  for (int k = 0; k < 1000; ++k) {
    LinearComplex a = classify_complex(rng.nonparabolic());
    Vec6 x = rng.lightlike(), y = rng.vec();
    Vec6 sx = lie_inversion(a, x), sy = lie_inversion(a, y);
    double scale = x.norm() * y.norm() * (1 + std::pow(a.rep.squaredNorm() / std::abs(inner(a.rep, a.rep)), 2));
    EXPECT_LT(std::abs(inner(sx, sy) - inner(x, y)), 1e-10 * scale);
    EXPECT_LT((lie_inversion(a, sx) - x).norm(), 1e-9 * x.norm() * scale);
    // fixed pointwise on a^perp
    Vec6 z = y - inner(y, a.rep) / inner(a.rep, a.rep) * a.rep;
    EXPECT_LT((lie_inversion(a, z) - z).norm(), 1e-9 * z.norm() * scale);
  }
}

TEST(LieInversion, TwoSpheresAndImagesSpanALinearSystem) {
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    Vec6 a = rng.nonparabolic(), r = rng.lightlike(), s = rng.lightlike();
    Basis6 m = columns({r.normalized(), s.normalized(), reflect(a, r).normalized(), reflect(a, s).normalized()});
    EXPECT_LE(numeric_rank(m, 1e-9), 3);
  }
}

TEST(Commute, Examples) {
  EXPECT_TRUE(commute(classify_complex(unit_vec(1)), classify_complex(unit_vec(2))));
  Vec6 b = v6(0, 1, 1, 0, 0, 0);
  ASSERT_EQ(inner(unit_vec(1), b), 1.0);
  EXPECT_FALSE(commute(classify_complex(unit_vec(1)), classify_complex(b)));
  EXPECT_GT(commutator_defect(unit_vec(1), b), 1e-3);
  Vec6 a = v6(0.3, 1, 2, 0, 0, 0);
  EXPECT_TRUE(commute(classify_complex(a), classify_complex(-2.5 * a)));
}

TEST(Commute, AgreesWithOperatorLevel) {
  Rng rng(4);
  for (int k = 0; k < 1000; ++k) {
    Vec6 a = rng.nonparabolic();
    Vec6 b = rng.nonparabolic();
    if (k % 2 == 0) {
      // force orthogonality while keeping b non-parabolic
      Vec6 c = b - inner(b, a) / inner(a, a) * a;
      if (std::abs(inner(c, c)) < 0.05 * c.squaredNorm()) continue;
      b = c;
    }
    bool fast = commute(classify_complex(a), classify_complex(b));
    bool slow = commutator_defect(a.normalized(), b.normalized()) < 1e-9 *
                    (1 + a.squaredNorm() / std::abs(inner(a, a))) * (1 + b.squaredNorm() / std::abs(inner(b, b)));
    EXPECT_EQ(fast, slow);
    EXPECT_EQ(fast, k % 2 == 0);
  }
}

TEST(InversionForPair, DefiningProperties) {
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    Vec6 r = rng.lightlike(), rb = rng.lightlike();
    double l1 = rng.uniform(0.2, 3.0), l2 = -rng.uniform(0.2, 3.0);
    LinearComplex n = inversion_for_pair(r, rb, l1);
    EXPECT_LT(proj_dist(lie_inversion(n, r), rb), 1e-9);
    // spheres touching both r and rbar are fixed
    Vec6 v = fixtures::lightlike_orthogonal_to(rng, columns({r, rb}));
    EXPECT_LT(proj_dist(lie_inversion(n, v), v), 1e-9);
    // every lambda maps a contact element through r to the same element
    ContactElement f = fixtures::random_element_through(rng, r);
    LinearComplex n2 = inversion_for_pair(r, rb, l2);
    EXPECT_LT(distance(reflect(n.rep, f), reflect(n2.rep, f)), 1e-8);
  }
}

TEST(InversionForPair, Errors) {
  Vec6 r = sphere_encode({0, 0, 0}, 1.0), touching = sphere_encode({2, 0, 0}, -1.0);
  ASSERT_NEAR(inner(r, touching), 0.0, 1e-12);
  try {
    inversion_for_pair(r, touching, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TangentSpheres);
  }
  // r - lambda rbar is lightlike exactly when lambda = 0; use a general pair
  Vec6 rb = sphere_encode({3, 0, 0}, 0.5);
  EXPECT_THROW(inversion_for_pair(r, rb, 0.0), Error);
}

TEST(UniqueInversion, RecoversTheInversion) {
  Rng rng(6);
  for (int k = 0; k < 200; ++k) {
    Vec6 s = rng.lightlike();
    Vec6 w = fixtures::lightlike_orthogonal_to(rng, columns({s}));
    Vec6 r = rng.normal() * s + w, t = rng.normal() * s - 0.7 * w;
    // a complex through s, so that the image element still contains s
    Basis6 k1 = lorentz_complement(columns({s}), 1e-12);
    Eigen::VectorXd c(k1.cols());
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = rng.normal();
    Vec6 a = k1 * c;
    if (std::abs(inner(a, a)) < 0.05 * a.squaredNorm()) continue;
    Vec6 rb = reflect(a, r), tb = reflect(a, t);
    LinearComplex got = unique_inversion(s, r, t, rb, tb);
    EXPECT_LT(proj_dist(got.rep, a), 1e-7);
    EXPECT_LT(proj_dist(lie_inversion(got, r), rb), 1e-8);
    EXPECT_LT(proj_dist(lie_inversion(got, t), tb), 1e-8);
    // collinear with r and rbar
    EXPECT_LT(span_residual(orthonormalize(columns({r, rb}), 1e-12), got.rep), 1e-8);
  }
}

TEST(UniqueInversion, IdentityCase) {
  Rng rng(7);
  Vec6 s = rng.lightlike();
  Vec6 w = fixtures::lightlike_orthogonal_to(rng, columns({s}));
  Vec6 r = s + w, t = s - w;
  LinearComplex a = unique_inversion(s, r, t, r, t);
  EXPECT_NE(a.kind, ComplexKind::parabolic);
  EXPECT_LT(proj_dist(lie_inversion(a, r), r), 1e-9);
  EXPECT_LT(proj_dist(lie_inversion(a, t), t), 1e-9);
}

TEST(SpanSystem, TorusCurvatureSpheresAreA21System) {
  fixtures::Torus torus;
  LinearSystem ls = span_system(torus.tube(0.1), torus.tube(0.9), torus.tube(2.0), torus.tube(4.0));
  EXPECT_EQ(ls.signature, SystemSignature::s21);
  EXPECT_EQ(ls.delta, -1);
}

TEST(SpanSystem, Errors) {
  Rng rng(8);
  try {
    span_system(rng.lightlike(), rng.lightlike(), rng.lightlike(), rng.lightlike());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RankNot3);
  }
}

TEST(SpanSystem, DeltaMatchesSignature) {
  Rng rng(9);
  int seen21 = 0, seen12 = 0;
  for (int k = 0; k < 300; ++k) {
    Vec6 a = rng.lightlike(), b = rng.lightlike(), c = rng.lightlike();
    Vec6 d = rng.normal() * a + rng.normal() * b + rng.normal() * c;
    // d must be lightlike: move along the conic of the plane
    Basis6 onb = orthonormalize(columns({a, b, c}), 1e-12);
    Signature sg = signature(onb, 1e-12);
    if (sg.pos == 2) {
      d = conic_point(onb, rng.uniform(0, 6.28));
      ++seen21;
    } else {
      continue;  // (1,2) planes: use the negated form below
    }
    LinearSystem ls = span_system(a, b, c, d);
    EXPECT_EQ(ls.signature, SystemSignature::s21);
    EXPECT_EQ(ls.delta, -1);
  }
  // (1,2): three pairwise non-touching spheres with delta = +1
  for (int k = 0; k < 300; ++k) {
    Vec6 a = rng.lightlike(), b = rng.lightlike(), c = rng.lightlike();
    double prod = inner(a, b) * inner(b, c) * inner(c, a);
    if (prod <= 0) continue;
    Basis6 onb = orthonormalize(columns({a, b, c}), 1e-12);
    EXPECT_EQ(signature(onb, 1e-12).pos, 1);
    ++seen12;
  }
  EXPECT_GT(seen21, 10);
  EXPECT_GT(seen12, 10);
}

// ---------------------------------------------------------------- cross-ratios

namespace {
// The other common textbook form, used only to relate conventions.
double printed_form(double R1, double R2, double R3, double R4) {
  return (R1 - R4) * (R2 - R3) / ((R1 - R3) * (R2 - R4));
}
}  // namespace

TEST(CrossRatioRadii, Examples) {
  EXPECT_DOUBLE_EQ(printed_form(0, 1, 2, 3), 0.75);
  EXPECT_NEAR(cross_ratio_radii(0, 1, 2, 3), 1.0 - 1.0 / 0.75, 1e-15);
  EXPECT_NEAR(cross_ratio_radii(0, 1, 2, 3), -1.0 / 3.0, 1e-15);
  double inf = std::numeric_limits<double>::infinity();
  // limit of the printed form at R1 = inf is (R2-R3)/(R2-R4) = 1/2
  EXPECT_NEAR(cross_ratio_radii(inf, 1, 2, 3), 1.0 - 1.0 / 0.5, 1e-15);
  EXPECT_NEAR(cross_ratio_radii(inf, 1, 2, 3), cross_ratio_radii(1e12, 1, 2, 3), 1e-10);
  EXPECT_NEAR(cross_ratio_radii(0, inf, 2, 3), cross_ratio_radii(0, -1e12, 2, 3), 1e-10);
  EXPECT_NEAR(cross_ratio_radii(0, 1, inf, 3), cross_ratio_radii(0, 1, 1e12, 3), 1e-10);
  EXPECT_NEAR(cross_ratio_radii(0, 1, 2, inf), cross_ratio_radii(0, 1, 2, 1e12), 1e-10);
  EXPECT_EQ(cross_ratio_radii(0.5, 0.5, 2, 3), 0.0);
  EXPECT_THROW(cross_ratio_radii(1, 2, 2, 3), Error);
  EXPECT_THROW(cross_ratio_radii(inf, inf, 2, 3), Error);
}

TEST(CrossRatioRadii, RelatedToPrintedFormEverywhere) {
  Rng rng(10);
  for (int k = 0; k < 200; ++k) {
    double R[4];
    for (double& x : R) x = rng.uniform(-3, 3);
    double X = printed_form(R[0], R[1], R[2], R[3]);
    EXPECT_NEAR(cross_ratio_radii(R[0], R[1], R[2], R[3]), 1.0 - 1.0 / X, 1e-8 * (1 + std::abs(1 / X)));
  }
}

TEST(CrossRatioContact, MatchesRadii) {
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    Eigen::Vector3d x0 = rng.vec3(), n = rng.vec3().normalized();
    double R[4];
    for (double& x : R) x = rng.uniform(-3, 3);
    Vec6 s[4];
    for (int i = 0; i < 4; ++i) s[i] = pencil_sphere(x0, n, R[i]) * rng.uniform(0.5, 2.0);
    double want = cross_ratio_radii(R[0], R[1], R[2], R[3]);
    double got = cross_ratio_contact(s[0], s[1], s[2], s[3]);
    EXPECT_NEAR(got, want, 1e-8 * (1 + std::abs(want)));
  }
}

TEST(CrossRatioContact, ScaleInvarianceAndDegenerations) {
  Eigen::Vector3d x0(0.2, -0.4, 1.0), n(0, 0, 1);
  Vec6 s1 = pencil_sphere(x0, n, 0.3), s2 = pencil_sphere(x0, n, 1.1), s3 = pencil_sphere(x0, n, -0.7),
       s4 = pencil_sphere(x0, n, 2.5);
  double base = cross_ratio_contact(s1, s2, s3, s4);
  EXPECT_NEAR(cross_ratio_contact(2 * s1, s2, s3, s4), base, 1e-12);
  EXPECT_NEAR(cross_ratio_contact(s1, 2 * s2, s3, s4), base, 1e-12);
  EXPECT_NEAR(cross_ratio_contact(s1, s2, 2 * s3, s4), base, 1e-12);
  EXPECT_NEAR(cross_ratio_contact(s1, s2, s3, -2 * s4), base, 1e-12);
  // zero exactly when r3 = r4 (or r1 = r2, excluded)
  EXPECT_NEAR(cross_ratio_contact(s1, s2, s3, s3), 0.0, 1e-12);
  EXPECT_NEAR(cross_ratio_contact(s1, s2, s1, s2), 1.0, 1e-12);
  try {
    cross_ratio_contact(s1, s2, s2, s1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DegenerateDenominator);
  }
  Rng rng(12);
  try {
    cross_ratio_contact(s1, s2, s3, rng.lightlike());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotCoplanar);
  }
}

namespace {
// Four spheres of a (2,1) linear system.
std::array<Vec6, 4> random_system(Rng& rng) {
  for (;;) {
    Vec6 a = rng.sphere(), b = rng.sphere(), c = rng.sphere();
    Basis6 onb = orthonormalize(columns({a, b, c}), 1e-12);
    if (signature(onb, 1e-12).pos != 2) continue;
    std::array<Vec6, 4> r = {conic_point(onb, rng.uniform(0, 6.28)), conic_point(onb, rng.uniform(0, 6.28)),
                             conic_point(onb, rng.uniform(0, 6.28)), conic_point(onb, rng.uniform(0, 6.28))};
    bool ok = true;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) ok = ok && std::abs(rel_inner(r[i], r[j])) > 1e-3;
    if (ok) return r;
  }
}
}  // namespace

TEST(CrossRatioSystem, IndependentOfElementAndMatchesRadii) {
  Rng rng(13);
  for (int k = 0; k < 200; ++k) {
    auto r = random_system(rng);
    ContactElement f = fixtures::random_element_through(rng, r[0]);
    ContactElement g = fixtures::random_element_through(rng, r[0]);
    double a = cross_ratio_system(r[0], r[1], r[2], r[3], f);
    double b = cross_ratio_system(r[0], r[1], r[2], r[3], g);
    EXPECT_NEAR(a, b, 1e-8 * (1 + std::abs(a)));
    // the partner spheres inside f, read through their Euclidean radii
    Vec6 w = f.partner_of(r[0]);
    double R[4];
    std::array<Vec6, 4> s = {r[0], Vec6(), Vec6(), Vec6()};
    for (int i = 1; i < 4; ++i) s[i] = inner(w, r[i]) * r[0].normalized() - inner(r[0].normalized(), r[i]) * w;
    bool finite = true;
    for (int i = 0; i < 4; ++i) {
      auto d = sphere_decode(s[i]);
      if (auto* e = std::get_if<EuclideanSphere>(&d)) R[i] = e->radius;
      else finite = false;
    }
    if (finite) {
      EXPECT_NEAR(a, cross_ratio_radii(R[0], R[1], R[2], R[3]), 1e-7 * (1 + std::abs(a)));
    }
  }
}

TEST(CrossRatioSystem, SpheresAlreadyInTheElement) {
  Eigen::Vector3d x0(1, 0, 0), n(0, 1, 0);
  Vec6 s1 = pencil_sphere(x0, n, 0.5), s2 = pencil_sphere(x0, n, 1.5), s3 = pencil_sphere(x0, n, -1),
       s4 = pencil_sphere(x0, n, 3);
  ContactElement f(s1, s2);
  EXPECT_NEAR(cross_ratio_system(s1, s2, s3, s4, f), cross_ratio_contact(s1, s2, s3, s4), 1e-12);
}

TEST(CrossRatioInversion, MatchesSystemDefinition) {
  Rng rng(14);
  for (int k = 0; k < 200; ++k) {
    LinearComplex a = classify_complex(rng.nonparabolic());
    Vec6 s1 = rng.sphere(), s2 = rng.sphere();
    double via_inv = cross_ratio_inversion(a, s1, s2);
    ContactElement f = fixtures::random_element_through(rng, s1);
    double sys = cross_ratio_system(s1, s2, lie_inversion(a, s2), lie_inversion(a, s1), f);
    EXPECT_NEAR(via_inv, sys, 1e-8 * (1 + std::abs(via_inv)));
  }
}

TEST(CrossRatioInversion, Examples) {
  Vec6 r = sphere_encode({1, 0, 0}, 1.0), touching = sphere_encode({3, 0, 0}, -1.0);
  LinearComplex a = classify_complex(unit_vec(2));
  EXPECT_EQ(cross_ratio_inversion(a, r, touching), 0.0);
  try {
    cross_ratio_inversion(a, sphere_encode({0, 1, 0}, 1.0), touching);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SphereInComplex);
  }
}

// ---------------------------------------------------------------- Euclidean model

TEST(Encode, SignConventionIsTheOnlyDecodeCompatibleChoice) {
  // Enumerate signs on coordinates 1, 2, 6 and both normalizations <a,q> = +-1;
  // keep the combinations for which the decoding formulas return the input.
  Rng rng(15);
  MoebiusFrame fr = MoebiusFrame::standard();
  int passing = 0;
  int pass_sign[3] = {0, 0, 0}, pass_norm = 0;
  for (int code = 0; code < 16; ++code) {
    int s1 = code & 1 ? -1 : 1, s2 = code & 2 ? -1 : 1, s6 = code & 4 ? -1 : 1, norm = code & 8 ? -1 : 1;
    bool ok = true;
    for (int k = 0; k < 20 && ok; ++k) {
      Eigen::Vector3d c = rng.vec3();
      double rho = rng.uniform(-2, 2);
      Vec6 a;
      a << s1 * (1 + c.squaredNorm() - rho * rho) / 2, s2 * (1 - c.squaredNorm() + rho * rho) / 2, c[0], c[1], c[2],
          s6 * rho;
      if (std::abs(inner(a, a)) > 1e-9) { ok = false; break; }
      a *= norm / inner(a, fr.q);
      Eigen::Vector3d cc(a[2], a[3], a[4]);
      double R = std::sqrt(std::abs(1 + cc.squaredNorm() - 2 * a[0]));
      double r = inner(a, fr.p);
      ok = (cc - c).norm() < 1e-9 && std::abs(R - std::abs(rho)) < 1e-9 && std::abs(r - rho) < 1e-9;
    }
    if (ok) {
      ++passing;
      pass_sign[0] = s1;
      pass_sign[1] = s2;
      pass_sign[2] = s6;
      pass_norm = norm;
    }
  }
  ASSERT_EQ(passing, 1);
  EXPECT_EQ(pass_sign[0], 1);
  EXPECT_EQ(pass_sign[1], 1);
  EXPECT_EQ(pass_sign[2], -1);
  EXPECT_EQ(pass_norm, -1);
  // and the library encoder is that choice
  Vec6 s = sphere_encode({0.5, -1, 2}, 0.75);
  EXPECT_TRUE(s.isApprox(v6((1 + 5.25 - 0.5625) / 2, (1 - 5.25 + 0.5625) / 2, 0.5, -1, 2, -0.75)));
}

TEST(Encode, RoundTripOverRanges) {
  Rng rng(16);
  for (int k = 0; k < 2000; ++k) {
    double mag = std::pow(10.0, rng.uniform(-3, 3));
    double rho = (rng.uniform() < 0 ? -1 : 1) * mag;
    Eigen::Vector3d c = rng.vec3().normalized() * rng.uniform(0, 1e3);
    Vec6 s = sphere_encode(c, rho) * rng.uniform(0.1, 10);
    auto d = std::get<EuclideanSphere>(sphere_decode(s));
    EXPECT_LT((d.center - c).norm(), 1e-10 * std::max(1.0, c.norm()));
    EXPECT_LT(std::abs(d.radius - rho), 1e-10 * std::max(1.0, std::abs(rho)) * std::max(1.0, c.norm()));
  }
}

TEST(Encode, Examples) {
  auto d = std::get<EuclideanSphere>(sphere_decode(sphere_encode({0, 0, 0}, 1.0)));
  EXPECT_LT(d.center.norm(), 1e-15);
  EXPECT_DOUBLE_EQ(d.radius, 1.0);
  auto p = std::get<EuclideanSphere>(sphere_decode(sphere_encode({1, 2, 3}, 0.0)));
  EXPECT_LT((p.center - Eigen::Vector3d(1, 2, 3)).norm(), 1e-14);
  EXPECT_EQ(p.radius, 0.0);
  auto pl = std::get<EuclideanPlane>(sphere_decode(plane_encode({0, 0, 2}, 1.5)));
  EXPECT_LT((pl.normal - Eigen::Vector3d(0, 0, 1)).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(pl.offset, 1.5);
  EXPECT_TRUE(std::holds_alternative<PointAtInfinity>(sphere_decode(MoebiusFrame::standard().q)));
  MoebiusFrame other = MoebiusFrame::standard();
  other.p = -other.p;
  EXPECT_THROW(sphere_encode({0, 0, 0}, 1.0, other), Error);
}

TEST(Encode, PlaneIsTheLimitOfGrowingSpheres) {
  Eigen::Vector3d x0(0.3, 0.1, -2.0), n = Eigen::Vector3d(1, 2, 2).normalized();
  Vec6 big = pencil_sphere(x0, -n, 1e7);  // center x0 + 1e7 n, through x0
  Vec6 plane = plane_encode(n, n.dot(x0));
  EXPECT_LT(proj_dist(big, plane), 1e-6);
}

namespace {
// Euclidean angle at an intersection point, from explicit normals.
double intersection_cos(const Eigen::Vector3d& m, double rho, const Eigen::Vector3d& c, double R) {
  Eigen::Vector3d d = m - c;
  double dist = d.norm();
  Eigen::Vector3d u = d / dist;
  double t = (R * R - rho * rho + dist * dist) / (2 * dist);
  double h = std::sqrt(std::max(0.0, R * R - t * t));
  Eigen::Vector3d w = u.unitOrthogonal();
  Eigen::Vector3d x = c + t * u + h * w;
  // oriented normals (x - center) / signed radius
  return ((x - m) / rho).dot((x - c) / R);
}
}  // namespace

TEST(DecodeComplex, ConstantAngleFromConcentricSpheres) {
  // 3/4 of the unit sphere plus 1/4 of its reverse: <a,p> = 1/2, R = 1
  Vec6 a = 0.75 * sphere_encode({0, 0, 0}, 1.0) + 0.25 * sphere_encode({0, 0, 0}, -1.0);
  DecodedComplex d = decode_complex(classify_complex(a));
  EXPECT_NEAR(d.R, 1.0, 1e-14);
  EXPECT_NEAR(d.r / d.R, 0.5, 1e-14);
  Rng rng(17);
  int sampled = 0;
  while (sampled < 100) {
    Vec6 x = fixtures::lightlike_orthogonal_to(rng, columns({a}));
    auto e = sphere_decode(x);
    auto* s = std::get_if<EuclideanSphere>(&e);
    if (!s || std::abs(s->radius) < 1e-3) continue;
    double cs = intersection_cos(s->center, s->radius, d.center, d.R);
    EXPECT_NEAR(std::acos(std::clamp(cs, -1.0, 1.0)), d.gamma, 1e-6);
    ++sampled;
  }
}

TEST(DecodeComplex, RandomEllipticComplexes) {
  Rng rng(18);
  for (int k = 0; k < 50; ++k) {
    LinearComplex a = classify_complex(rng.complex(+1));
    DecodedComplex d = decode_complex(a);
    EXPECT_LE(std::abs(d.r / d.R), 1.0);
    for (int j = 0; j < 5; ++j) {
      Vec6 x = fixtures::lightlike_orthogonal_to(rng, columns({a.rep}));
      auto e = sphere_decode(x);
      auto* s = std::get_if<EuclideanSphere>(&e);
      if (!s || std::abs(s->radius) < 1e-3) continue;
      double cs = intersection_cos(s->center, s->radius, d.center, d.R);
      EXPECT_NEAR(cs, std::cos(d.gamma), 1e-6);
    }
  }
  try {
    decode_complex(classify_complex(unit_vec(5)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotElliptic);
  }
}

// ---------------------------------------------------------------- contact elements

TEST(ContactIntersect, Examples) {
  Rng rng(19);
  Vec6 s = rng.lightlike();
  Vec6 w1 = fixtures::lightlike_orthogonal_to(rng, columns({s}));
  Vec6 w2 = fixtures::lightlike_orthogonal_to(rng, columns({s}));
  ContactElement f(s, w1), g(s + 0.3 * w2, w2);
  EXPECT_LT(proj_dist(contact_intersect(f, g), s), 1e-9);
  try {
    contact_intersect(f, f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EqualElements);
  }
  ContactElement h = fixtures::random_element_through(rng, rng.lightlike());
  try {
    contact_intersect(f, h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DisjointElements);
  }
}

TEST(ContactElement, RejectsNonIsotropicSpans) {
  Rng rng(20);
  EXPECT_THROW(ContactElement(rng.lightlike(), rng.lightlike()), Error);
  Vec6 s = rng.lightlike();
  EXPECT_THROW(ContactElement(s, 3.0 * s), Error);
}

TEST(PointSphere, Examples) {
  MoebiusFrame fr = MoebiusFrame::standard();
  Eigen::Vector3d x0(1, 2, 3), n(0, 0.6, 0.8);
  ContactElement f(pencil_sphere(x0, n, 0.7), pencil_sphere(x0, n, -2.0));
  Vec6 p = point_sphere(f, fr);
  EXPECT_LT(proj_dist(p, sphere_encode(x0, 0.0)), 1e-12);
  EXPECT_NEAR(inner(p, fr.p), 0.0, 1e-14);
  auto d = std::get<EuclideanSphere>(sphere_decode(p));
  EXPECT_NEAR(d.radius, 0.0, 1e-12);
  Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    ContactElement g = fixtures::random_element_through(rng, rng.lightlike());
    EXPECT_NEAR(rel_inner(point_sphere(g, fr), fr.p), 0.0, 1e-12);
  }
}
