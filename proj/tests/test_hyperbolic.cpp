#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rotlab/hyperbolic.hpp"

using namespace rotlab;

namespace {

DiskPoint random_point(std::mt19937_64& rng, double rmax = 0.95) {
  std::uniform_real_distribution<double> u(0, 1);
  double r = rmax * std::sqrt(u(rng)), a = 2 * M_PI * u(rng);
  return {r * std::cos(a), r * std::sin(a)};
}

MobiusD random_isometry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  return translation_along(2 * M_PI * u(rng), 3 * u(rng)) * rotation_about_origin(2 * M_PI * u(rng));
}

Geodesic random_geodesic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 2 * M_PI - 0.05);
  double a = u(rng), b = u(rng);
  while (std::fabs(a - b) < 0.05) b = u(rng);
  return Geodesic::from_angles(a, b);
}

}  // namespace

TEST(Distance, ZeroOnDiagonal) {
  DiskPoint z{0.3, -0.2};
  EXPECT_EQ(hyp_distance(z, z), 0.0);
}

TEST(Distance, HalfPlanePointsIAndFourI) {
  auto z = oracle::halfplane_to_disk({0, 1}), w = oracle::halfplane_to_disk({0, 4});
  EXPECT_NEAR(hyp_distance(oracle::from_c(z), oracle::from_c(w)), std::log(4.0), 1e-12);
}

TEST(Distance, AgreesWithQuadrature) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    DiskPoint z = random_point(rng, 0.9), w = random_point(rng, 0.9);
    EXPECT_NEAR(hyp_distance(z, w), oracle::quadrature_distance(oracle::to_c(z), oracle::to_c(w)), 1e-6);
  }
}

TEST(Distance, IsometryInvariance) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 500; ++k) {
    MobiusD m = random_isometry(rng);
    DiskPoint z = random_point(rng, 0.8), w = random_point(rng, 0.8);
    EXPECT_LT(std::fabs(hyp_distance(apply(m, z), apply(m, w)) - hyp_distance(z, w)), 1e-9);
  }
}

TEST(Classify, Identity) {
  EXPECT_EQ(classify(MobiusD::identity()).kind, IsometryClass::Kind::Identity);
}

TEST(Classify, HyperbolicLengthFromTrace) {
  // diag(e^{1/2}, e^{-1/2}) on the half-plane: trace 2cosh(1/2), length 1; squared gives length 2.
  // Eigenvalue ratio e^2 of the square is the oracle.
  double e = std::exp(0.5);
  MobiusD h{e, 0, 0, 1 / e};
  MobiusD sq = h * h;
  EXPECT_NEAR(sq.trace(), 2 * std::cosh(1.0), 1e-12);
  auto c = classify(sq);
  ASSERT_EQ(c.kind, IsometryClass::Kind::Hyperbolic);
  EXPECT_NEAR(c.length, std::log((e * e) / (1 / (e * e))), 1e-9);
}

TEST(Classify, RotationIsElliptic) {
  auto c = classify(rotation_about_origin(M_PI / 3));
  ASSERT_EQ(c.kind, IsometryClass::Kind::Elliptic);
  EXPECT_NEAR(c.center.radius(), 0.0, 1e-12);
}

TEST(Classify, LengthInvariantUnderConjugation) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    MobiusD m = translation_along(1.0, 0.5 + k * 0.03);
    MobiusD n = random_isometry(rng);
    double l1 = classify(m).length, l2 = classify(n * m * n.inverse()).length;
    EXPECT_LT(std::fabs(l1 - l2), 1e-9);
  }
}

TEST(Project, PointOnGeodesicIsFixed) {
  Geodesic g = Geodesic::from_angles(0.3, 2.5);
  DiskPoint z = DiskPoint::from(g.frame().point(0, 0.7));
  DiskPoint p = project_onto_geodesic(z, g);
  EXPECT_LT(hyp_distance(z, p), 1e-10);
}

TEST(Project, OriginOntoDiameter) {
  DiskPoint p = project_onto_geodesic({0, 0}, Geodesic::from_angles(1.0, 1.0 + M_PI));
  EXPECT_LT(p.radius(), 1e-12);
}

TEST(Project, AgreesWithGoldenSection) {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 100; ++k) {
    Geodesic g = random_geodesic(rng);
    DiskPoint z = random_point(rng, 0.9);
    double closed = hyp_distance(z, project_onto_geodesic(z, g));
    oracle::GeodesicCurve curve(std::polar(1.0, g.a.angle), std::polar(1.0, g.b.angle));
    EXPECT_NEAR(closed, oracle::golden_min_distance(curve, oracle::to_c(z)), 1e-7);
  }
}

TEST(Project, Optimality) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> t(-6, 6);
  for (int k = 0; k < 50; ++k) {
    Geodesic g = random_geodesic(rng);
    DiskPoint z = random_point(rng, 0.9);
    double best = hyp_distance(z, project_onto_geodesic(z, g));
    auto f = g.frame();
    for (int s = 0; s < 200; ++s) EXPECT_LE(best, hyp_distance(z, DiskPoint::from(f.point(0, t(rng)))) + 1e-12);
  }
}

TEST(Project, Equivariance) {
  std::mt19937_64 rng(16);
  for (int k = 0; k < 200; ++k) {
    MobiusD m = random_isometry(rng);
    Geodesic g = random_geodesic(rng);
    DiskPoint z = random_point(rng, 0.8);
    DiskPoint lhs = project_onto_geodesic(apply(m, z), apply(m, g));
    DiskPoint rhs = apply(m, project_onto_geodesic(z, g));
    EXPECT_LT(hyp_distance(lhs, rhs), 1e-8);
  }
}

TEST(Interleave, ForcedCases) {
  EXPECT_EQ(boundary_interleave(Geodesic::from_angles(0, M_PI), Geodesic::from_angles(M_PI / 2, 3 * M_PI / 2)),
            Interleave::CrossPositive);
  EXPECT_EQ(boundary_interleave(Geodesic::from_angles(0, M_PI / 2), Geodesic::from_angles(M_PI, 3 * M_PI / 2)),
            Interleave::Disjoint);
  EXPECT_EQ(boundary_interleave(Geodesic::from_angles(0, 1), Geodesic::from_angles(1, 2)),
            Interleave::SharedEndpoint);
}

TEST(Interleave, AgreesWithSampledCurves) {
  std::mt19937_64 rng(17);
  int crossings = 0;
  for (int k = 0; k < 40; ++k) {
    Geodesic g1 = random_geodesic(rng), g2 = random_geodesic(rng);
    auto il = boundary_interleave(g1, g2);
    if (il == Interleave::SharedEndpoint) continue;
    auto c = [](BoundaryPoint b) { return std::complex<double>(std::cos(b.angle), std::sin(b.angle)); };
    int sampled = oracle::sampled_crossing(c(g1.a), c(g1.b), c(g2.a), c(g2.b), 1500);
    if (il == Interleave::Disjoint) {
      EXPECT_EQ(sampled, 0);
    } else {
      ++crossings;
      // Sign convention taken from the forced positive pair (0, pi) against (pi/2, 3pi/2).
      int reference = oracle::sampled_crossing(std::polar(1.0, 1e-3), std::polar(1.0, M_PI),
                                               std::polar(1.0, M_PI / 2), std::polar(1.0, 3 * M_PI / 2), 1500);
      int expected = il == Interleave::CrossPositive ? reference : -reference;
      EXPECT_EQ(sampled, expected);
    }
  }
  EXPECT_GT(crossings, 5);
}

TEST(CompareProjections, CommonHeadProjectionsMerge) {
  // Two geodesics sharing the head beta; their projections of points marching to beta coalesce.
  Geodesic g1 = Geodesic::from_angles(2.0, 0.4), g2 = Geodesic::from_angles(4.1, 0.4);
  BoundaryPoint beta = BoundaryPoint::from_angle(0.4);
  for (double r : {20.0, 20.5}) {
    DiskPoint y = apply(translation_along(beta.angle, r), DiskPoint{0, 0});
    ASSERT_NEAR(std::atan2(y.y, y.x), beta.angle, 1e-9);
    ASSERT_GE(hyp_distance({0, 0}, y), 20 - 1e-6);
    double d = hyp_distance(project_onto_geodesic(y, g1), project_onto_geodesic(y, g2));
    EXPECT_LT(d, 1e-3) << "r = " << r;
  }
}

TEST(CompareProjections, DisplacementRatioTendsToOne) {
  // Half-plane picture: common head at infinity, tails at -1 and 2, base point above their
  // midpoint so both projections start on the same horocycle.
  auto disk = [](std::complex<double> u) { return oracle::from_c(oracle::halfplane_to_disk(u)); };
  auto angle = [](double x) { return std::arg(oracle::halfplane_to_disk({x, 0})); };
  Geodesic g1 = Geodesic::from_angles(angle(-1), 0.0), g2 = Geodesic::from_angles(angle(2), 0.0);
  DiskPoint p0 = disk({0.5, 1.0});
  DiskPoint y = disk({0.5, std::exp(20.0)});
  ASSERT_NEAR(hyp_distance(p0, y), 20.0, 1e-6);
  double d1 = hyp_distance(project_onto_geodesic(p0, g1), project_onto_geodesic(y, g1));
  double d2 = hyp_distance(project_onto_geodesic(p0, g2), project_onto_geodesic(y, g2));
  EXPECT_NEAR(d1 / d2, 1.0, 1e-3);
}

TEST(CompareProjections, GenericBasePointRatioImproves) {
  Geodesic g1 = Geodesic::from_angles(2.0, 0.4), g2 = Geodesic::from_angles(4.1, 0.4);
  DiskPoint p0{0, 0};
  double previous = INFINITY;
  for (double r : {5.0, 10.0, 20.0}) {
    DiskPoint y = apply(translation_along(0.4, r), p0);
    double d1 = hyp_distance(project_onto_geodesic(p0, g1), project_onto_geodesic(y, g1));
    double d2 = hyp_distance(project_onto_geodesic(p0, g2), project_onto_geodesic(y, g2));
    double err = std::fabs(d1 / d2 - 1);
    EXPECT_LT(err, previous);
    previous = err;
  }
}
