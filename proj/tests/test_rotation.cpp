#include <gtest/gtest.h>

#include <random>

#include "rotlab/rotation.hpp"

using namespace rotlab;

namespace {

std::shared_ptr<const SurfaceGroup> genus2() {
  static auto g = std::make_shared<const SurfaceGroup>(SurfaceGroup::build(2));
  return g;
}

Word w(const char* text) { return parse_word(text, 2); }

std::shared_ptr<const TwistSystem> twist(double theta) {
  return std::make_shared<TwistSystem>(genus2(), w("A2"), theta, 0.3);
}

LocatedPoint on_core(double t) {
  auto f = axis_of(*genus2(), w("A2")).axis.frame();
  return locate(*genus2(), DiskPoint::from(f.point(0, t)));
}

}  // namespace

TEST(Sample, IdentityHasZeroSpeed) {
  IdentitySystem id(genus2());
  auto tr = iterate(id, locate(*genus2(), {0.1, 0.1}), 100);
  auto s = rotation_sample(*genus2(), tr, axis_direction(*genus2(), w("a1")));
  EXPECT_EQ(s.speed, 0.0);
}

TEST(Sample, IsometryMovesAtItsTranslationLength) {
  const auto& g = *genus2();
  for (const char* text : {"a1", "a1b2", "b1A2"}) {
    Word T = w(text);
    IsometrySystem iso(genus2(), T);
    auto ax = axis_of(g, T);
    LocatedPoint z0 = locate(g, project_onto_geodesic({0, 0}, ax.axis));
    auto tr = iterate(iso, z0, 200);
    auto s = rotation_sample(g, tr, axis_direction(g, T));
    EXPECT_NEAR(s.speed, ax.length, 1e-9) << text;
  }
}

TEST(Sample, TwistOnCoreMovesAtTheta) {
  auto tw = twist(0.8);
  auto tr = iterate(*tw, on_core(0.2), 500);
  auto s = rotation_sample(*genus2(), tr, axis_direction(*genus2(), w("A2")));
  EXPECT_NEAR(s.speed, 0.8, 1e-3);
}

TEST(Annulus, IdentityIsZero) {
  IdentitySystem id(genus2());
  std::vector<LocatedPoint> seeds{locate(*genus2(), {0.1, 0.0}), locate(*genus2(), {-0.2, 0.3})};
  auto r = annulus_rotation_number(id, w("A2"), seeds, 100);
  EXPECT_EQ(r.min_speed, 0.0);
  EXPECT_EQ(r.max_speed, 0.0);
  EXPECT_TRUE(r.sandwich_ok);
}

TEST(Annulus, TwistIntervalIsZeroToTheta) {
  auto tw = twist(0.8);
  const auto& g = *genus2();
  auto seeds = tube_seeds(g, w("A2"), {}, 0.3, 24, 7);
  seeds.push_back(on_core(0.0));
  seeds.push_back(locate(g, {0.0, 0.0}));  // far from the core tube
  auto r = annulus_rotation_number(*tw, w("A2"), seeds, 1000);
  // Band counting quantises to multiples of the length per n.
  double grain = 2 * axis_of(g, w("A2")).length / 1000;
  EXPECT_NEAR(std::fabs(r.min_speed), 0.0, grain);
  double top = std::max(std::fabs(r.min_speed), std::fabs(r.max_speed));
  EXPECT_NEAR(top, 0.8, 2e-2);
  EXPECT_TRUE(r.sandwich_ok);
}

TEST(Annulus, BandIndexIsFloorOfProjectedArclength) {
  // Translates of the orthogonal geodesic meet the axis at evenly spaced arclengths, so the band
  // index is the floor of the projected arclength measured from the foot of the origin.
  const auto& g = *genus2();
  Word T = w("A2");
  auto ax = axis_of(g, T);
  auto f = ax.axis.frame();
  double t0 = f.fermi({0, 0}).second;
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> s(-1.5, 1.5), t(-4.0, 4.0);
  int checked = 0;
  for (int k = 0; k < 500; ++k) {
    double tt = t(rng);
    double frac = (tt - t0) / ax.length - std::floor((tt - t0) / ax.length);
    if (frac < 1e-6 || frac > 1 - 1e-6) continue;
    LocatedPoint p = locate(g, DiskPoint::from(f.point(s(rng), tt)));
    EXPECT_EQ(band_index(g, T, p), static_cast<long long>(std::floor((tt - t0) / ax.length)));
    ++checked;
  }
  EXPECT_GT(checked, 400);
}

TEST(Homology, IdentityIsZero) {
  IdentitySystem id(genus2());
  auto tr = iterate(id, locate(*genus2(), {0.3, -0.1}), 50);
  for (double v : homological_vector(tr, 2)) EXPECT_EQ(v, 0.0);
}

TEST(Homology, TwistOnCoreFollowsCoreClass) {
  auto tw = twist(0.8);
  const int n = 1000;
  auto tr = iterate(*tw, on_core(0.0), n);
  auto h = homological_vector(tr, 2);
  auto cls = abelianize(w("A2"), 2);
  double scale = 0.8 / tw->core_length();
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_NEAR(h[i], scale * cls[i], 2.0 / n + 2e-2);
}

TEST(Homology, CommutatorTrajectoryHasZeroClassButGrows) {
  // Each step applies the commutator a1 b1 A1 B1; the word grows while its class stays zero.
  IsometrySystem iso(genus2(), w("a1b1A1B1"));
  auto tr = iterate(iso, locate(*genus2(), {0.02, 0.01}), 50);
  for (double v : homological_vector(tr, 2)) EXPECT_NEAR(v, 0.0, 1e-12);
  EXPECT_GE(tr.end.word.size(), 100u);
  auto s = rotation_sample(*genus2(), tr, axis_direction(*genus2(), w("a1b1A1B1")));
  EXPECT_GT(s.speed, 1.0);
}

TEST(Scan, IdentityAllZero) {
  IdentitySystem id(genus2());
  std::vector<LocatedPoint> seeds;
  for (int k = 0; k < 8; ++k) seeds.push_back(locate(*genus2(), {0.05 * k, -0.03 * k}));
  ScanOptions opt;
  opt.n = 100;
  auto est = scan_rotation_set(id, seeds, opt);
  for (const auto& d : est.directions) EXPECT_EQ(d.v_max, 0.0);
  EXPECT_EQ(est.stationary, est.samples);
}

TEST(Scan, TwistRegistersCoreAndConjugateAlike) {
  auto tw = twist(0.8);
  const auto& g = *genus2();
  auto seeds = geodesic_seeds(g, axis_of(g, w("A2")).axis, {}, 4, 0.5);
  auto conj = geodesic_seeds(g, axis_of(g, conjugate(w("b1"), w("A2"))).axis, {}, 4, 0.5);
  seeds.insert(seeds.end(), conj.begin(), conj.end());
  ScanOptions opt;
  opt.n = 400;
  opt.word_radius = 1;
  opt.extra.push_back(axis_direction(g, w("A2"), w("b1")));
  auto est = scan_rotation_set(*tw, seeds, opt);
  const auto* core = find_direction(est, axis_direction(g, w("A2")).geodesic);
  const auto* moved = find_direction(est, axis_direction(g, w("A2"), w("b1")).geodesic);
  ASSERT_NE(core, nullptr);
  ASSERT_NE(moved, nullptr);
  EXPECT_NEAR(core->v_max, 0.8, 2e-2);
  EXPECT_NEAR(core->v_max, moved->v_max, 2e-2);
  // Zero always belongs to a directional speed set.
  EXPECT_EQ(core->speeds.front(), 0.0);
}

TEST(Scan, EndpointEstimatesSharpenWithTime) {
  auto tw = twist(0.8);
  const auto& g = *genus2();
  Direction core = axis_direction(g, w("A2"));
  auto seed = on_core(0.05);
  double previous = INFINITY;
  for (int n : {250, 500, 1000}) {
    auto tr = iterate(*tw, seed, n);
    auto s = rotation_sample(g, tr, core);
    ASSERT_FALSE(s.chord.stationary);
    double err = std::max(circular_distance(s.chord.tail, core.geodesic.a), circular_distance(s.chord.head, core.geodesic.b));
    EXPECT_LE(err, previous);
    previous = err;
  }
}

TEST(Periodic, IdentityAnyPointReturns) {
  IdentitySystem id(genus2());
  auto r = periodic_orbit_search(id, Word{}, 0, 1);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_LT(r.residual, 1e-12);
}

TEST(Periodic, RationalTwistHasWitnessOnCore) {
  const auto& g = *genus2();
  double len = axis_of(g, w("A2")).length;
  auto tw = twist(len / 3);
  auto r = periodic_orbit_search(*tw, w("A2"), 1, 3);
  ASSERT_TRUE(r.witness.has_value()) << r.diagnostics;
  EXPECT_LT(r.residual, 1e-6);
  // Off the core axes three steps fall short of the length (the bump is below 1), so a witness
  // must sit on a translate of the core, where three steps of a third are exactly one period.
  double nearest = INFINITY;
  for (const auto& t : tw->tubes()) nearest = std::min(nearest, distance_to_geodesic(r.witness->rep, t.line));
  EXPECT_LT(nearest, 1e-3);
}

TEST(Periodic, IrrationalTwistHasNoWitnessOnCore) {
  const auto& g = *genus2();
  auto tw = twist(0.8);
  PeriodicOptions opt;
  opt.restrict_to = axis_of(g, w("A2")).axis;
  auto r = periodic_orbit_search(*tw, w("A2"), 1, 3, opt);
  EXPECT_FALSE(r.witness.has_value());
}

TEST(Audit, IdentityStarPassesVacuously) {
  auto id = std::make_shared<IdentitySystem>(genus2());
  std::vector<LocatedPoint> seeds{locate(*genus2(), {0.1, 0.1})};
  ScanOptions opt;
  opt.n = 50;
  auto est = scan_rotation_set(*id, seeds, opt);
  SeedSource source = [&](std::size_t) { return seeds.front(); };
  auto r = star_shape_audit(est, *id, opt, source);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.directions_checked, 0u);
}

TEST(Audit, InverseReversesDirection) {
  auto tw = twist(0.8);
  const auto& g = *genus2();
  auto seeds = geodesic_seeds(g, axis_of(g, w("A2")).axis, {}, 2, 0.5);
  auto inv = std::make_shared<InverseSystem>(tw);
  auto fwd = iterate(*tw, seeds.front(), 300);
  auto back = iterate(*inv, seeds.front(), 300);
  Direction d = axis_direction(g, w("A2"));
  auto sf = rotation_sample(g, fwd, d), sb = rotation_sample(g, back, d);
  EXPECT_NEAR(sf.speed, sb.speed, 2e-2);
  EXPECT_LT(sf.displacement * sb.displacement, 0.0);
}
