#include <gtest/gtest.h>

#include <random>

#include "rotlab/dynamics.hpp"
#include "rotlab/rotation.hpp"

using namespace rotlab;

namespace {

std::shared_ptr<const SurfaceGroup> genus2() {
  static auto g = std::make_shared<const SurfaceGroup>(SurfaceGroup::build(2));
  return g;
}

Word w(const char* text) { return parse_word(text, 2); }

const ExampleSystems& example() {
  static const ExampleSystems ex = build_example(genus2(), ExampleParams{});
  return ex;
}

// Random points of the fundamental domain.
std::vector<DiskPoint> domain_points(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& d = genus2()->domain();
  double r = genus2()->circumradius();
  double e = std::tanh(r / 2);
  std::uniform_real_distribution<double> u(-e, e);
  std::vector<DiskPoint> out;
  while (out.size() < count) {
    DiskPoint z{u(rng), u(rng)};
    if (d.contains(z)) out.push_back(z);
  }
  return out;
}

// Points in the twist tube around the core axis, uniformly in Fermi coordinates.
std::vector<DiskPoint> tube_points(const Geodesic& axis, double width, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> s(-width, width), t(-1.0, 1.0);
  auto f = axis.frame();
  std::vector<DiskPoint> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(DiskPoint::from(f.point(s(rng), t(rng))));
  return out;
}

Word random_word(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len), letter(0, 7);
  Word out;
  int n = len(rng);
  for (int k = 0; k < n; ++k) out.letters.push_back(letter(rng));
  return reduce(out);
}

// Surface-level equivariance: step(u z) = u step(z), both sides reconstructed from located points.
double equivariance_residual(const LiftedSystem& s, const std::vector<DiskPoint>& pts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& g = s.group();
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    Word u = random_word(rng, 3);
    MobiusD mu = g.evaluate(u);
    for (DiskPoint z : pts) {
      LocatedPoint moved{u, z};
      LocatedPoint lhs = s.step(moved);
      DiskPoint rhs = apply(mu, s.step_point(z));
      worst = std::max(worst, hyp_distance(reconstruct(g, lhs), rhs));
    }
  }
  return worst;
}

}  // namespace

TEST(Bump, Profile) {
  EXPECT_DOUBLE_EQ(bump(0), 1.0);
  EXPECT_EQ(bump(1.0), 0.0);
  EXPECT_EQ(bump(-1.5), 0.0);
  EXPECT_NEAR(bump(0.5), std::exp(1 - 1 / 0.75), 1e-15);
}

TEST(Twist, TranslatesAxisPointsByTheta) {
  const auto& tw = *example().twist;
  auto f = axis_of(*genus2(), tw.core()).axis.frame();
  for (double t : {-0.5, 0.0, 0.3}) {
    DiskPoint z = DiskPoint::from(f.point(0, t));
    DiskPoint img = tw.step_point(z);
    EXPECT_NEAR(f.fermi(img.z()).second - t, tw.theta(), 1e-8);
    EXPECT_NEAR(f.fermi(img.z()).first, 0.0, 1e-8);
  }
}

TEST(Twist, FixesPointsOutsideTubes) {
  const auto& tw = *example().twist;
  int outside = 0;
  for (DiskPoint z : domain_points(300, 41)) {
    bool in_tube = false;
    for (const auto& t : tw.tubes()) in_tube = in_tube || distance_to_geodesic(z, t.line) < tw.width();
    if (in_tube) continue;
    ++outside;
    DiskPoint img = tw.step_point(z);
    EXPECT_EQ(img.x, z.x);
    EXPECT_EQ(img.y, z.y);
  }
  EXPECT_GT(outside, 50);
}

TEST(Twist, Equivariant) {
  const auto& tw = *example().twist;
  auto pts = tube_points(axis_of(*genus2(), tw.core()).axis, tw.width(), 10, 42);
  auto more = domain_points(10, 43);
  pts.insert(pts.end(), more.begin(), more.end());
  EXPECT_LT(equivariance_residual(tw, pts, 44), 1e-7);
}

TEST(Twist, RejectsNonSimpleCore) {
  EXPECT_THROW(TwistSystem(genus2(), w("a1b2"), 0.5, 0.1), Error);
}

TEST(Twist, RejectsOverlappingTubes) {
  EXPECT_THROW(TwistSystem(genus2(), w("A2"), 0.5, 3.0), Error);
}

TEST(Drift, AdvancesPathPointsBySpeed) {
  const auto& dr = *example().drift;
  auto f = dr.params().path.frame();
  // Away from both ends of the path the cutoff is inactive.
  DiskPoint z = DiskPoint::from(f.point(0, 0.0));
  ASSERT_NEAR(dr.cutoff_factor(z), 1.0, 1e-12);
  DiskPoint img = dr.step_point(z);
  EXPECT_NEAR(f.fermi(img.z()).second, dr.params().speed, 1e-8);
}

TEST(Drift, Equivariant) {
  const auto& dr = *example().drift;
  auto f = dr.params().path.frame();
  std::vector<DiskPoint> pts;
  for (double t : {-0.4, 0.0, 0.4})
    for (double s : {-0.01, 0.0, 0.01}) pts.push_back(DiskPoint::from(f.point(s, t)));
  EXPECT_LT(equivariance_residual(dr, pts, 45), 1e-7);
}

TEST(Compose, IdentityThenSystemIsSystem) {
  auto id = std::make_shared<IdentitySystem>(genus2());
  SystemPtr tw = example().twist;
  auto c = compose({id, tw});
  for (DiskPoint z : tube_points(axis_of(*genus2(), w("A2")).axis, 0.3, 100, 46)) {
    DiskPoint a = c->step_point(z), b = tw->step_point(z);
    EXPECT_LT(hyp_distance(a, b), 1e-12);
  }
}

TEST(Compose, CombinedMatchesTwoManualSteps) {
  // Walk along the heteroclinic path into the twist tube of beta, where both mechanisms act.
  const auto& g = *genus2();
  const auto& ex = example();
  auto f = ex.geometry.path.frame();
  int moved_both = 0;
  for (double t = -1.0; t <= 6.0; t += 0.1) {
    LocatedPoint lp = locate(g, DiskPoint::from(f.point(0.005, t)));
    DiskPoint after_twist = ex.twist->step_point(lp.rep);
    DiskPoint manual = ex.drift->step_point(after_twist);
    LocatedPoint got = ex.combined->step(lp);
    EXPECT_LT(hyp_distance(reconstruct(g, got), apply(g.evaluate(lp.word), manual)), 1e-9);
    if (hyp_distance(after_twist, lp.rep) > 1e-6 && hyp_distance(manual, after_twist) > 1e-6) ++moved_both;
  }
  EXPECT_GT(moved_both, 0);
}

TEST(Invertibility, StepThenInverse) {
  const auto& ex = example();
  std::vector<SystemPtr> systems{ex.twist, ex.drift, ex.combined};
  auto pts = tube_points(axis_of(*genus2(), w("A2")).axis, 0.3, 100, 47);
  auto f = ex.geometry.path.frame();
  for (int k = 0; k < 50; ++k) pts.push_back(DiskPoint::from(f.point(0.01 * std::sin(k), -1 + 0.04 * k)));
  for (const auto& s : systems)
    for (DiskPoint z : pts) {
      EXPECT_LT(hyp_distance(s->inverse_step_point(s->step_point(z)), z), 1e-8) << s->name();
      EXPECT_LT(hyp_distance(s->step_point(s->inverse_step_point(z)), z), 1e-8) << s->name();
    }
}

TEST(Displacement, UniformlyBounded) {
  const auto& ex = example();
  double bound = ex.twist->theta() + ex.drift->params().speed + 1;
  auto pts = domain_points(300, 48);
  auto tube = tube_points(axis_of(*genus2(), w("A2")).axis, 0.3, 200, 49);
  pts.insert(pts.end(), tube.begin(), tube.end());
  for (DiskPoint z : pts) EXPECT_LE(hyp_distance(z, ex.combined->step_point(z)), bound);
}

TEST(Iterate, IdentityIsConstant) {
  IdentitySystem id(genus2());
  LocatedPoint z0 = locate(*genus2(), {0.1, 0.2});
  auto tr = iterate(id, z0, 50, true);
  for (const auto& p : tr.steps) {
    EXPECT_TRUE(p.word.empty());
    EXPECT_EQ(p.rep.x, z0.rep.x);
  }
}

TEST(Iterate, IsometryWordsArePowers) {
  Word T = w("a1b1");
  IsometrySystem iso(genus2(), T);
  LocatedPoint z0 = locate(*genus2(), {0.05, -0.1});
  auto tr = iterate(iso, z0, 20, true);
  const auto& g = *genus2();
  for (int k = 0; k <= 20; ++k) {
    // g_k = T^k as group elements: compare the deck carrying the rep.
    Word expected = reduce(concat(power(T, k), z0.word));
    MpPrecision digits(digits_for_words(g, expected.size() + tr.steps[k].word.size()));
    MobiusMp a = g.evaluate_mp(tr.steps[k].word), b = g.evaluate_mp(expected);
    CxMp za = a.apply(CxMp(tr.steps[k].rep.x, tr.steps[k].rep.y)), zb = b.apply(CxMp(z0.rep.x, z0.rep.y));
    EXPECT_LT(to_double(disk_distance(za, zb)), 1e-7) << k;
  }
}

TEST(Iterate, TwistOnCoreWordIsCorePower) {
  const auto& tw = *example().twist;
  auto f = axis_of(*genus2(), tw.core()).axis.frame();
  LocatedPoint z0 = locate(*genus2(), DiskPoint::from(f.point(0, 0)));
  auto tr = iterate(tw, z0, 100);
  // Arclength accounting: the orbit has travelled 100 theta along the core axis.
  int m = static_cast<int>(std::floor(100 * tw.theta() / tw.core_length()));
  Word end = reduce(concat(inverse(z0.word), tr.end.word));
  bool matched = false;
  for (int d = -1; d <= 1; ++d) matched = matched || end == reduce(power(tw.core(), m + d));
  EXPECT_TRUE(matched) << to_string(end) << " vs core^" << m;
}

TEST(Iterate, TrajectoryMatchesExactRotationOnCore) {
  // On the core axis the twist is the translation by theta: compare the tracked orbit with
  // the point at arclength t0 + k theta computed directly in high precision.
  const auto& g = *genus2();
  const auto& tw = *example().twist;
  auto f = axis_of(g, tw.core()).axis.frame();
  LocatedPoint z0 = locate(g, DiskPoint::from(f.point(0, 0.1)));
  const int n = 1000;
  auto tr = iterate(tw, z0, n, true);
  MpPrecision digits(digits_for_words(g, tr.end.word.size() + 8));
  auto ends = axis_endpoints_mp(g, tw.core());
  GeodesicFrame<MpReal> frame(ends.first, ends.second);
  CxMp start = reconstruct_mp(g, z0);
  MpReal t0 = frame.fermi(start).second;
  double worst_ratio = 0;
  for (int k : {1, 10, 100, 500, 1000}) {
    CxMp expected = frame.point(MpReal(0), t0 + MpReal(k) * MpReal(tw.theta()));
    double err = to_double(disk_distance(reconstruct_mp(g, tr.steps[k]), expected));
    worst_ratio = std::max(worst_ratio, err / k);
  }
  EXPECT_LT(worst_ratio, 1e-6);
}

TEST(Example, GeometryIsHeteroclinic) {
  const auto& g = *genus2();
  const auto& ex = example().geometry;
  Geodesic alpha = axis_of(g, ex.alpha).axis, beta = axis_of(g, ex.beta).axis;
  EXPECT_LT(circular_distance(ex.path.a, alpha.a), 1e-12);
  EXPECT_LT(circular_distance(ex.path.b, beta.b), 1e-12);
}
