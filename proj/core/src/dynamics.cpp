#include "rotlab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "rotlab/geodesic_lab.hpp"

namespace rotlab {

double bump(double u) {
  double a = std::fabs(u);
  if (a >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - a * a));
}

LocatedPoint LiftedSystem::step(const LocatedPoint& p) const {
  return relocate(*group_, p.word, step_point(p.rep));
}

LocatedPoint LiftedSystem::inverse_step(const LocatedPoint& p) const {
  return relocate(*group_, p.word, inverse_step_point(p.rep));
}

// ---------------------------------------------------------------- isometry

IsometrySystem::IsometrySystem(std::shared_ptr<const SurfaceGroup> g, Word deck)
    : LiftedSystem(std::move(g)), deck_(reduce(deck)) {
  m_ = group_->evaluate(deck_);
  bound_ = disk_distance(m_.apply(Cxd(0.0)), Cxd(0.0)) + 2 * group_->circumradius();
}

DiskPoint IsometrySystem::step_point(DiskPoint z) const { return apply(m_, z); }
DiskPoint IsometrySystem::inverse_step_point(DiskPoint z) const { return apply(m_.inverse(), z); }

LocatedPoint IsometrySystem::step(const LocatedPoint& p) const {
  return {concat(deck_, p.word), p.rep};
}
LocatedPoint IsometrySystem::inverse_step(const LocatedPoint& p) const {
  return {concat(inverse(deck_), p.word), p.rep};
}

// ---------------------------------------------------------------- translates

std::vector<Translate> translates_near_origin(const SurfaceGroup& g, const Geodesic& line,
                                              double radius, double enumeration_radius) {
  std::vector<Translate> out;
  for (const BallElement& e : ball_by_distance(g, enumeration_radius)) {
    Geodesic moved = apply(e.m, line);
    if (distance_to_geodesic(DiskPoint{}, moved) > radius) continue;
    bool dup = false;
    for (const auto& t : out)
      if (same_geodesic(t.line, moved, 1e-7)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back({e.word, moved, moved.frame()});
  }
  return out;
}

std::vector<Translate> axis_translates(const SurfaceGroup& g, const Word& w, double radius) {
  AxisInfo ai = axis_of(g, w);
  double d0 = distance_to_geodesic(DiskPoint{}, ai.axis);
  return translates_near_origin(g, ai.axis, radius, radius + d0 + ai.length / 2 + 0.1);
}

namespace {

const Translate* nearest(const std::vector<Translate>& list, DiskPoint z, double limit,
                         double* s_out) {
  const Translate* best = nullptr;
  double best_abs = limit;
  for (const auto& t : list) {
    double s = t.frame.fermi(z.z()).first;
    if (std::fabs(s) < best_abs) {
      best_abs = std::fabs(s);
      best = &t;
      if (s_out) *s_out = s;
    }
  }
  return best;
}

double min_distance(const std::vector<Translate>& list, DiskPoint z) {
  double best = INFINITY;
  for (const auto& t : list) best = std::min(best, std::fabs(t.frame.fermi(z.z()).first));
  return best;
}

double smoothstep(double x) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  return x * x * (3 - 2 * x);
}

void check_cover(DiskPoint z, double cover) {
  if (z.radius() >= 1.0 || disk_distance(z.z(), Cxd(0.0)) > cover)
    throw Error(ErrorCode::PreconditionFailed, "point lies outside the precomputed tube cover");
}

}  // namespace

// ---------------------------------------------------------------- twist

TwistSystem::TwistSystem(std::shared_ptr<const SurfaceGroup> g, Word core, double theta,
                         double width, double cover_radius)
    : LiftedSystem(std::move(g)), core_(reduce(core)), theta_(theta), width_(width) {
  if (width <= 0) throw Error(ErrorCode::PreconditionFailed, "width must be positive");
  length_ = axis_of(*group_, core_).length;
  if (self_intersection_witness(*group_, core_, 4).witness)
    throw Error(ErrorCode::NotSimple, "twist core " + to_string(core_) + " is not simple");
  cover_ = cover_radius > 0 ? cover_radius : group_->circumradius() + 0.25;
  tubes_ = axis_translates(*group_, core_, cover_ + width_);
  for (std::size_t i = 0; i < tubes_.size(); ++i)
    for (std::size_t j = i + 1; j < tubes_.size(); ++j)
      if (geodesic_distance(tubes_[i].line, tubes_[j].line) <= 2 * width_)
        throw Error(ErrorCode::TubeTooWide, "tubes around translates of the core overlap");
}

std::map<std::string, double> TwistSystem::parameters() const {
  return {{"theta", theta_}, {"width", width_}, {"core_length", length_}};
}

DiskPoint TwistSystem::move(DiskPoint z, double sign) const {
  check_cover(z, cover_);
  double s = 0;
  const Translate* t = nearest(tubes_, z, width_, &s);
  if (!t) return z;
  double tt = t->frame.fermi(z.z()).second;
  return DiskPoint::from(t->frame.point(s, tt + sign * theta_ * bump(s / width_)));
}

DiskPoint TwistSystem::step_point(DiskPoint z) const { return move(z, 1.0); }
DiskPoint TwistSystem::inverse_step_point(DiskPoint z) const { return move(z, -1.0); }

// ---------------------------------------------------------------- drift

DriftSystem::DriftSystem(std::shared_ptr<const SurfaceGroup> g, DriftParams params)
    : LiftedSystem(std::move(g)), params_(std::move(params)) {
  const SurfaceGroup& grp = *group_;
  if (params_.width <= 0 || params_.cutoff <= 0 || params_.speed < 0)
    throw Error(ErrorCode::PreconditionFailed, "drift parameters must be positive");
  if (params_.width > params_.cutoff / 2)
    throw Error(ErrorCode::TubeTooWide, "drift width must not exceed half the cutoff");
  Geodesic alpha = axis_of(grp, params_.alpha).axis;
  Geodesic beta = axis_of(grp, params_.beta).axis;
  auto touches = [](BoundaryPoint p, const Geodesic& ax) {
    return circular_distance(p, ax.a) < 1e-9 || circular_distance(p, ax.b) < 1e-9;
  };
  if (!touches(params_.path.a, alpha) || !touches(params_.path.b, beta))
    throw Error(ErrorCode::PreconditionFailed, "path must run from an end of alpha to an end of beta");

  double cover = params_.cover_radius > 0 ? params_.cover_radius : grp.circumradius() + 0.25;
  params_.cover_radius = cover;
  double reach = cover + params_.width;
  double saturation = params_.cutoff * std::exp(2.0);
  alphas_ = axis_translates(grp, params_.alpha, reach + saturation + 0.1);
  betas_ = axis_translates(grp, params_.beta, reach + saturation + 0.1);

  // Farthest point of the path that can carry a nonzero cutoff factor.
  auto frame = params_.path.frame();
  double far = 0;
  for (double t = -40; t <= 40; t += 0.01) {
    Cxd p = frame.point(0.0, t);
    DiskPoint dp = DiskPoint::from(p);
    if (dp.radius() >= 1.0 - 1e-12) continue;
    double da = distance_to_geodesic(dp, alpha), db = distance_to_geodesic(dp, beta);
    if (da >= params_.cutoff / 2 && db >= params_.cutoff / 2)
      far = std::max(far, disk_distance(p, Cxd(0.0)));
  }
  std::vector<Translate> all = translates_near_origin(grp, params_.path, reach, reach + far + 0.1);

  // Keep the translates that carry drift somewhere inside the cover.
  for (auto& tr : all) {
    double d0 = std::fabs(tr.frame.fermi(Cxd(0.0)).first);
    double span = std::acosh(std::max(1.0, std::cosh(reach) / std::cosh(d0)));
    bool active = false;
    for (int k = 0; k <= 400 && !active; ++k) {
      double t = -span + 2 * span * k / 400.0;
      DiskPoint p = DiskPoint::from(tr.frame.point(0.0, t));
      if (min_distance(alphas_, p) > params_.cutoff / 2 && min_distance(betas_, p) > params_.cutoff / 2)
        active = true;
    }
    if (active) paths_.push_back(tr);
  }

  // Tubes of distinct translates may only overlap where the cutoff factor vanishes.
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    const auto& tr = paths_[i];
    double d0 = std::fabs(tr.frame.fermi(Cxd(0.0)).first);
    double span = std::acosh(std::max(1.0, std::cosh(reach) / std::cosh(d0)));
    for (int k = 0; k <= 400; ++k) {
      double t = -span + 2 * span * k / 400.0;
      DiskPoint p = DiskPoint::from(tr.frame.point(0.0, t));
      for (std::size_t j = 0; j < paths_.size(); ++j) {
        if (j == i || std::fabs(paths_[j].frame.fermi(p.z()).first) > 2 * params_.width) continue;
        for (int m = -10; m <= 10; ++m) {
          DiskPoint z = DiskPoint::from(tr.frame.point(params_.width * m / 10.0, t));
          if (std::fabs(paths_[j].frame.fermi(z.z()).first) < params_.width && cutoff_factor(z) > 0)
            throw Error(ErrorCode::TubeTooWide, "drift tubes of distinct path translates overlap");
        }
      }
    }
  }
}

std::map<std::string, double> DriftSystem::parameters() const {
  return {{"width", params_.width}, {"speed", params_.speed}, {"cutoff", params_.cutoff}};
}

double DriftSystem::cutoff_factor(DiskPoint z) const {
  auto factor = [&](const std::vector<Translate>& list) {
    double d = min_distance(list, z);
    if (d <= params_.cutoff) return 0.0;
    return smoothstep(std::log(d / params_.cutoff) / 2.0);
  };
  double a = factor(alphas_);
  if (a == 0.0) return 0.0;
  return a * factor(betas_);
}

const Translate* DriftSystem::nearest_path(DiskPoint z, double* s_out) const {
  return nearest(paths_, z, params_.width, s_out);
}

DiskPoint DriftSystem::step_point(DiskPoint z) const {
  check_cover(z, params_.cover_radius);
  double s = 0;
  const Translate* tr = nearest_path(z, &s);
  if (!tr) return z;
  double chi = cutoff_factor(z);
  if (chi == 0.0) return z;
  double t = tr->frame.fermi(z.z()).second;
  return DiskPoint::from(tr->frame.point(s, t + params_.speed * bump(s / params_.width) * chi));
}

DiskPoint DriftSystem::inverse_step_point(DiskPoint z) const {
  check_cover(z, params_.cover_radius);
  double s = 0;
  const Translate* tr = nearest_path(z, &s);
  if (!tr) return z;
  double ty = tr->frame.fermi(z.z()).second;
  double push = params_.speed * bump(s / params_.width);
  auto forward = [&](double t) {
    return t + push * cutoff_factor(DiskPoint::from(tr->frame.point(s, t)));
  };
  double lo = ty - push, hi = ty;
  if (forward(hi) <= ty) return z;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(ty)); ++it) {
    double mid = 0.5 * (lo + hi);
    (forward(mid) < ty ? lo : hi) = mid;
  }
  return DiskPoint::from(tr->frame.point(s, 0.5 * (lo + hi)));
}

// ---------------------------------------------------------------- combinators

ComposedSystem::ComposedSystem(std::vector<SystemPtr> parts)
    : LiftedSystem(parts.empty() ? nullptr : parts.front()->group_ptr()), parts_(std::move(parts)) {
  if (parts_.empty()) throw Error(ErrorCode::PreconditionFailed, "nothing to compose");
}

std::string ComposedSystem::name() const {
  std::string out;
  for (const auto& p : parts_) out += (out.empty() ? "" : "*") + p->name();
  return out;
}

double ComposedSystem::displacement_bound() const {
  double b = 0;
  for (const auto& p : parts_) b += p->displacement_bound();
  return b;
}

DiskPoint ComposedSystem::step_point(DiskPoint z) const {
  for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) z = (*it)->step_point(z);
  return z;
}

DiskPoint ComposedSystem::inverse_step_point(DiskPoint z) const {
  for (const auto& p : parts_) z = p->inverse_step_point(z);
  return z;
}

LocatedPoint ComposedSystem::step(const LocatedPoint& p) const {
  LocatedPoint q = p;
  for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) q = (*it)->step(q);
  return q;
}

LocatedPoint ComposedSystem::inverse_step(const LocatedPoint& p) const {
  LocatedPoint q = p;
  for (const auto& part : parts_) q = part->inverse_step(q);
  return q;
}

PowerSystem::PowerSystem(SystemPtr base, int power)
    : LiftedSystem(base->group_ptr()), base_(std::move(base)), power_(power) {
  if (power < 1) throw Error(ErrorCode::PreconditionFailed, "power must be positive");
}

std::string PowerSystem::name() const { return base_->name() + "^" + std::to_string(power_); }

DiskPoint PowerSystem::step_point(DiskPoint z) const {
  for (int i = 0; i < power_; ++i) z = base_->step_point(z);
  return z;
}
DiskPoint PowerSystem::inverse_step_point(DiskPoint z) const {
  for (int i = 0; i < power_; ++i) z = base_->inverse_step_point(z);
  return z;
}
LocatedPoint PowerSystem::step(const LocatedPoint& p) const {
  LocatedPoint q = p;
  for (int i = 0; i < power_; ++i) q = base_->step(q);
  return q;
}
LocatedPoint PowerSystem::inverse_step(const LocatedPoint& p) const {
  LocatedPoint q = p;
  for (int i = 0; i < power_; ++i) q = base_->inverse_step(q);
  return q;
}

InverseSystem::InverseSystem(SystemPtr base) : LiftedSystem(base->group_ptr()), base_(std::move(base)) {}

SystemPtr compose(std::vector<SystemPtr> parts) {
  return std::make_shared<ComposedSystem>(std::move(parts));
}

// ---------------------------------------------------------------- iteration

LiftedTrajectory iterate(const LiftedSystem& s, const LocatedPoint& z0, int n, bool record) {
  if (n < 0) throw Error(ErrorCode::PreconditionFailed, "negative step count");
  LiftedTrajectory tr;
  tr.start = z0;
  tr.n = n;
  LocatedPoint cur = z0;
  if (record) tr.steps.push_back(cur);
  for (int k = 0; k < n; ++k) {
    cur = s.step(cur);
    if (record) tr.steps.push_back(cur);
  }
  tr.end = std::move(cur);
  return tr;
}

LiftedTrajectory iterate_window(const LiftedSystem& s, const LocatedPoint& z0, int back, int forward) {
  LocatedPoint start = z0;
  for (int k = 0; k < back; ++k) start = s.inverse_step(start);
  return iterate(s, start, back + forward);
}

// ---------------------------------------------------------------- example

ExampleGeometry example_geometry(const SurfaceGroup& g) {
  ExampleGeometry ex;
  ex.alpha = parse_word("a1", g.genus());
  ex.beta = parse_word("A2", g.genus());
  Geodesic a = axis_of(g, ex.alpha).axis, b = axis_of(g, ex.beta).axis;
  ex.path = Geodesic::make(a.a, b.b);
  return ex;
}

ExampleSystems build_example(std::shared_ptr<const SurfaceGroup> g, const ExampleParams& p) {
  ExampleSystems out;
  out.geometry = example_geometry(*g);
  out.twist = std::make_shared<TwistSystem>(g, out.geometry.beta, p.theta, p.twist_width);
  DriftParams dp;
  dp.path = out.geometry.path;
  dp.alpha = out.geometry.alpha;
  dp.beta = out.geometry.beta;
  dp.width = p.drift_width;
  dp.speed = p.drift_speed;
  dp.cutoff = p.cutoff;
  out.drift = std::make_shared<DriftSystem>(g, dp);
  out.combined = compose({out.drift, out.twist});
  return out;
}

}  // namespace rotlab
