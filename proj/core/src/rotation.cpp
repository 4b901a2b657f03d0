#include "rotlab/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>

#include "rotlab/parallel.hpp"

namespace rotlab {

namespace {

BoundaryPoint to_boundary(const CxMp& z) {
  return BoundaryPoint::from_angle(to_double(atan2(z.im, z.re)));
}

double circ(BoundaryPoint a, BoundaryPoint b) { return circular_distance(a, b); }

}  // namespace

CxMp evaluate_boundary(const SurfaceGroup& g, const BoundaryExpr& e) {
  auto ends = axis_endpoints_mp(g, e.word, e.conj);
  return e.attracting ? ends.second : ends.first;
}

Direction make_direction(const SurfaceGroup& g, std::string label, Word word, BoundaryExpr tail,
                         BoundaryExpr head) {
  Direction d{std::move(label), std::move(word), std::move(tail), std::move(head), {}};
  MpPrecision prec(digits_for_words(g, d.tail.conj.size() + d.tail.word.size() +
                                           d.head.conj.size() + d.head.word.size()));
  d.geodesic = Geodesic::make(to_boundary(evaluate_boundary(g, d.tail)),
                              to_boundary(evaluate_boundary(g, d.head)));
  return d;
}

Direction axis_direction(const SurfaceGroup& g, const Word& w, const Word& conj) {
  Word rw = reduce(w);
  axis_of(g, conj.empty() ? rw : conjugate(conj, rw));  // throws for non-hyperbolic words
  std::string label = conj.empty() ? to_string(rw) : to_string(conj) + "." + to_string(rw);
  return make_direction(g, label, rw, {conj, rw, false}, {conj, rw, true});
}

Direction reversed(const Direction& d) {
  Direction r = d;
  r.label = "rev(" + d.label + ")";
  std::swap(r.tail, r.head);
  r.geodesic = d.geodesic.reversed();
  return r;
}

Direction heteroclinic_direction(const SurfaceGroup& g, const ExampleGeometry& ex, const Word& conj) {
  std::string label = "path";
  if (!conj.empty()) label = to_string(conj) + ".path";
  return make_direction(g, label, Word{}, {conj, ex.alpha, false}, {conj, ex.beta, true});
}

unsigned digits_for_words(const SurfaceGroup& g, std::size_t letters) {
  return digits_for_distance(static_cast<double>(letters) * g.max_letter_displacement() +
                             2 * g.circumradius() + 10.0);
}

CxMp reconstruct_mp(const SurfaceGroup& g, const LocatedPoint& p) {
  return g.evaluate_mp(p.word).apply(Cxd(p.rep.x, p.rep.y).cast<MpReal>());
}

Chord displacement_chord(const SurfaceGroup& g, const LocatedPoint& start, const LocatedPoint& end) {
  Chord c;
  if (start.word == end.word && hyp_distance(start.rep, end.rep) < 1e-12) return c;
  MpPrecision prec(digits_for_words(g, std::max(start.word.size(), end.word.size())));
  CxMp p = reconstruct_mp(g, start), q = reconstruct_mp(g, end);
  c.distance = to_double(disk_distance(p, q));
  if (c.distance < 1e-12) return c;
  auto ends = geodesic_through<MpReal>(p, q);
  c.stationary = false;
  c.tail = to_boundary(ends.first);
  c.head = to_boundary(ends.second);
  return c;
}

RotationSample rotation_sample(const SurfaceGroup& g, const LiftedTrajectory& traj,
                               const Direction& dir) {
  if (traj.n < 1) throw Error(ErrorCode::PreconditionFailed, "trajectory has no steps");
  RotationSample s;
  s.start = traj.start;
  s.end = traj.end;
  s.n = traj.n;
  s.direction = dir.label;
  s.chord = displacement_chord(g, traj.start, traj.end);
  std::size_t letters = std::max(traj.start.word.size(), traj.end.word.size()) +
                        dir.tail.conj.size() + dir.tail.word.size() + dir.head.conj.size() +
                        dir.head.word.size();
  MpPrecision prec(digits_for_words(g, letters));
  GeodesicFrame<MpReal> frame(evaluate_boundary(g, dir.tail), evaluate_boundary(g, dir.head));
  MpReal t0 = frame.fermi(reconstruct_mp(g, traj.start)).second;
  MpReal t1 = frame.fermi(reconstruct_mp(g, traj.end)).second;
  s.displacement = to_double(t1 - t0);
  s.speed = std::fabs(s.displacement) / traj.n;
  return s;
}

// ---------------------------------------------------------------- annulus

namespace {

MpReal axis_arclength(const SurfaceGroup& g, const Word& T, const LocatedPoint& p) {
  auto ends = axis_endpoints_mp(g, T);
  GeodesicFrame<MpReal> frame(ends.first, ends.second);
  return frame.fermi(reconstruct_mp(g, p)).second;
}

}  // namespace

long long band_index(const SurfaceGroup& g, const Word& T, const LocatedPoint& p) {
  AxisInfo ai = axis_of(g, T);
  MpPrecision prec(digits_for_words(g, p.word.size() + T.size()));
  MpReal t = axis_arclength(g, T, p);
  return static_cast<long long>(std::floor(to_double(t) / ai.length));
}

AnnulusResult annulus_rotation_number(const LiftedSystem& s, const Word& T,
                                      const std::vector<LocatedPoint>& seeds, int n) {
  if (n < 1) throw Error(ErrorCode::PreconditionFailed, "n must be positive");
  const SurfaceGroup& g = s.group();
  AnnulusResult out;
  out.length = axis_of(g, T).length;
  std::vector<LiftedTrajectory> trajs(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) { trajs[i] = iterate(s, seeds[i], n); });
  out.min_speed = INFINITY;
  out.max_speed = -INFINITY;
  for (const auto& tr : trajs) {
    AnnulusSample a;
    MpPrecision prec(digits_for_words(g, std::max(tr.start.word.size(), tr.end.word.size()) + T.size()));
    MpReal t0 = axis_arclength(g, T, tr.start), t1 = axis_arclength(g, T, tr.end);
    a.index_start = static_cast<long long>(std::floor(to_double(t0) / out.length));
    a.index_end = static_cast<long long>(std::floor(to_double(t1) / out.length));
    a.projected = to_double(t1 - t0);
    a.speed = static_cast<double>(a.index_end - a.index_start) * out.length / n;
    double di = std::fabs(static_cast<double>(a.index_end - a.index_start));
    double proj = std::fabs(a.projected);
    a.sandwich = out.length * (di - 1) <= proj + 1e-9 && proj <= out.length * (di + 1) + 1e-9;
    out.sandwich_ok = out.sandwich_ok && a.sandwich;
    out.min_speed = std::min(out.min_speed, a.speed);
    out.max_speed = std::max(out.max_speed, a.speed);
    out.samples.push_back(a);
  }
  if (trajs.empty()) out.min_speed = out.max_speed = 0.0;
  return out;
}

std::vector<double> homological_vector(const LiftedTrajectory& traj, int genus) {
  if (traj.n < 1) throw Error(ErrorCode::PreconditionFailed, "trajectory has no steps");
  std::vector<int> a = abelianize(traj.end.word, genus);
  std::vector<int> b = abelianize(traj.start.word, genus);
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = static_cast<double>(a[i] - b[i]) / traj.n;
  return v;
}

// ---------------------------------------------------------------- scan

std::vector<Direction> ball_directions(const SurfaceGroup& g, int radius) {
  std::vector<Direction> out;
  for (const Word& w : reduced_words(g.num_letters(), radius)) {
    if (w.empty()) continue;
    IsometryClass c = classify(g.evaluate(w));
    if (c.kind != IsometryClass::Kind::Hyperbolic) continue;
    bool dup = false;
    for (const auto& d : out)
      if (same_geodesic(d.geodesic, c.axis, 1e-9)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(axis_direction(g, w));
  }
  return out;
}

std::vector<Window> scan_windows(const ScanOptions& opt) {
  std::vector<Window> w;
  if (opt.forward_window) w.push_back({0, opt.n});
  if (opt.centered_window) w.push_back({opt.n / 2, opt.n - opt.n / 2});
  if (w.empty()) throw Error(ErrorCode::PreconditionFailed, "no sampling window selected");
  return w;
}

namespace {

void finalize(DirectionalSpeedSet& d) {
  std::sort(d.speeds.begin(), d.speeds.end());
  d.v_max = d.speeds.empty() ? 0.0 : d.speeds.back();
  d.interval_gap = 0.0;
  for (std::size_t i = 1; i < d.speeds.size(); ++i)
    d.interval_gap = std::max(d.interval_gap, d.speeds[i] - d.speeds[i - 1]);
}

int nearest_direction(const RotationSetEstimate& est, const Chord& c, double tol) {
  int best = -1;
  double best_err = tol;
  for (std::size_t i = 0; i < est.directions.size(); ++i) {
    const Geodesic& gd = est.directions[i].direction.geodesic;
    double err = std::max(circ(c.tail, gd.a), circ(c.head, gd.b));
    if (err < best_err) {
      best_err = err;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

std::vector<std::string> add_samples(RotationSetEstimate& est, const LiftedSystem& s,
                                     const std::vector<LocatedPoint>& seeds, const ScanOptions& opt) {
  const SurfaceGroup& g = s.group();
  std::vector<Window> windows = scan_windows(opt);
  std::size_t total = seeds.size() * windows.size();
  std::vector<LiftedTrajectory> trajs(total);
  parallel_for(total, [&](std::size_t i) {
    const Window& w = windows[i % windows.size()];
    trajs[i] = iterate_window(s, seeds[i / windows.size()], w.back, w.forward);
  });

  // Multiprecision work runs on this thread only; the MpReal precision is process-wide.
  std::vector<std::string> bound(total);
  for (std::size_t i = 0; i < total; ++i) {
    const LiftedTrajectory& tr = trajs[i];
    if (i % windows.size() == 0 && windows[0].back == 0)
      est.homology.push_back(homological_vector(tr, g.genus()));
    ++est.samples;
    Chord c = displacement_chord(g, tr.start, tr.end);
    if (c.stationary) {
      ++est.stationary;
      continue;
    }
    int k = nearest_direction(est, c, opt.bind_tolerance);
    if (k < 0) {
      RotationSample rs;
      rs.start = tr.start;
      rs.end = tr.end;
      rs.n = tr.n;
      rs.chord = c;
      rs.speed = c.distance / tr.n;
      est.unbinned.push_back(std::move(rs));
      continue;
    }
    auto& set = est.directions[static_cast<std::size_t>(k)];
    RotationSample rs = rotation_sample(g, tr, set.direction);
    set.speeds.push_back(rs.speed);
    ++set.samples;
    finalize(set);
    bound[i] = set.direction.label;
  }
  return bound;
}

RotationSetEstimate scan_rotation_set(const LiftedSystem& s, const std::vector<LocatedPoint>& seeds,
                                      const ScanOptions& opt) {
  if (opt.n < 1 || opt.word_radius < 1)
    throw Error(ErrorCode::PreconditionFailed, "scan budgets must be positive");
  RotationSetEstimate est;
  est.n = opt.n;
  est.word_radius = opt.word_radius;
  est.seeds = seeds.size();
  std::vector<Direction> dirs = ball_directions(s.group(), opt.word_radius);
  for (const auto& d : opt.extra) dirs.push_back(d);
  for (auto& d : dirs) {
    DirectionalSpeedSet set;
    set.direction = std::move(d);
    set.speeds.push_back(0.0);
    est.directions.push_back(std::move(set));
  }
  add_samples(est, s, seeds, opt);
  return est;
}

const DirectionalSpeedSet* find_direction(const RotationSetEstimate& est, const std::string& label) {
  for (const auto& d : est.directions)
    if (d.direction.label == label) return &d;
  return nullptr;
}

const DirectionalSpeedSet* find_direction(const RotationSetEstimate& est, const Geodesic& g,
                                          double tol) {
  for (const auto& d : est.directions)
    if (same_geodesic(d.direction.geodesic, g, tol)) return &d;
  return nullptr;
}

// ---------------------------------------------------------------- seeds

std::vector<LocatedPoint> tube_seeds(const SurfaceGroup& g, const Word& w, const Word& conj,
                                     double width, std::size_t count, std::uint64_t seed) {
  AxisInfo ai = axis_of(g, w);
  auto frame = ai.axis.frame();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> us(-width, width), ut(0.0, ai.length);
  std::vector<LocatedPoint> out;
  for (std::size_t i = 0; i < count; ++i) {
    LocatedPoint p = locate(g, DiskPoint::from(frame.point(us(rng), ut(rng))));
    p.word = concat(conj, p.word);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<LocatedPoint> geodesic_seeds(const SurfaceGroup& g, const Geodesic& line,
                                         const Word& conj, std::size_t count, double step) {
  auto frame = line.frame();
  std::vector<LocatedPoint> out;
  double first = -step * (static_cast<double>(count) - 1) / 2;
  for (std::size_t i = 0; i < count; ++i) {
    LocatedPoint p = locate(g, DiskPoint::from(frame.point(0.0, first + step * i)));
    p.word = concat(conj, p.word);
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------- periodic orbits

double periodic_residual(const LiftedSystem& s, const Word& T, int p, int q, DiskPoint z) {
  const SurfaceGroup& g = s.group();
  if (z.radius() >= 1.0 - kDiskMargin) return INFINITY;
  LocatedPoint start = locate(g, z);
  LiftedTrajectory tr = iterate(s, start, q);
  // Compare in the frame of the end point: rep_end against end.word^-1 T^p z.
  Word back = concat(inverse(tr.end.word), power(T, p));
  DiskPoint target = apply(g.evaluate(back), z);
  return hyp_distance(tr.end.rep, target);
}

namespace {

struct SearchContext {
  const LiftedSystem* s;
  const Word* T;
  int p, q;
  std::size_t evaluations = 0;
  std::optional<Geodesic> line;
  double radius_limit;
};

double residual_at(SearchContext& ctx, DiskPoint z) {
  ++ctx.evaluations;
  if (z.radius() > ctx.radius_limit) return 1e6 + z.radius();
  try {
    return periodic_residual(*ctx.s, *ctx.T, ctx.p, ctx.q, z);
  } catch (const Error&) {
    return 1e6;
  }
}

double planar_objective(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<SearchContext*>(params);
  return residual_at(*ctx, {gsl_vector_get(v, 0), gsl_vector_get(v, 1)});
}

double line_objective(double t, void* params) {
  auto* ctx = static_cast<SearchContext*>(params);
  return residual_at(*ctx, DiskPoint::from(ctx->line->frame().point(0.0, t)));
}

struct Candidate {
  double value;
  double x, y;  // planar point, or (arclength, unused)
};

}  // namespace

PeriodicResult periodic_orbit_search(const LiftedSystem& s, const Word& T, int p, int q,
                                     const PeriodicOptions& opt) {
  if (q < 1) throw Error(ErrorCode::PreconditionFailed, "period must be positive");
  const SurfaceGroup& g = s.group();
  gsl_set_error_handler_off();
  SearchContext ctx{&s, &T, p, q, 0, opt.restrict_to, std::tanh(g.circumradius() / 2) + 0.05};
  PeriodicResult out;
  auto accept = [&](DiskPoint z, double r) {
    if (r < out.residual) {
      out.residual = r;
      if (r < opt.tolerance) out.witness = locate(g, z);
    }
    return r < opt.tolerance;
  };

  std::vector<Candidate> grid;
  if (opt.restrict_to) {
    auto frame = opt.restrict_to->frame();
    double d0 = std::fabs(frame.fermi(Cxd(0.0)).first);
    double span = std::acosh(std::max(1.0, std::cosh(g.circumradius()) / std::cosh(d0))) + 0.5;
    for (int i = 0; i <= opt.grid * 2; ++i) {
      double t = -span + span * i / opt.grid;
      DiskPoint z = DiskPoint::from(frame.point(0.0, t));
      double r = residual_at(ctx, z);
      if (accept(z, r)) break;
      grid.push_back({r, t, 0.0});
    }
  } else {
    double rmax = std::tanh(g.circumradius() / 2);
    for (int i = 0; i <= opt.grid && !out.witness; ++i)
      for (int j = 0; j <= opt.grid && !out.witness; ++j) {
        DiskPoint z{-rmax + 2 * rmax * i / opt.grid, -rmax + 2 * rmax * j / opt.grid};
        if (!g.domain().contains(z)) continue;
        double r = residual_at(ctx, z);
        if (accept(z, r)) break;
        grid.push_back({r, z.x, z.y});
      }
  }
  if (out.witness) {
    out.evaluations = ctx.evaluations;
    out.diagnostics = "grid point";
    return out;
  }
  std::sort(grid.begin(), grid.end(), [](const Candidate& a, const Candidate& b) { return a.value < b.value; });

  int starts = std::min<int>(opt.starts, static_cast<int>(grid.size()));
  for (int k = 0; k < starts && !out.witness; ++k) {
    if (opt.restrict_to) {
      // Brent minimization on the bracket around the grid point.
      auto frame = opt.restrict_to->frame();
      double h = 1.0;
      if (grid.size() > 1) h = std::fabs(grid[0].x - grid[1].x) + 1e-3;
      double a = grid[k].x - h, b = grid[k].x + h, m = grid[k].x;
      gsl_function F{&line_objective, &ctx};
      gsl_min_fminimizer* mz = gsl_min_fminimizer_alloc(gsl_min_fminimizer_brent);
      if (gsl_min_fminimizer_set(mz, &F, m, a, b) == GSL_SUCCESS) {
        for (int it = 0; it < opt.max_iterations; ++it) {
          gsl_min_fminimizer_iterate(mz);
          double tm = gsl_min_fminimizer_x_minimum(mz);
          if (accept(DiskPoint::from(frame.point(0.0, tm)), gsl_min_fminimizer_f_minimum(mz))) break;
          if (gsl_min_test_interval(gsl_min_fminimizer_x_lower(mz), gsl_min_fminimizer_x_upper(mz),
                                    1e-14, 0.0) == GSL_SUCCESS)
            break;
        }
      } else {
        accept(DiskPoint::from(frame.point(0.0, m)), grid[k].value);
      }
      gsl_min_fminimizer_free(mz);
    } else {
      gsl_multimin_function F{&planar_objective, 2, &ctx};
      gsl_vector* x = gsl_vector_alloc(2);
      gsl_vector* step = gsl_vector_alloc(2);
      gsl_vector_set(x, 0, grid[k].x);
      gsl_vector_set(x, 1, grid[k].y);
      gsl_vector_set_all(step, 0.02);
      gsl_multimin_fminimizer* mz = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
      gsl_multimin_fminimizer_set(mz, &F, x, step);
      for (int it = 0; it < opt.max_iterations; ++it) {
        if (gsl_multimin_fminimizer_iterate(mz) != GSL_SUCCESS) break;
        const gsl_vector* best = gsl_multimin_fminimizer_x(mz);
        if (accept({gsl_vector_get(best, 0), gsl_vector_get(best, 1)}, mz->fval)) break;
        if (gsl_multimin_fminimizer_size(mz) < 1e-14) break;
      }
      gsl_multimin_fminimizer_free(mz);
      gsl_vector_free(step);
      gsl_vector_free(x);
    }
  }
  out.evaluations = ctx.evaluations;
  out.diagnostics = out.witness ? "refined from grid" : "budget exhausted; best residual " +
                                                            std::to_string(out.residual);
  return out;
}

// ---------------------------------------------------------------- audits

StarAuditReport star_shape_audit(RotationSetEstimate& est, const LiftedSystem& s,
                                 const ScanOptions& scan, const SeedSource& source,
                                 const StarOptions& opt) {
  StarAuditReport rep;
  std::size_t drawn = 0;
  for (std::size_t di = 0; di < est.directions.size(); ++di) {
    double v_max = est.directions[di].v_max;
    if (v_max <= opt.speed_tolerance) continue;
    ++rep.directions_checked;
    std::string label = est.directions[di].direction.label;
    for (int k = 0; k <= opt.grid; ++k) {
      double target = v_max * k / opt.grid;
      ++rep.grid_points;
      auto covered = [&] {
        for (double v : est.directions[di].speeds)
          if (std::fabs(v - target) <= opt.delta * v_max) return true;
        return false;
      };
      while (!covered() && source && drawn < opt.budget) {
        std::vector<LocatedPoint> batch;
        for (std::size_t b = 0; b < opt.batch && drawn < opt.budget; ++b) batch.push_back(source(drawn++));
        add_samples(est, s, batch, scan);
        rep.extra_samples += batch.size();
      }
      if (!covered()) rep.findings.push_back({"star-fill", label, target, NAN});
    }
  }
  rep.passed = rep.findings.empty();
  return rep;
}

PowerAuditReport power_inverse_audit(const SystemPtr& s, const std::vector<LocatedPoint>& seeds,
                                     const ScanOptions& scan, int power, double tolerance) {
  PowerAuditReport rep;
  rep.power = power;
  RotationSetEstimate base = scan_rotation_set(*s, seeds, scan);
  PowerSystem pw(s, power);
  RotationSetEstimate powered = scan_rotation_set(pw, seeds, scan);
  InverseSystem inv(s);
  ScanOptions inv_scan = scan;
  for (const auto& d : scan.extra) inv_scan.extra.push_back(reversed(d));
  RotationSetEstimate inverted = scan_rotation_set(inv, seeds, inv_scan);

  for (const auto& d : base.directions) {
    if (d.v_max <= tolerance) continue;
    const std::string& label = d.direction.label;
    const DirectionalSpeedSet* p = find_direction(powered, label);
    // Ratio of v_max for the power to v_max for the base system.
    AuditFinding pc{"power-ratio", label, static_cast<double>(power), p ? p->v_max / d.v_max : 0.0};
    rep.checks.push_back(pc);
    if (std::fabs(pc.expected - pc.observed) > tolerance) rep.findings.push_back(pc);

    const DirectionalSpeedSet* r = find_direction(inverted, d.direction.geodesic.reversed(), 1e-7);
    AuditFinding ic{"inverse", label, d.v_max, r ? r->v_max : 0.0};
    rep.checks.push_back(ic);
    if (std::fabs(ic.expected - ic.observed) > tolerance) rep.findings.push_back(ic);
  }
  rep.passed = rep.findings.empty();
  return rep;
}

}  // namespace rotlab
