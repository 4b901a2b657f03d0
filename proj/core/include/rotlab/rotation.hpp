#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rotlab/dynamics.hpp"

namespace rotlab {

// conj applied to an endpoint of axis(word).
struct BoundaryExpr {
  Word conj;
  Word word;
  bool attracting = true;
};
CxMp evaluate_boundary(const SurfaceGroup& g, const BoundaryExpr& e);

struct Direction {
  std::string label;
  Word word;  // axis class for closed directions, empty otherwise
  BoundaryExpr tail, head;
  Geodesic geodesic;
};

Direction make_direction(const SurfaceGroup& g, std::string label, Word word, BoundaryExpr tail,
                         BoundaryExpr head);
// Oriented axis of conj.w.conj^-1.
Direction axis_direction(const SurfaceGroup& g, const Word& w, const Word& conj = {});
Direction reversed(const Direction& d);
// conj applied to the example's heteroclinic path (repelling end of alpha to attracting end of beta).
Direction heteroclinic_direction(const SurfaceGroup& g, const ExampleGeometry& ex, const Word& conj);

// Disk point of a located point in the current MpReal precision.
CxMp reconstruct_mp(const SurfaceGroup& g, const LocatedPoint& p);
// Precision sufficient for points carried by these words.
unsigned digits_for_words(const SurfaceGroup& g, std::size_t letters);

struct Chord {
  bool stationary = true;
  BoundaryPoint tail, head;  // extension of the segment start -> end
  double distance = 0.0;
};
Chord displacement_chord(const SurfaceGroup& g, const LocatedPoint& start, const LocatedPoint& end);

struct RotationSample {
  LocatedPoint start, end;
  int n = 0;
  std::string direction;
  double displacement = 0.0;  // signed arclength of the projected endpoints
  double speed = 0.0;         // |displacement| / n
  Chord chord;
};
RotationSample rotation_sample(const SurfaceGroup& g, const LiftedTrajectory& traj,
                               const Direction& dir);

// Index of the band between T^k L and T^(k+1) L, L orthogonal to axis(T) at the foot of 0.
long long band_index(const SurfaceGroup& g, const Word& T, const LocatedPoint& p);

struct AnnulusSample {
  long long index_start = 0, index_end = 0;
  double projected = 0.0;  // signed arclength between the projections
  double speed = 0.0;      // (index_end - index_start) * length / n
  bool sandwich = false;
};
struct AnnulusResult {
  double length = 0.0;
  double min_speed = 0.0, max_speed = 0.0;
  bool sandwich_ok = true;
  std::vector<AnnulusSample> samples;
};
AnnulusResult annulus_rotation_number(const LiftedSystem& s, const Word& T,
                                      const std::vector<LocatedPoint>& seeds, int n);

// (abelianized end word - abelianized start word) / n, slots a1, b1, a2, b2, ...
std::vector<double> homological_vector(const LiftedTrajectory& traj, int genus);

struct DirectionalSpeedSet {
  Direction direction;
  std::vector<double> speeds;  // sorted, always contains 0
  double v_max = 0.0;
  double interval_gap = 0.0;
  std::size_t samples = 0;
};

struct Window {
  int back = 0, forward = 0;
};

struct ScanOptions {
  int n = 1000;
  int word_radius = 2;
  std::vector<Direction> extra;  // non-closed directions, checked alongside the ball axes
  double bind_tolerance = 0.05;
  bool forward_window = true;
  bool centered_window = true;
};

struct RotationSetEstimate {
  std::vector<DirectionalSpeedSet> directions;
  std::vector<RotationSample> unbinned;
  std::vector<std::vector<double>> homology;  // one per seed, forward window
  std::size_t seeds = 0, samples = 0, stationary = 0;
  int n = 0;
  int word_radius = 0;
};

std::vector<Direction> ball_directions(const SurfaceGroup& g, int radius);
std::vector<Window> scan_windows(const ScanOptions& opt);

RotationSetEstimate scan_rotation_set(const LiftedSystem& s, const std::vector<LocatedPoint>& seeds,
                                      const ScanOptions& opt);
// Adds samples to an existing estimate; returns the labels they were bound to ("" if unbound).
std::vector<std::string> add_samples(RotationSetEstimate& est, const LiftedSystem& s,
                                     const std::vector<LocatedPoint>& seeds, const ScanOptions& opt);
const DirectionalSpeedSet* find_direction(const RotationSetEstimate& est, const std::string& label);
// Direction whose geodesic has the given endpoints within tol.
const DirectionalSpeedSet* find_direction(const RotationSetEstimate& est, const Geodesic& g,
                                          double tol = 1e-7);

// Points spread uniformly in Fermi coordinates over one period of a tube about conj.axis(w).
std::vector<LocatedPoint> tube_seeds(const SurfaceGroup& g, const Word& w, const Word& conj,
                                     double width, std::size_t count, std::uint64_t seed);
// Located points along a geodesic, `count` of them spaced by `step` around its foot.
std::vector<LocatedPoint> geodesic_seeds(const SurfaceGroup& g, const Geodesic& line,
                                         const Word& conj, std::size_t count, double step);

struct PeriodicOptions {
  int grid = 24;
  std::optional<Geodesic> restrict_to;  // search along this geodesic only
  double tolerance = 1e-6;
  int starts = 6;
  int max_iterations = 2000;
};
struct PeriodicResult {
  std::optional<LocatedPoint> witness;
  double residual = INFINITY;
  std::size_t evaluations = 0;
  std::string diagnostics;
};
// d(step^q(z), T^p z) for a point z of the fundamental domain.
double periodic_residual(const LiftedSystem& s, const Word& T, int p, int q, DiskPoint z);
PeriodicResult periodic_orbit_search(const LiftedSystem& s, const Word& T, int p, int q,
                                     const PeriodicOptions& opt = {});

struct AuditFinding {
  std::string check;
  std::string direction;
  double expected = 0.0;
  double observed = 0.0;
};

struct StarAuditReport {
  bool passed = true;
  std::size_t directions_checked = 0;
  std::size_t grid_points = 0;
  std::size_t extra_samples = 0;
  std::vector<AuditFinding> findings;
};
using SeedSource = std::function<LocatedPoint(std::size_t)>;
struct StarOptions {
  int grid = 20;
  double delta = 0.05;  // fraction of v_max
  double speed_tolerance = 2e-2;
  std::size_t budget = 256;
  std::size_t batch = 16;
};
StarAuditReport star_shape_audit(RotationSetEstimate& est, const LiftedSystem& s,
                                 const ScanOptions& scan, const SeedSource& source,
                                 const StarOptions& opt = {});

struct PowerAuditReport {
  bool passed = true;
  int power = 2;
  std::vector<AuditFinding> checks;  // every comparison made
  std::vector<AuditFinding> findings;
};
PowerAuditReport power_inverse_audit(const SystemPtr& s, const std::vector<LocatedPoint>& seeds,
                                     const ScanOptions& scan, int power = 2, double tolerance = 2e-2);

}  // namespace rotlab
