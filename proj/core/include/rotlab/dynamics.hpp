#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rotlab/surface_group.hpp"

namespace rotlab {

// exp(1 - 1/(1 - u^2)) on |u| < 1, zero elsewhere.
double bump(double u);

class LiftedSystem {
 public:
  explicit LiftedSystem(std::shared_ptr<const SurfaceGroup> g) : group_(std::move(g)) {}
  virtual ~LiftedSystem() = default;

  virtual std::string name() const = 0;
  virtual std::map<std::string, double> parameters() const { return {}; }
  virtual double displacement_bound() const = 0;

  // Action on a point near the fundamental domain.
  virtual DiskPoint step_point(DiskPoint z) const = 0;
  virtual DiskPoint inverse_step_point(DiskPoint z) const = 0;

  // Action on a located point; the default re-anchors the image after step_point.
  virtual LocatedPoint step(const LocatedPoint& p) const;
  virtual LocatedPoint inverse_step(const LocatedPoint& p) const;

  const SurfaceGroup& group() const { return *group_; }
  std::shared_ptr<const SurfaceGroup> group_ptr() const { return group_; }

 protected:
  std::shared_ptr<const SurfaceGroup> group_;
};

using SystemPtr = std::shared_ptr<const LiftedSystem>;

class IdentitySystem : public LiftedSystem {
 public:
  using LiftedSystem::LiftedSystem;
  std::string name() const override { return "identity"; }
  double displacement_bound() const override { return 0.0; }
  DiskPoint step_point(DiskPoint z) const override { return z; }
  DiskPoint inverse_step_point(DiskPoint z) const override { return z; }
  LocatedPoint step(const LocatedPoint& p) const override { return p; }
  LocatedPoint inverse_step(const LocatedPoint& p) const override { return p; }
};

// Deck isometry T as a system; not a canonical lift, used for calibration only.
class IsometrySystem : public LiftedSystem {
 public:
  IsometrySystem(std::shared_ptr<const SurfaceGroup> g, Word deck);
  std::string name() const override { return "isometry"; }
  double displacement_bound() const override { return bound_; }
  DiskPoint step_point(DiskPoint z) const override;
  DiskPoint inverse_step_point(DiskPoint z) const override;
  LocatedPoint step(const LocatedPoint& p) const override;
  LocatedPoint inverse_step(const LocatedPoint& p) const override;

 private:
  Word deck_;
  MobiusD m_;
  double bound_;
};

struct Translate {
  Word deck;
  Geodesic line;
  GeodesicFrame<double> frame;
};

// Oriented translates h.G of a geodesic meeting the ball of radius `radius` about 0.
std::vector<Translate> translates_near_origin(const SurfaceGroup& g, const Geodesic& line,
                                              double radius, double enumeration_radius);
// Translates of axis(w), with the enumeration radius derived from the axis geometry.
std::vector<Translate> axis_translates(const SurfaceGroup& g, const Word& w, double radius);

class TwistSystem : public LiftedSystem {
 public:
  TwistSystem(std::shared_ptr<const SurfaceGroup> g, Word core, double theta, double width,
              double cover_radius = 0.0);
  std::string name() const override { return "twist"; }
  std::map<std::string, double> parameters() const override;
  double displacement_bound() const override { return std::fabs(theta_); }
  DiskPoint step_point(DiskPoint z) const override;
  DiskPoint inverse_step_point(DiskPoint z) const override;

  const Word& core() const { return core_; }
  double theta() const { return theta_; }
  double width() const { return width_; }
  double core_length() const { return length_; }
  const std::vector<Translate>& tubes() const { return tubes_; }
  double cover_radius() const { return cover_; }

 private:
  DiskPoint move(DiskPoint z, double sign) const;
  Word core_;
  double theta_, width_, length_, cover_;
  std::vector<Translate> tubes_;
};

struct DriftParams {
  Geodesic path;      // lift joining an endpoint of axis(alpha) to an endpoint of axis(beta)
  Word alpha, beta;   // closed classes the path is heteroclinic between
  double width = 0.02;
  double speed = 0.8;
  double cutoff = 0.05;  // no drift within this distance of alpha and beta
  double cover_radius = 0.0;
};

class DriftSystem : public LiftedSystem {
 public:
  DriftSystem(std::shared_ptr<const SurfaceGroup> g, DriftParams params);
  std::string name() const override { return "drift"; }
  std::map<std::string, double> parameters() const override;
  double displacement_bound() const override { return params_.speed; }
  DiskPoint step_point(DiskPoint z) const override;
  DiskPoint inverse_step_point(DiskPoint z) const override;

  double cutoff_factor(DiskPoint z) const;
  const DriftParams& params() const { return params_; }
  const std::vector<Translate>& paths() const { return paths_; }

 private:
  const Translate* nearest_path(DiskPoint z, double* s_out) const;
  DriftParams params_;
  std::vector<Translate> paths_, alphas_, betas_;
};

// compose({f, g}) applies g first, then f.
class ComposedSystem : public LiftedSystem {
 public:
  explicit ComposedSystem(std::vector<SystemPtr> parts);
  std::string name() const override;
  double displacement_bound() const override;
  DiskPoint step_point(DiskPoint z) const override;
  DiskPoint inverse_step_point(DiskPoint z) const override;
  LocatedPoint step(const LocatedPoint& p) const override;
  LocatedPoint inverse_step(const LocatedPoint& p) const override;

 private:
  std::vector<SystemPtr> parts_;
};

class PowerSystem : public LiftedSystem {
 public:
  PowerSystem(SystemPtr base, int power);
  std::string name() const override;
  double displacement_bound() const override { return base_->displacement_bound() * power_; }
  DiskPoint step_point(DiskPoint z) const override;
  DiskPoint inverse_step_point(DiskPoint z) const override;
  LocatedPoint step(const LocatedPoint& p) const override;
  LocatedPoint inverse_step(const LocatedPoint& p) const override;

 private:
  SystemPtr base_;
  int power_;
};

class InverseSystem : public LiftedSystem {
 public:
  explicit InverseSystem(SystemPtr base);
  std::string name() const override { return "inverse(" + base_->name() + ")"; }
  double displacement_bound() const override { return base_->displacement_bound(); }
  DiskPoint step_point(DiskPoint z) const override { return base_->inverse_step_point(z); }
  DiskPoint inverse_step_point(DiskPoint z) const override { return base_->step_point(z); }
  LocatedPoint step(const LocatedPoint& p) const override { return base_->inverse_step(p); }
  LocatedPoint inverse_step(const LocatedPoint& p) const override { return base_->step(p); }

 private:
  SystemPtr base_;
};

SystemPtr compose(std::vector<SystemPtr> parts);

struct LiftedTrajectory {
  LocatedPoint start;
  LocatedPoint end;
  int n = 0;
  std::vector<LocatedPoint> steps;  // filled only when recording
};

LiftedTrajectory iterate(const LiftedSystem& s, const LocatedPoint& z0, int n, bool record = false);
// Starts `back` steps before z0 and runs back + forward steps.
LiftedTrajectory iterate_window(const LiftedSystem& s, const LocatedPoint& z0, int back, int forward);

// The heteroclinic example: alpha = axis(a1), beta = axis(A2), path from the
// repelling end of a1 to the attracting end of A2.
struct ExampleGeometry {
  Word alpha, beta;
  Geodesic path;
};
ExampleGeometry example_geometry(const SurfaceGroup& g);

struct ExampleParams {
  double theta = 0.8;
  double twist_width = 0.3;
  double drift_width = 0.02;
  double drift_speed = 0.8;
  double cutoff = 0.04;
};
struct ExampleSystems {
  std::shared_ptr<const TwistSystem> twist;
  std::shared_ptr<const DriftSystem> drift;
  SystemPtr combined;  // drift after twist
  ExampleGeometry geometry;
};
ExampleSystems build_example(std::shared_ptr<const SurfaceGroup> g, const ExampleParams& p);

}  // namespace rotlab
