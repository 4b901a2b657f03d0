#include <random>

#include "rotlab_cli/cli.hpp"

namespace rotlab::cli {

namespace {

Word word_or(const json& sys, const char* key, const std::string& fallback, int genus) {
  return parse_word(sys.value(key, fallback), genus);
}

}  // namespace

SystemSetup make_system(const json& config) {
  SystemSetup out;
  int genus = config.value("genus", 2);
  out.group = std::make_shared<SurfaceGroup>(SurfaceGroup::build(genus));
  const auto& g = out.group;
  json sys = config.value("system", json{{"name", "identity"}});
  out.name = sys.at("name").get<std::string>();

  if (out.name == "identity") {
    out.system = std::make_shared<IdentitySystem>(g);
  } else if (out.name == "isometry") {
    Word deck = word_or(sys, "deck", "a1", genus);
    out.system = std::make_shared<IsometrySystem>(g, deck);
    out.core = deck;
  } else if (out.name == "twist") {
    Word core = word_or(sys, "core", "A2", genus);
    out.tube_width = sys.value("width", 0.3);
    out.system = std::make_shared<TwistSystem>(g, core, sys.value("theta", 0.8), out.tube_width);
    out.core = core;
  } else {
    if (genus != 2) throw Error(ErrorCode::PreconditionFailed, "the heteroclinic example is built on genus 2");
    ExampleParams p;
    p.theta = sys.value("theta", p.theta);
    p.twist_width = sys.value("twist_width", p.twist_width);
    p.drift_width = sys.value("drift_width", p.drift_width);
    p.drift_speed = sys.value("speed", p.drift_speed);
    p.cutoff = sys.value("cutoff", p.cutoff);
    ExampleSystems ex = build_example(g, p);
    out.example = ex.geometry;
    out.tube_width = p.twist_width;
    out.core = ex.geometry.beta;
    out.system = out.name == "drift" ? SystemPtr(ex.drift) : ex.combined;
    Word a1 = ex.geometry.alpha;
    for (int k = -3; k <= 8; ++k) out.extra.push_back(heteroclinic_direction(*g, ex.geometry, power(a1, k)));
  }
  if (sys.value("inverse", false)) {
    out.system = std::make_shared<InverseSystem>(out.system);
    for (auto& d : out.extra) d = reversed(d);
  }
  return out;
}

std::vector<LocatedPoint> default_seeds(const SystemSetup& s, std::size_t count, std::uint64_t seed) {
  const SurfaceGroup& g = *s.group;
  std::vector<LocatedPoint> out;
  auto spread = [&](std::size_t n, std::uint64_t salt) {
    std::mt19937_64 rng(seed * 7919 + salt);
    std::uniform_real_distribution<double> angle(0, 2 * M_PI), radius(0, g.inradius());
    for (std::size_t i = 0; i < n; ++i) {
      double a = angle(rng), r = radius(rng);
      out.push_back(locate(g, DiskPoint::from(Cxd::polar(std::tanh(r / 2), a))));
    }
  };
  if (s.name == "identity" || s.name == "isometry") {
    spread(count, 1);
    return out;
  }
  if (s.name == "twist") {
    return tube_seeds(g, *s.core, {}, s.tube_width, count, seed);
  }
  // Heteroclinic example: the beta tube, the path and some of its alpha-translates, the alpha tube.
  const ExampleGeometry& ex = *s.example;
  out = tube_seeds(g, ex.beta, {}, s.tube_width, count, seed);
  std::size_t per_path = std::max<std::size_t>(1, count / 12);
  for (int k = 0; k <= 3; ++k) {
    auto gs = geodesic_seeds(g, ex.path, power(ex.alpha, k), per_path, 0.4);
    out.insert(out.end(), gs.begin(), gs.end());
  }
  auto as = tube_seeds(g, ex.alpha, {}, s.tube_width, std::max<std::size_t>(1, count / 2), seed + 1);
  out.insert(out.end(), as.begin(), as.end());
  return out;
}

}  // namespace rotlab::cli
