#include <cmath>
#include <map>

#include "rotlab/geodesic_lab.hpp"
#include "rotlab_cli/cli.hpp"

namespace rotlab::cli {

namespace {

json point_json(DiskPoint p) { return json::array({p.x, p.y}); }
json point_json(Vec2 p) { return json::array({p.x, p.y}); }

json geodesic_json(const Geodesic& g) { return {{"tail", g.a.angle}, {"head", g.b.angle}}; }

json located_json(const LocatedPoint& p) { return {{"word", to_string(p.word)}, {"rep", point_json(p.rep)}}; }

json rectangle_json(const MarkedRectangle& r) {
  json pts = json::array();
  for (Vec2 p : r.boundary) pts.push_back(point_json(p));
  return {{"boundary", pts}, {"corners", json::array({r.corners[0], r.corners[1], r.corners[2], r.corners[3]})}};
}

MarkedRectangle rectangle_from(const json& j) {
  MarkedRectangle r;
  for (const auto& p : j.at("boundary")) r.boundary.push_back({p[0].get<double>(), p[1].get<double>()});
  if (j.contains("corners")) {
    for (int k = 0; k < 4; ++k) r.corners[static_cast<std::size_t>(k)] = j["corners"][static_cast<std::size_t>(k)].get<std::size_t>();
  } else if (r.boundary.size() == 4) {
    r.corners = {0, 1, 2, 3};
  } else {
    throw Error(ErrorCode::PreconditionFailed, "rectangles with more than four vertices need corner indices");
  }
  validate_rectangle(r);
  return r;
}

json certificate_json(const MarkovCertificate& c) {
  return {{"first", rectangle_json(c.first)},
          {"second", rectangle_json(c.second)},
          {"orientation", c.orientation},
          {"margin", c.margin}};
}

std::string interleave_name(Interleave i) {
  switch (i) {
    case Interleave::CrossPositive: return "CrossPositive";
    case Interleave::CrossNegative: return "CrossNegative";
    case Interleave::Disjoint: return "Disjoint";
    case Interleave::SharedEndpoint: return "SharedEndpoint";
  }
  return "?";
}

std::string kind_label(IsometryClass::Kind k) {
  switch (k) {
    case IsometryClass::Kind::Identity: return "Identity";
    case IsometryClass::Kind::Elliptic: return "Elliptic";
    case IsometryClass::Kind::Parabolic: return "Parabolic";
    case IsometryClass::Kind::Hyperbolic: return "Hyperbolic";
  }
  return "?";
}

json witness_json(const IntersectionWitness& w) {
  return {{"deck", to_string(w.deck)}, {"point", point_json(w.point)}, {"orientation", w.orientation}};
}

int genus_of(const json& c) { return c.value("genus", 2); }
json section(const json& c, const char* key) { return c.contains(key) ? c[key] : json::object(); }

Word required_word(const json& c, const char* key) {
  json words = section(c, "words");
  if (!words.contains(key))
    throw Error(ErrorCode::PreconditionFailed, std::string("this command needs words.") + key);
  return parse_word(words[key].get<std::string>(), genus_of(c));
}

ScanOptions scan_options(const json& c, const SystemSetup& s) {
  json b = section(c, "budgets"), t = section(c, "tolerances");
  ScanOptions opt;
  opt.n = b.value("n", 1000);
  opt.word_radius = b.value("word_radius", 2);
  opt.bind_tolerance = t.value("bind", 0.05);
  opt.extra = s.extra;
  return opt;
}

std::vector<LocatedPoint> seeds_for(const json& c, const SystemSetup& s) {
  json b = section(c, "budgets");
  return default_seeds(s, static_cast<std::size_t>(b.value("seeds", 64)), c.value("seed", std::uint64_t{1}));
}

json system_json(const SystemSetup& s) {
  json params = json::object();
  for (const auto& [k, v] : s.system->parameters()) params[k] = v;
  json out = {{"name", s.system->name()}, {"parameters", params}};
  if (s.core) out["core"] = to_string(*s.core);
  return out;
}

json estimate_json(const RotationSetEstimate& est) {
  json dirs = json::array();
  double vmax = 0;
  for (const auto& d : est.directions) {
    vmax = std::max(vmax, d.v_max);
    if (d.samples == 0) continue;
    dirs.push_back({{"label", d.direction.label},
                    {"word", to_string(d.direction.word)},
                    {"geodesic", geodesic_json(d.direction.geodesic)},
                    {"v_max", d.v_max},
                    {"interval_gap", d.interval_gap},
                    {"samples", d.samples}});
  }
  return {{"n", est.n},
          {"word_radius", est.word_radius},
          {"seeds", est.seeds},
          {"samples", est.samples},
          {"stationary", est.stationary},
          {"unbinned", est.unbinned.size()},
          {"max_speed", vmax},
          {"directions", dirs}};
}

json findings_json(const std::vector<AuditFinding>& fs) {
  json out = json::array();
  for (const auto& f : fs)
    out.push_back({{"check", f.check}, {"direction", f.direction}, {"expected", f.expected}, {"observed", f.observed}});
  return out;
}

std::string finding_text(const AuditFinding& f) {
  return f.check + " " + f.direction + ": expected " + std::to_string(f.expected) + ", observed " +
         std::to_string(f.observed);
}

HorseshoeModel model_from(const json& h) {
  std::string name = h.value("model", "linear-two-leg");
  if (name == "linear-two-leg") return linear_two_leg_model();
  const json& a = h.at("affine");
  std::array<double, 4> m{};
  for (std::size_t i = 0; i < 4; ++i) m[i] = a["matrix"][i].get<double>();
  Vec2 b{a["offset"][0].get<double>(), a["offset"][1].get<double>()};
  std::vector<Vec2> shifts;
  std::vector<std::string> labels;
  for (const auto& t : a["translations"]) shifts.push_back({t[0].get<double>(), t[1].get<double>()});
  if (a.contains("labels")) labels = a["labels"].get<std::vector<std::string>>();
  for (std::size_t i = labels.size(); i < shifts.size(); ++i) labels.push_back("U" + std::to_string(i + 1));
  auto f = [m, b](Vec2 z) { return Vec2{m[0] * z.x + m[1] * z.y + b.x, m[2] * z.x + m[3] * z.y + b.y}; };
  return planar_model(f, shifts, labels);
}

// ---------------------------------------------------------------- commands

Outcome group_build(const json& c) {
  Outcome o;
  SurfaceGroup g = SurfaceGroup::build(genus_of(c));
  json gens = json::array();
  for (int l = 0; l < g.num_letters(); ++l) {
    IsometryClass k = classify(g.letter(l));
    gens.push_back({{"letter", to_string(Word{{l}})}, {"kind", kind_label(k.kind)}, {"length", k.length}});
  }
  int radius = std::min(section(c, "budgets").value("word_radius", 2), 4);
  SvarcMilnorResult sm = svarc_milnor_probe(g, radius);
  o.result = {{"genus", g.genus()},
              {"generators", gens},
              {"relator", to_string(g.relator())},
              {"relator_residual", g.relator_residual()},
              {"angle_sum", g.angle_sum()},
              {"angle_sum_error", std::fabs(g.angle_sum() - 2 * M_PI)},
              {"inradius", g.inradius()},
              {"circumradius", g.circumradius()},
              {"min_translation_length", g.min_translation_length()},
              {"svarc_milnor", {{"radius", radius}, {"c_hat", sm.c_hat}, {"witness", to_string(sm.witness)}, {"words", sm.words}}}};
  return o;
}

Outcome geodesic_axis(const json& c) {
  Outcome o;
  SurfaceGroup g = SurfaceGroup::build(genus_of(c));
  Word w = required_word(c, "word");
  AxisInfo ai = axis_of(g, w);
  o.result = {{"word", to_string(w)}, {"axis", geodesic_json(ai.axis)}, {"length", ai.length}};
  return o;
}

Outcome geodesic_cross(const json& c) {
  Outcome o;
  Geodesic g1, g2;
  json geo = section(c, "geodesics");
  if (geo.contains("first") && geo.contains("second")) {
    g1 = Geodesic::from_angles(geo["first"][0].get<double>(), geo["first"][1].get<double>());
    g2 = Geodesic::from_angles(geo["second"][0].get<double>(), geo["second"][1].get<double>());
  } else {
    SurfaceGroup g = SurfaceGroup::build(genus_of(c));
    g1 = axis_of(g, required_word(c, "w1")).axis;
    g2 = axis_of(g, required_word(c, "w2")).axis;
  }
  Interleave il = boundary_interleave(g1, g2);
  o.result = {{"first", geodesic_json(g1)}, {"second", geodesic_json(g2)}, {"interleave", interleave_name(il)}};
  if (il == Interleave::CrossPositive || il == Interleave::CrossNegative) {
    auto x = geodesics_cross(g1, g2);
    o.result["crossing"] = {{"point", point_json(x->point)}, {"orientation", x->orientation}};
  } else {
    o.result["crossing"] = nullptr;
  }
  return o;
}

Outcome geodesic_selfx(const json& c) {
  Outcome o;
  SurfaceGroup g = SurfaceGroup::build(genus_of(c));
  Word w = required_word(c, "word");
  int radius = section(c, "budgets").value("covering_radius", 4);
  WitnessSearch ws = self_intersection_witness(g, w, radius);
  o.result = {{"word", to_string(w)}, {"radius", ws.radius}, {"examined", ws.examined}};
  o.result["witness"] = ws.witness ? witness_json(*ws.witness) : json(nullptr);
  return o;
}

Outcome covering_classify(const json& c) {
  Outcome o;
  SurfaceGroup g = SurfaceGroup::build(genus_of(c));
  Word w1 = required_word(c, "w1"), w2 = required_word(c, "w2");
  int radius = section(c, "budgets").value("covering_radius", kDefaultCoveringRadius);
  CoveringClass cc = classify_covering(g, w1, w2, radius, std::min(kMinCoveringRadius, radius));
  json ws = json::array();
  for (const auto& l : cc.witnesses) {
    json w = witness_json(l.witness);
    w["element"] = l.element;
    w["word"] = to_string(l.word);
    ws.push_back(w);
  }
  o.result = {{"kind", kind_name(cc.kind)},
              {"radius", cc.radius},
              {"hypothesis", cc.hypothesis},
              {"reason", cc.reason},
              {"reduced", json::array({to_string(cc.reduced_first), to_string(cc.reduced_second)})},
              {"witnesses", ws}};
  return o;
}

Outcome rotset_estimate(const json& c) {
  Outcome o;
  SystemSetup s = make_system(c);
  auto seeds = seeds_for(c, s);
  RotationSetEstimate est = scan_rotation_set(*s.system, seeds, scan_options(c, s));
  o.result = {{"system", system_json(s)}, {"estimate", estimate_json(est)}};
  return o;
}

Outcome rotset_homology(const json& c) {
  Outcome o;
  SystemSetup s = make_system(c);
  auto seeds = seeds_for(c, s);
  ScanOptions opt = scan_options(c, s);
  opt.centered_window = false;
  RotationSetEstimate est = scan_rotation_set(*s.system, seeds, opt);
  std::size_t dim = static_cast<std::size_t>(2 * s.group->genus());
  std::vector<double> mean(dim, 0.0);
  double norm_max = 0;
  for (const auto& h : est.homology) {
    double nn = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      mean[i] += h[i] / static_cast<double>(est.homology.size());
      nn += h[i] * h[i];
    }
    norm_max = std::max(norm_max, std::sqrt(nn));
  }
  o.result = {{"system", system_json(s)},
              {"n", opt.n},
              {"vectors", est.homology},
              {"mean", mean},
              {"max_norm", norm_max}};
  if (s.core) o.result["core_class"] = abelianize(*s.core, s.group->genus());
  return o;
}

Outcome rotset_star(const json& c) {
  Outcome o;
  SystemSetup s = make_system(c);
  auto seeds = seeds_for(c, s);
  ScanOptions opt = scan_options(c, s);
  RotationSetEstimate est = scan_rotation_set(*s.system, seeds, opt);
  StarOptions so;
  so.delta = section(c, "tolerances").value("star_delta", 0.05);
  so.speed_tolerance = section(c, "tolerances").value("speed", 2e-2);
  so.budget = static_cast<std::size_t>(section(c, "budgets").value("star_budget", 256));
  std::uint64_t seed = c.value("seed", std::uint64_t{1});
  SeedSource source = [&](std::size_t i) { return default_seeds(s, 1, seed + 1000 + i).front(); };
  StarAuditReport r = star_shape_audit(est, *s.system, opt, source, so);
  o.result = {{"system", system_json(s)},
              {"passed", r.passed},
              {"directions_checked", r.directions_checked},
              {"grid_points", r.grid_points},
              {"extra_samples", r.extra_samples},
              {"findings", findings_json(r.findings)},
              {"estimate", estimate_json(est)}};
  for (const auto& f : r.findings) o.findings.push_back(finding_text(f));
  return o;
}

Outcome rotset_power(const json& c) {
  Outcome o;
  SystemSetup s = make_system(c);
  auto seeds = seeds_for(c, s);
  PowerAuditReport r = power_inverse_audit(s.system, seeds, scan_options(c, s), 2,
                                           section(c, "tolerances").value("speed", 2e-2));
  o.result = {{"system", system_json(s)},
              {"passed", r.passed},
              {"power", r.power},
              {"checks", findings_json(r.checks)},
              {"findings", findings_json(r.findings)}};
  for (const auto& f : r.findings) o.findings.push_back(finding_text(f));
  return o;
}

Outcome periodic_search(const json& c) {
  Outcome o;
  SystemSetup s = make_system(c);
  json p = c.at("periodic");
  Word deck = parse_word(p.at("deck").get<std::string>(), genus_of(c));
  PeriodicOptions opt;
  opt.tolerance = section(c, "tolerances").value("periodic", 1e-6);
  opt.grid = section(c, "budgets").value("periodic_grid", opt.grid);
  if (p.value("restrict_to_axis", false)) opt.restrict_to = axis_of(*s.group, deck).axis;
  int pp = p.at("p").get<int>(), q = p.at("q").get<int>();
  PeriodicResult r = periodic_orbit_search(*s.system, deck, pp, q, opt);
  o.result = {{"system", system_json(s)},
              {"deck", to_string(deck)},
              {"p", pp},
              {"q", q},
              {"residual", std::isfinite(r.residual) ? json(r.residual) : json(nullptr)},
              {"evaluations", r.evaluations},
              {"diagnostics", r.diagnostics}};
  o.result["witness"] = r.witness ? located_json(*r.witness) : json(nullptr);
  if (!r.witness) o.findings.push_back("no periodic witness: " + r.diagnostics);
  return o;
}

Outcome horseshoe_check(const json& c) {
  Outcome o;
  json h = section(c, "horseshoe");
  if (h.contains("first") && h.contains("second")) {
    MarkedRectangle a = rectangle_from(h["first"]), b = rectangle_from(h["second"]);
    auto cert = markovian_check(a, b);
    o.result = {{"markovian", cert.has_value()}};
    o.result["certificate"] = cert ? certificate_json(*cert) : json(nullptr);
    if (!cert) o.findings.push_back("intersection is not Markovian");
    return o;
  }
  HorseshoeModel m = model_from(h);
  MarkedRectangle r = h.contains("rectangle") ? rectangle_from(h["rectangle"]) : MarkedRectangle::axis_box(0, 0, 1, 1);
  try {
    HorseshoeCertificate cert = certify_horseshoe(m, r);
    json crossings = json::array();
    for (const auto& x : cert.crossings) crossings.push_back(certificate_json(x));
    o.result = {{"certified", true}, {"decks", cert.decks}, {"rectangle", rectangle_json(r)}, {"crossings", crossings}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PreconditionFailed) throw;
    o.result = {{"certified", false}, {"reason", e.what()}};
    o.findings.push_back(e.what());
  }
  return o;
}

Outcome horseshoe_audit_cmd(const json& c) {
  Outcome o;
  json h = section(c, "horseshoe");
  HorseshoeModel m = model_from(h);
  MarkedRectangle r = h.contains("rectangle") ? rectangle_from(h["rectangle"]) : MarkedRectangle::axis_box(0, 0, 1, 1);
  HorseshoeCertificate cert = certify_horseshoe(m, r);
  std::vector<int> word;
  for (const auto& x : h.value("word", json::array({1, 2}))) {
    int i = x.get<int>();
    if (i > static_cast<int>(m.decks.size())) throw Error(ErrorCode::PreconditionFailed, "word letter exceeds the deck count");
    word.push_back(i - 1);
  }
  HorseshoeAuditOptions opt;
  opt.max_period = h.value("max_period", opt.max_period);
  opt.shadow_steps = h.value("shadow_steps", opt.shadow_steps);
  opt.separated_n = h.value("separated_n", opt.separated_n);
  HorseshoeAudit a = horseshoe_audit(m, cert, word, opt);
  json periodic = json::array();
  std::size_t found = 0;
  double worst = 0;
  for (const auto& it : a.periodic) {
    json w = json::array();
    for (int i : it.word) w.push_back(i + 1);
    json e = {{"word", w}, {"deck_word", it.deck_word}, {"chained", it.chained}};
    e["point"] = it.point ? point_json(*it.point) : json(nullptr);
    e["residual"] = std::isfinite(it.residual) ? json(it.residual) : json(nullptr);
    periodic.push_back(e);
    if (it.point) {
      ++found;
      worst = std::max(worst, it.residual);
    }
  }
  o.result = {{"decks", cert.decks},
              {"periodic_words", a.periodic.size()},
              {"periodic_found", found},
              {"worst_residual", worst},
              {"periodic", periodic},
              {"shadow", {{"max", a.shadow_max}, {"diameter", a.diameter}, {"ok", a.shadow_ok}}},
              {"separated_count", a.separated_count},
              {"entropy_estimate", a.entropy_estimate},
              {"entropy_bound", a.entropy_bound},
              {"passed", a.passed()}};
  o.findings = a.failures;
  return o;
}

Outcome plot_disk(const json& c) {
  Outcome o;
  o.figures.push_back({"disk.svg", render_disk_svg(c)});
  o.result = {{"figure", "disk.svg"}};
  return o;
}

}  // namespace

Outcome execute(const std::string& command, const json& config) {
  using Handler = Outcome (*)(const json&);
  static const std::map<std::string, Handler> handlers = {
      {"group build", group_build},         {"geodesic axis", geodesic_axis},
      {"geodesic cross", geodesic_cross},   {"geodesic selfx", geodesic_selfx},
      {"covering classify", covering_classify}, {"rotset estimate", rotset_estimate},
      {"rotset homology", rotset_homology}, {"rotset star-audit", rotset_star},
      {"rotset power-audit", rotset_power}, {"periodic search", periodic_search},
      {"horseshoe check", horseshoe_check}, {"horseshoe audit", horseshoe_audit_cmd},
      {"plot disk", plot_disk},
  };
  auto it = handlers.find(command);
  if (it == handlers.end()) throw Error(ErrorCode::PreconditionFailed, "unknown command " + command);
  Outcome o = it->second(config);
  if (!o.findings.empty()) o.exit_code = 2;
  return o;
}

}  // namespace rotlab::cli
