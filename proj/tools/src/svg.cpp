#include <cstdio>
#include <sstream>

#include "rotlab_cli/cli.hpp"

namespace rotlab::cli {

namespace {

struct Canvas {
  double size;
  std::ostringstream body;

  double sx(double x) const { return size / 2 + x * (size / 2 - 10); }
  double sy(double y) const { return size / 2 - y * (size / 2 - 10); }

  void polyline(const std::vector<Cxd>& pts, const std::string& stroke, double width, const char* cls) {
    if (pts.size() < 2) return;
    body << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width
         << "\" points=\"";
    char buf[64];
    for (const auto& p : pts) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(p.re), sy(p.im));
      body << buf;
    }
    body << "\"/>\n";
  }
};

std::vector<Cxd> geodesic_piece(const Geodesic& g, double t0, double t1, int samples) {
  auto frame = g.frame();
  std::vector<Cxd> out;
  for (int i = 0; i <= samples; ++i) out.push_back(frame.point(0.0, t0 + (t1 - t0) * i / samples));
  return out;
}

std::vector<Cxd> segment(DiskPoint p, DiskPoint q, int samples) {
  Geodesic g = geodesic_through_points(p, q);
  auto frame = g.frame();
  double t0 = frame.fermi(p.z()).second, t1 = frame.fermi(q.z()).second;
  return geodesic_piece(g, t0, t1, samples);
}

// Blue for slow, red for fast.
std::string speed_color(double u) {
  u = std::clamp(u, 0.0, 1.0);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x30%02x", static_cast<int>(40 + 215 * u), static_cast<int>(255 - 215 * u));
  return buf;
}

}  // namespace

std::string render_disk_svg(const json& config) {
  json plot = config.contains("plot") ? config["plot"] : json::object();
  Canvas cv{static_cast<double>(plot.value("size", 800))};
  SystemSetup s = make_system(config);
  const SurfaceGroup& g = *s.group;

  cv.body << "<circle cx=\"" << cv.sx(0) << "\" cy=\"" << cv.sy(0) << "\" r=\"" << (cv.size / 2 - 10)
          << "\" fill=\"#fbfbf8\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

  // Tiling edges.
  const auto& verts = g.domain().vertices;
  for (const auto& e : ball_by_distance(g, plot.value("tiling_radius", 3.0))) {
    for (std::size_t i = 0; i < verts.size(); ++i) {
      DiskPoint a = apply(e.m, verts[i]), b = apply(e.m, verts[(i + 1) % verts.size()]);
      cv.polyline(segment(a, b, 16), "#b0b0b0", 0.6, "tile");
    }
  }

  // Axes.
  std::vector<Word> axes;
  json words = config.contains("words") ? config["words"] : json::object();
  if (words.contains("axes")) {
    for (const auto& w : words["axes"]) axes.push_back(parse_word(w.get<std::string>(), g.genus()));
  } else if (s.core) {
    axes.push_back(*s.core);
    if (s.example) axes.push_back(s.example->alpha);
  } else {
    for (int l = 0; l < g.num_letters(); l += 4) {
      axes.push_back(Word{{l}});
      axes.push_back(Word{{l + 1}});
    }
  }
  for (const Word& w : axes) cv.polyline(geodesic_piece(axis_of(g, w).axis, -9, 9, 200), "#2a7a2a", 1.4, "axis");

  // Orbit traces and their displacement chords.
  int orbits = plot.value("orbits", 6), steps = plot.value("orbit_steps", 200);
  auto seeds = default_seeds(s, static_cast<std::size_t>(orbits), config.value("seed", std::uint64_t{1}));
  struct ChordLine {
    Chord chord;
    double speed;
  };
  std::vector<ChordLine> chords;
  double fastest = 0;
  for (const auto& z0 : seeds) {
    LiftedTrajectory tr = iterate(*s.system, z0, steps, true);
    std::vector<Cxd> pts{reconstruct(g, tr.start).z()};
    for (const auto& p : tr.steps) pts.push_back(reconstruct(g, p).z());
    cv.polyline(pts, "#444444", 0.8, "orbit");
    Chord ch = displacement_chord(g, tr.start, tr.end);
    if (!ch.stationary) {
      double v = ch.distance / steps;
      chords.push_back({ch, v});
      fastest = std::max(fastest, v);
    }
  }
  for (const auto& c : chords)
    cv.polyline(geodesic_piece(Geodesic::make(c.chord.tail, c.chord.head), -9, 9, 200),
                speed_color(fastest > 0 ? c.speed / fastest : 0), 1.2, "chord");

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << cv.size << "\" height=\"" << cv.size
      << "\" viewBox=\"0 0 " << cv.size << " " << cv.size << "\">\n"
      << "<title>" << s.system->name() << " on genus " << g.genus() << "</title>\n"
      << cv.body.str() << "</svg>\n";
  return svg.str();
}

}  // namespace rotlab::cli
