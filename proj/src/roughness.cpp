#include "hfric/roughness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "hfric/errors.hpp"

namespace hfric::roughness {
namespace {

double trapezoid_mean(const std::vector<profile::Point>& pts) {
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    area += 0.5 * (pts[i].z + pts[i + 1].z) * (pts[i + 1].x - pts[i].x);
  }
  const double len = pts.back().x - pts.front().x;
  return len > 0.0 ? area / len : pts.front().z;
}

double range_of(const std::vector<profile::Point>& pts) {
  auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(),
                                      [](const auto& a, const auto& b) { return a.z < b.z; });
  return hi->z - lo->z;
}

struct Segment {
  int sign = 0;           // +1 peak, -1 valley
  double x_start = 0.0;
  double x_end = 0.0;
  double extreme = 0.0;   // max |d| within the segment
  bool closed_start = false;
  bool closed_end = false;
  double width() const { return x_end - x_start; }
};

// Splits the profile into alternating peak/valley segments between
// mean-line crossings. Samples within `eps` of the line carry no sign.
std::vector<Segment> mean_line_segments(const Profile& p, const profile::LineFit& line, double eps) {
  const auto& pts = p.points;
  std::vector<Segment> segs;
  double last_d = 0.0;
  double last_x = 0.0;
  for (const auto& pt : pts) {
    const double d = pt.z - line.at(pt.x);
    const int s = d > eps ? 1 : (d < -eps ? -1 : 0);
    if (s == 0) continue;
    if (segs.empty()) {
      segs.push_back({s, pts.front().x, pts.front().x, std::abs(d), false, false});
    } else if (s != segs.back().sign) {
      const double xc = last_x + (pt.x - last_x) * last_d / (last_d - d);
      segs.back().x_end = xc;
      segs.back().closed_end = true;
      segs.push_back({s, xc, xc, std::abs(d), true, false});
    } else {
      segs.back().extreme = std::max(segs.back().extreme, std::abs(d));
    }
    last_d = d;
    last_x = pt.x;
  }
  if (!segs.empty()) segs.back().x_end = pts.back().x;
  return segs;
}

// Merges insignificant segments into their neighbours, smallest first.
// Segments cut by the profile ends are exempt from the width test.
void discriminate(std::vector<Segment>& segs, double min_height, double min_width) {
  auto weak = [&](const Segment& s) {
    const bool cut = !s.closed_start || !s.closed_end;
    return s.extreme < min_height || (!cut && s.width() < min_width);
  };
  while (segs.size() > 1) {
    std::size_t pick = segs.size();
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (!weak(segs[i])) continue;
      if (pick == segs.size() || segs[i].extreme < segs[pick].extreme) pick = i;
    }
    if (pick == segs.size()) break;
    if (pick == 0) {
      segs[1].x_start = segs[0].x_start;
      segs[1].closed_start = segs[0].closed_start;
      segs.erase(segs.begin());
    } else if (pick == segs.size() - 1) {
      segs[pick - 1].x_end = segs[pick].x_end;
      segs[pick - 1].closed_end = segs[pick].closed_end;
      segs.pop_back();
    } else {
      Segment& left = segs[pick - 1];
      const Segment& right = segs[pick + 1];
      left.x_end = right.x_end;
      left.closed_end = right.closed_end;
      left.extreme = std::max(left.extreme, right.extreme);
      segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(pick),
                 segs.begin() + static_cast<std::ptrdiff_t>(pick) + 2);
    }
  }
}

} // namespace

AmplitudeParams amplitude_params(const Profile& p) {
  const auto& pts = p.points;
  if (pts.size() < 2) throw TooFewPoints("amplitude parameters need at least 2 points");
  const double zbar = trapezoid_mean(pts);
  const double len = pts.back().x - pts.front().x;
  double abs_int = 0.0, sq_int = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double h = pts[i + 1].x - pts[i].x;
    const double a = pts[i].z - zbar;
    const double b = pts[i + 1].z - zbar;
    if (a * b >= 0.0) {
      abs_int += 0.5 * h * (std::abs(a) + std::abs(b));
    } else {
      // The linear piece crosses zero; integrate both triangles.
      abs_int += 0.5 * h * (a * a + b * b) / (std::abs(a) + std::abs(b));
    }
    sq_int += h * (a * a + a * b + b * b) / 3.0;
  }
  AmplitudeParams out;
  out.Pa = abs_int / len;
  out.Pq = std::sqrt(std::max(0.0, sq_int / len));
  out.Pt = range_of(pts);
  return out;
}

SectionParams section_params(const Profile& p, int n_sections) {
  const auto& pts = p.points;
  if (n_sections < 1) throw InputError("n_sections must be >= 1");
  if (static_cast<std::size_t>(n_sections) * 10 > pts.size()) {
    throw TooFewPointsPerSection(std::to_string(pts.size()) + " points cannot fill " +
                                 std::to_string(n_sections) + " sections of at least 10 points");
  }
  const profile::LineFit line = profile::fit_line(pts);
  const double x0 = pts.front().x;
  const double len = pts.back().x - x0;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> peak(n_sections, -inf), pit(n_sections, -inf);
  for (const auto& pt : pts) {
    int s = static_cast<int>(std::floor((pt.x - x0) / len * n_sections));
    s = std::clamp(s, 0, n_sections - 1);
    const double d = pt.z - line.at(pt.x);
    peak[s] = std::max(peak[s], d);
    pit[s] = std::max(pit[s], -d);
  }
  SectionParams out{-inf, -inf, 0.0};
  for (int s = 0; s < n_sections; ++s) {
    if (peak[s] == -inf) {
      throw TooFewPointsPerSection("section " + std::to_string(s) + " contains no samples");
    }
    out.Ppt = std::max(out.Ppt, peak[s]);
    out.Pvt = std::max(out.Pvt, pit[s]);
    out.Pz += peak[s] + pit[s];
  }
  out.Pz /= n_sections;
  return out;
}

ElementParams element_params(const Profile& p, Discrimination disc) {
  if (!(disc.height > 0.0 && disc.height < 1.0) || !(disc.spacing > 0.0 && disc.spacing < 1.0)) {
    throw InputError("discrimination fractions must lie in (0, 1)");
  }
  const auto& pts = p.points;
  const double pt_range = range_of(pts);
  const double len = pts.back().x - pts.front().x;
  const profile::LineFit line = profile::fit_line(pts);
  const double eps = 1e-9 * pt_range + 1e-13;

  std::vector<Segment> segs = mean_line_segments(p, line, eps);
  discriminate(segs, disc.height * pt_range, disc.spacing * len);

  ElementParams out;
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    const Segment& peak = segs[i];
    const Segment& valley = segs[i + 1];
    if (peak.sign != 1 || !peak.closed_start || !valley.closed_end) continue;
    ProfileElement e;
    e.x_start = peak.x_start;
    e.x_end = valley.x_end;
    e.spacing = e.x_end - e.x_start;
    e.height = peak.extreme + valley.extreme;
    out.elements.push_back(e);
  }
  if (out.elements.empty()) {
    throw NoElementsFound("profile has no complete peak/valley element about its mean line");
  }
  for (const auto& e : out.elements) {
    out.Psm += e.spacing;
    out.Pc += e.height;
    out.Psmx = std::max(out.Psmx, e.spacing);
    out.Pcx = std::max(out.Pcx, e.height);
  }
  out.Psm /= static_cast<double>(out.elements.size());
  out.Pc /= static_cast<double>(out.elements.size());
  return out;
}

double mpd(const Profile& p, bool* short_baseline) {
  const auto& pts = p.points;
  const double x0 = pts.front().x;
  const double mid = 0.5 * (x0 + pts.back().x);
  const double inf = std::numeric_limits<double>::infinity();
  double peak1 = -inf, peak2 = -inf;
  for (const auto& pt : pts) {
    if (pt.x < mid) peak1 = std::max(peak1, pt.z);
    else peak2 = std::max(peak2, pt.z);
  }
  if (short_baseline) *short_baseline = p.length() < 100.0;
  if (peak1 == -inf) peak1 = peak2;
  return 0.5 * (peak1 + peak2) - trapezoid_mean(pts);
}

RoughnessReport roughness_report(const Profile& p, int n_sections, Discrimination disc) {
  RoughnessReport r;
  const AmplitudeParams a = amplitude_params(p);
  r.Pa = a.Pa;
  r.Pq = a.Pq;
  r.Pt = a.Pt;
  const SectionParams s = section_params(p, n_sections);
  r.Ppt = s.Ppt;
  r.Pvt = s.Pvt;
  r.Pz = s.Pz;
  try {
    const ElementParams e = element_params(p, disc);
    r.Psm = e.Psm;
    r.Psmx = e.Psmx;
    r.Pc = e.Pc;
    r.Pcx = e.Pcx;
    r.element_count = static_cast<int>(e.elements.size());
  } catch (const NoElementsFound& ex) {
    r.element_count = 0;
    r.warnings.push_back(std::string("NoElementsFound: ") + ex.what());
  }
  bool short_baseline = false;
  r.MPD = mpd(p, &short_baseline);
  if (short_baseline) r.warnings.push_back("MPD evaluated on a baseline shorter than 100 mm");
  r.evaluation_length = p.length();
  r.scheme.n_sections = n_sections;
  r.scheme.section_len = p.length() / n_sections;
  r.discrimination = disc;
  return r;
}

nlohmann::json to_json(const RoughnessReport& r) {
  nlohmann::json j;
  j["units"] = "mm";
  j["MPD"] = r.MPD;
  j["Pa"] = r.Pa;
  j["Pq"] = r.Pq;
  j["Pt"] = r.Pt;
  j["Ppt"] = r.Ppt;
  j["Pvt"] = r.Pvt;
  j["Pz"] = r.Pz;
  j["Psm"] = r.Psm;
  j["Psmx"] = r.Psmx;
  j["Pc"] = r.Pc;
  j["Pcx"] = r.Pcx;
  j["element_count"] = r.element_count;
  j["evaluation_length"] = r.evaluation_length;
  j["scheme"] = {{"n_sections", r.scheme.n_sections}, {"section_len", r.scheme.section_len}};
  j["discrimination"] = {{"height", r.discrimination.height},
                         {"spacing", r.discrimination.spacing}};
  j["warnings"] = r.warnings;
  return j;
}

std::string to_table(const RoughnessReport& r) {
  const std::pair<const char*, double> rows[] = {
      {"MPD", r.MPD}, {"Pa", r.Pa},     {"Pq", r.Pq},     {"Pt", r.Pt},
      {"Ppt", r.Ppt}, {"Pvt", r.Pvt},   {"Pz", r.Pz},     {"Psm", r.Psm},
      {"Psmx", r.Psmx}, {"Pc", r.Pc},   {"Pcx", r.Pcx},
  };
  std::ostringstream os;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%-10s %14s\n", "parameter", "value [mm]");
  os << buf;
  for (const auto& [name, value] : rows) {
    std::snprintf(buf, sizeof buf, "%-10s %14.6f\n", name, value);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%-10s %14d\n", "elements", r.element_count);
  os << buf;
  std::snprintf(buf, sizeof buf, "%-10s %14d\n", "sections", r.scheme.n_sections);
  os << buf;
  for (const auto& w : r.warnings) os << "warning: " << w << "\n";
  return os.str();
}

} // namespace hfric::roughness
