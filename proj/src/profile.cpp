#include "hfric/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hfric/errors.hpp"

namespace hfric::profile {
namespace {

bool parse_double(std::string_view token, double& out) {
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size() && std::isfinite(out);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == ';'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

std::vector<Point> to_points(const RawProfile& p) { return p.points; }

} // namespace

double mean_spacing(std::span<const Point> points) {
  if (points.size() < 2) return 0.0;
  return (points.back().x - points.front().x) / static_cast<double>(points.size() - 1);
}

RawProfile make_raw_profile(std::vector<Point> points, std::string source_id) {
  std::stable_sort(points.begin(), points.end(),
                   [](const Point& a, const Point& b) { return a.x < b.x; });
  std::vector<Point> merged;
  merged.reserve(points.size());
  std::size_t i = 0;
  while (i < points.size()) {
    std::size_t j = i + 1;
    double zsum = points[i].z;
    while (j < points.size() && points[j].x - points[i].x <= kDuplicateTolerance) {
      zsum += points[j].z;
      ++j;
    }
    merged.push_back({points[i].x, zsum / static_cast<double>(j - i)});
    i = j;
  }
  if (merged.size() < kMinPoints) {
    throw TooFewPoints(source_id + ": " + std::to_string(merged.size()) +
                       " distinct points, need at least " + std::to_string(kMinPoints));
  }
  return RawProfile{std::move(merged), std::move(source_id)};
}

RawProfile parse_profile(std::istream& in, const std::string& source_id, Format format) {
  std::vector<Point> points;
  std::string line;
  std::size_t lineno = 0;
  bool header_allowed = format == Format::csv;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    auto fields = split_fields(view);
    if (fields.empty()) continue;
    double x = 0.0, z = 0.0;
    bool ok = fields.size() == 2 && parse_double(fields[0], x) && parse_double(fields[1], z);
    if (!ok) {
      if (header_allowed && points.empty()) {
        header_allowed = false;
        continue;
      }
      throw ParseError(source_id, lineno, "expected two numeric columns (x z), got '" + line + "'");
    }
    header_allowed = false;
    points.push_back({x, z});
  }
  return make_raw_profile(std::move(points), source_id);
}

RawProfile load_profile(const std::filesystem::path& path, Format format) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile file '" + path.string() + "'");
  return parse_profile(in, path.string(), format);
}

void write_profile(std::ostream& out, const Profile& p) {
  out << "# x_mm z_mm\n";
  if (!p.source_id.empty()) out << "# source: " << p.source_id << "\n";
  for (const auto& step : p.processing_log) out << "# step: " << step << "\n";
  char buf[64];
  for (const auto& pt : p.points) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", pt.x, pt.z);
    out << buf;
  }
}

void write_profile(const std::filesystem::path& path, const Profile& p) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write profile file '" + path.string() + "'");
  write_profile(out, p);
}

LineFit fit_line(std::span<const Point> points) {
  const auto n = static_cast<double>(points.size());
  if (points.empty()) return {};
  double xm = 0.0, zm = 0.0;
  for (const auto& p : points) {
    xm += p.x;
    zm += p.z;
  }
  xm /= n;
  zm /= n;
  double sxx = 0.0, sxz = 0.0;
  for (const auto& p : points) {
    sxx += (p.x - xm) * (p.x - xm);
    sxz += (p.x - xm) * (p.z - zm);
  }
  const double slope = sxx > 0.0 ? sxz / sxx : 0.0;
  return {zm - slope * xm, slope};
}

RawProfile level(const RawProfile& p) {
  // Two passes: the second removes the rounding residue of the first.
  RawProfile out = p;
  for (int pass = 0; pass < 2; ++pass) {
    const LineFit line = fit_line(out.points);
    for (auto& pt : out.points) pt.z -= line.at(pt.x);
  }
  return out;
}

RawProfile gaussian_s_filter(const RawProfile& p, double cutoff) {
  if (!(cutoff > 0.0)) throw InputError("S-filter cutoff must be positive");
  const auto& pts = p.points;
  const double range = pts.back().x - pts.front().x;
  if (range < 10.0 * cutoff) {
    throw CutoffTooLarge(p.source_id + ": x-range " + std::to_string(range) +
                         " mm is below 10 x cutoff " + std::to_string(cutoff) + " mm");
  }
  // Metrology Gaussian: exp(-pi (x / (alpha lc))^2), alpha = sqrt(ln2 / pi).
  const double alpha = std::sqrt(std::numbers::ln2 / std::numbers::pi);
  const double width = alpha * cutoff;
  const double reach = 2.0 * cutoff;
  const std::size_t n = pts.size();

  std::vector<double> cell(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double left = j > 0 ? pts[j].x - pts[j - 1].x : 0.0;
    const double right = j + 1 < n ? pts[j + 1].x - pts[j].x : 0.0;
    cell[j] = 0.5 * (left + right);
  }

  RawProfile out = p;
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = pts[i].x;
    while (pts[lo].x < xi - reach) ++lo;
    while (hi + 1 < n && pts[hi + 1].x <= xi + reach) ++hi;
    double wsum = 0.0, zsum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
      const double u = (pts[j].x - xi) / width;
      const double w = std::exp(-std::numbers::pi * u * u) * cell[j];
      wsum += w;
      zsum += w * pts[j].z;
    }
    out.points[i].z = wsum > 0.0 ? zsum / wsum : pts[i].z;
  }
  return out;
}

Profile rebase(const RawProfile& p) {
  Profile out;
  out.source_id = p.source_id;
  out.points = to_points(p);
  const double x0 = out.points.front().x;
  double zmin = out.points.front().z;
  for (const auto& pt : out.points) zmin = std::min(zmin, pt.z);
  for (auto& pt : out.points) {
    pt.x -= x0;
    pt.z -= zmin;
  }
  out.dx_mean = mean_spacing(out.points);
  out.processing_log.push_back("rebase");
  return out;
}

Profile rebase(const Profile& p) {
  RawProfile raw{p.points, p.source_id};
  Profile out = rebase(raw);
  out.processing_log = p.processing_log;
  out.processing_log.push_back("rebase");
  return out;
}

Profile downsample(const Profile& p, int rho) {
  if (rho < 1) throw InputError("down-sampling factor must be >= 1");
  Profile out;
  out.source_id = p.source_id;
  const std::size_t step = static_cast<std::size_t>(rho);
  for (std::size_t i = 0; i < p.points.size(); i += step) out.points.push_back(p.points[i]);
  if ((p.points.size() - 1) % step != 0) out.points.push_back(p.points.back());
  if (out.points.size() < kMinPoints) {
    throw TooFewPoints(p.source_id + ": down-sampling by " + std::to_string(rho) + " leaves " +
                       std::to_string(out.points.size()) + " points");
  }
  out = rebase(out);
  out.processing_log = p.processing_log;
  out.processing_log.push_back("downsample rho=" + std::to_string(rho));
  return out;
}

Profile primary_profile(const RawProfile& raw, double s_cutoff) {
  RawProfile leveled = level(raw);
  RawProfile filtered = gaussian_s_filter(leveled, s_cutoff);
  Profile out = rebase(filtered);
  std::ostringstream step;
  step << "s-filter cutoff=" << s_cutoff << "mm";
  out.processing_log = {"level", step.str(), "rebase"};
  return out;
}

} // namespace hfric::profile
