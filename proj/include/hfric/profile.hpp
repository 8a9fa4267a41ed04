#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hfric::profile {

// Profile sample; both coordinates in mm.
struct Point {
  double x = 0.0;
  double z = 0.0;
};

// Ingested profile: x strictly increasing, at least 4 points.
struct RawProfile {
  std::vector<Point> points;
  std::string source_id;
};

// Processed profile: first x is 0, min z is 0, x strictly increasing.
struct Profile {
  std::vector<Point> points;
  double dx_mean = 0.0;  // mm
  std::vector<std::string> processing_log;
  std::string source_id;

  std::size_t size() const { return points.size(); }
  double length() const { return points.empty() ? 0.0 : points.back().x - points.front().x; }
};

enum class Format { xy_text, csv };

inline constexpr std::size_t kMinPoints = 4;
inline constexpr double kDuplicateTolerance = 1e-9;  // mm

// Sorts by x, merges duplicates (|dx| <= 1e-9 mm) by averaging z, and checks
// the point count. Throws TooFewPoints.
RawProfile make_raw_profile(std::vector<Point> points, std::string source_id);

// Two-column text: whitespace or comma separated, '#' comments. The csv format
// additionally tolerates one non-numeric header row. Throws ParseError,
// TooFewPoints, InputError (unreadable file).
RawProfile load_profile(const std::filesystem::path& path, Format format = Format::xy_text);
RawProfile parse_profile(std::istream& in, const std::string& source_id,
                         Format format = Format::xy_text);

void write_profile(std::ostream& out, const Profile& p);
void write_profile(const std::filesystem::path& path, const Profile& p);

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double at(double x) const { return intercept + slope * x; }
};

// Ordinary least-squares line of z over x.
LineFit fit_line(std::span<const Point> points);

// Subtracts the least-squares line.
RawProfile level(const RawProfile& p);

// Gaussian S-filter (50% transmission at `cutoff`, mm), direct convolution with
// weights renormalized over the available window. Throws CutoffTooLarge when
// the x-range is below 10 cutoffs.
RawProfile gaussian_s_filter(const RawProfile& p, double cutoff);

// Shifts x so x[0] = 0 and z so min z = 0.
Profile rebase(const RawProfile& p);
Profile rebase(const Profile& p);

// Keeps every rho-th point plus the last one and re-rebases. Throws TooFewPoints.
Profile downsample(const Profile& p, int rho);

// level -> S-filter -> rebase, the chain used before roughness evaluation.
Profile primary_profile(const RawProfile& raw, double s_cutoff);

double mean_spacing(std::span<const Point> points);

} // namespace hfric::profile
