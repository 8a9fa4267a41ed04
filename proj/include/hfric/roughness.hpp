#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hfric/profile.hpp"

namespace hfric::roughness {

using profile::Profile;

struct SectionScheme {
  int n_sections = 5;
  double section_len = 0.0;  // mm, evaluation length / n_sections
};

struct ProfileElement {
  double x_start = 0.0;  // mm, upward mean-line crossing
  double x_end = 0.0;    // mm, next upward crossing
  double height = 0.0;   // mm, peak height + pit depth
  double spacing = 0.0;  // mm
};

// Element discrimination thresholds as fractions of Pt (height) and of the
// evaluation length (spacing).
struct Discrimination {
  double height = 0.10;
  double spacing = 0.01;
};

struct AmplitudeParams {
  double Pa = 0.0, Pq = 0.0, Pt = 0.0;
};

struct SectionParams {
  double Ppt = 0.0, Pvt = 0.0, Pz = 0.0;
};

struct ElementParams {
  double Psm = 0.0, Psmx = 0.0, Pc = 0.0, Pcx = 0.0;
  std::vector<ProfileElement> elements;
};

struct RoughnessReport {
  double Pa = 0.0, Pq = 0.0, Pt = 0.0;
  double Ppt = 0.0, Pvt = 0.0, Pz = 0.0;
  double Psm = 0.0, Psmx = 0.0, Pc = 0.0, Pcx = 0.0;
  double MPD = 0.0;
  int element_count = 0;
  SectionScheme scheme;
  Discrimination discrimination;
  double evaluation_length = 0.0;
  std::vector<std::string> warnings;
};

// Length-weighted (exact for the piecewise-linear interpolant) amplitude
// parameters about the mean height.
AmplitudeParams amplitude_params(const Profile& p);

// Per-section extrema about the global least-squares mean line.
// Throws TooFewPointsPerSection.
SectionParams section_params(const Profile& p, int n_sections);

// Throws NoElementsFound.
ElementParams element_params(const Profile& p, Discrimination disc = {});

// Mean profile depth. `short_baseline` is set when the evaluation length is
// below 100 mm.
double mpd(const Profile& p, bool* short_baseline = nullptr);

RoughnessReport roughness_report(const Profile& p, int n_sections = 5, Discrimination disc = {});

nlohmann::json to_json(const RoughnessReport& r);
// Aligned text table, rows in the conventional pavement-report order.
std::string to_table(const RoughnessReport& r);

} // namespace hfric::roughness
