#include "hfric/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hfric/errors.hpp"

namespace hfric::io {
namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

std::string fmt_short(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

} // namespace

std::string fmt(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string timeseries_name(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "timeseries_%.6g.csv", v);
  return b;
}

void write_timeseries(const fs::path& path, const std::vector<sim::StepRecord>& series) {
  auto out = open_out(path);
  out << "step,t_s,y1_mm,P_Npmm,Q_Npmm,mu\n";
  for (const auto& r : series) {
    out << r.step << ',' << fmt(r.t) << ',' << fmt(r.y1) << ',' << fmt(r.P) << ',' << fmt(r.Q) << ','
        << fmt(r.mu) << '\n';
  }
}

void write_sweep(const fs::path& path, const std::vector<sim::FrictionResult>& runs) {
  auto out = open_out(path);
  out << "v_mmps,mu_avg,contact_fraction_mean,energy_gap\n";
  for (const auto& r : runs) {
    out << fmt(r.v) << ',';
    if (!r.error.empty()) {
      out << "nan,nan,nan\n";
      continue;
    }
    out << fmt(r.mu_avg) << ',' << fmt(r.contact_fraction_mean) << ',' << fmt(r.audit.gap) << '\n';
  }
}

void write_contact_trace(const fs::path& path, const mpjr::InterfaceLayer& L) {
  auto out = open_out(path);
  out << "x,g_n,p_n,slope,active\n";
  for (std::size_t q = 0; q < L.size(); ++q) {
    out << fmt(L.x[q]) << ',' << fmt(L.gap[q]) << ',' << fmt(L.pressure[q]) << ',' << fmt(L.slope[q])
        << ',' << (q < L.active.size() ? int(L.active[q]) : 0) << '\n';
  }
}

void write_vtk(const fs::path& path, const sim::Model& model, const sim::RunState& st) {
  const auto& mesh = model.bulk.mesh;
  const auto& dofs = model.bulk.dofs;
  auto out = open_out(path);
  out << "# vtk DataFile Version 3.0\nskid fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.nodes.size() << " double\n";
  for (const auto& n : mesh.nodes) out << fmt(n.x1) << ' ' << fmt(n.x2) << " 0\n";
  out << "CELLS " << mesh.quads.size() << ' ' << 5 * mesh.quads.size() << '\n';
  for (const auto& q : mesh.quads) out << "4 " << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
  out << "CELL_TYPES " << mesh.quads.size() << '\n';
  for (std::size_t i = 0; i < mesh.quads.size(); ++i) out << "9\n";
  out << "POINT_DATA " << mesh.nodes.size() << "\nVECTORS displacement double\n";
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
    double u[2];
    for (int c = 0; c < 2; ++c) {
      const int d = dofs.dof(static_cast<int>(n), c);
      u[c] = d >= 0 ? st.u[d] : dofs.prescribed_value[n][c];
    }
    out << fmt(u[0]) << ' ' << fmt(u[1]) << " 0\n";
  }
  out << "CELL_DATA " << mesh.quads.size() << "\nSCALARS dissipation_MPa double 1\nLOOKUP_TABLE default\n";
  for (std::size_t e = 0; e < mesh.quads.size(); ++e) {
    double s = 0.0;
    for (int g = 0; g < 4; ++g) {
      const std::size_t p = 4 * e + g;
      s += p < st.visco.dissipated.size() ? st.visco.dissipated[p] : 0.0;
    }
    out << fmt(0.25 * s) << '\n';
  }
}

void write_svg(const fs::path& path, const Plot& plot) {
  constexpr double W = 760, H = 460, ml = 80, mr = 170, mt = 40, mb = 60;
  const double pw = W - ml - mr, ph = H - mt - mb;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto tx = [&](double x) { return plot.log_x ? std::log10(x) : x; };
  for (const auto& c : plot.curves) {
    for (std::size_t i = 0; i < c.x.size() && i < c.y.size(); ++i) {
      if (!std::isfinite(c.y[i]) || (plot.log_x && !(c.x[i] > 0.0))) continue;
      x0 = std::min(x0, tx(c.x[i]));
      x1 = std::max(x1, tx(c.x[i]));
      y0 = std::min(y0, c.y[i]);
      y1 = std::max(y1, c.y[i]);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 <= 0) x1 = x0 + 1;
  if (y1 - y0 <= 0) {
    y0 -= 0.5 * std::max(1e-12, std::abs(y0));
    y1 += 0.5 * std::max(1e-12, std::abs(y1));
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return ml + (tx(x) - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return mt + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << ml + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
    << esc(plot.title) << "</text>\n";
  s << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Ticks.
  const auto nice_step = [](double span) {
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    return mag * (r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0);
  };
  if (plot.log_x) {
    for (double d = std::ceil(x0 - 1e-9); d <= x1 + 1e-9; d += 1.0) {
      const double X = ml + (d - x0) / (x1 - x0) * pw;
      s << "<line x1=\"" << X << "\" y1=\"" << mt + ph << "\" x2=\"" << X << "\" y2=\"" << mt + ph + 5
        << "\" stroke=\"black\"/>\n<text x=\"" << X << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\">1e" << static_cast<int>(d) << "</text>\n";
    }
  } else {
    const double st = nice_step(x1 - x0);
    for (double v = std::ceil(x0 / st) * st; v <= x1 + 1e-9 * st; v += st) {
      const double X = ml + (v - x0) / (x1 - x0) * pw;
      s << "<line x1=\"" << X << "\" y1=\"" << mt + ph << "\" x2=\"" << X << "\" y2=\"" << mt + ph + 5
        << "\" stroke=\"black\"/>\n<text x=\"" << X << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\">" << fmt_short(v) << "</text>\n";
    }
  }
  {
    const double st = nice_step(y1 - y0);
    for (double v = std::ceil(y0 / st) * st; v <= y1 + 1e-9 * st; v += st) {
      const double Y = py(v);
      s << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y << "\" x2=\"" << ml << "\" y2=\"" << Y
        << "\" stroke=\"black\"/>\n<text x=\"" << ml - 8 << "\" y=\"" << Y + 4
        << "\" text-anchor=\"end\">" << fmt_short(std::abs(v) < 1e-12 * st ? 0.0 : v) << "</text>\n";
    }
  }
  s << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">"
    << esc(plot.xlabel) << "</text>\n";
  s << "<text x=\"18\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << mt + ph / 2 << ")\">" << esc(plot.ylabel) << "</text>\n";

  for (std::size_t k = 0; k < plot.curves.size(); ++k) {
    const auto& c = plot.curves[k];
    const char* col = kColors[k % (sizeof kColors / sizeof *kColors)];
    s << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\""
      << (c.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < c.x.size() && i < c.y.size(); ++i) {
      if (!std::isfinite(c.y[i]) || (plot.log_x && !(c.x[i] > 0.0))) continue;
      s << fmt_short(px(c.x[i])) << ',' << fmt_short(py(c.y[i])) << ' ';
    }
    s << "\"/>\n";
    if (c.markers) {
      for (std::size_t i = 0; i < c.x.size() && i < c.y.size(); ++i) {
        if (!std::isfinite(c.y[i]) || (plot.log_x && !(c.x[i] > 0.0))) continue;
        s << "<circle cx=\"" << fmt_short(px(c.x[i])) << "\" cy=\"" << fmt_short(py(c.y[i]))
          << "\" r=\"3\" fill=\"" << col << "\"/>\n";
      }
    }
    const double ly = mt + 16 + 18 * static_cast<double>(k);
    s << "<line x1=\"" << ml + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 36 << "\" y2=\""
      << ly << "\" stroke=\"" << col << "\" stroke-width=\"1.5\""
      << (c.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n<text x=\"" << ml + pw + 42 << "\" y=\""
      << ly + 4 << "\">" << esc(c.name) << "</text>\n";
  }
  s << "</svg>\n";
  auto out = open_out(path);
  out << s.str();
}

std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char b[20];
  std::snprintf(b, sizeof b, "%016llx", static_cast<unsigned long long>(h));
  return b;
}

std::string fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a(ss.str());
}

Manifest::Manifest(fs::path path, std::string command, std::vector<std::string> argv)
    : path_(std::move(path)) {
  j_["tool"] = "hfric";
  j_["version"] = kVersion;
  j_["command"] = std::move(command);
  j_["argv"] = std::move(argv);
  j_["inputs"] = nlohmann::json::array();
  j_["outputs"] = nlohmann::json::array();
  j_["failures"] = nlohmann::json::array();
#ifdef __VERSION__
  j_["environment"]["compiler"] = __VERSION__;
#endif
  j_["environment"]["cxx_standard"] = static_cast<long>(__cplusplus);
}

void Manifest::set_config(const sim::SimulationConfig& cfg) {
  nlohmann::json c = nlohmann::json::object();
  for (const auto& [k, v] : sim::to_kv(cfg)) c[k] = v;
  j_["config"] = c;
}

void Manifest::add_input(const fs::path& p) {
  j_["inputs"].push_back({{"path", p.string()}, {"fnv1a64", fnv1a_file(p)}});
}

void Manifest::add_output(const fs::path& p) {
  nlohmann::json o = {{"path", p.filename().string()}};
  if (fs::exists(p)) o["fnv1a64"] = fnv1a_file(p);
  j_["outputs"].push_back(o);
}

void Manifest::add_failure(const std::string& what) { j_["failures"].push_back(what); }

void Manifest::add_note(const std::string& key, nlohmann::json value) { j_["notes"][key] = std::move(value); }

void Manifest::begin() {
  j_["status"] = "running";
  flush();
}

void Manifest::finish(const std::string& status, double seconds) {
  j_["status"] = status;
  j_["timing"]["wall_seconds"] = seconds;
  flush();
}

void Manifest::flush() const {
  auto out = open_out(path_);
  out << j_.dump(2) << '\n';
}

std::vector<std::string> manifest_argv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read manifest '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
    return j.at("argv").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError("manifest '" + path.string() + "': " + e.what());
  }
}

} // namespace hfric::io
