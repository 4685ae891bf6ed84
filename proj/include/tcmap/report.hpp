#ifndef TCMAP_REPORT_HPP
#define TCMAP_REPORT_HPP

// Run reports (JSON) and plot data (CSV).
//
// phi CSV:    curve_id,t,re_z,im_z,re_phi,im_phi
//             curve_id 0 = outer node, 1 = inner node (t = node parameter),
//             2 = interior point (t = point index).
// median CSV: arc,tau,re_w,im_w,re_phi,im_phi
//             arc 0 = branch point, 1 and 2 = the two arcs; tau is the real
//             sweep value t with f_a(w) = t / c.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tcmap/error.hpp"
#include "tcmap/mapping_pipeline.hpp"
#include "tcmap/types.hpp"

namespace tcmap {

inline nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const nlohmann::json& v) {
  if (!v.is_array() || v.size() != 2) throw ParseError("expected a [re, im] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

struct RunReport {
  std::string command;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();
  nlohmann::json residuals = nlohmann::json::object();
  double seconds = 0.0;

  /// Throws AccuracyError when a residual is missing a finite value.
  void require_finite_residuals() const {
    for (const auto& item : residuals.items()) {
      if (!item.value().is_number() || !std::isfinite(item.value().get<double>()))
        throw AccuracyError("residual '" + item.key() + "' is not finite");
    }
  }

  nlohmann::json to_json() const {
    return {{"command", command},
            {"inputs", inputs},
            {"outputs", outputs},
            {"residuals", residuals},
            {"timing", {{"seconds", seconds}}}};
  }

  static RunReport from_json(const nlohmann::json& j) {
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs");
    r.outputs = j.at("outputs");
    r.residuals = j.at("residuals");
    r.seconds = j.at("timing").at("seconds").get<double>();
    return r;
  }
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::ofstream open_for_writing(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

inline void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace detail

inline void write_report(const std::string& path, const RunReport& report) {
  report.require_finite_residuals();
  auto out = detail::open_for_writing(path);
  out << report.to_json().dump(2) << '\n';
  detail::finish(out, path);
}

inline void write_phi_csv(std::ostream& out, const ConformalMapPhi& phi, std::span<const Complex> interior) {
  using detail::fmt_double;
  const auto& g = phi.grid();
  out << "curve_id,t,re_z,im_z,re_phi,im_phi\n";
  const auto vals = phi.boundary_values();
  for (std::size_t j = 0; j < g.size(); ++j) {
    const bool outer = g.is_outer(j);
    const std::size_t local = outer ? j : j - g.outer_size;
    const std::size_t n = outer ? g.outer_size : g.inner_size;
    const double t = kTwoPi * static_cast<double>(local) / static_cast<double>(n);
    out << (outer ? 0 : 1) << ',' << fmt_double(t) << ',' << fmt_double(g.nodes[j].real()) << ','
        << fmt_double(g.nodes[j].imag()) << ',' << fmt_double(vals[j].real()) << ',' << fmt_double(vals[j].imag())
        << '\n';
  }
  for (std::size_t k = 0; k < interior.size(); ++k) {
    const Complex v = phi(interior[k]);
    out << 2 << ',' << k << ',' << fmt_double(interior[k].real()) << ',' << fmt_double(interior[k].imag()) << ','
        << fmt_double(v.real()) << ',' << fmt_double(v.imag()) << '\n';
  }
}

inline void write_median_csv(std::ostream& out, const ConformalMapPhi& phi, const MedianPolyline& median) {
  using detail::fmt_double;
  out << "arc,tau,re_w,im_w,re_phi,im_phi\n";
  const Complex c = phi.params().c;
  for (std::size_t k = 0; k < median.points.size(); ++k) {
    const Complex w = median.points[k];
    const Complex v = phi(w);
    out << median.arc[k] << ',' << fmt_double((median.tau_values[k] * c).real()) << ',' << fmt_double(w.real()) << ','
        << fmt_double(w.imag()) << ',' << fmt_double(v.real()) << ',' << fmt_double(v.imag()) << '\n';
  }
}

/// "<dir>/<stem>_median.csv" next to path.
inline std::string median_path_for(const std::string& path) {
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + "_median.csv")).string();
}

/// Writes the phi CSV to path and the median CSV next to it. An empty median
/// gives a header-only file.
inline void emit_plot_data(const ConformalMapPhi& phi, const MedianPolyline& median, const std::string& path,
                           std::span<const Complex> interior = {}) {
  auto out = detail::open_for_writing(path);
  write_phi_csv(out, phi, interior);
  detail::finish(out, path);
  const std::string mpath = median_path_for(path);
  auto mout = detail::open_for_writing(mpath);
  write_median_csv(mout, phi, median);
  detail::finish(mout, mpath);
}

}  // namespace tcmap

#endif  // TCMAP_REPORT_HPP
