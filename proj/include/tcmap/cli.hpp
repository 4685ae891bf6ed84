#ifndef TCMAP_CLI_HPP
#define TCMAP_CLI_HPP

// tcmap command line: ahlfors, map, median, modulus, kernel, verify.
// Exit codes: 0 success, 1 numeric or I/O failure, 2 usage error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tcmap/acceptance.hpp"
#include "tcmap/domain_io.hpp"
#include "tcmap/kernels.hpp"
#include "tcmap/mapping_pipeline.hpp"
#include "tcmap/report.hpp"
#include "tcmap/szego_ahlfors.hpp"

namespace tcmap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string domain;
  std::string out;
  std::string report;
  std::size_t nodes = kDefaultNodes;
  double tol = 1e-8;
  std::string seed_point;
  std::string base_point;
  std::string z;
  std::string w;
  int median_points = 50;
  std::string precision = "automatic";
  std::string labeling = "phi-a";
};

/// "re,im" or a bare real number.
inline Complex parse_complex(const std::string& text, const std::string& flag) {
  std::istringstream in(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw UsageError(flag + " expects re,im, got '" + text + "'");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw UsageError(flag + " expects re,im, got '" + text + "'");
  }
  std::string rest;
  if (in >> rest) throw UsageError(flag + " expects re,im, got '" + text + "'");
  return {re, im};
}

namespace detail {

struct Context {
  Options opt;
  std::ostream& out;
  std::ostream& err;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

inline Tolerances tolerances(const Options& o) {
  Tolerances t;
  t.solve_residual = o.tol;
  t.boundary_zero = o.tol;
  return t;
}

inline Precision precision(const Options& o) {
  if (o.precision == "standard") return Precision::standard;
  if (o.precision == "extended") return Precision::extended;
  return Precision::automatic;
}

inline Labeling labeling(const Options& o) {
  return o.labeling == "lambda" ? Labeling::lambda_argument : Labeling::phi_a_equals_i;
}

inline TwoConnectedDomain load(const Options& o) {
  if (o.domain.empty()) throw UsageError("--domain is required");
  return load_domain(o.domain, o.nodes);
}

inline Complex seed_of(const Options& o, const TwoConnectedDomain& d) {
  return o.seed_point.empty() ? d.reference_point() : parse_complex(o.seed_point, "--seed-point");
}

inline RunReport start_report(const std::string& command, const Options& o) {
  RunReport r;
  r.command = command;
  r.inputs = {{"domain", o.domain},       {"nodes", o.nodes},         {"tol", o.tol},
              {"precision", o.precision}, {"labeling", o.labeling},   {"median_points", o.median_points}};
  if (!o.seed_point.empty()) r.inputs["seed_point"] = o.seed_point;
  if (!o.base_point.empty()) r.inputs["base_point"] = o.base_point;
  if (!o.z.empty()) r.inputs["z"] = o.z;
  if (!o.w.empty()) r.inputs["w"] = o.w;
  return r;
}

inline void finish_report(Context& ctx, RunReport& report) {
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
  report.require_finite_residuals();
  if (!ctx.opt.report.empty()) write_report(ctx.opt.report, report);
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt(Complex z) { return fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") + fmt(std::abs(z.imag())) + "i"; }

// Check points for J(Phi) = c f_a: the preimages of tau_k = 0.5 exp(i theta_k). They are
// well inside the domain for any shape.
inline std::vector<Complex> identity_points(const AhlforsMap& f, const Tolerances& tol) {
  std::vector<Complex> pts;
  for (int k = 0; k < 8; ++k) {
    const auto [w1, w2] = preimages(f, std::polar(0.5, kTwoPi * (k + 0.25) / 8.0), tol);
    pts.push_back(w1);
    pts.push_back(w2);
  }
  return pts;
}

struct Pipeline {
  MapParameters params;
  std::optional<ConformalMapPhi> phi;
};

inline Pipeline pipeline(const Options& o, const TwoConnectedDomain& d, bool need_phi) {
  const auto tol = tolerances(o);
  const Complex seed = seed_of(o, d);
  Pipeline p;
  if (o.base_point.empty())
    p.params = map_parameters_from_seed(d, seed, labeling(o), tol, precision(o));
  else
    p.params = map_parameters(d, parse_complex(o.base_point, "--base-point"), seed, labeling(o), tol, precision(o));
  if (need_phi) p.phi.emplace(build_phi(p.params, tol));
  return p;
}

inline void put_parameters(RunReport& r, const MapParameters& p) {
  r.outputs["r"] = p.r;
  r.outputs["modulus"] = modulus(p);
  r.outputs["c"] = complex_json(p.c);
  r.outputs["lambda"] = complex_json(p.lambda);
  r.outputs["a"] = complex_json(p.base_point);
  r.outputs["p1"] = complex_json(p.p1);
  r.outputs["p2"] = complex_json(p.p2);
  r.outputs["precision"] = to_string(p.precision);
}

inline void put_phi_residuals(RunReport& r, const ConformalMapPhi& phi, const Tolerances& tol) {
  r.residuals["boundary"] = phi.boundary_residual();
  r.residuals["identity"] = phi_identity_residual(phi, identity_points(phi.ahlfors(), tol));
}

inline void print_parameters(std::ostream& out, const MapParameters& p) {
  out << "a        " << fmt(p.base_point) << '\n'
      << "p1       " << fmt(p.p1) << '\n'
      << "p2       " << fmt(p.p2) << '\n'
      << "c        " << fmt(p.c) << '\n'
      << "r        " << fmt(p.r) << '\n'
      << "modulus  " << fmt(modulus(p)) << '\n';
}

template <class Real>
inline int ahlfors_in(Context& ctx, const TwoConnectedDomain& d, Complex a, Tolerances tol) {
  const auto f = ahlfors_map<Real>(d, from_double<Real>(a), tol);
  const auto z = szego_zero(f.solution(), f.grid(), tol);
  const auto bp = branch_points(f, tol);
  const AhlforsMap fd = to_double_map(f, d);

  RunReport report = start_report("ahlfors", ctx.opt);
  report.outputs["a"] = complex_json(a);
  report.outputs["zeros"] = {complex_json(a), complex_json(to_double(z))};
  report.outputs["branch_points"] = {complex_json(to_double(bp.p1)), complex_json(to_double(bp.p2))};
  report.outputs["precision"] = std::is_same_v<Real, double> ? "standard" : "extended";
  double unimodular = 0.0;
  for (auto v : fd.values()) unimodular = std::max(unimodular, std::abs(std::abs(v) - 1.0));
  report.residuals["solve"] = f.solution().residual;
  report.residuals["unimodular"] = unimodular;

  if (!ctx.opt.out.empty()) {
    auto file = tcmap::detail::open_for_writing(ctx.opt.out);
    file << "curve_id,t,re_z,im_z,re_f,im_f\n";
    const auto& g = fd.grid();
    for (std::size_t j = 0; j < g.size(); ++j) {
      const bool outer = g.is_outer(j);
      const std::size_t n = outer ? g.outer_size : g.inner_size;
      const double t = kTwoPi * static_cast<double>(outer ? j : j - g.outer_size) / static_cast<double>(n);
      using tcmap::detail::fmt_double;
      file << (outer ? 0 : 1) << ',' << fmt_double(t) << ',' << fmt_double(g.nodes[j].real()) << ','
           << fmt_double(g.nodes[j].imag()) << ',' << fmt_double(fd.values()[j].real()) << ','
           << fmt_double(fd.values()[j].imag()) << '\n';
    }
    tcmap::detail::finish(file, ctx.opt.out);
  }
  finish_report(ctx, report);
  ctx.out << "a        " << fmt(a) << '\n'
          << "zeros    " << fmt(a) << ", " << fmt(to_double(z)) << '\n'
          << "branch   " << fmt(to_double(bp.p1)) << ", " << fmt(to_double(bp.p2)) << '\n';
  return kExitOk;
}

inline int cmd_ahlfors(Context& ctx) {
  const auto d = load(ctx.opt);
  const auto tol = tolerances(ctx.opt);
  const Complex a = ctx.opt.base_point.empty() ? seed_of(ctx.opt, d) : parse_complex(ctx.opt.base_point, "--base-point");
  if (detail::precision(ctx.opt) == Precision::automatic) {
    const auto resolved = tcmap::detail::resolve_precision(d, a, Precision::automatic, tol);
    if (resolved == Precision::extended) return ahlfors_in<Quad>(ctx, d, a, extended_tolerances(tol));
    return ahlfors_in<double>(ctx, d, a, tol);
  }
  if (detail::precision(ctx.opt) == Precision::extended) return ahlfors_in<Quad>(ctx, d, a, extended_tolerances(tol));
  return ahlfors_in<double>(ctx, d, a, tol);
}

inline MedianPolyline median_of(const Options& o, const MapParameters& params) {
  if (o.median_points < 0) throw UsageError("--median-points must be non-negative");
  if (o.median_points == 0) return {};
  if (o.median_points == 1) throw UsageError("--median-points needs 0 or at least 2");
  return trace_median(params, o.median_points, tolerances(o));
}

inline int cmd_map(Context& ctx) {
  const auto d = load(ctx.opt);
  const auto p = pipeline(ctx.opt, d, true);
  RunReport report = start_report("map", ctx.opt);
  put_parameters(report, p.params);
  put_phi_residuals(report, *p.phi, tolerances(ctx.opt));
  if (!ctx.opt.out.empty()) {
    const auto median = median_of(ctx.opt, p.params);
    const auto interior = interior_grid(d, 20, 0.1);
    emit_plot_data(*p.phi, median, ctx.opt.out, interior);
  }
  finish_report(ctx, report);
  print_parameters(ctx.out, p.params);
  ctx.out << "boundary " << fmt(report.residuals["boundary"].get<double>()) << '\n'
          << "identity " << fmt(report.residuals["identity"].get<double>()) << '\n';
  return kExitOk;
}

inline int cmd_median(Context& ctx) {
  const auto d = load(ctx.opt);
  const auto p = pipeline(ctx.opt, d, true);
  const auto median = median_of(ctx.opt, p.params);
  RunReport report = start_report("median", ctx.opt);
  put_parameters(report, p.params);
  put_phi_residuals(report, *p.phi, tolerances(ctx.opt));
  double off_circle = 0.0;
  for (std::size_t k = 0; k < median.points.size(); ++k)
    off_circle = std::max(off_circle, std::abs(p.params.ahlfors->operator()(median.points[k]) - median.tau_values[k]));
  report.residuals["median"] = off_circle;
  report.outputs["median_points"] = median.points.size();
  report.outputs["margin_adjustments"] = median.margin_adjustments;
  if (!ctx.opt.out.empty()) {
    auto file = tcmap::detail::open_for_writing(ctx.opt.out);
    write_median_csv(file, *p.phi, median);
    tcmap::detail::finish(file, ctx.opt.out);
  }
  finish_report(ctx, report);
  ctx.out << "median points " << median.points.size() << '\n' << "max |f - tau| " << fmt(off_circle) << '\n';
  return kExitOk;
}

inline int cmd_modulus(Context& ctx) {
  const auto d = load(ctx.opt);
  const auto p = pipeline(ctx.opt, d, false);
  RunReport report = start_report("modulus", ctx.opt);
  put_parameters(report, p.params);
  finish_report(ctx, report);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10f", modulus(p.params));
  ctx.out << buf << '\n';
  return kExitOk;
}

inline int cmd_kernel(Context& ctx) {
  if (ctx.opt.z.empty() || ctx.opt.w.empty()) throw UsageError("kernel needs --z and --w");
  const Complex z = parse_complex(ctx.opt.z, "--z");
  const Complex w = parse_complex(ctx.opt.w, "--w");
  const auto d = load(ctx.opt);
  const auto p = pipeline(ctx.opt, d, true);
  const auto consts = fit_constants(p.params.r);
  const auto k = bergman_omega(*p.phi, consts, z, w);
  RunReport report = start_report("kernel", ctx.opt);
  put_parameters(report, p.params);
  put_phi_residuals(report, *p.phi, tolerances(ctx.opt));
  report.residuals["kernel_fit"] = consts.residual;
  report.outputs["c1"] = complex_json(consts.c1);
  report.outputs["c2"] = complex_json(consts.c2);
  report.outputs["kernel"] = complex_json(k.value);
  finish_report(ctx, report);
  ctx.out << "K(z, w) " << fmt(k.value) << '\n';
  return kExitOk;
}

inline int cmd_verify(Context& ctx) {
  const auto results = run_acceptance(&ctx.out);
  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  ctx.out << passed << '/' << results.size() << " criteria passed\n";
  RunReport report = start_report("verify", ctx.opt);
  for (const auto& r : results) report.outputs["criterion_" + std::to_string(r.id)] = r.passed;
  finish_report(ctx, report);
  return passed == static_cast<long>(results.size()) ? kExitOk : kExitFailure;
}

}  // namespace detail

/// Runs one command line (without the program name).
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformal maps of two-connected domains onto A_r = {|z + 1/z| < 2r}", "tcmap"};
  app.require_subcommand(1);
  Options opt;
  const char* names[] = {"ahlfors", "map", "median", "modulus", "kernel", "verify"};
  const char* help[] = {"Ahlfors map at a base point: zeros, branch points, boundary values",
                        "conformal map Phi onto A_r with plot data",
                        "trace the median",
                        "print the modulus rho^2",
                        "Bergman kernel of the domain at (z, w)",
                        "run the built-in acceptance suite"};
  for (int i = 0; i < 6; ++i) {
    auto* sub = app.add_subcommand(names[i], help[i]);
    if (std::string(names[i]) != "verify") {
      sub->add_option("--domain", opt.domain, "domain-spec JSON file")->required();
      sub->add_option("--nodes", opt.nodes, "nodes per curve")->check(CLI::Range(64, 1 << 16));
      sub->add_option("--tol", opt.tol, "solver residual and boundary-zero tolerance")->check(CLI::PositiveNumber);
      sub->add_option("--seed-point", opt.seed_point, "seed point P as re,im (default: the reference point)");
      sub->add_option("--precision", opt.precision, "automatic, standard or extended")
          ->check(CLI::IsMember({"automatic", "standard", "extended"}));
      sub->add_option("--out", opt.out, "CSV output path");
    }
    sub->add_option("--report", opt.report, "JSON report path");
    const std::string name = names[i];
    if (name == "ahlfors" || name == "map" || name == "median" || name == "modulus" || name == "kernel") {
      if (name != "ahlfors")
        sub->add_option("--labeling", opt.labeling, "phi-a (Phi(a) = i) or lambda (arg lambda in [0, pi))")
            ->check(CLI::IsMember({"phi-a", "lambda"}));
      sub->add_option("--base-point", opt.base_point, "base point a as re,im (skips the seed stage)");
    }
    if (name == "map" || name == "median") sub->add_option("--median-points", opt.median_points, "sweep values");
    if (name == "kernel") {
      sub->add_option("--z", opt.z, "first point re,im");
      sub->add_option("--w", opt.w, "second point re,im");
    }
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run 'tcmap --help' for usage\n";
    return kExitUsage;
  }

  detail::Context ctx{opt, out, err};
  try {
    for (const char* name : names) {
      if (!app.got_subcommand(name)) continue;
      const std::string n = name;
      if (n == "ahlfors") return detail::cmd_ahlfors(ctx);
      if (n == "map") return detail::cmd_map(ctx);
      if (n == "median") return detail::cmd_median(ctx);
      if (n == "modulus") return detail::cmd_modulus(ctx);
      if (n == "kernel") return detail::cmd_kernel(ctx);
      return detail::cmd_verify(ctx);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace tcmap::cli

#endif  // TCMAP_CLI_HPP
