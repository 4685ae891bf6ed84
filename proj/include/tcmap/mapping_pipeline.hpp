#ifndef TCMAP_MAPPING_PIPELINE_HPP
#define TCMAP_MAPPING_PIPELINE_HPP

// Phi : Omega -> A_r from the Ahlfors map at a point of the median:
// J(Phi) = c f_a with c = -1/f_a(p1), realized through boundary values
// j_outer(c f_a) and j_inner(c f_a) and the Cauchy integral inside.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tcmap/domain_geometry.hpp"
#include "tcmap/error.hpp"
#include "tcmap/representative_domain.hpp"
#include "tcmap/szego_ahlfors.hpp"
#include "tcmap/types.hpp"

namespace tcmap {

/// How p1 and p2 are told apart. phi_a_equals_i picks the labeling for which
/// the Cauchy extension of Phi sends the base point to i. lambda_argument picks
/// the one with arg(lambda) in [0, pi).
enum class Labeling { phi_a_equals_i, lambda_argument };

/// Working precision of the kernel solves. automatic runs the seed solve in
/// double and moves to quadruple precision when the Szego kernel there spans
/// more than kEscalationRange between its smallest and largest boundary value.
enum class Precision { automatic, standard, extended };

inline constexpr double kEscalationRange = 1e-6;

inline const char* to_string(Precision p) {
  switch (p) {
    case Precision::standard: return "standard";
    case Precision::extended: return "extended";
    default: return "automatic";
  }
}

struct MapParameters {
  Complex seed_point{};
  Complex base_point{};
  Complex p1{};
  Complex p2{};
  Complex c{};
  double r = 0.0;
  Complex lambda{};
  Labeling labeling = Labeling::phi_a_equals_i;
  Precision precision = Precision::standard;  // the one actually used
  std::shared_ptr<const AhlforsMap> ahlfors;
};

namespace detail {

template <class Real>
inline Complex base_point_in(const TwoConnectedDomain& domain, Complex seed, const Tolerances& tol) {
  const auto f = ahlfors_map<Real>(domain, from_double<Real>(seed), tol);
  return to_double(branch_points(f, tol).p1);
}

inline Precision resolve_precision(const TwoConnectedDomain& domain, Complex seed, Precision precision,
                                   const Tolerances& tol) {
  if (precision != Precision::automatic) return precision;
  try {
    return szego_dynamic_range(solve_szego(domain, seed, tol)) < kEscalationRange ? Precision::extended
                                                                                  : Precision::standard;
  } catch (const BoundaryZeroError&) {
    return Precision::extended;
  }
}

}  // namespace detail

/// The branch point of f_P that comes first in (Re, Im) order. Both branch
/// points lie on the median.
inline Complex select_base_point(const TwoConnectedDomain& domain, Complex seed, const Tolerances& tol = {},
                                 Precision precision = Precision::automatic) {
  if (detail::resolve_precision(domain, seed, precision, tol) == Precision::extended)
    return detail::base_point_in<Quad>(domain, seed, extended_tolerances(tol));
  return detail::base_point_in<double>(domain, seed, tol);
}

namespace detail {

// Guard for |c f| > 1 relative to the gap r - 1, which is tiny for thin
// domains (|c f| = r on the whole boundary).
inline std::vector<Complex> phi_boundary_values(const AhlforsMap& f, Complex c) {
  const auto& grid = f.grid();
  const double gap = 0.5 * (std::abs(c) - 1.0);
  std::vector<Complex> phi(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Complex w = c * f.values()[j];
    if (!(std::abs(w) - 1.0 > gap))
      throw BranchCutError("c f(z) reaches the slit [-1, 1] at boundary node " + std::to_string(j));
    phi[j] = joukowsky_inverse(w, grid.is_outer(j) ? JoukowskyBranch::outer : JoukowskyBranch::inner);
  }
  return phi;
}

struct BranchData {
  Complex p1, p2, f1, f2;
  std::shared_ptr<const AhlforsMap> ahlfors;
};

// f_a, its branch points and the values there, in the working precision;
// only the results are rounded to double.
template <class Real>
inline BranchData branch_data(const TwoConnectedDomain& domain, Complex a, const Tolerances& tol) {
  const auto f = ahlfors_map<Real>(domain, from_double<Real>(a), tol);
  const auto bp = branch_points(f, tol);
  const auto f1 = f(bp.p1);
  const auto f2 = f(bp.p2);
  using std::abs;
  if (!(abs(f1) < Real(1)) || !(abs(f2) < Real(1))) throw ConsistencyError("|f_a| at a branch point is not below 1");
  if (abs(f1 + f2) > Real(tol.consistency) * std::max(Real(1), Real(abs(f1))))
    throw ConsistencyError("f_a(p1) + f_a(p2) = " + std::to_string(static_cast<double>(abs(f1 + f2))) +
                           " is not zero; the base point is off the median");
  return {to_double(bp.p1), to_double(bp.p2), to_double(f1), to_double(f2),
          std::make_shared<const AhlforsMap>(to_double_map(f, domain))};
}

}  // namespace detail

inline MapParameters map_parameters(const TwoConnectedDomain& domain, Complex a, Complex seed,
                                    Labeling labeling = Labeling::phi_a_equals_i, const Tolerances& tol = {},
                                    Precision precision = Precision::automatic) {
  precision = detail::resolve_precision(domain, seed, precision, tol);
  auto data = precision == Precision::extended ? detail::branch_data<Quad>(domain, a, extended_tolerances(tol))
                                               : detail::branch_data<double>(domain, a, tol);
  Complex p1 = data.p1, p2 = data.p2, f1 = data.f1, f2 = data.f2;
  const auto& f = data.ahlfors;

  Complex c = -1.0 / f1;
  bool swap = false;
  if (labeling == Labeling::phi_a_equals_i) {
    const Complex phi_a = cauchy_eval(detail::phi_boundary_values(*f, c), f->grid(), a);
    swap = phi_a.imag() < 0.0;
  } else {
    const Complex lam = c / std::abs(c);
    // arg in [0, pi): upper half-plane, or the positive real axis.
    const double angle_tol = 1e-12;
    const bool in_range = lam.imag() > angle_tol || (std::abs(lam.imag()) <= angle_tol && lam.real() > 0.0);
    swap = !in_range;
  }
  if (swap) {
    std::swap(p1, p2);
    std::swap(f1, f2);
    c = -1.0 / f1;
  }
  const double r = std::abs(c);
  if (!(r > 1.0)) throw ConsistencyError("r = |c| is not above 1");

  MapParameters p;
  p.seed_point = seed;
  p.base_point = a;
  p.p1 = p1;
  p.p2 = p2;
  p.c = c;
  p.r = r;
  p.lambda = c / r;
  p.labeling = labeling;
  p.precision = precision;
  p.ahlfors = f;
  return p;
}

/// Full parameter computation from a seed point: f_P, its branch point a,
/// then f_a and (p1, p2, c).
inline MapParameters map_parameters_from_seed(const TwoConnectedDomain& domain, Complex seed,
                                              Labeling labeling = Labeling::phi_a_equals_i,
                                              const Tolerances& tol = {},
                                              Precision precision = Precision::automatic) {
  precision = detail::resolve_precision(domain, seed, precision, tol);
  return map_parameters(domain, select_base_point(domain, seed, tol, precision), seed, labeling, tol, precision);
}

/// Boundary values of Phi and the Cauchy extension. Boundary d/dz values come
/// from differentiating J(Phi) = c f_a: Phi' = 2 c f_a' / (1 - Phi^-2), which
/// is regular on the boundary because |Phi| != 1 there.
class ConformalMapPhi {
 public:
  ConformalMapPhi(MapParameters params, std::vector<Complex> values, std::vector<Complex> derivatives)
      : params_(std::move(params)), values_(std::move(values)), derivatives_(std::move(derivatives)) {}

  const MapParameters& params() const noexcept { return params_; }
  const AhlforsMap& ahlfors() const noexcept { return *params_.ahlfors; }
  const QuadratureGrid& grid() const noexcept { return params_.ahlfors->grid(); }
  std::span<const Complex> boundary_values() const noexcept { return values_; }
  std::span<const Complex> boundary_derivatives() const noexcept { return derivatives_; }

  Complex operator()(Complex z) const { return cauchy_eval(values_, grid(), z); }
  /// Phi' from the Cauchy derivative of the boundary values.
  Complex cauchy_derivative(Complex z) const { return cauchy_derivative_eval(values_, grid(), z); }

  /// max over nodes of | |J(Phi)| - r |.
  double boundary_residual() const {
    double worst = 0.0;
    for (auto v : values_) worst = std::max(worst, std::abs(std::abs(joukowsky(v)) - params_.r));
    return worst;
  }

 private:
  MapParameters params_;
  std::vector<Complex> values_;
  std::vector<Complex> derivatives_;
};

inline ConformalMapPhi build_phi(const MapParameters& params, const Tolerances& tol = {}) {
  if (!params.ahlfors) throw ConsistencyError("map parameters carry no Ahlfors map");
  const AhlforsMap& f = *params.ahlfors;
  auto phi = detail::phi_boundary_values(f, params.c);
  std::vector<Complex> dphi(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j)
    dphi[j] = 2.0 * params.c * f.derivatives()[j] / (1.0 - 1.0 / (phi[j] * phi[j]));

  ConformalMapPhi result(params, std::move(phi), std::move(dphi));
  const double residual = result.boundary_residual();
  if (residual > tol.consistency * params.r)
    throw AccuracyError("| |J(Phi)| - r | = " + std::to_string(residual) + " on the boundary");
  if (params.labeling == Labeling::phi_a_equals_i) {
    const Complex at_a = result(params.base_point);
    if (std::abs(at_a - kI) > tol.consistency)
      throw ConsistencyError("Phi(a) = i fails by " + std::to_string(std::abs(at_a - kI)));
  }
  return result;
}

/// The median as an ordered polyline p1, arc A, p2, arc B: a closed loop.
struct MedianPolyline {
  std::vector<Complex> points;
  std::vector<Complex> tau_values;  // f_a at each point, on [-1/c, 1/c]
  std::vector<int> arc;             // 0 for the branch points, 1 or 2 for the arcs
  int margin_adjustments = 0;
};

namespace detail {

inline constexpr int kMaxMarginAdjustments = 20;

// Preimages of t / c, pulling t toward 0 while the two preimages are too close
// to separate.
inline std::pair<Complex, Complex> median_preimages(const MapParameters& params, double& t, const Tolerances& tol,
                                                    int& adjustments) {
  for (int attempt = 0;; ++attempt) {
    try {
      return preimages(*params.ahlfors, t / params.c, tol);
    } catch (const DegeneracyError&) {
      if (attempt >= kMaxMarginAdjustments) throw;
      t *= 1.0 - 1e-3 * std::ldexp(1.0, attempt);
      ++adjustments;
    }
  }
}

}  // namespace detail

/// Sweeps tau = t/c over n Chebyshev points t in (-1, 1), takes both
/// preimages of each tau and strings them into two arcs from p1 to p2 by
/// nearest continuation.
inline MedianPolyline trace_median(const MapParameters& params, int n, const Tolerances& tol = {}) {
  if (n < 2) throw DomainError("trace_median needs at least two sweep values");
  MedianPolyline out;
  std::vector<double> ts(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) ts[static_cast<std::size_t>(k)] = -std::cos(kPi * (k + 0.5) / n);

  std::vector<Complex> arc_a, arc_b, tau_a;
  Complex prev_a = params.p1, prev_b = params.p1;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double t = ts[k];
    auto [w1, w2] = detail::median_preimages(params, t, tol, out.margin_adjustments);
    if (k == 0) {
      if (lexicographic_less(w2, w1)) std::swap(w1, w2);
    } else if (std::abs(w1 - prev_a) + std::abs(w2 - prev_b) > std::abs(w2 - prev_a) + std::abs(w1 - prev_b)) {
      std::swap(w1, w2);
    }
    arc_a.push_back(w1);
    arc_b.push_back(w2);
    tau_a.push_back(t / params.c);
    prev_a = w1;
    prev_b = w2;
  }

  out.points.push_back(params.p1);
  out.tau_values.push_back(-1.0 / params.c);
  out.arc.push_back(0);
  for (std::size_t k = 0; k < arc_a.size(); ++k) {
    out.points.push_back(arc_a[k]);
    out.tau_values.push_back(tau_a[k]);
    out.arc.push_back(1);
  }
  out.points.push_back(params.p2);
  out.tau_values.push_back(1.0 / params.c);
  out.arc.push_back(0);
  for (std::size_t k = arc_b.size(); k-- > 0;) {
    out.points.push_back(arc_b[k]);
    out.tau_values.push_back(tau_a[k]);
    out.arc.push_back(2);
  }
  return out;
}

/// rho^2 of the annulus conformally equivalent to the domain.
inline double modulus(const MapParameters& params) {
  const double rho = rho_from_r(params.r);
  return rho * rho;
}

/// Points of an n x n grid over the bounding box of the outer curve that lie in
/// the domain at distance at least collar from every boundary node, and
/// outside the near-boundary guard of the Cauchy evaluator.
inline std::vector<Complex> interior_grid(const TwoConnectedDomain& domain, int n, double collar) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (auto z : domain.outer().samples()) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  const auto& g = domain.grid();
  std::vector<Complex> pts;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex z(x0 + (x1 - x0) * (i + 0.5) / n, y0 + (y1 - y0) * (j + 0.5) / n);
      if (!domain.contains(z)) continue;
      bool keep = true;
      for (std::size_t k = 0; k < g.size() && keep; ++k)
        keep = std::abs(g.nodes[k] - z) >= std::max(collar, kNearBoundaryGuard * g.ds[k]);
      if (keep) pts.push_back(z);
    }
  }
  return pts;
}

/// max over points of |J(Phi(z))/r - lambda f_a(z)|.
inline double phi_identity_residual(const ConformalMapPhi& phi, std::span<const Complex> points) {
  const auto& p = phi.params();
  double worst = 0.0;
  for (auto z : points)
    worst = std::max(worst, std::abs(joukowsky(phi(z)) / p.r - p.lambda * phi.ahlfors()(z)));
  return worst;
}

}  // namespace tcmap

#endif  // TCMAP_MAPPING_PIPELINE_HPP
