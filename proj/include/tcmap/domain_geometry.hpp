#ifndef TCMAP_DOMAIN_GEOMETRY_HPP
#define TCMAP_DOMAIN_GEOMETRY_HPP

// Boundary discretization of a two-connected planar region: two smooth closed
// curves sampled at equispaced parameters, the periodic trapezoidal rule on
// them, and the Cauchy integral that turns boundary traces into interior
// values.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "tcmap/error.hpp"
#include "tcmap/spectral.hpp"
#include "tcmap/types.hpp"

namespace tcmap {

enum class CurveRole { outer, inner };

inline const char* to_string(CurveRole role) { return role == CurveRole::outer ? "outer" : "inner"; }

inline constexpr std::size_t kMinCurveNodes = 64;

/// A closed curve sampled at t_j = 2*pi*j/N together with z'(t_j).
class Curve {
 public:
  Curve(std::vector<Complex> samples, std::vector<Complex> derivatives, CurveRole role,
        std::vector<FourierTerm> terms = {})
      : samples_(std::move(samples)), derivatives_(std::move(derivatives)), terms_(std::move(terms)), role_(role) {
    const std::string name = to_string(role_);
    if (samples_.size() != derivatives_.size())
      throw GeometryError(name + " curve: sample and derivative counts differ");
    if (samples_.size() < kMinCurveNodes || samples_.size() % 2 != 0)
      throw GeometryError(name + " curve: node count must be even and at least " +
                          std::to_string(kMinCurveNodes) + ", got " + std::to_string(samples_.size()));
    double max_speed = 0.0;
    double min_speed = std::numeric_limits<double>::infinity();
    for (auto d : derivatives_) {
      max_speed = std::max(max_speed, std::abs(d));
      min_speed = std::min(min_speed, std::abs(d));
    }
    if (!(min_speed > 1e-12 * max_speed) || !(max_speed > 0.0))
      throw GeometryError(name + " curve: parametrization is not regular (|z'(t)| vanishes)");
  }

  std::size_t size() const noexcept { return samples_.size(); }
  std::span<const Complex> samples() const noexcept { return samples_; }
  std::span<const Complex> derivatives() const noexcept { return derivatives_; }
  CurveRole role() const noexcept { return role_; }
  /// Fourier series the samples came from; empty when only samples are known.
  std::span<const FourierTerm> fourier_terms() const noexcept { return terms_; }
  double step() const noexcept { return kTwoPi / static_cast<double>(samples_.size()); }

  /// Same curve traversed backwards: t -> -t.
  Curve reversed() const {
    const std::size_t n = size();
    std::vector<Complex> z(n), dz(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = (n - j) % n;
      z[j] = samples_[k];
      dz[j] = -derivatives_[k];
    }
    std::vector<FourierTerm> terms(terms_.begin(), terms_.end());
    for (auto& term : terms) term.n = -term.n;
    return Curve(std::move(z), std::move(dz), role_, std::move(terms));
  }

  /// Positive for counterclockwise curves.
  double signed_area() const {
    Complex s{};
    for (std::size_t j = 0; j < size(); ++j) s += std::conj(samples_[j]) * derivatives_[j];
    return 0.5 * s.imag() * step();
  }

  /// (1/2 pi i) * closed integral of dz / (z - p).
  double winding_about(Complex p) const {
    Complex s{};
    for (std::size_t j = 0; j < size(); ++j) s += derivatives_[j] / (samples_[j] - p);
    return (s * step() / (kTwoPi * kI)).real();
  }

 private:
  std::vector<Complex> samples_;
  std::vector<Complex> derivatives_;
  std::vector<FourierTerm> terms_;
  CurveRole role_;
};

/// Samples z(t) = sum c_n exp(i n t) with exact derivatives.
inline Curve curve_from_fourier(std::span<const FourierTerm> terms, std::size_t nodes, CurveRole role) {
  std::vector<Complex> z(nodes), dz(nodes);
  const double h = kTwoPi / static_cast<double>(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double t = h * static_cast<double>(j);
    z[j] = fourier_value(terms, t);
    dz[j] = fourier_derivative(terms, t);
  }
  return Curve(std::move(z), std::move(dz), role, std::vector<FourierTerm>(terms.begin(), terms.end()));
}

/// Resamples raw equispaced samples through their trigonometric interpolant.
inline Curve curve_from_samples(std::span<const Complex> samples, std::size_t nodes, CurveRole role) {
  if (samples.size() < 3) throw GeometryError(std::string(to_string(role)) + " curve: too few samples");
  const auto terms = fourier_coefficients(samples);
  return curve_from_fourier(terms, nodes, role);
}

/// Trapezoidal-rule weights over both curves, outer nodes first.
template <class Real>
struct BasicQuadratureGrid {
  using C = BasicComplex<Real>;
  std::vector<C> nodes;
  std::vector<C> dz;        // z'(t_j) * h, weights for closed integrals of g dz
  std::vector<Real> ds;     // |z'(t_j)| * h, arc-length weights and local node spacing
  std::vector<C> tangent;   // unit tangent z'/|z'|
  std::vector<C> velocity;  // z'(t_j)
  std::size_t outer_size = 0;
  std::size_t inner_size = 0;

  std::size_t size() const noexcept { return nodes.size(); }
  bool is_outer(std::size_t j) const noexcept { return j < outer_size; }

  template <class T>
  std::span<const T> outer_part(std::span<const T> v) const { return v.first(outer_size); }
  template <class T>
  std::span<const T> inner_part(std::span<const T> v) const { return v.subspan(outer_size, inner_size); }

  void push(C z, C d, Real h) {
    using std::abs;
    const Real speed = abs(d);
    nodes.push_back(z);
    dz.push_back(d * h);
    ds.push_back(speed * h);
    tangent.push_back(d / speed);
    velocity.push_back(d);
  }

  /// Sum over nodes of g_j * dz_j / (2 pi i).
  C contour_integral(std::span<const C> g) const {
    C s{};
    for (std::size_t j = 0; j < size(); ++j) s += g[j] * dz[j];
    return s / C(Real(0), Real(2) * pi_v<Real>());
  }
};

using QuadratureGrid = BasicQuadratureGrid<double>;

/// The region between two nested smooth Jordan curves. The constructor orients
/// the outer curve counterclockwise and the inner one clockwise so the region
/// lies to the left of both.
class TwoConnectedDomain {
 public:
  TwoConnectedDomain(Curve outer, Curve inner, std::optional<Complex> reference_point = std::nullopt)
      : outer_(orient(std::move(outer), true)), inner_(orient(std::move(inner), false)) {
    if (outer_.role() != CurveRole::outer || inner_.role() != CurveRole::inner)
      throw GeometryError("curve roles must be (outer, inner)");
    for (auto z : inner_.samples()) {
      if (std::lround(outer_.winding_about(z)) != 1)
        throw GeometryError("nesting violated: inner curve is not enclosed by the outer curve");
    }
    for (auto z : outer_.samples()) {
      if (std::lround(inner_.winding_about(z)) != 0)
        throw GeometryError("nesting violated: outer curve enters the inner curve");
    }
    build_grid();
    if (reference_point) {
      if (std::lround(outer_.winding_about(*reference_point)) != 1 ||
          std::lround(inner_.winding_about(*reference_point)) != 0)
        throw GeometryError("reference point is not inside the domain");
      reference_ = *reference_point;
    } else {
      reference_ = derive_reference_point();
    }
  }

  const Curve& outer() const noexcept { return outer_; }
  const Curve& inner() const noexcept { return inner_; }
  Complex reference_point() const noexcept { return reference_; }
  const QuadratureGrid& grid() const noexcept { return *grid_; }
  std::shared_ptr<const QuadratureGrid> shared_grid() const noexcept { return grid_; }

  /// Sum of the winding numbers of both oriented curves about z: 1 inside the
  /// region, 0 outside it and in the hole.
  long winding_number(Complex z) const {
    return std::lround(outer_.winding_about(z) + inner_.winding_about(z));
  }
  bool contains(Complex z) const { return winding_number(z) == 1; }

 private:
  static Curve orient(Curve c, bool counterclockwise) {
    const bool ccw = c.signed_area() > 0.0;
    return ccw == counterclockwise ? std::move(c) : c.reversed();
  }

  void build_grid() {
    auto g = std::make_shared<QuadratureGrid>();
    g->outer_size = outer_.size();
    g->inner_size = inner_.size();
    for (const Curve* c : {&outer_, &inner_})
      for (std::size_t j = 0; j < c->size(); ++j) g->push(c->samples()[j], c->derivatives()[j], c->step());
    grid_ = std::move(g);
  }

  Complex derive_reference_point() const {
    // Midpoints between inner samples and their nearest outer sample.
    for (std::size_t j = 0; j < inner_.size(); j += std::max<std::size_t>(1, inner_.size() / 16)) {
      const Complex zi = inner_.samples()[j];
      Complex best = outer_.samples()[0];
      for (auto zo : outer_.samples())
        if (std::abs(zo - zi) < std::abs(best - zi)) best = zo;
      const Complex mid = 0.5 * (zi + best);
      if (contains(mid)) return mid;
    }
    throw GeometryError("could not derive a reference point inside the domain");
  }

  Curve outer_;
  Curve inner_;
  Complex reference_{};
  std::shared_ptr<const QuadratureGrid> grid_;
};

/// The quadrature grid of the domain in another precision. Curves that carry
/// their Fourier series are re-evaluated in that precision; sampled curves are
/// converted.
template <class Real>
inline std::shared_ptr<const BasicQuadratureGrid<Real>> make_grid(const TwoConnectedDomain& domain) {
  if constexpr (std::is_same_v<Real, double>) {
    return domain.shared_grid();
  } else {
    using C = BasicComplex<Real>;
    auto g = std::make_shared<BasicQuadratureGrid<Real>>();
    g->outer_size = domain.outer().size();
    g->inner_size = domain.inner().size();
    for (const Curve* c : {&domain.outer(), &domain.inner()}) {
      const std::size_t n = c->size();
      const Real h = Real(2) * pi_v<Real>() / Real(n);
      for (std::size_t j = 0; j < n; ++j) {
        if (c->fourier_terms().empty()) {
          g->push(from_double<Real>(c->samples()[j]), from_double<Real>(c->derivatives()[j]), h);
        } else {
          const Real t = h * Real(j);
          const C z = fourier_value<Real>(c->fourier_terms(), t);
          const C d = fourier_derivative<Real>(c->fourier_terms(), t);
          g->push(z, d, h);
        }
      }
    }
    return g;
  }
}

/// d/dt of values sampled on one curve (spectral).
template <class Real = double>
inline std::vector<BasicComplex<Real>> boundary_derivative(std::span<const BasicComplex<std::type_identity_t<Real>>> values) {
  if (values.size() % 2 != 0) throw DomainError("boundary_derivative: odd number of nodes");
  return spectral_derivative<Real>(values);
}

/// d/dz of boundary traces on both curves: spectral d/dt divided by z'(t).
template <class Real>
inline std::vector<BasicComplex<Real>> boundary_derivative_dz(std::span<const BasicComplex<std::type_identity_t<Real>>> values,
                                                              const BasicQuadratureGrid<Real>& grid) {
  std::vector<BasicComplex<Real>> out;
  out.reserve(values.size());
  for (auto part : {grid.outer_part(values), grid.inner_part(values)}) {
    const auto d = boundary_derivative<Real>(part);
    out.insert(out.end(), d.begin(), d.end());
  }
  for (std::size_t j = 0; j < out.size(); ++j) out[j] /= grid.velocity[j];
  return out;
}

/// Multiplier for the near-boundary guard: interior points must be at least
/// this many local node spacings away from every node.
inline constexpr double kNearBoundaryGuard = 2.0;

template <class Real>
inline void require_interior(const BasicQuadratureGrid<Real>& grid, const BasicComplex<std::type_identity_t<Real>>& z) {
  using std::abs;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (abs(z - grid.nodes[j]) < Real(kNearBoundaryGuard) * grid.ds[j]) {
      const Complex zd = to_double(z);
      throw NearBoundaryError("point (" + std::to_string(zd.real()) + ", " + std::to_string(zd.imag()) +
                              ") lies within " + std::to_string(kNearBoundaryGuard) +
                              " node spacings of the boundary");
    }
  }
}

namespace detail {

// Sum of dz_j / (zeta_j - z); equals 2 pi i for interior points.
template <class Real>
inline BasicComplex<Real> cauchy_denominator(const BasicQuadratureGrid<Real>& grid, const BasicComplex<Real>& z) {
  BasicComplex<Real> den{};
  for (std::size_t j = 0; j < grid.size(); ++j) den += grid.dz[j] / (grid.nodes[j] - z);
  return den;
}

template <class Real>
inline void require_inside(const BasicComplex<Real>& den, const BasicComplex<Real>& z) {
  const double winding = (to_double(den) / (kTwoPi * kI)).real();
  if (std::lround(winding) != 1) {
    const Complex zd = to_double(z);
    throw DomainError("point (" + std::to_string(zd.real()) + ", " + std::to_string(zd.imag()) +
                      ") is not inside the domain");
  }
}

}  // namespace detail

/// Interior value of a holomorphic function from its boundary trace:
/// (1/2 pi i) closed integral of f(zeta) / (zeta - z) d zeta over both curves.
/// Evaluated in barycentric form (numerator divided by the same rule applied
/// to f = 1), which keeps the quadrature accurate closer to the boundary.
template <class Real>
inline BasicComplex<Real> cauchy_eval(std::span<const BasicComplex<std::type_identity_t<Real>>> boundary_values,
                                      const BasicQuadratureGrid<Real>& grid,
                                      const BasicComplex<std::type_identity_t<Real>>& z) {
  require_interior(grid, z);
  BasicComplex<Real> num{};
  for (std::size_t j = 0; j < grid.size(); ++j) num += boundary_values[j] * grid.dz[j] / (grid.nodes[j] - z);
  const auto den = detail::cauchy_denominator(grid, z);
  detail::require_inside(den, z);
  return num / den;
}

/// Derivative of the barycentric Cauchy interpolant at an interior point.
template <class Real>
inline BasicComplex<Real> cauchy_derivative_eval(
    std::span<const BasicComplex<std::type_identity_t<Real>>> boundary_values, const BasicQuadratureGrid<Real>& grid,
    const BasicComplex<std::type_identity_t<Real>>& z) {
  const auto fz = cauchy_eval(boundary_values, grid, z);
  BasicComplex<Real> num{};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto d = grid.nodes[j] - z;
    num += (boundary_values[j] - fz) * grid.dz[j] / (d * d);
  }
  return num / detail::cauchy_denominator(grid, z);
}

/// Number of zeros of f inside the region, by the argument principle.
/// f_deriv holds d/dz values on the nodes.
template <class Real>
inline long winding_count(std::span<const BasicComplex<std::type_identity_t<Real>>> f_boundary,
                          std::span<const BasicComplex<std::type_identity_t<Real>>> f_deriv_boundary,
                          const BasicQuadratureGrid<Real>& grid, double zero_tol = 1e-8, double residue_tol = 1e-6) {
  using std::abs;
  Real fmax = 0;
  Real fmin = std::numeric_limits<Real>::infinity();
  for (const auto& v : f_boundary) {
    fmax = std::max(fmax, Real(abs(v)));
    fmin = std::min(fmin, Real(abs(v)));
  }
  if (!(fmin > Real(zero_tol) * std::max(fmax, Real(1))))
    throw BoundaryZeroError("function vanishes on the boundary (min |f| = " + std::to_string(static_cast<double>(fmin)) +
                            ")");
  std::vector<BasicComplex<Real>> g(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) g[j] = f_deriv_boundary[j] / f_boundary[j];
  const Complex count = to_double(grid.contour_integral(g));
  const long rounded = std::lround(count.real());
  if (std::abs(count - static_cast<double>(rounded)) > residue_tol)
    throw AccuracyError("argument-principle integral is not an integer: " + std::to_string(count.real()) +
                        " + " + std::to_string(count.imag()) + "i");
  return rounded;
}

}  // namespace tcmap

#endif  // TCMAP_DOMAIN_GEOMETRY_HPP
