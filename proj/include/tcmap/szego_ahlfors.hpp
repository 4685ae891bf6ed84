#ifndef TCMAP_SZEGO_AHLFORS_HPP
#define TCMAP_SZEGO_AHLFORS_HPP

// Szego and Garabedian kernels of a two-connected region from the
// Kerzman-Stein integral equation, the Ahlfors map f_a = S(., a) / L(., a),
// and root location for f_a and f_a' by contour power sums.
//
// Generic in the real type. Quad is for domains whose Szego kernel decays by
// many orders of magnitude along the boundary (thin collars), where double
// leaves too few correct digits in the small boundary values.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tcmap/domain_geometry.hpp"
#include "tcmap/error.hpp"
#include "tcmap/types.hpp"

namespace tcmap {

/// Numerical guards shared by the solver and the root finders.
struct Tolerances {
  double solve_residual = 1e-10;   // relative residual of the Nystrom solve
  double boundary_zero = 1e-8;     // min |g| on the boundary, relative to max |g|
  double degeneracy = 1e-10;       // |discriminant| relative to the root scale
  double consistency = 1e-6;       // f(a) = 0, |f| = 1 and similar checks
  double integer_residue = 1e-6;   // argument-principle integrals
};

/// The precision-bound guards moved to quadruple precision.
inline Tolerances extended_tolerances(Tolerances tol) {
  tol.solve_residual = std::min(tol.solve_residual, 1e-26);
  tol.boundary_zero = std::min(tol.boundary_zero, 1e-20);
  return tol;
}

/// Boundary values of S(z, a) and L(z, a) on every grid node.
template <class Real>
struct BasicSzegoSolution {
  BasicComplex<Real> base_point{};
  std::vector<BasicComplex<Real>> szego;
  std::vector<BasicComplex<Real>> garabedian;
  double residual = 0.0;
  int refinement_steps = 0;
  std::shared_ptr<const BasicQuadratureGrid<Real>> grid;
};

using SzegoSolution = BasicSzegoSolution<double>;

namespace detail {

template <class Real>
inline Real max_abs(std::span<const BasicComplex<Real>> v) {
  using std::abs;
  Real m = 0;
  for (const auto& x : v) m = std::max(m, Real(abs(x)));
  return m;
}

template <class Real>
inline Real norm2(std::span<const BasicComplex<Real>> v) {
  using std::sqrt;
  Real s = 0;
  for (const auto& x : v) s += std::norm(x);
  return sqrt(s);
}

inline constexpr int kMaxRefinementSteps = 8;

}  // namespace detail

/// Solves the discretized Kerzman-Stein equation
///   S(w, a) - integral A(w, z) S(z, a) ds_z = conj(H(a, w)),
///   H(a, z) = T(z) / (2 pi i (z - a)),  A(w, z) = H(w, z) - conj(H(z, w)),
/// for w on the boundary. A is smooth with A(w, w) = 0. The system is
/// symmetrized with sqrt(ds) weights, so the matrix is the identity plus a
/// skew-Hermitian part. L(z, a) = i conj(S(z, a) T(z)) pointwise.
///
/// The matrix is factored in double; wider types get iterative refinement
/// with residuals in the working precision.
template <class Real = double>
inline BasicSzegoSolution<Real> solve_szego(const TwoConnectedDomain& domain,
                                            const BasicComplex<std::type_identity_t<Real>>& a,
                                            const Tolerances& tol = {},
                                            std::shared_ptr<const BasicQuadratureGrid<Real>> grid = nullptr) {
  using C = BasicComplex<Real>;
  using std::sqrt;
  const Complex ad = to_double(a);
  if (!domain.contains(ad))
    throw DomainError("base point (" + std::to_string(ad.real()) + ", " + std::to_string(ad.imag()) +
                      ") is not inside the domain");
  if (!grid) grid = make_grid<Real>(domain);
  const auto& g = *grid;
  require_interior(g, a);
  const std::size_t n = g.size();
  const auto en = static_cast<Eigen::Index>(n);
  const C inv_two_pi_i = C(Real(1)) / C(Real(0), Real(2) * pi_v<Real>());

  std::vector<Real> sqrt_ds(n);
  for (std::size_t i = 0; i < n; ++i) sqrt_ds[i] = sqrt(g.ds[i]);

  constexpr bool wide = !std::is_same_v<Real, double>;
  std::vector<C> mq;  // working-precision copy, only needed for refinement
  if constexpr (wide) mq.resize(n * n);
  Eigen::MatrixXcd md(en, en);
  auto put = [&](std::size_t i, std::size_t j, const C& entry) {
    md(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(entry);
    if constexpr (wide) mq[i * n + j] = entry;
  };
  // A(z, w) = -conj(A(w, z)): fill one triangle.
  for (std::size_t j = 0; j < n; ++j) {
    const C zj = g.nodes[j];
    const C tj = g.tangent[j];
    put(j, j, C(Real(1)));
    for (std::size_t i = j + 1; i < n; ++i) {
      const C d = zj - g.nodes[i];
      const C kernel = inv_two_pi_i * (tj / d - std::conj(g.tangent[i]) / std::conj(d));
      const C entry = -(sqrt_ds[i] * sqrt_ds[j]) * kernel;
      put(i, j, entry);
      put(j, i, -std::conj(entry));
    }
  }
  std::vector<C> rhs(n);
  for (std::size_t i = 0; i < n; ++i)
    rhs[i] = sqrt_ds[i] * std::conj(inv_two_pi_i * g.tangent[i] / (g.nodes[i] - a));
  const Real rhs_norm = detail::norm2<Real>(rhs);

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(md);
  std::vector<C> x(n);
  std::vector<C> res(rhs);
  double rel = std::numeric_limits<double>::infinity();
  int steps = 0;
  for (;;) {
    Eigen::VectorXcd r(en);
    for (std::size_t i = 0; i < n; ++i) r(static_cast<Eigen::Index>(i)) = to_double(res[i]);
    const Eigen::VectorXcd dx = lu.solve(r);
    for (std::size_t i = 0; i < n; ++i) x[i] += from_double<Real>(dx(static_cast<Eigen::Index>(i)));
    if constexpr (wide) {
      for (std::size_t i = 0; i < n; ++i) {
        C s = rhs[i];
        const C* row = &mq[i * n];
        for (std::size_t j = 0; j < n; ++j) s -= row[j] * x[j];
        res[i] = s;
      }
    } else {
      const Eigen::Map<const Eigen::VectorXcd> xv(x.data(), en);
      const Eigen::Map<const Eigen::VectorXcd> bv(rhs.data(), en);
      const Eigen::VectorXcd rv = bv - md * xv;
      for (std::size_t i = 0; i < n; ++i) res[i] = rv(static_cast<Eigen::Index>(i));
    }
    const double next = static_cast<double>(detail::norm2<Real>(res) / rhs_norm);
    ++steps;
    const bool stalled = !(next < 0.5 * rel);
    rel = std::min(rel, next);
    if (rel <= tol.solve_residual || stalled || steps >= detail::kMaxRefinementSteps) break;
  }
  if (!(rel <= tol.solve_residual)) throw ConvergenceError("Kerzman-Stein system", rel);

  BasicSzegoSolution<Real> sol;
  sol.base_point = a;
  sol.residual = rel;
  sol.refinement_steps = steps - 1;
  sol.grid = grid;
  sol.szego.resize(n);
  sol.garabedian.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sol.szego[i] = x[i] / sqrt_ds[i];
    sol.garabedian[i] = imag_unit<Real>() * std::conj(sol.szego[i] * g.tangent[i]);
  }
  const Real smax = detail::max_abs<Real>(sol.szego);
  using std::abs;
  for (const auto& s : sol.szego)
    if (!(abs(s) > Real(tol.boundary_zero) * smax)) throw BoundaryZeroError("Szego kernel vanishes on the boundary");
  return sol;
}

/// min |S| / max |S| over the boundary nodes.
template <class Real>
inline double szego_dynamic_range(const BasicSzegoSolution<Real>& sol) {
  using std::abs;
  Real lo = std::numeric_limits<Real>::infinity();
  for (const auto& s : sol.szego) lo = std::min(lo, Real(abs(s)));
  return static_cast<double>(lo / detail::max_abs<Real>(sol.szego));
}

/// The Ahlfors map f_a: boundary values, boundary d/dz values, and interior
/// evaluation through the Cauchy integral.
template <class Real>
class BasicAhlforsMap {
 public:
  using C = BasicComplex<Real>;

  BasicAhlforsMap(BasicSzegoSolution<Real> solution, std::vector<C> values, std::vector<C> derivatives, C phase)
      : solution_(std::move(solution)),
        values_(std::move(values)),
        derivatives_(std::move(derivatives)),
        phase_(phase) {}

  C base_point() const noexcept { return solution_.base_point; }
  std::span<const C> values() const noexcept { return values_; }
  std::span<const C> derivatives() const noexcept { return derivatives_; }
  /// Unimodular factor applied to S/L so that f_a'(a) > 0.
  C phase() const noexcept { return phase_; }
  const BasicSzegoSolution<Real>& solution() const noexcept { return solution_; }
  const BasicQuadratureGrid<Real>& grid() const noexcept { return *solution_.grid; }
  std::shared_ptr<const BasicQuadratureGrid<Real>> shared_grid() const noexcept { return solution_.grid; }

  C operator()(const C& z) const { return cauchy_eval<Real>(values_, grid(), z); }
  C derivative(const C& z) const { return cauchy_derivative_eval<Real>(values_, grid(), z); }

 private:
  BasicSzegoSolution<Real> solution_;
  std::vector<C> values_;
  std::vector<C> derivatives_;
  C phase_;
};

using AhlforsMap = BasicAhlforsMap<double>;

/// f_a = S/L rotated so that f_a'(a) > 0, then checked: unimodular on the
/// boundary, two zeros, f_a(a) = 0.
template <class Real>
inline BasicAhlforsMap<Real> ahlfors_from_solution(BasicSzegoSolution<Real> sol, const Tolerances& tol = {}) {
  using C = BasicComplex<Real>;
  using std::abs;
  const auto& g = *sol.grid;
  const C a = sol.base_point;
  std::vector<C> f(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = sol.szego[j] / sol.garabedian[j];

  const C raw_slope = cauchy_derivative_eval<Real>(f, g, a);
  if (!(abs(raw_slope) > Real(0))) throw AccuracyError("Ahlfors map has vanishing derivative at its base point");
  const C phase = std::conj(raw_slope) / abs(raw_slope);
  for (auto& v : f) v *= phase;
  auto df = boundary_derivative_dz<Real>(f, g);

  double unimodular = 0.0;
  for (const auto& v : f) unimodular = std::max(unimodular, std::abs(static_cast<double>(abs(v)) - 1.0));
  if (unimodular > tol.consistency)
    throw AccuracyError("Ahlfors boundary values deviate from the unit circle by " + std::to_string(unimodular));
  const long zeros = winding_count<Real>(f, df, g, tol.boundary_zero, tol.integer_residue);
  if (zeros != 2) throw AccuracyError("Ahlfors map has " + std::to_string(zeros) + " zeros, expected 2");
  const double at_base = static_cast<double>(abs(cauchy_eval<Real>(f, g, a)));
  if (at_base > tol.consistency)
    throw AccuracyError("Ahlfors map does not vanish at its base point (|f(a)| = " + std::to_string(at_base) + ")");
  return BasicAhlforsMap<Real>(std::move(sol), std::move(f), std::move(df), phase);
}

template <class Real = double>
inline BasicAhlforsMap<Real> ahlfors_map(const TwoConnectedDomain& domain,
                                         const BasicComplex<std::type_identity_t<Real>>& a,
                                         const Tolerances& tol = {},
                                         std::shared_ptr<const BasicQuadratureGrid<Real>> grid = nullptr) {
  return ahlfors_from_solution(solve_szego<Real>(domain, a, tol, std::move(grid)), tol);
}

/// The same map rounded to double, on the domain's own grid.
template <class Real>
inline AhlforsMap to_double_map(const BasicAhlforsMap<Real>& map, const TwoConnectedDomain& domain) {
  if constexpr (std::is_same_v<Real, double>) {
    return map;
  } else {
    auto round = [](std::span<const BasicComplex<Real>> v) {
      std::vector<Complex> out(v.size());
      for (std::size_t j = 0; j < v.size(); ++j) out[j] = to_double(v[j]);
      return out;
    };
    SzegoSolution sol;
    sol.base_point = to_double(map.solution().base_point);
    sol.szego = round(map.solution().szego);
    sol.garabedian = round(map.solution().garabedian);
    sol.residual = map.solution().residual;
    sol.refinement_steps = map.solution().refinement_steps;
    sol.grid = domain.shared_grid();
    return AhlforsMap(std::move(sol), round(map.values()), round(map.derivatives()), to_double(map.phase()));
  }
}

/// The zero of S(., a) in the region, which is the second zero of f_a:
///   Z(a) = (1/2 pi i) closed integral of z S'(z, a) / S(z, a) dz.
template <class Real>
inline BasicComplex<Real> szego_zero(const BasicSzegoSolution<Real>& solution, const BasicQuadratureGrid<Real>& grid,
                                     const Tolerances& tol = {}) {
  using C = BasicComplex<Real>;
  using std::abs;
  const auto ds = boundary_derivative_dz<Real>(solution.szego, grid);
  const long count = winding_count<Real>(solution.szego, ds, grid, tol.boundary_zero, tol.integer_residue);
  if (count != 1) throw AccuracyError("Szego kernel has " + std::to_string(count) + " zeros, expected 1");
  std::vector<C> integrand(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) integrand[j] = grid.nodes[j] * ds[j] / solution.szego[j];
  const C zero = grid.contour_integral(integrand);

  std::vector<C> f(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) f[j] = solution.szego[j] / solution.garabedian[j];
  const double check = static_cast<double>(abs(cauchy_eval<Real>(f, grid, zero)));
  if (check > tol.consistency)
    throw AccuracyError("Szego zero fails the consistency check (|f(Z)| = " + std::to_string(check) + ")");
  return zero;
}

/// The two roots of z^2 - A z + B from the power sums s1 = p1 + p2 and
/// s2 = p1^2 + p2^2 (Newton identities), ordered lexicographically.
template <class Real = double>
inline std::pair<BasicComplex<Real>, BasicComplex<Real>> roots_from_power_sums(
    const BasicComplex<std::type_identity_t<Real>>& s1, const BasicComplex<std::type_identity_t<Real>>& s2,
    double degeneracy_tol = 1e-10) {
  using C = BasicComplex<Real>;
  using std::abs;
  const C half(Real(1) / Real(2));
  const C sum = s1;
  const C product = half * (s1 * s1 - s2);
  const C disc = sum * sum - C(Real(4)) * product;
  const Real scale = std::max({Real(1), Real(std::norm(sum)), Real(abs(product))});
  if (abs(disc) < Real(degeneracy_tol) * scale)
    throw DegeneracyError("the two roots coincide (|discriminant| = " +
                          std::to_string(static_cast<double>(abs(disc))) + ")");
  const C root = std::sqrt(disc);
  C p = half * (sum + root);
  C q = half * (sum - root);
  if (lexicographic_less(q, p)) std::swap(p, q);
  return {p, q};
}

template <class Real>
struct BasicBranchPair {
  BasicComplex<Real> p1{};
  BasicComplex<Real> p2{};
};

using BranchPair = BasicBranchPair<double>;

namespace detail {

// Power sums over the two zeros of g inside the region, g_dz = dg/dz on the
// nodes: sum_k w_k^n = (1/2 pi i) closed integral of g' z^n / g dz.
template <class Real>
inline std::pair<BasicComplex<Real>, BasicComplex<Real>> two_root_power_sums(
    std::span<const BasicComplex<Real>> g, std::span<const BasicComplex<Real>> g_dz,
    const BasicQuadratureGrid<Real>& grid, const Tolerances& tol, const char* what) {
  const long count = winding_count<Real>(g, g_dz, grid, tol.boundary_zero, tol.integer_residue);
  if (count != 2)
    throw AccuracyError(std::string(what) + " has " + std::to_string(count) + " zeros in the domain, expected 2");
  std::vector<BasicComplex<Real>> first(grid.size()), second(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    first[j] = g_dz[j] / g[j] * grid.nodes[j];
    second[j] = first[j] * grid.nodes[j];
  }
  return {grid.contour_integral(first), grid.contour_integral(second)};
}

}  // namespace detail

/// The two critical points of f_a inside the region.
template <class Real>
inline BasicBranchPair<Real> branch_points(const BasicAhlforsMap<Real>& map, const Tolerances& tol = {}) {
  const auto& grid = map.grid();
  const auto fpp = boundary_derivative_dz<Real>(map.derivatives(), grid);
  const auto [s1, s2] = detail::two_root_power_sums<Real>(map.derivatives(), fpp, grid, tol, "f'");
  const auto [p1, p2] = roots_from_power_sums<Real>(s1, s2, tol.degeneracy);
  return {p1, p2};
}

/// The two solutions of f_a(w) = tau, |tau| < 1.
template <class Real>
inline std::pair<BasicComplex<Real>, BasicComplex<Real>> preimages(
    const BasicAhlforsMap<Real>& map, const BasicComplex<std::type_identity_t<Real>>& tau, const Tolerances& tol = {}) {
  using std::abs;
  if (!(abs(tau) < Real(1))) throw DomainError("preimages need |tau| < 1");
  const auto& grid = map.grid();
  std::vector<BasicComplex<Real>> shifted(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) shifted[j] = map.values()[j] - tau;
  const auto [s1, s2] = detail::two_root_power_sums<Real>(shifted, map.derivatives(), grid, tol, "f - tau");
  return roots_from_power_sums<Real>(s1, s2, tol.degeneracy);
}

}  // namespace tcmap

#endif  // TCMAP_SZEGO_AHLFORS_HPP
