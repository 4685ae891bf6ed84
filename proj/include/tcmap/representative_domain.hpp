#ifndef TCMAP_REPRESENTATIVE_DOMAIN_HPP
#define TCMAP_REPRESENTATIVE_DOMAIN_HPP

// The representative domain A_r = {z : |z + 1/z| < 2r} and the model annulus
// a_rho = {1/rho < |z| < rho}: the Joukowsky map and its two inverse branches,
// the elliptic slit map, the biholomorphism Psi : a_rho -> A_r, and the
// correspondence between r and rho.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "tcmap/domain_geometry.hpp"
#include "tcmap/elliptic.hpp"
#include "tcmap/error.hpp"
#include "tcmap/types.hpp"

namespace tcmap {

enum class JoukowskyBranch { outer, inner };

/// J(z) = (z + 1/z) / 2.
inline Complex joukowsky(Complex z) {
  if (z == Complex{}) throw DomainError("Joukowsky map is undefined at z = 0");
  return 0.5 * (z + 1.0 / z);
}

/// The two solutions of J(z) = w. The outer branch has modulus >= 1 and the
/// inner branch is its reciprocal. Points strictly inside the cut (-1, 1) have
/// two unimodular preimages and no preferred branch, so they are rejected.
inline Complex joukowsky_inverse(Complex w, JoukowskyBranch branch) {
  if (w.imag() == 0.0 && std::abs(w.real()) < 1.0)
    throw BranchCutError("Joukowsky inverse: w = " + std::to_string(w.real()) + " lies on the cut (-1, 1)");
  const Complex root = std::sqrt(w * w - 1.0);
  // Pick the sum without cancellation; it is the larger-modulus preimage.
  const Complex big = std::abs(w + root) >= std::abs(w - root) ? w + root : w - root;
  return branch == JoukowskyBranch::outer ? big : 1.0 / big;
}

/// A_r together with k = 1/r^2.
struct RepresentativeDomain {
  double r = 0.0;
  double k = 0.0;

  explicit RepresentativeDomain(double r_) : r(r_), k(1.0 / (r_ * r_)) {
    if (!(r_ > 1.0)) throw DomainError("A_r needs r > 1");
  }
  bool contains(Complex z) const { return z != Complex{} && std::abs(joukowsky(z)) < r; }
};

/// The model annulus a_rho and the data of its slit map. The slit map of
/// {1/rho < |z| < 1} onto the unit disc minus [-L, L] is
///   z -> L * sn(K + (2iK/pi) log(rho z))
/// on the lattice with nome q = rho^-4, where L = sqrt(k) = theta2/theta3.
/// Matching that slit with the Joukowsky slit [-1, 1] forces r = 1/L.
struct AnnulusModel {
  double rho = 0.0;
  double nome = 0.0;            // q = rho^-4
  double parameter = 0.0;       // m = k^2 = L^4
  double slit = 0.0;            // L
  double r = 0.0;               // 1 / L
  double quarter_period = 0.0;  // K

  double modulus() const noexcept { return rho * rho; }
};

namespace detail {

// theta3(0,q) / theta2(0,q). Near q = 1 the imaginary transformation
// tau -> -1/tau turns it into theta3(0,q') / theta4(0,q') with
// q' = exp(-pi^2 / log(1/q)), which converges fast and keeps r - 1 accurate.
inline double theta3_over_theta2(double q) {
  if (q > std::exp(-kPi)) {
    const double qt = std::exp(-kPi * kPi / std::log(1.0 / q));
    if (qt == 0.0) return 1.0;
    return theta3(0.0, qt).real() / theta4(0.0, qt).real();
  }
  return theta3(0.0, q).real() / theta2(0.0, q).real();
}

}  // namespace detail

inline AnnulusModel slit_parameters(double rho) {
  if (!(rho > 1.0)) throw DomainError("annulus a_rho needs rho > 1");
  AnnulusModel model;
  model.rho = rho;
  model.nome = std::pow(rho, -4.0);
  model.r = detail::theta3_over_theta2(model.nome);
  model.slit = 1.0 / model.r;
  model.parameter = std::pow(model.slit, 4.0);
  const double t3 = theta3(0.0, model.nome).real();
  model.quarter_period = 0.5 * kPi * t3 * t3;
  return model;
}

inline double r_from_rho(double rho) { return slit_parameters(rho).r; }

/// Inverse of the strictly increasing map rho -> r(rho).
inline double rho_from_r(double r) {
  if (!(r > 1.0)) throw DomainError("rho_from_r needs r > 1");
  auto residual = [r](double rho) { return r_from_rho(rho) - r; };
  double lo = 1.0 + 1e-3;
  double hi = 4.0 * r + 4.0;
  while (residual(hi) < 0.0) hi *= 2.0;
  if (residual(lo) >= 0.0) return lo;  // r is indistinguishable from 1 in double precision
  std::uintmax_t iterations = 200;
  const auto bracket = boost::math::tools::toms748_solve(residual, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                                         iterations);
  return 0.5 * (bracket.first + bracket.second);
}

/// The slit map of {1/rho <= |z| <= 1} onto the unit disc minus [-L, L]: the
/// unit circle goes to the unit circle and |z| = 1/rho onto the slit.
inline Complex slit_map(Complex z, const AnnulusModel& model) {
  const double a = std::abs(z);
  if (a < (1.0 - 1e-12) / model.rho || a > 1.0 + 1e-12)
    throw DomainError("slit map is defined on 1/rho <= |z| <= 1");
  const double big_k = model.quarter_period;
  const Complex u = big_k + Complex(0.0, 2.0 * big_k / kPi) * std::log(model.rho * z);
  return model.slit * jacobi_elliptic_nome(u, model.nome).sn;
}

namespace detail {

// The elliptic argument of Psi. Writing it through log(-i z) rather than
// K + (2iK/pi) log(z) (equal modulo the period 4K) makes z = i land exactly
// on u = 0.
inline Complex psi_argument(Complex z, const AnnulusModel& model) {
  return Complex(0.0, 2.0 * model.quarter_period / kPi) * std::log(Complex(z.imag(), -z.real()));
}

inline void require_closed_annulus(Complex z, const AnnulusModel& model) {
  const double a = std::abs(z);
  if (a < (1.0 - 1e-12) / model.rho || a > model.rho * (1.0 + 1e-12))
    throw DomainError("Psi is defined on the closed annulus 1/rho <= |z| <= rho");
}

inline constexpr double kUnitCircleBand = 1e-13;

// J^{-1}(s) with the branch fixed by which side of the unit circle z is on.
// On the circle itself s is real in [-1, 1] and continuity from the upper and
// lower half-planes picks the root with the sign of Im z.
inline Complex psi_branch(Complex s, Complex z) {
  const double a = std::abs(z);
  if (a > 1.0 + kUnitCircleBand) return joukowsky_inverse(s, JoukowskyBranch::outer);
  if (a < 1.0 - kUnitCircleBand) return joukowsky_inverse(s, JoukowskyBranch::inner);
  const double x = std::clamp(s.real(), -1.0, 1.0);
  const double y = std::sqrt(std::max(0.0, 1.0 - x * x));
  if (z.imag() > 0.0) return {x, y};
  if (z.imag() < 0.0) return {x, -y};
  return {x, 0.0};
}

}  // namespace detail

/// Psi : a_rho -> A_r, outer boundary to outer boundary, Psi(i) = i.
/// Psi(z) = J^{-1}(sn(u(z))) with u(z) = (2iK/pi) log(-i z); the Joukowsky
/// branch is the outer one for |z| > 1 and the inner one for |z| < 1, which is
/// the Schwarz reflection 1/conj(Psi(1/conj z)) of the outer half.
inline Complex psi(Complex z, const AnnulusModel& model) {
  detail::require_closed_annulus(z, model);
  const Complex s = jacobi_elliptic_nome(detail::psi_argument(z, model), model.nome).sn;
  return detail::psi_branch(s, z);
}

/// Psi'(z) = cn(u) dn(u) u'(z) / J'(Psi(z)). Undefined at the two points where
/// Psi = +-1 (a removable 0/0).
inline Complex psi_derivative(Complex z, const AnnulusModel& model) {
  detail::require_closed_annulus(z, model);
  const auto f = jacobi_elliptic_nome(detail::psi_argument(z, model), model.nome);
  const Complex w = detail::psi_branch(f.sn, z);
  const Complex jprime = 0.5 * (1.0 - 1.0 / (w * w));
  if (std::abs(jprime) < 1e-12) throw SingularityError("Psi' evaluated at a preimage of +-1");
  const Complex du = Complex(0.0, 2.0 * model.quarter_period / kPi) / z;
  return f.cn * f.dn * du / jprime;
}

/// Sampled boundary of A_r. The outer component is j_outer(r e^{i theta}) and
/// the inner one its reciprocal. theta runs through
///   theta(s) = atan2(beta sin s, cos s),  beta = sqrt(tanh(log r)),
/// at equispaced s: J^{-1} has branch points at theta = +-i log r (and their
/// shifts by pi), which for r near 1 sit very close to the real axis; this
/// reparametrization moves them out to |Im s| = atanh(beta).
inline TwoConnectedDomain ar_boundary(double r, std::size_t nodes) {
  if (!(r > 1.0)) throw DomainError("ar_boundary needs r > 1");
  if (nodes % 2 != 0) throw DomainError("ar_boundary needs an even node count");
  const double beta = std::sqrt(std::tanh(std::log(r)));
  std::vector<Complex> zo(nodes), dzo(nodes), zi(nodes), dzi(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double s = kTwoPi * static_cast<double>(j) / static_cast<double>(nodes);
    const double c = std::cos(s), sn = std::sin(s);
    const double theta = std::atan2(beta * sn, c);
    const double dtheta = beta / (c * c + beta * beta * sn * sn);
    const Complex w = std::polar(r, theta);
    const Complex z = joukowsky_inverse(w, JoukowskyBranch::outer);
    const Complex dz = (1.0 + w / (z - w)) * kI * w * dtheta;
    zo[j] = z;
    dzo[j] = dz;
    zi[j] = 1.0 / z;
    dzi[j] = -dz / (z * z);
  }
  return TwoConnectedDomain(Curve(std::move(zo), std::move(dzo), CurveRole::outer),
                            Curve(std::move(zi), std::move(dzi), CurveRole::inner), kI);
}

/// The annulus a_rho sampled as two circles. The reference point is 1, on the
/// median |z| = 1, as far from both circles as the geometry allows.
inline TwoConnectedDomain annulus_boundary(double rho, std::size_t nodes) {
  if (!(rho > 1.0)) throw DomainError("annulus needs rho > 1");
  const FourierTerm outer[] = {{1, rho}};
  const FourierTerm inner[] = {{-1, 1.0 / rho}};
  return TwoConnectedDomain(curve_from_fourier(outer, nodes, CurveRole::outer),
                            curve_from_fourier(inner, nodes, CurveRole::inner), Complex(1.0, 0.0));
}

}  // namespace tcmap

#endif  // TCMAP_REPRESENTATIVE_DOMAIN_HPP
