#ifndef TCMAP_KERNELS_HPP
#define TCMAP_KERNELS_HPP

// Bergman kernels: the Laurent series of the annulus a_rho, the algebraic
// kernel K_r of A_r with its S/C/D blocks, the rational form Q in the
// Ahlfors-map coordinates (f_i, f_1), and the pullback to Omega through Phi.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tcmap/domain_geometry.hpp"
#include "tcmap/error.hpp"
#include "tcmap/mapping_pipeline.hpp"
#include "tcmap/representative_domain.hpp"
#include "tcmap/types.hpp"

namespace tcmap {

/// Bergman kernel of {1/rho < |z| < rho}:
///   K(z, w) = (1/pi) sum_{n != -1} (n+1) x^n / (rho^{2n+2} - rho^{-2n-2}) + 1 / (4 pi log(rho) x),
/// x = z conj(w). Both tails are summed in the scaled form (x/rho^2)^n and
/// (1/(x rho^2))^m so no power overflows.
inline Complex annulus_bergman(double rho, Complex z, Complex w) {
  if (!(rho > 1.0)) throw DomainError("annulus_bergman needs rho > 1");
  for (Complex p : {z, w})
    if (!(std::abs(p) > 1.0 / rho && std::abs(p) < rho)) throw DomainError("annulus_bergman: point outside a_rho");
  const Complex x = z * std::conj(w);
  const double rho2 = rho * rho;
  const double irho4 = 1.0 / (rho2 * rho2);
  const Complex up = x / rho2;
  const Complex down = 1.0 / (x * rho2);
  constexpr int kMaxTerms = 2000000;

  Complex sum = 1.0 / (4.0 * std::log(rho) * x);
  Complex pw = 1.0;     // up^n
  double decay = 1.0;   // rho^{-4(n+1)}
  for (int n = 0; n < kMaxTerms; ++n) {
    decay *= irho4;
    const Complex term = (n + 1.0) * pw / (rho2 * (1.0 - decay));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && n > 2) break;
    pw *= up;
  }
  pw = down;
  decay = 1.0;
  for (int m = 1; m < kMaxTerms; ++m) {
    decay *= irho4;
    const Complex term = static_cast<double>(m) * pw / (x * (1.0 - decay));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && m > 2) break;
    pw *= down;
  }
  return sum / kPi;
}

/// The building blocks of K_r at (z, w), with s = sqrt(1 - k^2 J^2) (principal
/// root; |k J| < 1 on A_r):
///   S = -((J(z) d(w) s(w) + J(w) d(z) s(z)) / den)^2
///   C = (-d(z) d(w) - J(z) J(w) s(z) s(w)) / den
///   D = (s(z) s(w) + k^2 J(z) J(w) d(z) d(w)) / den
/// where d(z) = (z^2 - 1)/(2z) and den = 1 - k^2 J(z)^2 J(w)^2.
struct KrBlocks {
  Complex s_blk;
  Complex c_blk;
  Complex d_blk;
  Complex root_z;  // s(z)
  Complex root_w;  // s(w)
};

inline KrBlocks kr_blocks(double r, Complex z, Complex w) {
  if (!(r > 1.0)) throw DomainError("kernel blocks need r > 1");
  if (z == Complex{} || w == Complex{}) throw DomainError("kernel blocks need z w != 0");
  const double k = 1.0 / (r * r);
  const Complex jz = joukowsky(z), jw = joukowsky(w);
  const Complex dz = (z * z - 1.0) / (2.0 * z), dw = (w * w - 1.0) / (2.0 * w);
  const Complex sz = std::sqrt(1.0 - k * k * jz * jz), sw = std::sqrt(1.0 - k * k * jw * jw);
  const Complex den = 1.0 - k * k * jz * jz * jw * jw;
  if (std::abs(den) < 1e-14) throw SingularityError("kernel blocks: 1 - k^2 J(z)^2 J(w)^2 vanishes");
  const Complex s_inner = (jz * dw * sw + jw * dz * sz) / den;
  return {-s_inner * s_inner, (-dz * dw - jz * jw * sz * sw) / den, (sz * sw + k * k * jz * jw * dz * dw) / den, sz, sw};
}

struct KernelConstants {
  Complex c1{};
  Complex c2{};
  double r = 0.0;
  double residual = 0.0;  // max relative error on the held-out pairs
};

namespace detail {

inline void require_closed_ar(double r, Complex z) {
  if (z == Complex{} || std::abs(joukowsky(z)) > r * (1.0 + 1e-9))
    throw DomainError("point (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ") is outside A_r");
}

// The part of K_r that C1 and C1 C2 multiply: K_r = (C1 * model + C1 C2) / denominator.
struct KrTerms {
  Complex model;
  Complex denominator;
};

inline KrTerms kr_terms(double r, Complex z, Complex w) {
  const double k = 1.0 / (r * r);
  const Complex wb = std::conj(w);
  const KrBlocks b = kr_blocks(r, z, wb);
  return {k * k * b.s_blk + k * b.c_blk * b.d_blk, z * wb * b.root_z * b.root_w};
}

}  // namespace detail

/// K_r(z, w) = C1 (k^2 S + k C D + C2) / (z conj(w) s(z) s(conj w)), blocks at (z, conj w).
inline Complex bergman_ar(double r, const KernelConstants& consts, Complex z, Complex w) {
  detail::require_closed_ar(r, z);
  detail::require_closed_ar(r, w);
  const auto t = detail::kr_terms(r, z, w);
  return consts.c1 * (t.model + consts.c2) / t.denominator;
}

namespace detail {

// Boundary values of Phi sit on bA_r only up to the solver accuracy, so the
// node path skips the closure check.
inline Complex bergman_ar_unchecked(double r, const KernelConstants& consts, Complex z, Complex w) {
  const auto t = kr_terms(r, z, w);
  return consts.c1 * (t.model + consts.c2) / t.denominator;
}

}  // namespace detail

/// K_r at Psi(a), Psi(b) from the annulus kernel: K(a, b) / (Psi'(a) conj Psi'(b)).
inline Complex ar_kernel_oracle(const AnnulusModel& model, Complex a, Complex b) {
  return annulus_bergman(model.rho, a, b) / (psi_derivative(a, model) * std::conj(psi_derivative(b, model)));
}

namespace detail {

struct OraclePair {
  Complex z, w, value;
};

// Pairs (Psi(a), Psi(b), oracle) with a, b drawn log-uniformly in radius over
// a_rho minus a collar, keeping Psi away from the critical points +-1.
inline std::vector<OraclePair> oracle_pairs(const AnnulusModel& model, std::size_t count, std::mt19937_64& rng) {
  const double lr = std::log(model.rho);
  std::uniform_real_distribution<double> radius(-0.9 * lr, 0.9 * lr);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  auto draw = [&]() {
    for (;;) {
      const Complex a = std::polar(std::exp(radius(rng)), angle(rng));
      const Complex p = psi(a, model);
      if (std::abs(p - 1.0) > 0.05 && std::abs(p + 1.0) > 0.05) return std::pair{a, p};
    }
  };
  std::vector<OraclePair> out;
  out.reserve(count);
  while (out.size() < count) {
    const auto [a, pa] = draw();
    const auto [b, pb] = draw();
    out.push_back({pa, pb, ar_kernel_oracle(model, a, b)});
  }
  return out;
}

}  // namespace detail

inline constexpr std::uint64_t kDefaultFitSeed = 20240611;
inline constexpr double kFitTolerance = 1e-6;

/// Least-squares (C1, C1 C2) against the annulus pullback on fit pairs, then
/// the maximum relative error on separate held-out pairs.
inline KernelConstants fit_constants(double r, std::uint64_t seed = kDefaultFitSeed, std::size_t fit_pairs = 60,
                                     std::size_t held_out = 50) {
  if (!(r > 1.0)) throw DomainError("fit_constants needs r > 1");
  if (fit_pairs < 2) throw DomainError("fit_constants needs at least two fitting pairs");
  const AnnulusModel model = slit_parameters(rho_from_r(r));
  std::mt19937_64 rng(seed);
  const auto fit = detail::oracle_pairs(model, fit_pairs, rng);
  const auto check = detail::oracle_pairs(model, held_out, rng);

  // Rows are scaled by 1/|oracle| so the fit minimizes relative error.
  const auto n = static_cast<Eigen::Index>(fit.size());
  Eigen::MatrixXcd a(n, 2);
  Eigen::VectorXcd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = fit[static_cast<std::size_t>(i)];
    const auto t = detail::kr_terms(model.r, p.z, p.w);
    const double scale = 1.0 / std::abs(p.value);
    a(i, 0) = t.model / t.denominator * scale;
    a(i, 1) = 1.0 / t.denominator * scale;
    y(i) = p.value * scale;
  }
  const Eigen::VectorXcd sol = a.colPivHouseholderQr().solve(y);

  KernelConstants out;
  out.r = r;
  out.c1 = sol(0);
  if (std::abs(out.c1) == 0.0) throw ConsistencyError("fitted C1 vanishes");
  out.c2 = sol(1) / sol(0);
  for (const auto& p : check)
    out.residual =
        std::max(out.residual, std::abs(detail::bergman_ar_unchecked(model.r, out, p.z, p.w) - p.value) / std::abs(p.value));
  if (!(out.residual <= kFitTolerance))
    throw ConsistencyError("kernel constants do not reproduce the annulus oracle (relative residual " +
                           std::to_string(out.residual) + ")");
  return out;
}

/// f_i = J / r, the Ahlfors map of A_r at i.
inline Complex ahlfors_at_i(double r, Complex z) { return joukowsky(z) / r; }
inline Complex ahlfors_at_i_derivative(double r, Complex z) {
  if (z == Complex{}) throw DomainError("f_i' is undefined at 0");
  return (1.0 - 1.0 / (z * z)) / (2.0 * r);
}

/// g = f_1, the Ahlfors map of A_r at 1: (z - 1/z) / (2 r sqrt(1 - k^2 J^2)).
inline Complex ahlfors_at_one(double r, Complex z) {
  if (z == Complex{}) throw DomainError("Ahlfors map at 1 is undefined at z = 0");
  const double k = 1.0 / (r * r);
  const Complex j = joukowsky(z);
  return (z - 1.0 / z) / (2.0 * r * std::sqrt(1.0 - k * k * j * j));
}

/// Residuals of the two identities that move K_r into (f_i, f_1):
///   (z^2 - 1) / (2z) = r f_1 sqrt(1 - f_i^2 / r^2)
///   z sqrt(1 - k^2 J^2) f_i' = f_1 (1 - f_i^2 / r^2)
/// Note f_i^2 / r^2 = k^2 J^2.
struct SubstitutionResiduals {
  double first = 0.0;
  double second = 0.0;
};

inline SubstitutionResiduals substitution_residuals(double r, Complex z) {
  const Complex fi = ahlfors_at_i(r, z);
  const Complex f1 = ahlfors_at_one(r, z);
  const Complex s = std::sqrt(1.0 - fi * fi / (r * r));
  const Complex d = (z * z - 1.0) / (2.0 * z);
  return {std::abs(d - r * f1 * s),
          std::abs(z * std::sqrt(1.0 - joukowsky(z) * joukowsky(z) / (r * r * r * r)) * ahlfors_at_i_derivative(r, z) -
                   f1 * (1.0 - fi * fi / (r * r)))};
}

inline constexpr double kBranchGuard = 1e-3;

/// Phi' = 2 c f_a' / (1 - Phi^-2), from differentiating J(Phi) = c f_a.
inline Complex phi_derivative(const MapParameters& params, Complex phi_value, Complex f_deriv) {
  if (std::abs(phi_value - 1.0) < kBranchGuard || std::abs(phi_value + 1.0) < kBranchGuard)
    throw SingularityError("Phi' formula evaluated within the guard of a branch point");
  return 2.0 * params.c * f_deriv / (1.0 - 1.0 / (phi_value * phi_value));
}

/// Denominator of Q: z2 w2 (1 - z1^2/r^2)(1 - w1^2/r^2).
inline Complex q_denominator(double r, Complex z1, Complex z2, Complex w1, Complex w2) {
  const double ir2 = 1.0 / (r * r);
  return z2 * w2 * (1.0 - ir2 * z1 * z1) * (1.0 - ir2 * w1 * w1);
}

/// Q(z1, z2, w1, w2) = C1 (sigma + delta + C2) / q with
///   sigma = -((z1 w2 sw + w1 z2 sz) / (1 - z1^2 w1^2))^2
///   delta = -(z2 w2 + z1 w1) sz sw (1 + z1 w1 z2 w2) / (1 - z1^2 w1^2)^2
/// and sz = 1 - z1^2/r^2, sw = 1 - w1^2/r^2. In the coordinates
/// z1 = f_i(z), z2 = f_1(z), w1 = conj f_i(w), w2 = conj f_1(w) this is
/// K_r(z, w) / (f_i'(z) conj f_i'(w)).
inline Complex q_rational(double r, const KernelConstants& consts, Complex z1, Complex z2, Complex w1, Complex w2) {
  const double ir2 = 1.0 / (r * r);
  const Complex sz = 1.0 - ir2 * z1 * z1;
  const Complex sw = 1.0 - ir2 * w1 * w1;
  const Complex shared = 1.0 - z1 * z1 * w1 * w1;
  const Complex q = z2 * w2 * sz * sw;
  if (std::abs(shared) < 1e-14) throw SingularityError("Q: 1 - z1^2 w1^2 vanishes");
  if (std::abs(q) < 1e-300) throw SingularityError("Q: denominator q vanishes");
  const Complex s_inner = (z1 * w2 * sw + w1 * z2 * sz) / shared;
  const Complex sigma = -s_inner * s_inner;
  const Complex delta = -(z2 * w2 + z1 * w1) * sz * sw * (1.0 + z1 * w1 * z2 * w2) / (shared * shared);
  return consts.c1 * (sigma + delta + consts.c2) / q;
}

/// K_r through Q: f_i'(z) Q(f_i(z), f_1(z), conj f_i(w), conj f_1(w)) conj f_i'(w).
inline Complex bergman_ar_via_q(double r, const KernelConstants& consts, Complex z, Complex w) {
  const Complex q = q_rational(r, consts, ahlfors_at_i(r, z), ahlfors_at_one(r, z), std::conj(ahlfors_at_i(r, w)),
                               std::conj(ahlfors_at_one(r, w)));
  return ahlfors_at_i_derivative(r, z) * q * std::conj(ahlfors_at_i_derivative(r, w));
}

struct KernelEvaluation {
  Complex z{};
  Complex w{};
  Complex value{};
};

namespace detail {

// Phi and Phi' at an interior point. Away from Phi = +-1 the closed form is
// used; inside the guard the Cauchy derivative of Phi's boundary values
// supplies the removable limit.
inline std::pair<Complex, Complex> phi_and_derivative(const ConformalMapPhi& phi, Complex z) {
  const Complex v = phi(z);
  if (std::abs(v - 1.0) < kBranchGuard || std::abs(v + 1.0) < kBranchGuard) return {v, phi.cauchy_derivative(z)};
  return {v, phi_derivative(phi.params(), v, phi.ahlfors().derivative(z))};
}

}  // namespace detail

/// Bergman kernel of Omega: Phi'(z) K_r(Phi(z), Phi(w)) conj Phi'(w).
inline KernelEvaluation bergman_omega(const ConformalMapPhi& phi, const KernelConstants& consts, Complex z,
                                      Complex w) {
  const double r = phi.params().r;
  const auto [pz, dz] = detail::phi_and_derivative(phi, z);
  const auto [pw, dw] = detail::phi_and_derivative(phi, w);
  return {z, w, dz * bergman_ar(r, consts, pz, pw) * std::conj(dw)};
}

/// K_Omega(z, w_j) with w_j the j-th boundary node, from the boundary values
/// of Phi and Phi'.
inline Complex bergman_omega_at_node(const ConformalMapPhi& phi, const KernelConstants& consts, Complex z,
                                     std::size_t node) {
  const double r = phi.params().r;
  const auto [pz, dz] = detail::phi_and_derivative(phi, z);
  return dz * detail::bergman_ar_unchecked(r, consts, pz, phi.boundary_values()[node]) * std::conj(phi.boundary_derivatives()[node]);
}

/// Area integral of K_Omega(z, w) h(w) for h(w) = w, which must return z.
/// The integrand is antiholomorphic in w times w, so Green's theorem turns it
/// into (i/4) closed integral of K(z, w) w^2 conj(dw).
inline Complex reproduce_identity(const ConformalMapPhi& phi, const KernelConstants& consts, Complex z) {
  const auto& g = phi.grid();
  const double r = phi.params().r;
  const auto [pz, dz] = detail::phi_and_derivative(phi, z);
  Complex sum{};
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Complex k = dz * detail::bergman_ar_unchecked(r, consts, pz, phi.boundary_values()[j]) *
                      std::conj(phi.boundary_derivatives()[j]);
    sum += k * g.nodes[j] * g.nodes[j] * std::conj(g.dz[j]);
  }
  return 0.25 * kI * sum;
}

}  // namespace tcmap

#endif  // TCMAP_KERNELS_HPP
