#ifndef TCMAP_ELLIPTIC_HPP
#define TCMAP_ELLIPTIC_HPP

// Jacobi elliptic functions of complex argument via theta-function quotients.
// Parameter convention: m = k^2. The nome q = exp(-pi K'/K) is obtained from
// m by the arithmetic-geometric mean.

#include <cmath>
#include <string>

#include "tcmap/error.hpp"
#include "tcmap/types.hpp"

namespace tcmap {

inline double agm(double a, double b) {
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * a; ++it) {
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return 0.5 * (a + b);
}

/// Complete elliptic integral of the first kind, K(m) = pi / (2 agm(1, sqrt(1-m))).
inline double complete_elliptic_k(double m) {
  if (!(m >= 0.0 && m < 1.0)) throw DomainError("complete_elliptic_k: parameter must lie in [0, 1)");
  return kPi / (2.0 * agm(1.0, std::sqrt(1.0 - m)));
}

/// Jacobi nome q = exp(-pi K(1-m) / K(m)).
inline double nome_from_parameter(double m) {
  if (!(m > 0.0 && m < 1.0)) throw DomainError("nome: parameter must lie in (0, 1)");
  return std::exp(-kPi * complete_elliptic_k(1.0 - m) / complete_elliptic_k(m));
}

namespace detail {

inline constexpr double kThetaTol = 1e-17;
inline constexpr int kThetaMaxTerms = 100000;

inline void require_nome(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("theta functions need a nome in (0, 1), got " + std::to_string(q));
}

}  // namespace detail

// Theta functions in the convention theta_3(v, q) = 1 + 2 sum q^{n^2} cos(2 n v).

inline Complex theta1(Complex v, double q) {
  detail::require_nome(q);
  const double lq = std::log(q);
  const double grow = std::abs(v.imag());
  Complex s{};
  for (int n = 0; n < detail::kThetaMaxTerms; ++n) {
    const double e = (n + 0.5) * (n + 0.5) * lq;
    const Complex term = std::exp(e) * std::sin((2.0 * n + 1.0) * v);
    s += (n % 2 == 0 ? 2.0 : -2.0) * term;
    if (n > 0 && e + (2.0 * n + 1.0) * grow < std::log(detail::kThetaTol * std::max(std::abs(s), 1e-300))) break;
  }
  return s;
}

inline Complex theta2(Complex v, double q) {
  detail::require_nome(q);
  const double lq = std::log(q);
  const double grow = std::abs(v.imag());
  Complex s{};
  for (int n = 0; n < detail::kThetaMaxTerms; ++n) {
    const double e = (n + 0.5) * (n + 0.5) * lq;
    s += 2.0 * std::exp(e) * std::cos((2.0 * n + 1.0) * v);
    if (n > 0 && e + (2.0 * n + 1.0) * grow < std::log(detail::kThetaTol * std::max(std::abs(s), 1e-300))) break;
  }
  return s;
}

inline Complex theta3(Complex v, double q) {
  detail::require_nome(q);
  const double lq = std::log(q);
  const double grow = std::abs(v.imag());
  Complex s{1.0, 0.0};
  for (int n = 1; n < detail::kThetaMaxTerms; ++n) {
    const double e = static_cast<double>(n) * n * lq;
    s += 2.0 * std::exp(e) * std::cos(2.0 * n * v);
    if (e + 2.0 * n * grow < std::log(detail::kThetaTol * std::max(std::abs(s), 1e-300))) break;
  }
  return s;
}

inline Complex theta4(Complex v, double q) {
  detail::require_nome(q);
  const double lq = std::log(q);
  const double grow = std::abs(v.imag());
  Complex s{1.0, 0.0};
  for (int n = 1; n < detail::kThetaMaxTerms; ++n) {
    const double e = static_cast<double>(n) * n * lq;
    s += (n % 2 == 0 ? 2.0 : -2.0) * std::exp(e) * std::cos(2.0 * n * v);
    if (e + 2.0 * n * grow < std::log(detail::kThetaTol * std::max(std::abs(s), 1e-300))) break;
  }
  return s;
}

struct JacobiElliptic {
  Complex sn;
  Complex cn;
  Complex dn;
};

/// sn, cn, dn for the lattice with nome q. The argument is first reduced into
/// |Re u| <= 2K, |Im u| <= K' using the periods 4K (all three) and 2iK' (sn
/// invariant, cn and dn change sign).
inline JacobiElliptic jacobi_elliptic_nome(Complex u, double q) {
  detail::require_nome(q);
  const double t2 = theta2(0.0, q).real();
  const double t3 = theta3(0.0, q).real();
  const double t4 = theta4(0.0, q).real();
  const double quarter = 0.5 * kPi * t3 * t3;               // K
  const double quarter_c = quarter * std::log(1.0 / q) / kPi;  // K'

  double sign = 1.0;
  const double shifts_im = std::round(u.imag() / (2.0 * quarter_c));
  if (shifts_im != 0.0) {
    u -= Complex(0.0, 2.0 * quarter_c * shifts_im);
    if (std::fmod(std::abs(shifts_im), 2.0) == 1.0) sign = -1.0;
  }
  u -= 4.0 * quarter * std::round(u.real() / (4.0 * quarter));

  const Complex v = u / (t3 * t3);
  const Complex th4 = theta4(v, q);
  return {(t3 / t2) * theta1(v, q) / th4,
          sign * (t4 / t2) * theta2(v, q) / th4,
          sign * (t4 / t3) * theta3(v, q) / th4};
}

inline JacobiElliptic jacobi_elliptic(Complex u, double m) {
  if (!(m > 0.0 && m < 1.0)) throw DomainError("Jacobi functions need a parameter m in (0, 1)");
  return jacobi_elliptic_nome(u, nome_from_parameter(m));
}

/// Jacobi sn(u | m) for complex u.
inline Complex jacobi_sn(Complex u, double m) { return jacobi_elliptic(u, m).sn; }

}  // namespace tcmap

#endif  // TCMAP_ELLIPTIC_HPP
