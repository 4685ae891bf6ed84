#ifndef TCMAP_TYPES_HPP
#define TCMAP_TYPES_HPP

#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

namespace tcmap {

using Complex = std::complex<double>;

// Quadruple precision for the Szego/Ahlfors stage on domains where the
// kernel's boundary values span more orders of magnitude than double holds.
using Quad = boost::multiprecision::float128;

template <class Real>
using BasicComplex = std::complex<Real>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

template <class Real>
inline Real pi_v() {
  return boost::math::constants::pi<Real>();
}

template <class Real>
inline BasicComplex<Real> imag_unit() {
  return {Real(0), Real(1)};
}

template <class Real>
inline Complex to_double(const BasicComplex<Real>& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

template <class Real>
inline BasicComplex<Real> from_double(Complex z) {
  return {Real(z.real()), Real(z.imag())};
}

// Lexicographic (Re, Im) ordering in which real parts closer than tol count as
// equal. Used wherever a deterministic choice between two computed points is
// needed and symmetric inputs make exact ties common.
template <class Real>
inline bool lexicographic_less(const BasicComplex<Real>& a, const BasicComplex<Real>& b, double tol = 1e-8) {
  using std::abs;
  if (abs(a.real() - b.real()) > Real(tol)) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace tcmap

#endif  // TCMAP_TYPES_HPP
