#ifndef TCMAP_SPECTRAL_HPP
#define TCMAP_SPECTRAL_HPP

// Trigonometric interpolation on equispaced periodic grids t_j = 2*pi*j/N.

#include <span>
#include <type_traits>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "tcmap/error.hpp"
#include "tcmap/types.hpp"

namespace tcmap {

/// One term c * exp(i n t) of a finite Fourier series.
struct FourierTerm {
  int n = 0;
  Complex c{};
};

/// Evaluates sum_n c_n exp(i n t) and its t-derivative.
template <class Real = double>
inline BasicComplex<Real> fourier_value(std::span<const FourierTerm> terms, std::type_identity_t<Real> t) {
  BasicComplex<Real> s{};
  for (const auto& term : terms) s += from_double<Real>(term.c) * std::polar(Real(1), Real(term.n) * t);
  return s;
}

template <class Real = double>
inline BasicComplex<Real> fourier_derivative(std::span<const FourierTerm> terms, std::type_identity_t<Real> t) {
  BasicComplex<Real> s{};
  for (const auto& term : terms)
    s += BasicComplex<Real>(Real(0), Real(term.n)) * from_double<Real>(term.c) * std::polar(Real(1), Real(term.n) * t);
  return s;
}

/// Coefficients of the trigonometric interpolant of equispaced samples. For
/// even N the Nyquist mode is split evenly between n = +N/2 and n = -N/2 so
/// the interpolant is real whenever the samples are.
inline std::vector<FourierTerm> fourier_coefficients(std::span<const Complex> samples) {
  const std::size_t n = samples.size();
  if (n == 0) return {};
  std::vector<Complex> in(samples.begin(), samples.end());
  std::vector<Complex> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  std::vector<FourierTerm> terms;
  terms.reserve(n + 1);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    int mode = static_cast<int>(k);
    if (2 * k == n) {
      terms.push_back({mode, 0.5 * out[k] * scale});
      terms.push_back({-mode, 0.5 * out[k] * scale});
      continue;
    }
    if (2 * k > n) mode -= static_cast<int>(n);
    terms.push_back({mode, out[k] * scale});
  }
  return terms;
}

/// d/dt of the trigonometric interpolant, evaluated at the nodes. The Nyquist
/// mode is dropped, which is why N must be even. Double precision goes through
/// the FFT; other scalar types through a direct O(N^2) transform.
template <class Real = double>
inline std::vector<BasicComplex<Real>> spectral_derivative(std::span<const BasicComplex<std::type_identity_t<Real>>> values) {
  using C = BasicComplex<Real>;
  const std::size_t n = values.size();
  if (n == 0 || n % 2 != 0)
    throw DomainError("spectral differentiation needs an even, nonzero number of samples");
  auto mode_of = [n](std::size_t k) {
    return 2 * k < n ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
  };
  if constexpr (std::is_same_v<Real, double>) {
    std::vector<Complex> in(values.begin(), values.end());
    std::vector<Complex> spec;
    Eigen::FFT<double> fft;
    fft.fwd(spec, in);
    for (std::size_t k = 0; k < n; ++k)
      spec[k] = 2 * k == n ? Complex{} : spec[k] * (kI * static_cast<double>(mode_of(k)));
    std::vector<Complex> result;
    fft.inv(result, spec);
    return result;
  } else {
    std::vector<C> roots(n);
    for (std::size_t m = 0; m < n; ++m) roots[m] = std::polar(Real(1), Real(2) * pi_v<Real>() * Real(m) / Real(n));
    std::vector<C> spec(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (2 * k == n) continue;
      C s{};
      for (std::size_t j = 0; j < n; ++j) s += values[j] * std::conj(roots[(j * k) % n]);
      spec[k] = s * C(Real(0), Real(mode_of(k)) / Real(n));
    }
    std::vector<C> result(n);
    for (std::size_t j = 0; j < n; ++j) {
      C s{};
      for (std::size_t k = 0; k < n; ++k) s += spec[k] * roots[(j * k) % n];
      result[j] = s;
    }
    return result;
  }
}

}  // namespace tcmap

#endif  // TCMAP_SPECTRAL_HPP
