#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "tcmap/domain_geometry.hpp"
#include "tcmap/domain_io.hpp"
#include "tcmap/representative_domain.hpp"

using namespace tcmap;

namespace {

const char* kCirclePair = R"({"outer": {"fourier": [[1, 2, 0]]}, "inner": {"fourier": [[1, 0.5, 0]]}})";

std::vector<Complex> on_grid(const QuadratureGrid& g, Complex (*f)(Complex)) {
  std::vector<Complex> v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) v[j] = f(g.nodes[j]);
  return v;
}

std::vector<Complex> periodic(std::size_t n, Complex (*f)(double)) {
  std::vector<Complex> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = f(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
  return v;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

TEST(ParseDomainSpec, CirclePairIsAnnulusRhoTwo) {
  const auto d = parse_domain_spec(kCirclePair);
  for (auto z : d.outer().samples()) EXPECT_NEAR(std::abs(z), 2.0, 1e-14);
  for (auto z : d.inner().samples()) EXPECT_NEAR(std::abs(z), 0.5, 1e-14);
  EXPECT_GT(d.outer().signed_area(), 0.0);
  EXPECT_LT(d.inner().signed_area(), 0.0);
  EXPECT_TRUE(d.contains(Complex(1.0, 0.0)));
  EXPECT_FALSE(d.contains(Complex(0.1, 0.0)));
  EXPECT_FALSE(d.contains(Complex(3.0, 0.0)));
}

TEST(ParseDomainSpec, InnerCurveOutsideOuterIsGeometryError) {
  const char* spec = R"({"outer": {"fourier": [[1, 1, 0]]}, "inner": {"fourier": [[0, 5, 0], [1, 0.5, 0]]}})";
  EXPECT_THROW(parse_domain_spec(spec), GeometryError);
}

TEST(ParseDomainSpec, ArBoundaryRoundTripsThroughSamplesForm) {
  const auto ar = ar_boundary(1.05, 256);
  const auto d = parse_domain_spec(domain_to_json(ar).dump());
  EXPECT_EQ(d.outer().size(), 256u);
  EXPECT_EQ(d.inner().size(), 256u);
  for (auto z : d.outer().samples()) EXPECT_NEAR(std::abs(z + 1.0 / z), 2.1, 1e-10);
  for (std::size_t j = 0; j < d.outer().size(); ++j)
    EXPECT_NEAR(std::abs(d.outer().derivatives()[j] - ar.outer().derivatives()[j]), 0.0, 1e-9);
}

TEST(ParseDomainSpec, MalformedJsonReportsLine) {
  const std::string text = "{\n  \"outer\": {\"fourier\": [[1, 2, 0]]},\n  \"inner\": oops\n}";
  try {
    parse_domain_spec(text);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(ParseDomainSpec, FieldErrors) {
  EXPECT_THROW(parse_domain_spec(R"({"outer": {"fourier": [[1, 2, 0]]}})"), ParseError);
  EXPECT_THROW(parse_domain_spec(R"({"outer": {"fourier": [[1, 2, 0]]}, "inner": {"fourier": [[1, 0.5, 0]]},
                                    "colour": 1})"),
               ParseError);
  EXPECT_THROW(parse_domain_spec(R"({"outer": {"fourier": [[1.5, 2, 0]]}, "inner": {"fourier": [[1, 0.5, 0]]}})"),
               ParseError);
  EXPECT_THROW(parse_domain_spec(R"({"outer": {"fourier": [[1, 2, 0]], "samples": []}, "inner": {"fourier": [[1, 0.5, 0]]}})"),
               ParseError);
  EXPECT_THROW(parse_domain_spec(R"({"outer": {"fourier": [[1, 2, 0]]}, "inner": {"fourier": [[1, 0.5, 0]]},
                                    "reference_point": [0, 0]})"),
               GeometryError);
}

TEST(ParseDomainSpec, SamplesGetSpectralDerivatives) {
  nlohmann::json samples = nlohmann::json::array();
  for (int j = 0; j < 100; ++j) {
    const double t = kTwoPi * j / 100.0;
    samples.push_back({2.0 * std::cos(t), 2.0 * std::sin(t)});
  }
  nlohmann::json spec = {{"outer", {{"samples", samples}}}, {"inner", {{"fourier", {{1, 0.5, 0}}}}}};
  const auto d = parse_domain_spec(spec.dump(), 128);
  for (std::size_t j = 0; j < d.outer().size(); ++j) {
    const Complex z = d.outer().samples()[j];
    EXPECT_NEAR(std::abs(d.outer().derivatives()[j] - kI * z), 0.0, 1e-12);
  }
}

TEST(Curve, RejectsOddOrTooFewNodes) {
  const FourierTerm circle[] = {{1, 1.0}};
  EXPECT_THROW(curve_from_fourier(circle, 65, CurveRole::outer), GeometryError);
  EXPECT_THROW(curve_from_fourier(circle, 32, CurveRole::outer), GeometryError);
}

TEST(Curve, IrregularParametrizationRejected) {
  std::vector<Complex> z(64, Complex(1.0, 0.0)), dz(64, Complex{});
  EXPECT_THROW(Curve(z, dz, CurveRole::outer), GeometryError);
}

TEST(BoundaryDerivative, Exponential) {
  const auto v = periodic(128, [](double t) { return std::exp(Complex(0.0, t)); });
  const auto d = boundary_derivative<double>(v);
  for (std::size_t j = 0; j < v.size(); ++j) EXPECT_NEAR(std::abs(d[j] - kI * v[j]), 0.0, 1e-13);
}

TEST(BoundaryDerivative, ConstantGivesZero) {
  const std::vector<Complex> v(64, Complex(3.0, -1.0));
  for (auto x : boundary_derivative<double>(v)) EXPECT_NEAR(std::abs(x), 0.0, 1e-14);
}

TEST(BoundaryDerivative, Cosine) {
  const auto v = periodic(64, [](double t) { return Complex(std::cos(3.0 * t), 0.0); });
  const auto d = boundary_derivative<double>(v);
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double t = kTwoPi * static_cast<double>(j) / 64.0;
    EXPECT_NEAR(std::abs(d[j] - Complex(-3.0 * std::sin(3.0 * t), 0.0)), 0.0, 1e-12);
  }
}

TEST(BoundaryDerivative, OddCountIsError) {
  const std::vector<Complex> v(65, Complex(1.0, 0.0));
  EXPECT_THROW(boundary_derivative<double>(v), DomainError);
}

TEST(BoundaryDerivative, TwiceEqualsSecondDerivativeForBandLimited) {
  // Direct second derivative of sum c_n e^{int} is sum -n^2 c_n e^{int}.
  const std::pair<int, Complex> modes[] = {{1, {1.0, 0.5}}, {-4, {0.2, 0.0}}, {7, {0.0, -0.3}}};
  std::vector<Complex> v(128), direct(128);
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double t = kTwoPi * static_cast<double>(j) / 128.0;
    for (auto [n, c] : modes) {
      v[j] += c * std::exp(Complex(0.0, n * t));
      direct[j] -= static_cast<double>(n * n) * c * std::exp(Complex(0.0, n * t));
    }
  }
  const auto once = boundary_derivative<double>(v);
  EXPECT_LT(max_diff(boundary_derivative<double>(once), direct), 1e-8);
}

TEST(CauchyEval, PolynomialAndReciprocalOnAnnulus) {
  const auto d = annulus_boundary(2.0, 256);
  const auto& g = d.grid();
  const auto sq = on_grid(g, [](Complex z) { return z * z; });
  const auto inv = on_grid(g, [](Complex z) { return 1.0 / z; });
  const std::vector<Complex> one(g.size(), Complex(1.0, 0.0));
  EXPECT_NEAR(std::abs(cauchy_eval<double>(sq, g, Complex(1.0, 0.0)) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(cauchy_eval<double>(inv, g, Complex(1.0, 0.0)) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(cauchy_eval<double>(one, g, Complex(-0.3, 1.2)) - 1.0), 0.0, 1e-12);
}

TEST(CauchyEval, ReproducesLaurentPolynomials) {
  const auto d = annulus_boundary(2.0, 256);
  const auto& g = d.grid();
  auto f = [](Complex z) { return z * z * z - 2.0 * z + Complex(0.5, 1.0) / (z * z) + 3.0 / (z * z * z * z); };
  std::vector<Complex> v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) v[j] = f(g.nodes[j]);
  for (double rad : {0.6, 1.0, 1.5, 1.9})
    for (int k = 0; k < 12; ++k) {
      const Complex z = std::polar(rad, kTwoPi * (k + 0.1) / 12.0);
      EXPECT_NEAR(std::abs(cauchy_eval<double>(v, g, z) - f(z)), 0.0, 1e-10) << z;
    }
}

TEST(CauchyEval, NearBoundaryAndOutside) {
  const auto d = annulus_boundary(2.0, 256);
  const std::vector<Complex> one(d.grid().size(), Complex(1.0, 0.0));
  EXPECT_THROW(cauchy_eval<double>(one, d.grid(), Complex(1.999, 0.0)), NearBoundaryError);
  EXPECT_THROW(cauchy_eval<double>(one, d.grid(), Complex(0.1, 0.0)), DomainError);
  EXPECT_THROW(cauchy_eval<double>(one, d.grid(), Complex(3.0, 0.0)), DomainError);
}

TEST(WindingCount, ConstantAndIdentity) {
  const auto d = annulus_boundary(2.0, 256);
  const auto& g = d.grid();
  const std::vector<Complex> one(g.size(), Complex(1.0, 0.0)), zero(g.size());
  EXPECT_EQ(winding_count<double>(one, zero, g), 0);
  const std::vector<Complex> ones_deriv(g.size(), Complex(1.0, 0.0));
  // z vanishes only in the hole: +1 from the outer curve, -1 from the inner.
  EXPECT_EQ(winding_count<double>(g.nodes, ones_deriv, g), 0);
  std::vector<Complex> z_minus_one(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) z_minus_one[j] = g.nodes[j] - 1.0;
  EXPECT_EQ(winding_count<double>(z_minus_one, ones_deriv, g), 1);
  // |f| vanishing on the boundary
  std::vector<Complex> shifted(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) shifted[j] = g.nodes[j] - g.nodes[0];
  EXPECT_THROW(winding_count<double>(shifted, ones_deriv, g), BoundaryZeroError);
}

TEST(QuadratureGrid, ClosedIntegralsOfDzVanish) {
  const auto d = parse_domain_spec(R"({"outer": {"fourier": [[1, 2, 0], [2, 0.1, 0]]}, "inner": {"fourier": [[-1, 0.5, 0]]}})");
  const auto& g = d.grid();
  Complex outer{}, inner{};
  for (std::size_t j = 0; j < g.size(); ++j) (g.is_outer(j) ? outer : inner) += g.dz[j];
  EXPECT_LT(std::abs(outer), 1e-12);
  EXPECT_LT(std::abs(inner), 1e-12);
}

TEST(QuadratureGrid, WindingAboutReferencePoint) {
  for (const char* spec : {kCirclePair, R"({"outer": {"fourier": [[1, 2, 0], [2, 0.1, 0]]}, "inner": {"fourier": [[-1, 0.5, 0]]}})"}) {
    const auto d = parse_domain_spec(spec);
    const auto& g = d.grid();
    Complex s{};
    for (std::size_t j = 0; j < g.size(); ++j) s += g.dz[j] / (g.nodes[j] - d.reference_point());
    EXPECT_LT(std::abs(s - Complex(0.0, kTwoPi)), 1e-10 * static_cast<double>(g.size()));
    EXPECT_NEAR(d.outer().winding_about(d.reference_point()), 1.0, 1e-10);
    EXPECT_NEAR(d.inner().winding_about(d.reference_point()), 0.0, 1e-10);
  }
}

TEST(QuadratureGrid, OuterArcLengthConvergesSpectrally) {
  const auto d = annulus_boundary(2.0, 256);
  double len = 0.0;
  for (std::size_t j = 0; j < d.grid().outer_size; ++j) len += d.grid().ds[j];
  EXPECT_NEAR(len, 4.0 * kPi, 1e-12);
}

TEST(QuadratureGrid, ExtendedGridMatchesDouble) {
  const auto d = parse_domain_spec(R"({"outer": {"fourier": [[1, 2, 0], [2, 0.1, 0]]}, "inner": {"fourier": [[-1, 0.5, 0]]}})");
  const auto q = make_grid<Quad>(d);
  ASSERT_EQ(q->size(), d.grid().size());
  for (std::size_t j = 0; j < q->size(); ++j) {
    EXPECT_LT(std::abs(to_double(q->nodes[j]) - d.grid().nodes[j]), 1e-14);
    EXPECT_LT(std::abs(static_cast<double>(q->ds[j]) - d.grid().ds[j]), 1e-14);
  }
}
