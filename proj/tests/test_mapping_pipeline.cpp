#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "tcmap/domain_io.hpp"
#include "tcmap/mapping_pipeline.hpp"
#include "tcmap/representative_domain.hpp"

using namespace tcmap;

namespace {

const TwoConnectedDomain& annulus2() {
  static const TwoConnectedDomain d = annulus_boundary(2.0, 256);
  return d;
}

const TwoConnectedDomain& ar105() {
  static const TwoConnectedDomain d = ar_boundary(1.05, 256);
  return d;
}

const MapParameters& annulus_params() {
  static const MapParameters p = map_parameters_from_seed(annulus2(), Complex(1.3, 0.0));
  return p;
}

// total turning of a closed sampled curve about w, in turns
double winding_about(std::span<const Complex> pts, Complex w) {
  double total = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) total += std::arg((pts[(j + 1) % pts.size()] - w) / (pts[j] - w));
  return total / kTwoPi;
}

// m(z) = z / (1 - 0.2 z), pole at 5 outside the annulus of radius 2
Complex mobius(Complex z) { return z / (1.0 - 0.2 * z); }
Complex mobius_prime(Complex z) { return 1.0 / ((1.0 - 0.2 * z) * (1.0 - 0.2 * z)); }

Curve mobius_circle(double radius, std::size_t nodes, CurveRole role) {
  std::vector<Complex> z(nodes), dz(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const Complex zeta = std::polar(radius, kTwoPi * static_cast<double>(j) / static_cast<double>(nodes));
    z[j] = mobius(zeta);
    dz[j] = mobius_prime(zeta) * kI * zeta;
  }
  return Curve(std::move(z), std::move(dz), role);
}

}  // namespace

TEST(SelectBasePoint, AnnulusTieBreak) {
  const Complex a = select_base_point(annulus2(), Complex(1.3, 0.0));
  EXPECT_NEAR(std::abs(a + kI), 0.0, 1e-6);
}

TEST(SelectBasePoint, OnTheMedian) {
  for (Complex seed : {Complex(0.7, 0.2), Complex(-1.5, 0.4), Complex(0.2, -1.1)})
    EXPECT_NEAR(std::abs(select_base_point(annulus2(), seed)), 1.0, 1e-6) << seed;
}

TEST(SelectBasePoint, RejectsSeedOutside) {
  EXPECT_THROW(select_base_point(annulus2(), Complex(2.5, 0.0)), DomainError);
}

TEST(MapParameters, JoukowskyDomain) {
  const auto p = map_parameters(ar105(), kI, kI);
  EXPECT_NEAR(std::abs(p.c - 1.05), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(p.lambda - 1.0), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(p.p1 + 1.0), 0.0, 1e-6);
  EXPECT_NEAR(std::abs(p.p2 - 1.0), 0.0, 1e-6);
}

TEST(MapParameters, AnnulusMatchesTheta) {
  EXPECT_NEAR(annulus_params().r, r_from_rho(2.0), 1e-5);
}

TEST(MapParameters, Invariants) {
  for (const auto* p : {&annulus_params()}) {
    const auto& f = *p->ahlfors;
    EXPECT_NEAR(std::abs(p->lambda), 1.0, 1e-8);
    EXPECT_NEAR(std::abs(p->c - p->r * p->lambda), 0.0, 1e-12);
    EXPECT_GT(p->r, 1.0);
    EXPECT_NEAR(std::abs(p->lambda * f(p->p1) + 1.0 / p->r), 0.0, 1e-6);
    EXPECT_NEAR(std::abs(p->lambda * f(p->p2) - 1.0 / p->r), 0.0, 1e-6);
    EXPECT_NEAR(std::abs(f(p->p1) + f(p->p2)), 0.0, 1e-6);
  }
}

TEST(MapParameters, OffMedianBasePointIsInconsistent) {
  EXPECT_THROW(map_parameters(annulus2(), Complex(1.3, 0.0), Complex(1.3, 0.0)), ConsistencyError);
}

TEST(BuildPhi, IdentityOnJoukowskyDomain) {
  const auto phi = build_phi(map_parameters(ar105(), kI, kI));
  const auto& g = phi.grid();
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) worst = std::max(worst, std::abs(phi.boundary_values()[j] - g.nodes[j]));
  EXPECT_LE(worst, 1e-6);
}

TEST(BuildPhi, BoundaryToBoundary) {
  const auto phi = build_phi(annulus_params());
  EXPECT_LE(phi.boundary_residual(), 1e-6);
  const std::size_t n_outer = annulus2().outer().size();
  for (std::size_t j = 0; j < phi.boundary_values().size(); ++j) {
    if (j < n_outer)
      EXPECT_GT(std::abs(phi.boundary_values()[j]), 1.0);
    else
      EXPECT_LT(std::abs(phi.boundary_values()[j]), 1.0);
  }
}

TEST(BuildPhi, JoukowskyIdentityInTheInterior) {
  const auto phi = build_phi(annulus_params());
  const auto pts = interior_grid(annulus2(), 20, 0.1);
  ASSERT_GT(pts.size(), 100u);
  EXPECT_LE(phi_identity_residual(phi, pts), 1e-6);
}

TEST(BuildPhi, BasePointGoesToI) {
  const auto phi = build_phi(annulus_params());
  EXPECT_NEAR(std::abs(phi(annulus_params().base_point) - kI), 0.0, 1e-6);
}

TEST(BuildPhi, BranchPointsGoToMinusOneAndOne) {
  const auto phi = build_phi(annulus_params());
  const double h = 1e-3;
  for (auto [p, target] : {std::pair{annulus_params().p1, -1.0}, std::pair{annulus_params().p2, 1.0}}) {
    // average over a small cross around p: removes the odd terms of the expansion
    const Complex avg = 0.25 * (phi(p + h) + phi(p - h) + phi(p + kI * h) + phi(p - kI * h));
    EXPECT_NEAR(std::abs(avg - target), 0.0, 1e-5);
  }
}

TEST(BuildPhi, InjectiveOnInteriorGrid) {
  const auto phi = build_phi(annulus_params());
  const auto pts = interior_grid(annulus2(), 32, 0.1);
  std::vector<Complex> img;
  for (auto z : pts) img.push_back(phi(z));
  const double spacing = 4.0 / 32.0;
  double closest = 1e300;
  for (std::size_t a = 0; a < img.size(); ++a)
    for (std::size_t b = a + 1; b < img.size(); ++b) closest = std::min(closest, std::abs(img[a] - img[b]));
  // |Phi'| on the annulus stays well above 0.1
  EXPECT_GT(closest, 0.1 * spacing);
}

TEST(BuildPhi, BoundaryCurvesWindOnce) {
  const auto phi = build_phi(annulus_params());
  const std::size_t n_outer = annulus2().outer().size();
  const auto vals = phi.boundary_values();
  const auto outer = vals.subspan(0, n_outer);
  const auto inner = vals.subspan(n_outer);
  EXPECT_NEAR(std::abs(winding_about(outer, 0.0)), 1.0, 1e-9);
  EXPECT_NEAR(std::abs(winding_about(inner, 0.0)), 1.0, 1e-9);
  double gap = 1e300;
  for (std::size_t j = 0; j < n_outer; ++j) gap = std::min(gap, std::abs(outer[j] - outer[(j + 1) % n_outer]));
  EXPECT_GT(gap, 1e-4);
}

TEST(BuildPhi, LambdaLabelingConvention) {
  const auto p = map_parameters_from_seed(annulus2(), Complex(1.3, 0.0), Labeling::lambda_argument);
  const double angle = std::arg(p.lambda);
  EXPECT_GE(angle, -1e-12);
  EXPECT_LT(angle, kPi);
  const auto phi = build_phi(p);
  EXPECT_LE(phi.boundary_residual(), 1e-6);
  EXPECT_LE(phi_identity_residual(phi, interior_grid(annulus2(), 12, 0.1)), 1e-6);
}

TEST(TraceMedian, UnitCircleOnAnnulus) {
  const auto m = trace_median(annulus_params(), 40);
  for (auto w : m.points) EXPECT_NEAR(std::abs(w), 1.0, 1e-5);
  const auto& f = *annulus_params().ahlfors;
  for (std::size_t k = 0; k < m.points.size(); ++k) {
    if (m.arc[k] == 0) continue;
    EXPECT_NEAR(std::abs(f(m.points[k]) - m.tau_values[k]), 0.0, 1e-6);
  }
  EXPECT_EQ(m.points.front(), annulus_params().p1);
}

TEST(TraceMedian, UnitCircleOnJoukowskyDomain) {
  const auto m = trace_median(map_parameters(ar105(), kI, kI), 30);
  for (auto w : m.points) EXPECT_NEAR(std::abs(w), 1.0, 1e-5);
}

TEST(TraceMedian, CountContract) {
  const auto m = trace_median(annulus_params(), 2);
  ASSERT_EQ(m.points.size(), 6u);
  EXPECT_EQ(m.arc, (std::vector<int>{0, 1, 1, 0, 2, 2}));
  EXPECT_EQ(m.points[0], annulus_params().p1);
  EXPECT_EQ(m.points[3], annulus_params().p2);
  EXPECT_THROW(trace_median(annulus_params(), 1), DomainError);
}

TEST(TraceMedian, ArcsAreContinuous) {
  const auto m = trace_median(annulus_params(), 64);
  for (std::size_t k = 0; k + 1 < m.points.size(); ++k) EXPECT_LT(std::abs(m.points[k + 1] - m.points[k]), 0.5);
  EXPECT_LT(std::abs(m.points.back() - m.points.front()), 0.5);
}

TEST(Modulus, Annulus) { EXPECT_NEAR(modulus(annulus_params()) / 4.0, 1.0, 1e-4); }

TEST(Modulus, JoukowskyDomain) {
  const double rho = rho_from_r(1.05);
  EXPECT_NEAR(modulus(map_parameters(ar105(), kI, kI)), rho * rho, 1e-6);
}

TEST(Modulus, ThinAnnulus) {
  // rho = 1.1 needs N = 768 and the extended-precision solve
  const auto d = annulus_boundary(1.1, 768);
  const auto p = map_parameters_from_seed(d, d.reference_point());
  EXPECT_EQ(p.precision, Precision::extended);
  EXPECT_NEAR(modulus(p) / 1.21, 1.0, 1e-4);
}

TEST(Modulus, MobiusInvariance) {
  const auto d = TwoConnectedDomain(mobius_circle(2.0, 256, CurveRole::outer), mobius_circle(0.5, 256, CurveRole::inner),
                                    mobius(Complex(1.3, 0.0)));
  const auto p = map_parameters_from_seed(d, d.reference_point());
  EXPECT_NEAR(p.r, annulus_params().r, 1e-5);
}

TEST(Pipeline, PerturbedAnnulusFromData) {
  const auto d = load_domain(std::string(TCMAP_DATA_DIR) + "/perturbed_annulus.json");
  const auto p = map_parameters_from_seed(d, d.reference_point());
  const auto phi = build_phi(p);
  EXPECT_LE(phi.boundary_residual(), 1e-6);
  EXPECT_LE(phi_identity_residual(phi, interior_grid(d, 16, 0.1)), 1e-6);
  EXPECT_NEAR(std::abs(phi(p.base_point) - kI), 0.0, 1e-6);
}

TEST(InteriorGrid, StaysInsideWithCollar) {
  const auto pts = interior_grid(annulus2(), 20, 0.1);
  for (auto z : pts) {
    EXPECT_TRUE(annulus2().contains(z));
    EXPECT_GT(std::abs(z), 0.6 - 1e-12);
    EXPECT_LT(std::abs(z), 1.9 + 1e-12);
  }
}
