#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "curvkit/quadrature.hpp"

using namespace curvkit;

namespace {

const Complex I(0, 1);

Complex cauchy_sq(Complex z, const CurvePoint& pt) {
    const Complex d = z - pt.zeta;
    return pt.tangent / (d * d);
}

}  // namespace

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    const auto rule = gauss_legendre(16);
    for (int k = 0; k < 32; ++k) {
        double s = 0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
        const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
        EXPECT_NEAR(s, exact, 1e-14) << "degree " << k;
    }
}

TEST(QuadratureSpec, RejectsBadSettings) {
    QuadratureSpec s;
    s.base_nodes = 1;
    EXPECT_THROW(s.validate(), DomainError);
    s = {};
    s.rel_tol = 0;
    EXPECT_THROW(s.validate(), DomainError);
}

TEST(CurvePiece, Invariants) {
    EXPECT_THROW(CurvePiece::segment(1.0, 1.0), DomainError);
    EXPECT_THROW(CurvePiece::arc(0.0, 0.0, 0.0, 1.0), DomainError);
    EXPECT_THROW(CurvePiece::ray(0.0, Complex(1.0, 1e-6)), DomainError);
    EXPECT_THROW(CurvePiece::segment(0.0, 1.0, 0.0), DomainError);
    EXPECT_THROW(CurvePiece::segment(0.0, 1.0, -1.0), DomainError);
}

TEST(PlaneCurve, ClosedCurvesMustChainAndHaveNoRays) {
    EXPECT_THROW(PlaneCurve({}, false), DomainError);
    EXPECT_THROW(PlaneCurve({CurvePiece::segment(0.0, 1.0), CurvePiece::segment(1.0, I)}, true), DomainError);
    EXPECT_THROW(PlaneCurve({CurvePiece::ray(0.0, 1.0)}, true), DomainError);
    EXPECT_NO_THROW(PlaneCurve::polygon({0.0, 1.0, I}));
    EXPECT_NO_THROW(PlaneCurve::circle(0.0, 1.0));
}

TEST(PlaneCurve, DistanceAndVertices) {
    const auto square = PlaneCurve::polygon({0.0, 1.0, Complex(1, 1), I});
    EXPECT_NEAR(square.distance_to(Complex(0.5, 0.5)), 0.5, 1e-15);
    EXPECT_NEAR(square.distance_to(Complex(2, 2)), std::sqrt(2.0), 1e-15);
    EXPECT_EQ(square.vertices().size(), 4u);
    EXPECT_NEAR(square.perimeter(), 4.0, 1e-15);

    const auto arc = CurvePiece::arc(0.0, 1.0, 0.0, std::numbers::pi / 2);
    EXPECT_NEAR(arc.distance_to(Complex(2, 2)), 2 * std::sqrt(2.0) - 1, 1e-14);
    EXPECT_NEAR(arc.distance_to(Complex(-2, 0)), std::sqrt(5.0), 1e-14);  // nearest is the endpoint i
    EXPECT_NEAR(CurvePiece::ray(0.0, 1.0).distance_to(Complex(-3, 4)), 5.0, 1e-15);
}

TEST(IntegrateAdaptive, PolynomialOnUnitSegment) {
    const auto v = integrate_adaptive([](const CurvePoint& pt) { return pt.zeta * pt.zeta * pt.tangent; },
                                      CurvePiece::segment(0.0, 1.0), QuadratureSpec{});
    EXPECT_NEAR(v.real(), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(v.imag(), 0.0, 1e-12);
}

TEST(IntegrateAdaptive, CauchySquaredOnSegment) {
    const Complex z = I;
    const auto v = integrate_adaptive([&](const CurvePoint& pt) { return cauchy_sq(z, pt); },
                                      CurvePiece::segment(-1.0, 1.0), QuadratureSpec{}, z);
    // 1/(i-1) - 1/(i+1) = -1 by hand
    EXPECT_NEAR(std::abs(v - Complex(-1.0)), 0.0, 1e-12);
}

TEST(IntegrateAdaptive, CauchySquaredOnRay) {
    const Complex z = I;
    const auto v = integrate_adaptive([&](const CurvePoint& pt) { return cauchy_sq(z, pt); }, CurvePiece::ray(0.0, 1.0),
                                      QuadratureSpec{}, z);
    // antiderivative 1/(z - t): 0 at infinity minus 1/i at t = 0
    EXPECT_NEAR(std::abs(v - I), 0.0, 2e-10);
}

TEST(IntegrateAdaptive, RandomSegmentsMatchAntiderivatives) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-2, 2);
    const QuadratureSpec spec;
    for (int t = 0; t < 100; ++t) {
        const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
        const auto piece = CurvePiece::segment(a, b);

        // polynomial: zeta^3 d(zeta)
        const auto poly = integrate_adaptive([](const CurvePoint& p) { return std::pow(p.zeta, 3) * p.tangent; }, piece, spec);
        const Complex poly_exact = (std::pow(b, 4) - std::pow(a, 4)) / 4.0;
        EXPECT_LE(std::abs(poly - poly_exact), 1e-10 * std::max(1.0, std::abs(poly_exact)));

        // pole-free rational: (zeta - p)^{-2} with p well off the segment
        const Complex p = Complex(u(rng), 5.0 + u(rng));
        const auto rat = integrate_adaptive([&](const CurvePoint& q) { return q.tangent / ((q.zeta - p) * (q.zeta - p)); },
                                            piece, spec);
        const Complex rat_exact = -1.0 / (b - p) + 1.0 / (a - p);
        EXPECT_LE(std::abs(rat - rat_exact), 1e-10 * std::max(1.0, std::abs(rat_exact)));

        // log with the branch point left of every segment point
        const Complex s = -4.0;
        auto anti = [&](Complex w) { return (w - s) * std::log(w - s) - w; };
        const auto lg = integrate_adaptive([&](const CurvePoint& q) { return std::log(q.zeta - s) * q.tangent; }, piece, spec);
        EXPECT_LE(std::abs(lg - (anti(b) - anti(a))), 1e-10 * std::max(1.0, std::abs(anti(b) - anti(a))));
    }
}

TEST(IntegrateAdaptive, ArcLengthOfQuarterCircle) {
    const auto v = integrate_adaptive([](const CurvePoint& p) { return Complex(p.speed); },
                                      CurvePiece::arc(0.0, 2.0, 0.0, std::numbers::pi / 2), QuadratureSpec{});
    EXPECT_NEAR(v.real(), std::numbers::pi, 1e-13);
}

TEST(IntegrateAdaptive, NearSingularPointsStayAccurate) {
    // the value stays O(1) while int |f| grows like pi/d, so accuracy is
    // measured against the latter once cancellation dominates
    for (double d : {1e-2, 1e-4, 1e-6}) {
        const Complex z(0.3, d);
        const auto v = integrate_adaptive([&](const CurvePoint& pt) { return cauchy_sq(z, pt); },
                                          CurvePiece::segment(-1.0, 1.0), QuadratureSpec{}, z);
        const Complex exact = 1.0 / (z - 1.0) - 1.0 / (z + 1.0);
        EXPECT_LE(std::abs(v - exact), 1e-10 * std::abs(exact) + 1e-13 * std::numbers::pi / d) << "distance " << d;
    }
}

TEST(IntegrateAdaptive, RayTruncationIsConverged) {
    const Complex z(0.4, 0.9);
    const Complex tau = std::polar(1.0, 0.3);
    const QuadratureSpec spec;
    const auto piece = CurvePiece::ray(0.0, tau, 1.0);
    const double cutoff = ray_truncation_length(piece, z, spec);
    // integral over [0, T] is 1/(z - T tau) - 1/z
    auto upto = [&](double stop) { return 1.0 / (z - stop * tau) - 1.0 / z; };
    EXPECT_LT(std::abs(upto(2 * cutoff) - upto(cutoff)), spec.ray_truncation_tol);
    const auto v = integrate_adaptive([&](const CurvePoint& pt) { return cauchy_sq(z, pt); }, piece, spec, z);
    EXPECT_LT(std::abs(v - upto(cutoff)), 1e-11);
    EXPECT_LT(std::abs(v - upto(std::numeric_limits<double>::infinity())), spec.ray_truncation_tol);
}

TEST(IntegrateAdaptive, ExhaustedSubdivisionsReportBestEstimate) {
    QuadratureSpec spec;
    spec.max_subdivisions = 2;
    const Complex z(0.0, 1e-6);
    try {
        integrate_adaptive([&](const CurvePoint& pt) { return cauchy_sq(z, pt); }, CurvePiece::segment(-1.0, 1.0), spec, z);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_TRUE(std::isfinite(e.best_real()));
        EXPECT_GT(e.error_bound(), 0.0);
    }
}
