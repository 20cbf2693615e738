#pragma once

// Self-check suites over the library's identities, producing a RunReport
// with one line per check. Used by `curvkit verify`.

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "curvkit/clifford.hpp"
#include "curvkit/clifford_analysis.hpp"
#include "curvkit/hypersurface.hpp"
#include "curvkit/plane_contours.hpp"
#include "curvkit/quadrature.hpp"

namespace curvkit::verify {

struct Check {
    std::string name;
    double expected;
    double actual;
    double tolerance;
    bool pass;
};

struct RunReport {
    std::string suite;
    std::vector<Check> checks;
    double wall_seconds = 0.0;
    QuadratureSpec quadrature;
    std::uint64_t seed = 0;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    /// |actual - expected| <= tolerance
    void expect_near(std::string name, double expected, double actual, double tolerance) {
        checks.push_back({std::move(name), expected, actual, tolerance, std::abs(actual - expected) <= tolerance});
    }

    /// actual <= bound
    void expect_at_most(std::string name, double actual, double bound) {
        checks.push_back({std::move(name), 0.0, actual, bound, actual <= bound});
    }

    /// actual >= bound
    void expect_at_least(std::string name, double actual, double bound) {
        checks.push_back({std::move(name), bound, actual, 0.0, actual >= bound});
    }

    nlohmann::json to_json() const {
        nlohmann::json cs = nlohmann::json::array();
        for (const auto& c : checks)
            cs.push_back({{"name", c.name},
                          {"expected", c.expected},
                          {"actual", c.actual},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
        return {{"suite", suite},
                {"pass", passed()},
                {"seed", seed},
                {"wall_seconds", wall_seconds},
                {"quadrature",
                 {{"rel_tol", quadrature.rel_tol},
                  {"abs_tol", quadrature.abs_tol},
                  {"max_subdivisions", quadrature.max_subdivisions},
                  {"base_nodes", quadrature.base_nodes},
                  {"ray_truncation_tol", quadrature.ray_truncation_tol},
                  {"near_singularity_ratio", quadrature.near_singularity_ratio},
                  {"residue_radius_factor", quadrature.residue_radius_factor},
                  {"residue_angles", quadrature.residue_angles}}},
                {"checks", cs}};
    }
};

namespace detail {

using clifford::BasisBlade;
using clifford::CliffordVector;
using clifford::Multivector;
using clifford::Paravector;

inline Multivector random_multivector(int dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> c(std::size_t{1} << dim);
    for (double& x : c) x = u(rng);
    return Multivector(dim, std::move(c));
}

inline CliffordVector random_vector(int dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> c(dim);
    for (double& x : c) x = u(rng);
    return CliffordVector(std::move(c));
}

inline Complex random_point(std::mt19937_64& rng, double extent) {
    std::uniform_real_distribution<double> u(-extent, extent);
    return {u(rng), u(rng)};
}

/// Random star-shaped polygon around `center`.
inline std::vector<Complex> random_polygon(std::mt19937_64& rng, Complex center, int vertices) {
    std::uniform_real_distribution<double> radius(0.5, 1.5), jitter(0.0, 1.0);
    std::vector<Complex> out;
    const double step = 2 * std::numbers::pi / vertices;
    for (int i = 0; i < vertices; ++i) out.push_back(center + std::polar(radius(rng), (i + 0.8 * jitter(rng)) * step));
    return out;
}

template <typename F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline void run_algebra(RunReport& r, std::mt19937_64& rng) {
    using namespace detail;
    double anti = 0.0, contraction = 0.0;
    for (int n = 1; n <= 5; ++n)
        for (int j = 1; j <= n; ++j) {
            const auto ej = Multivector::generator(n, j);
            contraction = std::max(contraction, (ej * ej).max_abs_diff(Multivector::scalar(n, -1.0)));
            for (int k = 1; k <= n; ++k) {
                if (j == k) continue;
                const auto ek = Multivector::generator(n, k);
                anti = std::max(anti, (ej * ek).max_abs_diff(-(ek * ej)));
            }
        }
    r.expect_near("anticommutation e_j e_k = -e_k e_j", 0.0, anti, 0.0);
    r.expect_near("contraction e_j^2 = -1", 0.0, contraction, 0.0);

    double assoc = 0.0, distrib = 0.0;
    std::uniform_int_distribution<int> dims(1, 5);
    for (int t = 0; t < 1000; ++t) {
        const int n = dims(rng);
        const auto a = random_multivector(n, rng), b = random_multivector(n, rng), c = random_multivector(n, rng);
        assoc = std::max(assoc, ((a * b) * c).max_abs_diff(a * (b * c)));
        distrib = std::max(distrib, (a * (b + c)).max_abs_diff(a * b + a * c));
    }
    r.expect_at_most("associativity, 1000 random triples n<=5", assoc, 1e-12);
    r.expect_at_most("distributivity, 1000 random triples n<=5", distrib, 1e-12);

    double square = 0.0, inverse = 0.0, conj = 0.0, para_inv = 0.0;
    for (int t = 0; t < 200; ++t) {
        const int n = dims(rng);
        const auto v = random_vector(n, rng);
        const auto vv = v.to_multivector() * v.to_multivector();
        square = std::max(square, vv.max_abs_diff(Multivector::scalar(n, clifford::vector_square(v))));
        inverse = std::max(inverse, (v.to_multivector() * clifford::invert_vector(v).to_multivector())
                                        .max_abs_diff(Multivector::scalar(n, 1.0)));
        const Paravector p(std::uniform_real_distribution<double>(-2, 2)(rng), random_vector(n, rng));
        const auto pm = p.to_multivector(), pc = clifford::conjugate(p).to_multivector();
        const auto norm2 = Multivector::scalar(n, p.squared_norm());
        conj = std::max({conj, (pm * pc).max_abs_diff(norm2), (pc * pm).max_abs_diff(norm2),
                         clifford::conjugate(clifford::conjugate(p)).to_multivector().max_abs_diff(pm)});
        para_inv = std::max(para_inv, (pm * clifford::invert_paravector(p).to_multivector())
                                          .max_abs_diff(Multivector::scalar(n, 1.0)));
    }
    r.expect_at_most("vector square = -sum beta_j^2", square, 1e-12);
    r.expect_at_most("vector inverse product = 1", inverse, 1e-12);
    r.expect_at_most("conjugation: involution and beta beta* = beta* beta = |beta|^2", conj, 1e-12);
    r.expect_at_most("paravector inverse product = 1", para_inv, 1e-12);

    double complex_iso = 0.0;
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 100; ++t) {
        const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        const auto prod = Multivector(1, {a, b}) * Multivector(1, {c, d});
        complex_iso = std::max({complex_iso, std::abs(prod.coeffs()[0] - (a * c - b * d)),
                                std::abs(prod.coeffs()[1] - (a * d + b * c))});
    }
    r.expect_near("C(1) isomorphic to complex numbers (100 products)", 0.0, complex_iso, 0.0);

    // 1, i, j, k <-> 1, e1, e2, e1e2; Hamilton's table
    const Multivector q[4] = {Multivector::scalar(2, 1), Multivector::generator(2, 1), Multivector::generator(2, 2),
                              Multivector::blade(2, BasisBlade::from_indices({1, 2}))};
    const int table[4][4][2] = {{{0, 1}, {1, 1}, {2, 1}, {3, 1}},
                                {{1, 1}, {0, -1}, {3, 1}, {2, -1}},
                                {{2, 1}, {3, -1}, {0, -1}, {1, 1}},
                                {{3, 1}, {2, 1}, {1, -1}, {0, -1}}};
    double quat = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            quat = std::max(quat, (q[a] * q[b]).max_abs_diff(q[table[a][b][0]] * double(table[a][b][1])));
    r.expect_near("C(2) reproduces the quaternion table", 0.0, quat, 0.0);
}

inline void run_plane(RunReport& r, std::mt19937_64& rng, const QuadratureSpec& spec) {
    using namespace detail;
    using plane::MeasureKind;
    const Complex I(0, 1);

    const auto spot = plane::cauchy_squared(PlaneCurve({CurvePiece::segment(-1, 1)}), MeasureKind::ComplexForm, I, spec);
    r.expect_near("segment (-1,1) at z=i equals -1", 0.0, std::abs(spot + 1.0), 1e-10);

    double path = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Complex a = random_point(rng, 2), b = random_point(rng, 2), x1 = random_point(rng, 2),
                      x2 = random_point(rng, 2);
        const auto curve = PlaneCurve::polyline({a, x1, x2, b});
        Complex z = random_point(rng, 2);
        while (curve.distance_to(z) < 0.05) z = random_point(rng, 2);
        const Complex exact = plane::segment_closed_form(a, b, z);
        path = std::max(path, std::abs(plane::cauchy_squared(curve, MeasureKind::ComplexForm, z, spec) - exact) /
                                  std::max(1.0, std::abs(exact)));
    }
    r.expect_at_most("path independence over random polylines", path, 1e-9);

    double closed = 0.0;
    std::uniform_int_distribution<int> nverts(3, 8);
    for (int t = 0; t < 10; ++t) {
        const auto poly = PlaneCurve::polygon(random_polygon(rng, random_point(rng, 1), nverts(rng)));
        for (int k = 0; k < 10; ++k) {
            Complex z = random_point(rng, 3);
            while (poly.distance_to(z) < 0.02) z = random_point(rng, 3);
            const double d = poly.distance_to(z);
            const double scale = poly.perimeter() / (d * d);
            closed = std::max(closed, std::abs(plane::cauchy_squared(poly, MeasureKind::ComplexForm, z, spec)) / scale);
        }
    }
    r.expect_near("closed polygon vanishing (scaled)", 0.0, closed, 1e-9);

    double inside = 0.0, outside = 0.0;
    for (int t = 0; t < 20; ++t) {
        const Complex zi = std::polar(0.9 * std::sqrt(std::uniform_real_distribution<double>(0, 1)(rng)),
                                      std::uniform_real_distribution<double>(0, 2 * std::numbers::pi)(rng));
        inside = std::max(inside, std::abs(plane::circle_weighted(zi, spec)));
        const Complex zo = std::polar(std::uniform_real_distribution<double>(1.1, 4.0)(rng),
                                      std::uniform_real_distribution<double>(0, 2 * std::numbers::pi)(rng));
        const Complex exact = 2 * std::numbers::pi * I / (zo * zo);
        outside = std::max(outside, std::abs(plane::circle_weighted(zo, spec) - exact) / std::abs(exact));
    }
    r.expect_at_most("unit circle weighted integral vanishes for |z|<0.9", inside, 1e-8);
    r.expect_at_most("unit circle weighted integral = 2 pi i / z^2 for |z|>1.1", outside, 1e-8);

    const plane::CornerSpec corner(0.0, 1.0, Complex(1, 1));
    const auto fit = plane::residue_fit(corner.curve(), corner.p, MeasureKind::Arclength, spec);
    const Complex want = corner_closed_form(corner, Complex(3, 3)).residue();
    r.expect_at_most("corner residue fit matches c1 - c2 (relative)", std::abs(fit.coefficient - want) / std::abs(want),
                     1e-4);

    const auto fan = plane::RayFan::at_angles(0.0, {0.0, 2 * std::numbers::pi / 3, 4 * std::numbers::pi / 3});
    r.expect_near("symmetric 3-ray fan balance constant", 0.0, std::abs(plane::ray_balance_constant(fan)), 1e-12);
    r.expect_at_most("symmetric 3-ray fan residue fit",
                     std::abs(plane::residue_fit(fan.curve(), 0.0, MeasureKind::Weighted, spec).coefficient), 1e-6);

    const auto line = PlaneCurve::line(0.0, 1.0);
    r.expect_near("line: arclength Cauchy-squared integral vanishes", 0.0,
                  std::abs(plane::cauchy_squared(line, MeasureKind::Arclength, I, spec)),
                  spec.ray_truncation_tol);
    for (double y : {0.5, 1.0, 2.0})
        r.expect_near("line: mass * dist = pi at y=" + std::to_string(y), std::numbers::pi,
                      plane::mass_integral(line, Complex(0, y), spec) * y, 1e-6);

    const Complex a = Complex(-0.3, 0.2), b = Complex(1.1, 0.7), z = Complex(0.2, 1.5);
    const auto seg = PlaneCurve({CurvePiece::segment(a, b)});
    const Complex ratio = plane::cauchy_squared(seg, MeasureKind::Arclength, z, spec) /
                          plane::cauchy_squared(seg, MeasureKind::ComplexForm, z, spec);
    r.expect_near("segment: arclength / complex measure = |b-a|/(b-a)", 0.0,
                  std::abs(ratio - std::abs(b - a) / (b - a)), 1e-9);
}

inline void run_clifford(RunReport& r, std::mt19937_64& rng, const analysis::DiracSpec& dirac) {
    using namespace detail;
    using analysis::SurfaceWeight;
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    // D^2 f = -Laplacian f on a Gaussian in R^3
    auto gauss = [](std::span<const double> p) {
        double r2 = 0;
        for (double c : p) r2 += c * c;
        return std::exp(-r2);
    };
    auto neg_laplacian = [](std::span<const double> p) {
        double r2 = 0;
        for (double c : p) r2 += c * c;
        return -(4 * r2 - 2.0 * static_cast<double>(p.size())) * std::exp(-r2);
    };
    std::vector<std::vector<double>> points;
    for (int t = 0; t < 20; ++t) points.push_back({u(rng), u(rng), u(rng)});
    double dd = 0.0, lap_scale = 0.0;
    for (const auto& x : points) {
        const auto got = analysis::dirac_squared(analysis::scalar_field(3, gauss), x, {1e-3});
        dd = std::max(dd, got.max_abs_diff(Multivector::scalar(3, neg_laplacian(x))));
        lap_scale = std::max(lap_scale, std::abs(neg_laplacian(x)));
    }
    r.expect_at_most("D^2 = -Laplacian on a Gaussian (h=1e-3, relative to max |Laplacian|)", dd / lap_scale, 1e-4);

    // D E(. - y) = 0 off the diagonal: the residual must fall like h^2
    auto residual = [&](double h) {
        std::mt19937_64 local(rng());
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            std::vector<double> x{u(local), u(local), u(local)}, y(3);
            const double dist = std::uniform_real_distribution<double>(0.5, 2.0)(local);
            const auto dir = random_vector(3, local);
            for (int j = 0; j < 3; ++j) y[j] = x[j] + dist * dir.component(j + 1) / dir.norm();
            const auto f = [&](std::span<const double> p) { return analysis::cauchy_kernel(p, y).to_multivector(); };
            worst = std::max(worst, analysis::dirac_apply(f, x, {h}).norm());
        }
        return worst;
    };
    const std::uint64_t state = rng();
    rng.seed(state);
    const double coarse = residual(1e-2);
    rng.seed(state);
    const double fine = residual(1e-3);
    r.expect_at_least("Clifford analyticity: |D E| decays as h^2 (order)", std::log10(coarse / fine), 1.9);

    for (int n = 2; n <= 4; ++n) {
        double spread = 0.0;
        for (int t = 0; t < 20; ++t) {
            std::vector<double> x(n);
            for (double& c : x) c = 2 * u(rng);
            for (double ratio : analysis::kernel_potential_ratios(x, dirac))
                spread = std::max(spread, std::abs(ratio - analysis::kernel_potential_constant(n)));
        }
        r.expect_at_most("E / D(potential) constant, n=" + std::to_string(n), spread, 1e-6);
    }

    const auto sphere = mesh_sphere({0, 0, 0}, 1.0, 4);
    const double four_pi = 4 * std::numbers::pi;
    const std::vector<double> center{0, 0, 0};
    r.expect_near("unit sphere interior constant = 4 pi (relative)", 0.0,
                  analysis::surface_cauchy_integral(sphere, center).max_abs_diff(Multivector::scalar(3, four_pi)) /
                      four_pi,
                  1e-2);
    const std::vector<double> outside{3, 0, 0};
    r.expect_at_most("unit sphere exterior value / 4 pi", analysis::surface_cauchy_integral(sphere, outside).norm() / four_pi,
                     1e-3);
    double deriv = 0.0;
    for (int m = 1; m <= 3; ++m)
        deriv = std::max(deriv, analysis::surface_derivative_integral(sphere, std::vector<double>{2, 0, 0}, m,
                                                                      SurfaceWeight::Normal)
                                    .norm());
    r.expect_at_most("N-weighted derivative integral vanishes outside the sphere / 4 pi", deriv / four_pi, 1e-2);

    // n = 2: -e1 E(x - y) maps to 1/(z - w) under e1e2 -> i
    double planar = 0.0;
    for (int t = 0; t < 20; ++t) {
        const std::vector<double> x{2 * u(rng), 2 * u(rng)}, y{2 * u(rng), 2 * u(rng)};
        const auto m = -(Multivector::generator(2, 1) * analysis::cauchy_kernel(x, y).to_multivector());
        const Complex mapped(m.scalar_part(), m[BasisBlade::from_indices({1, 2})]);
        const Complex want = 1.0 / (Complex(x[0], x[1]) - Complex(y[0], y[1]));
        planar = std::max(planar, std::abs(mapped - want) / std::abs(want));
    }
    r.expect_at_most("n=2 kernel matches 1/(z-w) under the even-subalgebra isomorphism", planar, 1e-14);
}

/// suite is "algebra", "plane", "clifford" or "all".
inline RunReport run_suite(const std::string& suite, std::uint64_t seed, const QuadratureSpec& spec = {},
                           const analysis::DiracSpec& dirac = {}) {
    if (suite != "algebra" && suite != "plane" && suite != "clifford" && suite != "all")
        throw DomainError("unknown suite '" + suite + "'");
    RunReport report;
    report.suite = suite;
    report.seed = seed;
    report.quadrature = spec;
    std::mt19937_64 rng(seed);
    report.wall_seconds = detail::timed([&] {
        if (suite == "algebra" || suite == "all") run_algebra(report, rng);
        if (suite == "plane" || suite == "all") run_plane(report, rng, spec);
        if (suite == "clifford" || suite == "all") run_clifford(report, rng, dirac);
    });
    return report;
}

}  // namespace curvkit::verify
