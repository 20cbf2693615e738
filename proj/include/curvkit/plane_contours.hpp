#pragma once

// Integrals of 1/(z - zeta)^2 over planar curves against d(zeta), |d(zeta)|
// and d(alpha) = rho |d(zeta)|, their closed forms on segments, corners,
// the unit circle and rays, and numeric recovery of pole coefficients.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "curvkit/errors.hpp"
#include "curvkit/quadrature.hpp"

namespace curvkit::plane {

enum class MeasureKind {
    ComplexForm,  ///< d(zeta)
    Arclength,    ///< |d(zeta)|
    Weighted,     ///< rho |d(zeta)|
};

/// Evaluation points closer than this to the curve are rejected.
inline constexpr double kMinDistance = 1e-8;

namespace detail {

inline Complex measure_weight(const CurvePoint& pt, MeasureKind m) {
    switch (m) {
        case MeasureKind::ComplexForm: return pt.tangent;
        case MeasureKind::Arclength: return pt.speed;
        case MeasureKind::Weighted: return pt.density * pt.speed;
    }
    return 0.0;
}

inline void require_off_curve(const PlaneCurve& curve, Complex z) {
    if (curve.distance_to(z) <= kMinDistance) throw DomainError("evaluation point lies on the curve");
}

// Split the tail budget so the whole curve, not each ray, stays within it.
inline QuadratureSpec per_ray_spec(const PlaneCurve& curve, QuadratureSpec spec) {
    const auto rays = std::count_if(curve.pieces().begin(), curve.pieces().end(),
                                    [](const CurvePiece& p) { return p.is_ray(); });
    if (rays > 1) spec.ray_truncation_tol /= static_cast<double>(rays);
    return spec;
}

}  // namespace detail

/// Constant k with (measure) = k d(zeta) along a straight piece; nullopt for
/// arcs under a non-complex measure, where no such constant exists.
inline std::optional<Complex> piece_measure_factor(const CurvePiece& piece, MeasureKind m) {
    if (m == MeasureKind::ComplexForm) return Complex(1.0);
    if (std::holds_alternative<Arc>(piece.shape())) return std::nullopt;
    const CurvePoint pt = piece.at(0.0);
    return detail::measure_weight(pt, m) / pt.tangent;
}

/// int_Gamma (z - zeta)^{-2} (measure), by adaptive quadrature on every piece.
inline Complex cauchy_squared(const PlaneCurve& curve, MeasureKind measure, Complex z, const QuadratureSpec& spec = {}) {
    detail::require_off_curve(curve, z);
    const QuadratureSpec q = detail::per_ray_spec(curve, spec);
    Complex total{};
    for (const auto& piece : curve.pieces()) {
        total += integrate_adaptive(
            [&](const CurvePoint& pt) {
                const Complex d = z - pt.zeta;
                return detail::measure_weight(pt, measure) / (d * d);
            },
            piece, q, z);
    }
    return total;
}

/// 1/(z - b) - 1/(z - a), times the constant relating the measure to d(zeta).
inline Complex segment_closed_form(Complex a, Complex b, Complex z, MeasureKind measure = MeasureKind::ComplexForm,
                                   double density = 1.0) {
    const CurvePiece piece = CurvePiece::segment(a, b, density);
    if (piece.distance_to(z) <= kMinDistance) throw DomainError("evaluation point lies on the segment");
    return *piece_measure_factor(piece, measure) * (1.0 / (z - b) - 1.0 / (z - a));
}

/// Two-segment path a -> p -> b.
struct CornerSpec {
    Complex a, p, b;

    CornerSpec(Complex a_, Complex p_, Complex b_) : a(a_), p(p_), b(b_) {
        if (a == p || p == b || a == b) throw DomainError("corner points must be pairwise distinct");
    }

    PlaneCurve curve(double density = 1.0) const { return PlaneCurve::polyline({a, p, b}, density); }

    /// Turning angle between the two segments measured at p (pi = straight).
    double interior_angle() const { return std::abs(std::arg((a - p) / (b - p))); }
};

struct CornerValue {
    Complex value;
    Complex c1;  ///< |p - a| / (p - a)
    Complex c2;  ///< |b - p| / (b - p)

    /// Coefficient of (z - p)^{-1}.
    Complex residue() const { return c1 - c2; }
};

/// Arclength integral over a -> p -> b:
/// c1 (1/(z-p) - 1/(z-a)) + c2 (1/(z-b) - 1/(z-p)).
inline CornerValue corner_closed_form(const CornerSpec& c, Complex z) {
    if (c.curve().distance_to(z) <= kMinDistance) throw DomainError("evaluation point lies on the corner curve");
    const Complex c1 = std::abs(c.p - c.a) / (c.p - c.a);
    const Complex c2 = std::abs(c.b - c.p) / (c.b - c.p);
    const Complex value = c1 * (1.0 / (z - c.p) - 1.0 / (z - c.a)) + c2 * (1.0 / (z - c.b) - 1.0 / (z - c.p));
    return {value, c1, c2};
}

/// int over the unit circle of (z - zeta)^{-2} zeta^{-1} d(zeta):
/// zero inside (including z = 0), 2 pi i / z^2 outside.
inline Complex circle_weighted_closed_form(Complex z) {
    if (std::abs(std::abs(z) - 1.0) <= kMinDistance) throw DomainError("evaluation point lies on the unit circle");
    if (std::abs(z) < 1.0) return 0.0;
    return 2.0 * std::numbers::pi * Complex(0, 1) / (z * z);
}

/// Same integral by adaptive quadrature on the counterclockwise unit circle.
/// The arclength version differs by the constant 1/i, since |d(zeta)| = d(zeta)/(i zeta) there.
inline Complex circle_weighted(Complex z, const QuadratureSpec& spec = {}) {
    const PlaneCurve circle = PlaneCurve::circle(0.0, 1.0);
    detail::require_off_curve(circle, z);
    return integrate_adaptive(
        [&](const CurvePoint& pt) {
            const Complex d = z - pt.zeta;
            return pt.tangent / (d * d * pt.zeta);
        },
        circle.pieces().front(), spec, z);
}

/// Weighted integral over the ray q + t tau, t >= 0: (-rho / tau) / (z - q).
inline Complex ray_closed_form(Complex q, Complex direction, double density, Complex z) {
    const CurvePiece ray = CurvePiece::ray(q, direction, density);
    if (ray.distance_to(z) <= kMinDistance) throw DomainError("evaluation point lies on the ray");
    return (-density / direction) / (z - q);
}

struct FanRay {
    Complex direction;
    double density;
};

/// Finitely many rays emanating from one apex, each with constant density.
class RayFan {
  public:
    RayFan(Complex apex, std::vector<FanRay> rays) : apex_(apex), rays_(std::move(rays)) {
        if (rays_.empty()) throw DomainError("fan needs at least one ray");
        for (const auto& r : rays_) {
            if (std::abs(std::abs(r.direction) - 1.0) > 1e-14) throw DomainError("fan ray direction must be unit");
            if (!(r.density > 0)) throw DomainError("fan ray density must be positive");
        }
    }

    /// Rays at the given angles, all with the same density.
    static RayFan at_angles(Complex apex, const std::vector<double>& angles, double density = 1.0) {
        std::vector<FanRay> rays;
        for (double t : angles) rays.push_back({std::polar(1.0, t), density});
        return RayFan(apex, std::move(rays));
    }

    Complex apex() const { return apex_; }
    const std::vector<FanRay>& rays() const { return rays_; }

    PlaneCurve curve() const {
        std::vector<CurvePiece> pieces;
        for (const auto& r : rays_) pieces.push_back(CurvePiece::ray(apex_, r.direction, r.density));
        return PlaneCurve(std::move(pieces));
    }

    RayFan united_with(const RayFan& other) const {
        if (other.apex_ != apex_) throw DomainError("fans must share an apex");
        std::vector<FanRay> rays = rays_;
        rays.insert(rays.end(), other.rays_.begin(), other.rays_.end());
        return RayFan(apex_, std::move(rays));
    }

  private:
    Complex apex_;
    std::vector<FanRay> rays_;
};

/// -sum_k rho_k / tau_k: the weighted fan integral equals this constant times 1/(z - q).
/// It vanishes exactly when sum_k rho_k tau_k = 0.
inline Complex ray_balance_constant(const RayFan& fan) {
    Complex s{};
    for (const auto& r : fan.rays()) s -= r.density / r.direction;
    return s;
}

/// Piecewise closed form of cauchy_squared when every piece admits one
/// (segments and rays under any measure, arcs under d(zeta)).
inline std::optional<Complex> cauchy_squared_closed_form(const PlaneCurve& curve, MeasureKind measure, Complex z) {
    detail::require_off_curve(curve, z);
    Complex total{};
    for (const auto& piece : curve.pieces()) {
        const auto k = piece_measure_factor(piece, measure);
        if (!k) return std::nullopt;
        const Complex tail = piece.end() ? 1.0 / (z - *piece.end()) : Complex(0.0);
        total += *k * (tail - 1.0 / (z - piece.start()));
    }
    return total;
}

/// Exact coefficient of (z - q)^{-1} in cauchy_squared near a vertex q, when
/// every piece touching q is straight (or the measure is d(zeta)).
inline std::optional<Complex> analytic_residue(const PlaneCurve& curve, Complex q, MeasureKind measure) {
    Complex c{};
    bool touches = false;
    for (const auto& piece : curve.pieces()) {
        const bool at_start = ::curvkit::detail::same_point(piece.start(), q, 1e-9);
        const bool at_end = piece.end() && ::curvkit::detail::same_point(*piece.end(), q, 1e-9);
        if (!at_start && !at_end) continue;
        touches = true;
        const auto k = piece_measure_factor(piece, measure);
        if (!k) return std::nullopt;
        if (at_start) c -= *k;
        if (at_end) c += *k;
    }
    if (!touches) return std::nullopt;
    return c;
}

/// int_Gamma |z - zeta|^{-2} (measure); for d(zeta) and |d(zeta)| this is the arclength mass.
inline double mass_integral(const PlaneCurve& curve, Complex z, const QuadratureSpec& spec = {},
                            MeasureKind measure = MeasureKind::Weighted) {
    detail::require_off_curve(curve, z);
    const QuadratureSpec q = detail::per_ray_spec(curve, spec);
    double total = 0.0;
    for (const auto& piece : curve.pieces()) {
        total += integrate_adaptive(
                     [&](const CurvePoint& pt) {
                         const double w = measure == MeasureKind::Weighted ? pt.density * pt.speed : pt.speed;
                         return Complex(w / std::norm(z - pt.zeta));
                     },
                     piece, q, z)
                     .real();
    }
    return total;
}

/// |cauchy_squared| / mass_integral, in [0, 1]: near 0 where the curve (with
/// its density) looks flat from z, order 1 near corners and endpoints.
inline double flatness_ratio(const PlaneCurve& curve, Complex z, MeasureKind measure, const QuadratureSpec& spec = {}) {
    return std::abs(cauchy_squared(curve, measure, z, spec)) / mass_integral(curve, z, spec, measure);
}

struct ResidueFit {
    Complex coefficient;  ///< fitted c in c / (z - q) + smooth
    double radius;        ///< sampling circle radius
    double angle_offset;  ///< rotation of the sample angles
    double residual;      ///< rms misfit relative to rms sample magnitude; not meaningful when the samples are themselves noise (balanced points)
};

/// Distance from q to the nearest part of the curve not incident to q: the
/// scale over which the non-polar part of cauchy_squared is smooth.
inline double local_scale(const PlaneCurve& curve, Complex q) {
    double scale = std::numeric_limits<double>::infinity();
    for (const auto& piece : curve.pieces()) {
        const bool at_start = ::curvkit::detail::same_point(piece.start(), q, 1e-9);
        const bool at_end = piece.end() && ::curvkit::detail::same_point(*piece.end(), q, 1e-9);
        if (!at_start && !at_end) {
            scale = std::min(scale, piece.distance_to(q));
            continue;
        }
        if (const auto* arc = std::get_if<Arc>(&piece.shape())) scale = std::min(scale, arc->radius);
        if (at_start && piece.end()) scale = std::min(scale, std::abs(*piece.end() - q));
        if (at_end) scale = std::min(scale, std::abs(piece.start() - q));
    }
    return std::isfinite(scale) ? scale : 1.0;
}

/// Least-squares fit of cauchy_squared(z) ~ c / (z - q) + a_0 + a_1 (z - q) + ...
/// on a circle of samples around the marked vertex q.
inline ResidueFit residue_fit(const PlaneCurve& curve, Complex q, MeasureKind measure, const QuadratureSpec& spec = {}) {
    spec.validate();
    const auto verts = curve.vertices();
    if (std::none_of(verts.begin(), verts.end(),
                     [&](Complex v) { return ::curvkit::detail::same_point(v, q, 1e-9); }))
        throw DomainError("residue point is not a vertex or apex of the curve");

    const int n = spec.residue_angles;
    const double r = spec.residue_radius_factor * local_scale(curve, q);
    const double step = 2 * std::numbers::pi / n;

    // rotate the sample circle so that no sample sits on a piece leaving q
    double offset = 0.5 * step, clearance = -1.0;
    for (int j = 0; j < 16; ++j) {
        const double trial = (j + 0.5) * step / 16;
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) worst = std::min(worst, curve.distance_to(q + std::polar(r, trial + i * step)));
        if (worst > clearance) {
            clearance = worst;
            offset = trial;
        }
    }
    if (clearance <= kMinDistance) throw DomainError("residue samples hit the curve");

    const int smooth_terms = std::min(9, n - 2);
    Eigen::MatrixXcd basis(n, smooth_terms + 1);
    Eigen::VectorXcd values(n);
    for (int i = 0; i < n; ++i) {
        const Complex u = std::polar(1.0, offset + i * step);  // (z - q) / r
        values(i) = cauchy_squared(curve, measure, q + r * u, spec);
        basis(i, 0) = 1.0 / u;
        Complex power = 1.0;
        for (int k = 1; k <= smooth_terms; ++k) {
            basis(i, k) = power;
            power *= u;
        }
    }
    const Eigen::VectorXcd coeffs = basis.colPivHouseholderQr().solve(values);
    const double misfit = (basis * coeffs - values).norm();
    const double scale = std::max(values.norm(), std::numeric_limits<double>::min());
    return {coeffs(0) * r, r, offset, misfit / scale};
}

}  // namespace curvkit::plane
