#pragma once

// Planar integration domains (segments, circular arcs, rays) and an adaptive
// panel-splitting Gauss-Legendre integrator tuned for kernels that are
// singular just off the curve.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "curvkit/errors.hpp"

namespace curvkit {

using Complex = std::complex<double>;

/// Numeric knobs shared by every integral in the library.
struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 40;  ///< maximum bisection depth of a panel
    int base_nodes = 16;        ///< Gauss-Legendre points per panel
    double ray_truncation_tol = 1e-10;
    /// panels are split until length <= distance-to-evaluation-point / ratio
    double near_singularity_ratio = 4.0;
    /// residue fits sample on a circle of radius factor * local scale
    double residue_radius_factor = 0.05;
    int residue_angles = 16;

    void validate() const {
        if (!(rel_tol > 0) || !(abs_tol > 0) || !(ray_truncation_tol > 0) || !(near_singularity_ratio > 0) ||
            !(residue_radius_factor > 0))
            throw DomainError("quadrature tolerances must be positive");
        if (base_nodes < 2) throw DomainError("base_nodes must be >= 2");
        if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
        if (residue_angles < 4) throw DomainError("residue_angles must be >= 4");
    }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussRule gauss_legendre(int n) {
    if (n < 1) throw DomainError("Gauss-Legendre order must be positive");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

namespace detail {

inline double point_segment_distance(Complex z, Complex a, Complex b) {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - a);
    const double s = std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(z - (a + s * d));
}

inline bool same_point(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace detail

struct Segment {
    Complex a;
    Complex b;
};

/// Circle arc traversed from theta0 to theta1 (counterclockwise iff theta1 > theta0).
struct Arc {
    Complex center;
    double radius;
    double theta0;
    double theta1;

    bool counterclockwise() const { return theta1 > theta0; }
};

struct Ray {
    Complex apex;
    Complex direction;  ///< unit modulus
};

/// Point of a parametrized piece: position, d(zeta)/dt, |d(zeta)/dt| and the piece density.
struct CurvePoint {
    Complex zeta;
    Complex tangent;
    double speed;
    double density;
};

/// One piece of a planar curve carrying a constant positive density.
class CurvePiece {
  public:
    using Shape = std::variant<Segment, Arc, Ray>;

    static CurvePiece segment(Complex a, Complex b, double density = 1.0) {
        if (a == b) throw DomainError("segment endpoints must be distinct");
        return CurvePiece(Segment{a, b}, density);
    }

    static CurvePiece arc(Complex center, double radius, double theta0, double theta1, double density = 1.0) {
        if (!(radius > 0)) throw DomainError("arc radius must be positive");
        if (theta0 == theta1) throw DomainError("arc must sweep a nonzero angle");
        if (std::abs(theta1 - theta0) > 2 * std::numbers::pi + 1e-12)
            throw DomainError("arc sweeps more than a full turn");
        return CurvePiece(Arc{center, radius, theta0, theta1}, density);
    }

    static CurvePiece ray(Complex apex, Complex direction, double density = 1.0) {
        if (std::abs(std::abs(direction) - 1.0) > 1e-14) throw DomainError("ray direction must have unit modulus");
        return CurvePiece(Ray{apex, direction}, density);
    }

    const Shape& shape() const { return shape_; }
    double density() const { return density_; }
    bool is_ray() const { return std::holds_alternative<Ray>(shape_); }

    /// Parameter range is [0, 1] for segments and arcs, [0, inf) (arclength) for rays.
    CurvePoint at(double t) const {
        return std::visit(
            [&](const auto& s) -> CurvePoint {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Segment>) {
                    const Complex d = s.b - s.a;
                    return {s.a + t * d, d, std::abs(d), density_};
                } else if constexpr (std::is_same_v<T, Arc>) {
                    const double sweep = s.theta1 - s.theta0;
                    const Complex u = std::polar(1.0, s.theta0 + t * sweep);
                    return {s.center + s.radius * u, Complex(0, 1) * s.radius * sweep * u,
                            s.radius * std::abs(sweep), density_};
                } else {
                    return {s.apex + t * s.direction, s.direction, 1.0, density_};
                }
            },
            shape_);
    }

    Complex start() const { return at(0.0).zeta; }

    std::optional<Complex> end() const {
        if (is_ray()) return std::nullopt;
        return at(1.0).zeta;
    }

    /// Geometric length of the parameter interval [t0, t1].
    double length(double t0, double t1) const { return at(0.0).speed * (t1 - t0); }

    double total_length() const {
        return is_ray() ? std::numeric_limits<double>::infinity() : length(0.0, 1.0);
    }

    /// Distance from z to the image of the parameter interval [t0, t1].
    double distance_to(Complex z, double t0, double t1) const {
        return std::visit(
            [&](const auto& s) -> double {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Arc>) {
                    const double sweep = s.theta1 - s.theta0;
                    const double lo = s.theta0 + std::min(t0, t1) * sweep;
                    const double hi = s.theta0 + std::max(t0, t1) * sweep;
                    const double a0 = std::min(lo, hi), a1 = std::max(lo, hi);
                    const Complex w = z - s.center;
                    const double r = std::abs(w);
                    if (r > 0) {
                        double phi = std::arg(w);
                        // bring phi into [a0, a0 + 2pi)
                        phi = a0 + std::fmod(std::fmod(phi - a0, 2 * std::numbers::pi) + 2 * std::numbers::pi,
                                             2 * std::numbers::pi);
                        if (phi <= a1) return std::abs(r - s.radius);
                    } else {
                        return s.radius;
                    }
                    return std::min(std::abs(z - at(t0).zeta), std::abs(z - at(t1).zeta));
                } else {
                    return detail::point_segment_distance(z, at(t0).zeta, at(t1).zeta);
                }
            },
            shape_);
    }

    double distance_to(Complex z) const {
        if (const auto* r = std::get_if<Ray>(&shape_)) {
            const double s = std::max(0.0, ((z - r->apex) * std::conj(r->direction)).real());
            return std::abs(z - (r->apex + s * r->direction));
        }
        return distance_to(z, 0.0, 1.0);
    }

  private:
    CurvePiece(Shape s, double density) : shape_(std::move(s)), density_(density) {
        if (!(density > 0) || !std::isfinite(density)) throw DomainError("piece density must be positive");
    }

    Shape shape_;
    double density_;
};

/// Ordered union of pieces. A closed curve chains end to start and has no rays.
class PlaneCurve {
  public:
    explicit PlaneCurve(std::vector<CurvePiece> pieces, bool closed = false)
        : pieces_(std::move(pieces)), closed_(closed) {
        if (pieces_.empty()) throw DomainError("curve must have at least one piece");
        if (!closed_) return;
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            if (pieces_[i].is_ray()) throw DomainError("closed curve cannot contain a ray");
            const Complex next = pieces_[(i + 1) % pieces_.size()].start();
            if (!detail::same_point(*pieces_[i].end(), next))
                throw DomainError("closed curve pieces do not chain end to start");
        }
    }

    /// Closed polygon through the given vertices (last joins back to first).
    static PlaneCurve polygon(const std::vector<Complex>& vertices, double density = 1.0) {
        if (vertices.size() < 3) throw DomainError("polygon needs at least three vertices");
        std::vector<CurvePiece> pieces;
        for (std::size_t i = 0; i < vertices.size(); ++i)
            pieces.push_back(CurvePiece::segment(vertices[i], vertices[(i + 1) % vertices.size()], density));
        return PlaneCurve(std::move(pieces), true);
    }

    /// Open polyline a -> v1 -> ... -> b.
    static PlaneCurve polyline(const std::vector<Complex>& vertices, double density = 1.0) {
        if (vertices.size() < 2) throw DomainError("polyline needs at least two vertices");
        std::vector<CurvePiece> pieces;
        for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
            pieces.push_back(CurvePiece::segment(vertices[i], vertices[i + 1], density));
        return PlaneCurve(std::move(pieces), false);
    }

    /// Full line through `point`, stored as two opposite rays.
    static PlaneCurve line(Complex point, Complex direction, double density = 1.0) {
        return PlaneCurve({CurvePiece::ray(point, direction, density), CurvePiece::ray(point, -direction, density)});
    }

    static PlaneCurve circle(Complex center, double radius, double density = 1.0) {
        return PlaneCurve({CurvePiece::arc(center, radius, 0.0, 2 * std::numbers::pi, density)}, true);
    }

    const std::vector<CurvePiece>& pieces() const { return pieces_; }
    bool closed() const { return closed_; }

    double distance_to(Complex z) const {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& p : pieces_) d = std::min(d, p.distance_to(z));
        return d;
    }

    double perimeter() const {
        double s = 0.0;
        for (const auto& p : pieces_) s += p.total_length();
        return s;
    }

    /// Segment endpoints, arc endpoints and ray apexes, deduplicated.
    std::vector<Complex> vertices() const {
        std::vector<Complex> out;
        auto add = [&](Complex v) {
            for (Complex w : out)
                if (detail::same_point(v, w)) return;
            out.push_back(v);
        };
        for (const auto& p : pieces_) {
            add(p.start());
            if (auto e = p.end()) add(*e);
        }
        return out;
    }

  private:
    std::vector<CurvePiece> pieces_;
    bool closed_;
};

/// Truncation length for a ray so that the tail bound
/// int_T^inf rho (t - |z - q|)^{-2} dt = rho / (T - |z - q|) stays below the tolerance.
/// Half the budget goes to the tail, half is left for the quadrature on [0, T].
inline double ray_truncation_length(const CurvePiece& ray, std::optional<Complex> near, const QuadratureSpec& spec) {
    const double reach = near ? std::abs(*near - ray.start()) : 0.0;
    return reach + 2.0 * ray.density() / spec.ray_truncation_tol;
}

/// Adaptive Gauss-Legendre estimate of int f(point(t)) dt over the piece's
/// parameter range. The integrand receives the full CurvePoint so it can form
/// d(zeta) = tangent dt, |d(zeta)| = speed dt or d(alpha) = density speed dt.
///
/// `near` is the evaluation point of a singular kernel; panels are graded
/// toward it per `near_singularity_ratio`. Rays are truncated at
/// ray_truncation_length().
template <typename F>
Complex integrate_adaptive(const F& f, const CurvePiece& piece, const QuadratureSpec& spec,
                           std::optional<Complex> near = std::nullopt) {
    spec.validate();
    const GaussRule rule = gauss_legendre(spec.base_nodes);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr std::size_t kMaxPanels = 1u << 20;

    struct Estimate {
        Complex value;
        double magnitude;  // integral of |f|
    };
    auto panel = [&](double t0, double t1) {
        const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
        Complex s{};
        double m = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const Complex v = f(piece.at(mid + half * rule.nodes[i]));
            s += rule.weights[i] * v;
            m += rule.weights[i] * std::abs(v);
        }
        return Estimate{s * half, m * std::abs(half)};
    };

    std::vector<double> breaks;
    if (piece.is_ray()) {
        const double stop = ray_truncation_length(piece, near, spec);
        double step = near ? std::max(std::abs(*near - piece.start()), 1e-6) : 1.0;
        breaks.push_back(0.0);
        while (breaks.back() + step < stop) {
            breaks.push_back(breaks.back() + step);
            step *= 2.0;
        }
        breaks.push_back(stop);
    } else {
        breaks = {0.0, 1.0};
    }

    struct Pending {
        double t0, t1;
        int depth;
        Estimate whole;
    };
    std::vector<Pending> stack;
    for (std::size_t i = breaks.size() - 1; i > 0; --i)
        stack.push_back({breaks[i - 1], breaks[i], 0, panel(breaks[i - 1], breaks[i])});

    Complex total{};
    double error = 0.0;
    std::size_t panels = 0;
    while (!stack.empty()) {
        Pending p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.t0 + p.t1);

        bool must_split = false;
        if (near) {
            const double len = piece.length(p.t0, p.t1);
            must_split = len * spec.near_singularity_ratio > piece.distance_to(*near, p.t0, p.t1);
        }
        Estimate left{}, right{};
        double diff = 0.0;
        if (!must_split) {
            left = panel(p.t0, mid);
            right = panel(mid, p.t1);
            const Complex refined = left.value + right.value;
            diff = std::abs(refined - p.whole.value);
            // finite pieces share abs_tol in proportion to panel length
            const double abs_share =
                piece.is_ray() ? spec.abs_tol : spec.abs_tol * (p.t1 - p.t0);
            const double tol = std::max({abs_share, spec.rel_tol * std::abs(refined),
                                         64 * eps * (left.magnitude + right.magnitude)});
            if (diff <= tol) {
                total += refined;
                error += diff;
                continue;
            }
        }
        if (p.depth >= spec.max_subdivisions || ++panels > kMaxPanels) {
            Complex best = total + p.whole.value;
            for (const auto& q : stack) best += q.whole.value;
            throw ConvergenceError("adaptive quadrature exceeded max_subdivisions", best.real(), best.imag(),
                                   error + (must_split ? std::abs(p.whole.value) : diff));
        }
        if (must_split) {
            left = panel(p.t0, mid);
            right = panel(mid, p.t1);
        }
        stack.push_back({mid, p.t1, p.depth + 1, right});
        stack.push_back({p.t0, mid, p.depth + 1, left});
    }
    return total;
}

}  // namespace curvkit
