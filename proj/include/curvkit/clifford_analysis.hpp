#pragma once

// Clifford analysis on R^n: the Cauchy kernel E(x - y) = sum (x_j - y_j) e_j / |x - y|^n,
// its x-derivatives, a central-difference Dirac operator D = sum e_j d/dx_j
// (left version), and centroid-rule surface integrals of E and d_m E.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "curvkit/clifford.hpp"
#include "curvkit/errors.hpp"
#include "curvkit/hypersurface.hpp"

namespace curvkit::analysis {

using clifford::CliffordVector;
using clifford::Multivector;

struct DiracSpec {
    double h = 1e-4;

    void validate() const {
        if (!(h > 0)) throw DomainError("finite-difference step must be positive");
    }
};

namespace detail {

inline double distance_squared(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("points have different dimensions");
    double r2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) r2 += (x[j] - y[j]) * (x[j] - y[j]);
    return r2;
}

}  // namespace detail

/// E(x - y). Grade 1, with |E| = |x - y|^{1-n}.
inline CliffordVector cauchy_kernel(std::span<const double> x, std::span<const double> y) {
    const double r2 = detail::distance_squared(x, y);
    if (r2 == 0.0) throw SingularityError("Cauchy kernel evaluated at x = y");
    const int n = static_cast<int>(x.size());
    const double scale = 1.0 / std::pow(r2, 0.5 * n);
    std::vector<double> c(n);
    for (int j = 0; j < n; ++j) c[j] = (x[j] - y[j]) * scale;
    return CliffordVector(std::move(c));
}

/// d/dx_m E(x - y) = e_m / r^n - n (x_m - y_m) (x - y) / r^{n+2}; m is 1-based.
inline CliffordVector cauchy_kernel_derivative(std::span<const double> x, std::span<const double> y, int m) {
    const double r2 = detail::distance_squared(x, y);
    const int n = static_cast<int>(x.size());
    if (m < 1 || m > n) throw DomainError("derivative axis out of range");
    if (r2 == 0.0) throw SingularityError("Cauchy kernel derivative evaluated at x = y");
    const double inv_rn = 1.0 / std::pow(r2, 0.5 * n);
    const double cross = n * (x[m - 1] - y[m - 1]) * inv_rn / r2;
    std::vector<double> c(n);
    for (int j = 0; j < n; ++j) c[j] = -cross * (x[j] - y[j]);
    c[m - 1] += inv_rn;
    return CliffordVector(std::move(c));
}

/// Central-difference D f(x) = sum_j e_j (f(x + h e_j) - f(x - h e_j)) / 2h,
/// with e_j multiplied from the left. f maps a point of R^n to C(n).
template <typename F>
Multivector dirac_apply(const F& f, std::span<const double> x, const DiracSpec& spec = {}) {
    spec.validate();
    const int n = static_cast<int>(x.size());
    Multivector out(n);
    std::vector<double> p(x.begin(), x.end());
    for (int j = 0; j < n; ++j) {
        const double xj = x[j];
        p[j] = xj + spec.h;
        const double up = p[j];
        const Multivector fp = f(std::span<const double>(p));
        p[j] = xj - spec.h;
        const double down = p[j];
        const Multivector fm = f(std::span<const double>(p));
        p[j] = xj;
        // divide by the representable step, not 2h
        out = out + Multivector::generator(n, j + 1) * ((fp - fm) / (up - down));
    }
    return out;
}

/// D(D f) with nested stencils; approximates -Laplacian f.
template <typename F>
Multivector dirac_squared(const F& f, std::span<const double> x, const DiracSpec& spec = {}) {
    return dirac_apply([&](std::span<const double> p) { return dirac_apply(f, p, spec); }, x, spec);
}

/// Wraps a real-valued function as a grade-0 Clifford field.
template <typename G>
auto scalar_field(int dim, G g) {
    return [dim, g](std::span<const double> p) { return Multivector::scalar(dim, g(p)); };
}

/// Harmonic potential whose Dirac derivative is proportional to E:
/// |x|^{2-n} for n > 2, log|x| for n = 2.
inline double harmonic_potential(std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    const int n = static_cast<int>(x.size());
    return n == 2 ? 0.5 * std::log(r2) : std::pow(r2, 0.5 * (2 - n));
}

/// The constant E(x) / D(potential)(x): 1/(2-n) for n > 2, 1 for n = 2.
inline double kernel_potential_constant(int n) { return n == 2 ? 1.0 : 1.0 / (2.0 - n); }

/// Componentwise ratios E_j(x) / [D potential]_j(x), skipping components where
/// the denominator is negligible. D is taken by central differences with a
/// step scaled to |x|.
inline std::vector<double> kernel_potential_ratios(std::span<const double> x, const DiracSpec& spec = {}) {
    const int n = static_cast<int>(x.size());
    if (n < 2) throw DomainError("kernel potential check needs n >= 2");
    const std::vector<double> origin(n, 0.0);
    const CliffordVector kernel = cauchy_kernel(x, origin);  // throws at x = 0
    const DiracSpec scaled{spec.h * std::sqrt(detail::distance_squared(x, origin))};
    const Multivector d = dirac_apply(scalar_field(n, harmonic_potential), x, scaled);
    double dnorm = 0.0;
    for (int j = 0; j < n; ++j) dnorm = std::max(dnorm, std::abs(d[clifford::BasisBlade::generator(j + 1)]));
    std::vector<double> ratios;
    for (int j = 0; j < n; ++j) {
        const double dj = d[clifford::BasisBlade::generator(j + 1)];
        if (std::abs(dj) > 1e-6 * dnorm) ratios.push_back(kernel.component(j + 1) / dj);
    }
    return ratios;
}

/// Mean of kernel_potential_ratios(x); independent of x.
inline double check_kernel_potential(std::span<const double> x, const DiracSpec& spec = {}) {
    const auto ratios = kernel_potential_ratios(x, spec);
    double s = 0.0;
    for (double r : ratios) s += r;
    return s / static_cast<double>(ratios.size());
}

namespace detail {

inline void require_off_surface(const Hypersurface& surface, std::span<const double> x) {
    if (static_cast<int>(x.size()) != surface.dim()) throw DomainError("point dimension differs from surface");
    if (surface.distance_to(x) <= 1e-6 * surface.diameter())
        throw ProximityError("evaluation point lies on the surface");
}

inline Multivector normal_of(const SurfaceElement& e) { return CliffordVector(e.normal).to_multivector(); }

}  // namespace detail

/// sum_e E(x - c_e) N_e area_e (kernel on the left). For a closed surface with
/// outward normals: the area of the unit sphere S^{n-1} inside, 0 outside.
inline Multivector surface_cauchy_integral(const Hypersurface& surface, std::span<const double> x) {
    detail::require_off_surface(surface, x);
    Multivector total(surface.dim());
    for (const auto& e : surface.elements())
        total = total + cauchy_kernel(x, e.centroid).to_multivector() * detail::normal_of(e) * e.area;
    return total;
}

enum class SurfaceWeight {
    Normal,   ///< N(y) dy
    Density,  ///< d(alpha)(y) = density dy
};

/// sum_e d_m E(x - c_e) w_e with w_e = N_e area_e or density_e area_e.
inline Multivector surface_derivative_integral(const Hypersurface& surface, std::span<const double> x, int m,
                                               SurfaceWeight weight) {
    detail::require_off_surface(surface, x);
    Multivector total(surface.dim());
    for (const auto& e : surface.elements()) {
        const Multivector k = cauchy_kernel_derivative(x, e.centroid, m).to_multivector();
        total = total + (weight == SurfaceWeight::Normal ? k * detail::normal_of(e) * e.area : k * (e.density * e.area));
    }
    return total;
}

/// Area of the unit sphere S^{n-1} in R^n.
inline double unit_sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n); }

}  // namespace curvkit::analysis
