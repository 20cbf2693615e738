#pragma once

// Discretized (n-1)-surfaces in R^n: per-element centroid, area, unit normal
// and density. Integrals over them use the centroid rule.

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curvkit/errors.hpp"

namespace curvkit {

using Point = std::vector<double>;

struct SurfaceElement {
    Point centroid;
    double area;
    Point normal;  ///< unit length
    double density;
};

class Hypersurface {
  public:
    Hypersurface(int dim, std::vector<SurfaceElement> elements, bool closed, int refinement_level = 0)
        : dim_(dim), elements_(std::move(elements)), closed_(closed), level_(refinement_level) {
        if (dim_ < 2) throw DomainError("hypersurface ambient dimension must be >= 2");
        for (const auto& e : elements_) {
            if (static_cast<int>(e.centroid.size()) != dim_ || static_cast<int>(e.normal.size()) != dim_)
                throw DomainError("element dimension does not match ambient dimension");
            if (!(e.area > 0)) throw DomainError("element area must be positive");
            if (!(e.density > 0)) throw DomainError("element density must be positive");
            double n2 = 0.0;
            for (double c : e.normal) n2 += c * c;
            if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) throw DomainError("element normal must be unit length");
        }
    }

    int dim() const { return dim_; }
    const std::vector<SurfaceElement>& elements() const { return elements_; }
    bool closed() const { return closed_; }
    int refinement_level() const { return level_; }

    double total_area() const {
        double s = 0.0;
        for (const auto& e : elements_) s += e.area;
        return s;
    }

    /// Diagonal of the centroid bounding box.
    double diameter() const {
        Point lo(dim_, std::numeric_limits<double>::infinity()), hi(dim_, -std::numeric_limits<double>::infinity());
        for (const auto& e : elements_)
            for (int j = 0; j < dim_; ++j) {
                lo[j] = std::min(lo[j], e.centroid[j]);
                hi[j] = std::max(hi[j], e.centroid[j]);
            }
        double s = 0.0;
        for (int j = 0; j < dim_; ++j) s += (hi[j] - lo[j]) * (hi[j] - lo[j]);
        return std::sqrt(s);
    }

    /// Approximate distance from x to the surface: distance to the nearest
    /// centroid, replaced by the distance to the element's tangent plane when
    /// x projects inside the element's footprint.
    double distance_to(std::span<const double> x) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : elements_) {
            double r2 = 0.0, along = 0.0;
            for (int j = 0; j < dim_; ++j) {
                const double d = x[j] - e.centroid[j];
                r2 += d * d;
                along += d * e.normal[j];
            }
            const double tangential2 = std::max(0.0, r2 - along * along);
            const double footprint = std::pow(e.area, 2.0 / (dim_ - 1));
            best = std::min(best, tangential2 <= footprint ? std::abs(along) : std::sqrt(r2));
        }
        return best;
    }

    /// sum area * normal.(c - p) / |c - p|^n; the solid angle subtended at p,
    /// equal to the sphere area |S^{n-1}| for interior p of a closed surface.
    double solid_angle_sum(std::span<const double> p) const {
        double s = 0.0;
        for (const auto& e : elements_) {
            double r2 = 0.0, dot = 0.0;
            for (int j = 0; j < dim_; ++j) {
                const double d = e.centroid[j] - p[j];
                r2 += d * d;
                dot += e.normal[j] * d;
            }
            s += e.area * dot / std::pow(r2, 0.5 * dim_);
        }
        return s;
    }

  private:
    int dim_;
    std::vector<SurfaceElement> elements_;
    bool closed_;
    int level_;
};

inline constexpr int kMaxSphereLevel = 8;

/// Icosphere: icosahedron subdivided `level` times, vertices pushed to the
/// sphere, outward normals. 20 * 4^level flat triangles.
inline Hypersurface mesh_sphere(const std::array<double, 3>& center, double radius, int level, double density = 1.0) {
    using V = std::array<double, 3>;
    if (!(radius > 0)) throw DomainError("sphere radius must be positive");
    if (level < 0) throw DomainError("refinement level must be nonnegative");
    if (level > kMaxSphereLevel) throw ResourceError("sphere refinement level above " + std::to_string(kMaxSphereLevel));

    auto normalize = [](V v) {
        const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        return V{v[0] / r, v[1] / r, v[2] / r};
    };
    const double phi = std::numbers::phi;
    std::vector<V> verts = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
                            {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    for (auto& v : verts) v = normalize(v);
    std::vector<std::array<int, 3>> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
            const V& p = verts[a];
            const V& q = verts[b];
            verts.push_back(normalize({p[0] + q[0], p[1] + q[1], p[2] + q[2]}));
            return midpoint[key] = static_cast<int>(verts.size()) - 1;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
            next.push_back({f[0], a, c});
            next.push_back({f[1], b, a});
            next.push_back({f[2], c, b});
            next.push_back({a, b, c});
        }
        faces = std::move(next);
    }

    std::vector<SurfaceElement> elements;
    elements.reserve(faces.size());
    for (const auto& f : faces) {
        V p[3];
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) p[k][j] = center[j] + radius * verts[f[k]][j];
        const V u{p[1][0] - p[0][0], p[1][1] - p[0][1], p[1][2] - p[0][2]};
        const V w{p[2][0] - p[0][0], p[2][1] - p[0][1], p[2][2] - p[0][2]};
        V n{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
        const double twice_area = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        Point c(3), normal(3);
        double outward = 0.0;
        for (int j = 0; j < 3; ++j) {
            c[j] = (p[0][j] + p[1][j] + p[2][j]) / 3.0;
            normal[j] = n[j] / twice_area;
            outward += normal[j] * (c[j] - center[j]);
        }
        if (outward < 0)
            for (double& x : normal) x = -x;
        elements.push_back({std::move(c), 0.5 * twice_area, std::move(normal), density});
    }
    return Hypersurface(3, std::move(elements), true, level);
}

namespace detail {

// Cells of an axis-aligned (n-1)-box lying in {x_axis = offset}, spanning
// [lo_j, hi_j] in the other coordinates, k cells per side.
inline void tile_face(int dim, int axis, double offset, std::span<const double> lo, std::span<const double> hi, int k,
                      double normal_sign, double density, std::vector<SurfaceElement>& out) {
    std::vector<int> others;
    for (int j = 0; j < dim; ++j)
        if (j != axis) others.push_back(j);
    double cell_area = 1.0;
    for (int j : others) cell_area *= (hi[j] - lo[j]) / k;
    std::vector<int> idx(others.size(), 0);
    while (true) {
        Point c(dim, 0.0), normal(dim, 0.0);
        c[axis] = offset;
        normal[axis] = normal_sign;
        for (std::size_t i = 0; i < others.size(); ++i) {
            const int j = others[i];
            c[j] = lo[j] + (idx[i] + 0.5) * (hi[j] - lo[j]) / k;
        }
        out.push_back({std::move(c), cell_area, std::move(normal), density});
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == k) idx[i++] = 0;
        if (i == idx.size()) break;
    }
}

}  // namespace detail

/// Truncated hyperplane {x_m = 0, |x_j| <= extent} tiled into cells^(n-1)
/// cells with constant normal e_m. `normal_axis` is 1-based.
inline Hypersurface mesh_flat_patch(int dim, int normal_axis, double extent, int cells, double density = 1.0) {
    if (dim < 2) throw DomainError("flat patch needs ambient dimension >= 2");
    if (normal_axis < 1 || normal_axis > dim) throw DomainError("normal axis out of range");
    if (!(extent > 0)) throw DomainError("patch extent must be positive");
    if (cells < 1) throw DomainError("patch needs at least one cell per side");
    const Point lo(dim, -extent), hi(dim, extent);
    std::vector<SurfaceElement> elements;
    detail::tile_face(dim, normal_axis - 1, 0.0, lo, hi, cells, 1.0, density, elements);
    return Hypersurface(dim, std::move(elements), false, 0);
}

/// Boundary of the axis-aligned box [lo, hi] with outward normals, each face
/// tiled cells^(n-1).
inline Hypersurface mesh_box(std::span<const double> lo, std::span<const double> hi, int cells, double density = 1.0) {
    const int dim = static_cast<int>(lo.size());
    if (dim < 2 || hi.size() != lo.size()) throw DomainError("box corners must share a dimension >= 2");
    for (int j = 0; j < dim; ++j)
        if (!(hi[j] > lo[j])) throw DomainError("box must have positive extent on every axis");
    if (cells < 1) throw DomainError("box needs at least one cell per side");
    std::vector<SurfaceElement> elements;
    for (int axis = 0; axis < dim; ++axis) {
        detail::tile_face(dim, axis, lo[axis], lo, hi, cells, -1.0, density, elements);
        detail::tile_face(dim, axis, hi[axis], lo, hi, cells, 1.0, density, elements);
    }
    return Hypersurface(dim, std::move(elements), true, 0);
}

}  // namespace curvkit
