#pragma once

// Scene files (JSON) describing curves, surfaces, an evaluation grid, the
// integral to sample and quadrature settings; KernelField sampling and its
// CSV / JSON encodings.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "curvkit/clifford.hpp"
#include "curvkit/clifford_analysis.hpp"
#include "curvkit/errors.hpp"
#include "curvkit/hypersurface.hpp"
#include "curvkit/plane_contours.hpp"
#include "curvkit/quadrature.hpp"

namespace curvkit {

using json = nlohmann::json;

enum class IntegralKind {
    CauchySquared,      ///< plane: int (z - zeta)^{-2} (measure)
    Mass,               ///< plane: int |z - zeta|^{-2} (measure)
    CircleWeighted,     ///< plane: int over the unit circle of (z - zeta)^{-2} zeta^{-1} d(zeta)
    SurfaceCauchy,      ///< R^n: sum E(x - y) N(y) dy
    SurfaceDerivative,  ///< R^n: sum d_m E(x - y) w(y)
};

struct IntegralSpec {
    IntegralKind kind = IntegralKind::CauchySquared;
    plane::MeasureKind measure = plane::MeasureKind::Weighted;
    int axis = 1;
    analysis::SurfaceWeight weight = analysis::SurfaceWeight::Normal;
};

/// Rectangular grid; with offset_half_cell the nodes sit at cell centers,
/// otherwise they include both ends of every axis.
struct GridSpec {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<int> counts;
    bool offset_half_cell = true;

    std::vector<Point> points() const {
        const std::size_t n = lo.size();
        std::vector<std::vector<double>> axes(n);
        for (std::size_t j = 0; j < n; ++j) {
            const int k = counts[j];
            for (int i = 0; i < k; ++i) {
                double t;
                if (offset_half_cell)
                    t = (i + 0.5) / k;
                else
                    t = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
                axes[j].push_back(lo[j] + t * (hi[j] - lo[j]));
            }
        }
        // first axis varies slowest, so 2-D grids come out row by row in re(z)
        std::vector<Point> out;
        std::vector<int> idx(n, 0);
        while (true) {
            Point p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = axes[j][idx[j]];
            out.push_back(std::move(p));
            int j = static_cast<int>(n) - 1;
            while (j >= 0 && ++idx[j] == counts[j]) idx[j--] = 0;
            if (j < 0) break;
        }
        return out;
    }
};

struct Scene {
    int dim = 2;
    std::vector<PlaneCurve> curves;
    std::vector<Hypersurface> surfaces;
    std::optional<GridSpec> grid;
    IntegralSpec integral;
    QuadratureSpec quadrature;
    analysis::DiracSpec dirac;

    /// Every piece of every curve as a single curve (for plane integrals).
    std::optional<PlaneCurve> merged_curve() const {
        if (curves.empty()) return std::nullopt;
        std::vector<CurvePiece> pieces;
        for (const auto& c : curves) pieces.insert(pieces.end(), c.pieces().begin(), c.pieces().end());
        if (curves.size() == 1) return curves.front();
        return PlaneCurve(std::move(pieces));
    }
};

namespace scene_detail {

inline const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw ParseError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(path.empty() ? key : path + "." + key, "missing field");
    return *it;
}

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path, "expected a number");
    return j.get<double>();
}

inline int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
    return j.get<int>();
}

inline double number_or(const json& j, const std::string& key, double fallback, const std::string& path) {
    auto it = j.find(key);
    return it == j.end() ? fallback : number(*it, path + "." + key);
}

inline std::vector<double> vec(const json& j, const std::string& path, std::optional<std::size_t> size = {}) {
    if (!j.is_array()) throw ParseError(path, "expected an array of numbers");
    if (size && j.size() != *size) throw ParseError(path, "expected " + std::to_string(*size) + " numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline Complex complex_of(const json& j, const std::string& path) {
    const auto v = vec(j, path, 2);
    return {v[0], v[1]};
}

template <typename F>
auto guarded(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(path, e.what());
    }
}

inline void parse_pieces(const json& j, const std::string& path, std::vector<CurvePiece>& out) {
    const std::string kind = field(j, "kind", path).get<std::string>();
    const double density = number_or(j, "density", 1.0, path);
    guarded(path, [&] {
        if (kind == "segment") {
            out.push_back(CurvePiece::segment(complex_of(field(j, "a", path), path + ".a"),
                                              complex_of(field(j, "b", path), path + ".b"), density));
        } else if (kind == "arc") {
            out.push_back(CurvePiece::arc(complex_of(field(j, "center", path), path + ".center"),
                                          number(field(j, "radius", path), path + ".radius"),
                                          number(field(j, "theta0", path), path + ".theta0"),
                                          number(field(j, "theta1", path), path + ".theta1"), density));
        } else if (kind == "ray" || kind == "line") {
            const Complex q = complex_of(field(j, kind == "ray" ? "q" : "point", path), path);
            Complex d = complex_of(field(j, "direction", path), path + ".direction");
            if (std::abs(d) == 0.0) throw ParseError(path + ".direction", "direction must be nonzero");
            d /= std::abs(d);
            out.push_back(CurvePiece::ray(q, d, density));
            if (kind == "line") out.push_back(CurvePiece::ray(q, -d, density));
        } else {
            throw ParseError(path + ".kind", "unknown piece kind '" + kind + "'");
        }
        return 0;
    });
}

inline Hypersurface parse_surface(const json& j, const std::string& path, int dim) {
    const std::string kind = field(j, "kind", path).get<std::string>();
    const double density = number_or(j, "density", 1.0, path);
    return guarded(path, [&]() -> Hypersurface {
        if (kind == "sphere") {
            if (dim != 3) throw ParseError(path, "sphere surfaces require dim 3");
            const auto c = vec(field(j, "center", path), path + ".center", 3);
            return mesh_sphere({c[0], c[1], c[2]}, number(field(j, "radius", path), path + ".radius"),
                               integer(field(j, "level", path), path + ".level"), density);
        }
        if (kind == "flat_patch") {
            return mesh_flat_patch(dim, integer(field(j, "normal_axis", path), path + ".normal_axis"),
                                   number(field(j, "extent", path), path + ".extent"),
                                   integer(field(j, "cells", path), path + ".cells"), density);
        }
        if (kind == "box") {
            const auto lo = vec(field(j, "lo", path), path + ".lo", static_cast<std::size_t>(dim));
            const auto hi = vec(field(j, "hi", path), path + ".hi", static_cast<std::size_t>(dim));
            return mesh_box(lo, hi, integer(field(j, "cells", path), path + ".cells"), density);
        }
        throw ParseError(path + ".kind", "unknown surface kind '" + kind + "'");
    });
}

inline plane::MeasureKind parse_measure(const std::string& s, const std::string& path) {
    if (s == "complex") return plane::MeasureKind::ComplexForm;
    if (s == "arclength") return plane::MeasureKind::Arclength;
    if (s == "weighted") return plane::MeasureKind::Weighted;
    throw ParseError(path, "measure must be complex, arclength or weighted");
}

inline std::string measure_name(plane::MeasureKind m) {
    switch (m) {
        case plane::MeasureKind::ComplexForm: return "complex";
        case plane::MeasureKind::Arclength: return "arclength";
        case plane::MeasureKind::Weighted: return "weighted";
    }
    return "";
}

inline std::string integral_name(IntegralKind k) {
    switch (k) {
        case IntegralKind::CauchySquared: return "cauchy_squared";
        case IntegralKind::Mass: return "mass";
        case IntegralKind::CircleWeighted: return "circle_weighted";
        case IntegralKind::SurfaceCauchy: return "surface_cauchy";
        case IntegralKind::SurfaceDerivative: return "surface_derivative";
    }
    return "";
}

// 1-based line of a byte offset
inline std::size_t line_of(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace scene_detail

inline QuadratureSpec parse_quadrature(const json& j, const std::string& path = "quadrature") {
    using namespace scene_detail;
    QuadratureSpec q;
    if (!j.is_object()) throw ParseError(path, "expected an object");
    q.rel_tol = number_or(j, "rel_tol", q.rel_tol, path);
    q.abs_tol = number_or(j, "abs_tol", q.abs_tol, path);
    q.ray_truncation_tol = number_or(j, "ray_truncation_tol", q.ray_truncation_tol, path);
    q.near_singularity_ratio = number_or(j, "near_singularity_ratio", q.near_singularity_ratio, path);
    q.residue_radius_factor = number_or(j, "residue_radius_factor", q.residue_radius_factor, path);
    if (j.contains("max_subdivisions")) q.max_subdivisions = integer(j["max_subdivisions"], path + ".max_subdivisions");
    if (j.contains("base_nodes")) q.base_nodes = integer(j["base_nodes"], path + ".base_nodes");
    if (j.contains("residue_angles")) q.residue_angles = integer(j["residue_angles"], path + ".residue_angles");
    guarded(path, [&] {
        q.validate();
        return 0;
    });
    return q;
}

inline json quadrature_to_json(const QuadratureSpec& q) {
    return json{{"rel_tol", q.rel_tol},
                {"abs_tol", q.abs_tol},
                {"max_subdivisions", q.max_subdivisions},
                {"base_nodes", q.base_nodes},
                {"ray_truncation_tol", q.ray_truncation_tol},
                {"near_singularity_ratio", q.near_singularity_ratio},
                {"residue_radius_factor", q.residue_radius_factor},
                {"residue_angles", q.residue_angles}};
}

/// Parse a scene document. Errors name the offending field path.
inline Scene parse_scene(const json& root) {
    using namespace scene_detail;
    Scene s;
    if (!root.is_object()) throw ParseError("", "scene must be a JSON object");
    s.dim = integer(field(root, "dim", ""), "dim");
    if (s.dim < 2 || s.dim > clifford::kMaxDim) throw ParseError("dim", "dim must be in [2, 12]");

    if (root.contains("curves")) {
        const json& cs = root["curves"];
        if (!cs.is_array()) throw ParseError("curves", "expected an array");
        if (!cs.empty() && s.dim != 2) throw ParseError("curves", "curves require dim 2");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const std::string path = "curves[" + std::to_string(i) + "]";
            const json& pj = field(cs[i], "pieces", path);
            if (!pj.is_array()) throw ParseError(path + ".pieces", "expected an array");
            std::vector<CurvePiece> pieces;
            for (std::size_t k = 0; k < pj.size(); ++k)
                parse_pieces(pj[k], path + ".pieces[" + std::to_string(k) + "]", pieces);
            const bool closed = cs[i].value("closed", false);
            s.curves.push_back(guarded(path, [&] { return PlaneCurve(std::move(pieces), closed); }));
        }
    }
    if (root.contains("surfaces")) {
        const json& ss = root["surfaces"];
        if (!ss.is_array()) throw ParseError("surfaces", "expected an array");
        for (std::size_t i = 0; i < ss.size(); ++i)
            s.surfaces.push_back(parse_surface(ss[i], "surfaces[" + std::to_string(i) + "]", s.dim));
    }
    if (root.contains("grid")) {
        const json& g = root["grid"];
        const auto n = static_cast<std::size_t>(s.dim);
        GridSpec grid;
        grid.lo = vec(field(g, "lo", "grid"), "grid.lo", n);
        grid.hi = vec(field(g, "hi", "grid"), "grid.hi", n);
        const auto counts = vec(field(g, "n", "grid"), "grid.n", n);
        for (std::size_t j = 0; j < n; ++j) {
            if (counts[j] < 1 || counts[j] != std::floor(counts[j]))
                throw ParseError("grid.n", "counts must be positive integers");
            if (!(grid.hi[j] >= grid.lo[j])) throw ParseError("grid", "hi must be >= lo");
            grid.counts.push_back(static_cast<int>(counts[j]));
        }
        grid.offset_half_cell = g.value("offset_half_cell", true);
        s.grid = grid;
    }
    if (root.contains("integral")) {
        const json& ij = root["integral"];
        const std::string kind = field(ij, "kind", "integral").get<std::string>();
        if (kind == "cauchy_squared")
            s.integral.kind = IntegralKind::CauchySquared;
        else if (kind == "mass")
            s.integral.kind = IntegralKind::Mass;
        else if (kind == "circle_weighted")
            s.integral.kind = IntegralKind::CircleWeighted;
        else if (kind == "surface_cauchy")
            s.integral.kind = IntegralKind::SurfaceCauchy;
        else if (kind == "surface_derivative")
            s.integral.kind = IntegralKind::SurfaceDerivative;
        else
            throw ParseError("integral.kind", "unknown integral kind '" + kind + "'");
        if (ij.contains("measure")) s.integral.measure = parse_measure(ij["measure"].get<std::string>(), "integral.measure");
        if (ij.contains("axis")) {
            s.integral.axis = integer(ij["axis"], "integral.axis");
            if (s.integral.axis < 1 || s.integral.axis > s.dim) throw ParseError("integral.axis", "axis out of range");
        }
        if (ij.contains("weight")) {
            const std::string w = ij["weight"].get<std::string>();
            if (w == "normal")
                s.integral.weight = analysis::SurfaceWeight::Normal;
            else if (w == "density")
                s.integral.weight = analysis::SurfaceWeight::Density;
            else
                throw ParseError("integral.weight", "weight must be normal or density");
        }
        const bool planar = s.integral.kind == IntegralKind::CauchySquared || s.integral.kind == IntegralKind::Mass ||
                            s.integral.kind == IntegralKind::CircleWeighted;
        if (planar && s.dim != 2) throw ParseError("integral.kind", kind + " requires dim 2");
        if (!planar && s.dim < 2) throw ParseError("integral.kind", kind + " requires a surface");
    } else if (s.dim != 2) {
        s.integral.kind = IntegralKind::SurfaceCauchy;
    }
    if (root.contains("quadrature")) s.quadrature = parse_quadrature(root["quadrature"]);
    if (root.contains("dirac_step")) {
        s.dirac.h = number(root["dirac_step"], "dirac_step");
        if (!(s.dirac.h > 0)) throw ParseError("dirac_step", "must be positive");
    }
    return s;
}

/// Parse scene text; JSON syntax errors report the line number.
inline Scene parse_scene_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("line " + std::to_string(scene_detail::line_of(text, e.byte)), e.what());
    } catch (const json::exception& e) {
        throw ParseError("", e.what());
    }
    try {
        return parse_scene(root);
    } catch (const json::exception& e) {
        throw ParseError("", e.what());
    }
}

inline Scene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), "cannot open scene file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scene_text(buf.str());
}

/// A sampled value, or the reason the point could not be evaluated.
struct FieldSample {
    Point point;
    std::optional<Complex> complex_value;
    std::optional<clifford::Multivector> clifford_value;
    std::string error;

    bool ok() const { return error.empty(); }
};

struct KernelField {
    int dim = 2;
    std::string integral;
    std::string measure;
    std::vector<FieldSample> samples;

    std::size_t error_count() const {
        return static_cast<std::size_t>(
            std::count_if(samples.begin(), samples.end(), [](const FieldSample& s) { return !s.ok(); }));
    }
};

/// Value of the scene's integral at one point. Throws on points that lie on
/// the geometry or when quadrature fails.
inline FieldSample evaluate_point(const Scene& scene, const Point& p) {
    FieldSample out{p, std::nullopt, std::nullopt, {}};
    switch (scene.integral.kind) {
        case IntegralKind::CauchySquared:
        case IntegralKind::Mass: {
            const auto curve = scene.merged_curve();
            if (!curve) throw DomainError("scene has no curves");
            const Complex z(p[0], p[1]);
            out.complex_value = scene.integral.kind == IntegralKind::CauchySquared
                                    ? plane::cauchy_squared(*curve, scene.integral.measure, z, scene.quadrature)
                                    : Complex(plane::mass_integral(*curve, z, scene.quadrature, scene.integral.measure));
            break;
        }
        case IntegralKind::CircleWeighted:
            out.complex_value = plane::circle_weighted(Complex(p[0], p[1]), scene.quadrature);
            break;
        case IntegralKind::SurfaceCauchy:
        case IntegralKind::SurfaceDerivative: {
            if (scene.surfaces.empty()) throw DomainError("scene has no surfaces");
            clifford::Multivector total(scene.dim);
            for (const auto& surf : scene.surfaces)
                total = total + (scene.integral.kind == IntegralKind::SurfaceCauchy
                                     ? analysis::surface_cauchy_integral(surf, p)
                                     : analysis::surface_derivative_integral(surf, p, scene.integral.axis,
                                                                             scene.integral.weight));
            out.clifford_value = total;
            break;
        }
    }
    return out;
}

/// Sample the scene's integral over its grid. Points that cannot be evaluated
/// become error samples; evaluation order does not affect the result.
inline KernelField evaluate_field(const Scene& scene, unsigned threads = 1) {
    if (!scene.grid) throw DomainError("scene has no grid");
    const auto points = scene.grid->points();
    KernelField field;
    field.dim = scene.dim;
    field.integral = scene_detail::integral_name(scene.integral.kind);
    if (scene.integral.kind == IntegralKind::CauchySquared || scene.integral.kind == IntegralKind::Mass)
        field.measure = scene_detail::measure_name(scene.integral.measure);
    else if (scene.integral.kind == IntegralKind::SurfaceDerivative)
        field.measure = scene.integral.weight == analysis::SurfaceWeight::Normal ? "normal" : "density";
    field.samples.resize(points.size());

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                field.samples[i] = evaluate_point(scene, points[i]);
            } catch (const Error& e) {
                field.samples[i] = FieldSample{points[i], std::nullopt, std::nullopt, e.what()};
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
    if (threads == 1) {
        work(0, points.size());
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (points.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk, e = std::min(points.size(), b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
    }
    return field;
}

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Blade-name -> coefficient object with the nonzero coefficients.
inline json multivector_to_json(const clifford::Multivector& m) {
    json out = json::object();
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m.coeffs()[i] != 0.0) out[clifford::BasisBlade{static_cast<std::uint32_t>(i)}.name()] = m.coeffs()[i];
    return out;
}

/// Planar fields: re_z,im_z,re_val,im_val. Surface fields: x1..xn,blade,coeff
/// with one row per nonzero coefficient. Failed points carry nan values.
inline void write_field_csv(const KernelField& field, std::ostream& os) {
    const bool planar = field.dim == 2 && (field.samples.empty() || !field.samples.front().clifford_value) &&
                        field.integral != "surface_cauchy" && field.integral != "surface_derivative";
    if (planar) {
        os << "re_z,im_z,re_val,im_val\n";
        for (const auto& s : field.samples) {
            const Complex v = s.complex_value.value_or(Complex(std::nan(""), std::nan("")));
            os << format_number(s.point[0]) << ',' << format_number(s.point[1]) << ',' << format_number(v.real())
               << ',' << format_number(v.imag()) << '\n';
        }
        return;
    }
    for (int j = 1; j <= field.dim; ++j) os << 'x' << j << ',';
    os << "blade,coeff\n";
    for (const auto& s : field.samples) {
        std::string prefix;
        for (double x : s.point) prefix += format_number(x) + ",";
        if (!s.clifford_value) {
            os << prefix << "1,nan\n";
            continue;
        }
        const auto& m = *s.clifford_value;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m.coeffs()[i] != 0.0)
                os << prefix << clifford::BasisBlade{static_cast<std::uint32_t>(i)}.name() << ','
                   << format_number(m.coeffs()[i]) << '\n';
    }
}

inline json field_to_json(const KernelField& field) {
    json records = json::array();
    for (const auto& s : field.samples) {
        json r{{"point", s.point}};
        if (s.complex_value)
            r["value"] = json::array({s.complex_value->real(), s.complex_value->imag()});
        else if (s.clifford_value)
            r["value"] = multivector_to_json(*s.clifford_value);
        else
            r["error"] = s.error;
        records.push_back(std::move(r));
    }
    return json{{"dim", field.dim},
                {"integral", field.integral},
                {"measure", field.measure},
                {"errors", field.error_count()},
                {"records", std::move(records)}};
}

/// Write through a temporary file and rename it into place.
inline void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << contents;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace curvkit
