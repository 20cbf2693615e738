#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "curvkit/scene.hpp"

using namespace curvkit;

namespace {

const std::filesystem::path kScenes = CURVKIT_SCENES_DIR;

std::string csv_of(const KernelField& f) {
    std::ostringstream os;
    write_field_csv(f, os);
    return os.str();
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string parse_error_where(const std::string& text) {
    try {
        parse_scene_text(text);
    } catch (const ParseError& e) {
        return e.where();
    }
    return "<no error>";
}

}  // namespace

TEST(SceneParse, CircleScene) {
    const Scene s = load_scene(kScenes / "circle.json");
    EXPECT_EQ(s.dim, 2);
    ASSERT_EQ(s.curves.size(), 1u);
    EXPECT_TRUE(s.curves.front().closed());
    EXPECT_EQ(s.integral.kind, IntegralKind::CircleWeighted);
    ASSERT_TRUE(s.grid);
    EXPECT_EQ(s.grid->points().size(), 41u * 41u);
}

TEST(SceneParse, LineBecomesTwoOppositeRays) {
    const Scene s = load_scene(kScenes / "line.json");
    ASSERT_EQ(s.curves.front().pieces().size(), 2u);
    EXPECT_TRUE(s.curves.front().pieces()[0].is_ray());
    EXPECT_TRUE(s.curves.front().pieces()[1].is_ray());
    EXPECT_EQ(s.integral.kind, IntegralKind::Mass);
}

TEST(SceneParse, SphereSceneAndQuadratureOverrides) {
    const Scene s = parse_scene_text(R"({
        "dim": 3,
        "surfaces": [{"kind": "sphere", "center": [0, 0, 0], "radius": 2, "level": 1, "density": 3}],
        "quadrature": {"rel_tol": 1e-8, "base_nodes": 20},
        "dirac_step": 0.001
    })");
    ASSERT_EQ(s.surfaces.size(), 1u);
    EXPECT_EQ(s.surfaces.front().elements().size(), 80u);
    EXPECT_EQ(s.surfaces.front().elements().front().density, 3.0);
    EXPECT_EQ(s.integral.kind, IntegralKind::SurfaceCauchy);
    EXPECT_EQ(s.quadrature.rel_tol, 1e-8);
    EXPECT_EQ(s.quadrature.base_nodes, 20);
    EXPECT_EQ(s.quadrature.abs_tol, QuadratureSpec{}.abs_tol);
    EXPECT_EQ(s.dirac.h, 1e-3);
}

TEST(SceneParse, ErrorsNameTheField) {
    EXPECT_EQ(parse_error_where(R"({"curves": []})"), "dim");
    EXPECT_EQ(parse_error_where(R"({"dim": 1})"), "dim");
    EXPECT_EQ(parse_error_where(R"({"dim": 2, "curves": [{"pieces": [{"kind": "spline"}]}]})"),
              "curves[0].pieces[0].kind");
    EXPECT_EQ(parse_error_where(R"({"dim": 2, "curves": [{"pieces": [{"kind": "segment", "a": [0, 0]}]}]})"),
              "curves[0].pieces[0].b");
    EXPECT_EQ(parse_error_where(R"({"dim": 2, "curves": [{"pieces": [{"kind": "segment", "a": [0, 0], "b": [0, 0]}]}]})"),
              "curves[0].pieces[0]");
    EXPECT_EQ(parse_error_where(R"({"dim": 2, "curves": [{"closed": true, "pieces": [
                {"kind": "segment", "a": [0, 0], "b": [1, 0]}, {"kind": "segment", "a": [1, 0], "b": [1, 1]}]}]})"),
              "curves[0]");
    EXPECT_EQ(parse_error_where(R"({"dim": 2, "grid": {"lo": [0, 0], "hi": [1, 1], "n": [0, 3]}})"), "grid.n");
    EXPECT_EQ(parse_error_where(R"({"dim": 2, "integral": {"kind": "volume"}})"), "integral.kind");
    EXPECT_EQ(parse_error_where(R"({"dim": 3, "integral": {"kind": "mass"}})"), "integral.kind");
    EXPECT_EQ(parse_error_where(R"({"dim": 2, "quadrature": {"rel_tol": -1}})"), "quadrature");
    EXPECT_EQ(parse_error_where(R"({"dim": 3, "surfaces": [{"kind": "sphere", "center": [0, 0, 0], "radius": 1, "level": 9}]})"),
              "surfaces[0]");
}

TEST(SceneParse, SyntaxErrorsReportTheLine) {
    EXPECT_EQ(parse_error_where("{\n  \"dim\": 2,\n  \"grid\": {\n    \"lo\": [0 0]\n  }\n}\n"), "line 4");
    EXPECT_THROW(load_scene(kScenes / "does_not_exist.json"), ParseError);
}

TEST(Grid, HalfCellOffsetAndOrdering) {
    GridSpec g{{-2, -2}, {2, 2}, {4, 2}, true};
    const auto pts = g.points();
    ASSERT_EQ(pts.size(), 8u);
    EXPECT_EQ(pts[0], (Point{-1.5, -1}));
    EXPECT_EQ(pts[1], (Point{-1.5, 1}));
    EXPECT_EQ(pts[2], (Point{-0.5, -1}));
    g.offset_half_cell = false;
    const auto ends = g.points();
    EXPECT_EQ(ends.front(), (Point{-2, -2}));
    EXPECT_EQ(ends.back(), (Point{2, 2}));
}

TEST(Field, CircleSceneIsZeroInsideAndMatchesOutside) {
    const Scene s = load_scene(kScenes / "circle.json");
    const auto field = evaluate_field(s, 4);
    EXPECT_EQ(field.error_count(), 0u);
    const auto rows = lines_of(csv_of(field));
    ASSERT_EQ(rows.size(), 1 + 41u * 41u);
    EXPECT_EQ(rows.front(), "re_z,im_z,re_val,im_val");
    for (const auto& sample : field.samples) {
        const Complex z(sample.point[0], sample.point[1]);
        const Complex v = *sample.complex_value;
        if (std::abs(z) < 0.9) {
            EXPECT_LE(std::abs(v), 1e-8);
        } else if (std::abs(z) > 1.1) {
            EXPECT_LE(std::abs(v - 2 * std::numbers::pi * Complex(0, 1) / (z * z)), 1e-8 * std::abs(v));
        }
    }
}

TEST(Field, DeterministicAcrossThreadCounts) {
    const Scene s = load_scene(kScenes / "corner.json");
    const std::string one = csv_of(evaluate_field(s, 1));
    EXPECT_EQ(one, csv_of(evaluate_field(s, 3)));
    EXPECT_EQ(one, csv_of(evaluate_field(s, 8)));
    EXPECT_EQ(field_to_json(evaluate_field(s, 1)).dump(), field_to_json(evaluate_field(s, 5)).dump());
}

TEST(Field, GridTouchingTheCurveFlagsRows) {
    const Scene s = load_scene(kScenes / "grid_on_segment.json");
    const auto field = evaluate_field(s);
    EXPECT_EQ(field.error_count(), 3u);
    const auto rows = lines_of(csv_of(field));
    ASSERT_EQ(rows.size(), 10u);
    EXPECT_EQ(rows[2], "-1,0,nan,nan");
    const auto j = field_to_json(field);
    EXPECT_EQ(j["errors"], 3);
    EXPECT_TRUE(j["records"][1].contains("error"));
    EXPECT_FALSE(j["records"][0].contains("error"));
}

TEST(Field, SurfaceCsvHasOneRowPerNonzeroBlade) {
    Scene s = parse_scene_text(R"({
        "dim": 3,
        "surfaces": [{"kind": "sphere", "center": [0, 0, 0], "radius": 1, "level": 2}],
        "grid": {"lo": [-0.2, 0, 0], "hi": [3, 0, 0], "n": [2, 1, 1], "offset_half_cell": false}
    })");
    const auto field = evaluate_field(s);
    const auto rows = lines_of(csv_of(field));
    EXPECT_EQ(rows.front(), "x1,x2,x3,blade,coeff");
    std::size_t expected_rows = 1;
    for (const auto& sample : field.samples)
        for (double c : sample.clifford_value->coeffs()) expected_rows += c != 0.0;
    EXPECT_EQ(rows.size(), expected_rows);
    EXPECT_EQ(rows[1].rfind("-0.20000000000000001,0,0,1,", 0), 0u);
    const auto j = field_to_json(field);
    EXPECT_NEAR(j["records"][0]["value"]["1"].get<double>(), 4 * std::numbers::pi, 0.05 * 4 * std::numbers::pi);
}

TEST(Field, SurfaceErrorRowsUseNan) {
    Scene s = parse_scene_text(R"({
        "dim": 3,
        "surfaces": [{"kind": "box", "lo": [-1, -1, -1], "hi": [1, 1, 1], "cells": 2}],
        "grid": {"lo": [-1, 0, 0], "hi": [0, 0, 0], "n": [2, 1, 1], "offset_half_cell": false}
    })");
    const auto field = evaluate_field(s);
    EXPECT_EQ(field.error_count(), 1u);
    EXPECT_EQ(lines_of(csv_of(field))[1], "-1,0,0,1,nan");
}

TEST(Field, AtomicWriteReplacesContents) {
    const auto path = std::filesystem::temp_directory_path() / "curvkit_atomic_test.txt";
    write_file_atomically(path, "first\n");
    write_file_atomically(path, "second\n");
    std::ifstream in(path);
    std::string s((std::istreambuf_iterator<char>(in)), {});
    EXPECT_EQ(s, "second\n");
    EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    std::filesystem::remove(path);
}

TEST(Format, RoundTripsDoubles) {
    for (double v : {0.1, -2.5e-300, 1.0 / 3.0, 6.02214076e23}) EXPECT_EQ(std::stod(format_number(v)), v);
    EXPECT_EQ(format_number(std::nan("")), "nan");
}
