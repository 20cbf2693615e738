// curvkit: verification suites, field sampling, residue extraction and fan
// balance for curvature-measuring Cauchy integrals.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parse error.

#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "curvkit/curvkit.hpp"

namespace {

using curvkit::Complex;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Globals {
    std::string scene_path;
    bool json_out = false;
    std::optional<double> tol;
    unsigned threads = 1;
    std::uint64_t seed = 20011;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

curvkit::Scene load(const Globals& g, bool required) {
    curvkit::Scene scene;
    if (g.scene_path.empty()) {
        if (required) throw UsageError("--scene is required for this command");
    } else {
        scene = curvkit::load_scene(g.scene_path);
    }
    if (g.tol) {
        scene.quadrature.rel_tol = *g.tol;
        scene.quadrature.validate();
    }
    return scene;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt(Complex c) { return fmt(c.real()) + (c.imag() < 0 ? " - " : " + ") + fmt(std::abs(c.imag())) + "i"; }

int cmd_verify(const Globals& g, const std::string& suite) {
    const auto scene = load(g, false);
    const auto report = curvkit::verify::run_suite(suite, g.seed, scene.quadrature, scene.dirac);
    if (g.json_out) {
        std::cout << report.to_json().dump(2) << '\n';
    } else {
        std::size_t width = 10;
        for (const auto& c : report.checks) width = std::max(width, c.name.size());
        std::cout << "suite " << report.suite << " (seed " << report.seed << ")\n";
        for (const auto& c : report.checks) {
            std::cout << (c.pass ? "  PASS  " : "  FAIL  ") << c.name << std::string(width - c.name.size() + 2, ' ')
                      << "expected " << fmt(c.expected) << "  actual " << fmt(c.actual) << "  tol " << fmt(c.tolerance)
                      << '\n';
        }
        std::cout << (report.passed() ? "all checks passed" : "some checks FAILED") << " in "
                  << fmt(report.wall_seconds) << " s\n";
    }
    return report.passed() ? kExitPass : kExitFail;
}

int cmd_field(const Globals& g, const std::string& out, const std::string& format) {
    const auto scene = load(g, true);
    const auto field = curvkit::evaluate_field(scene, g.threads);
    std::string contents;
    if (format == "csv") {
        std::ostringstream os;
        curvkit::write_field_csv(field, os);
        contents = os.str();
    } else {
        contents = curvkit::field_to_json(field).dump(2) + "\n";
    }
    curvkit::write_file_atomically(out, contents);
    if (field.error_count() > 0)
        std::cerr << "warning: " << field.error_count() << " of " << field.samples.size()
                  << " grid points could not be evaluated (flagged in output)\n";
    if (g.json_out)
        std::cout << json{{"out", out}, {"points", field.samples.size()}, {"errors", field.error_count()}}.dump() << '\n';
    else
        std::cout << "wrote " << field.samples.size() << " points to " << out << '\n';
    return kExitPass;
}

curvkit::plane::MeasureKind measure_of(const curvkit::Scene& scene, const std::string& override_name) {
    if (override_name.empty()) return scene.integral.measure;
    return curvkit::scene_detail::parse_measure(override_name, "--measure");
}

int cmd_residue(const Globals& g, const std::vector<double>& point, const std::string& measure_name) {
    const auto scene = load(g, true);
    const auto curve = scene.merged_curve();
    if (!curve) throw UsageError("scene has no curves");
    const Complex q(point.at(0), point.at(1));
    bool marked = false;
    for (Complex v : curve->vertices()) marked = marked || std::abs(v - q) <= 1e-9;
    if (!marked) throw UsageError("point " + fmt(q) + " is not a vertex or apex of the scene curves");

    const auto measure = measure_of(scene, measure_name);
    const auto fit = curvkit::plane::residue_fit(*curve, q, measure, scene.quadrature);
    const auto analytic = curvkit::plane::analytic_residue(*curve, q, measure);

    json out{{"point", {q.real(), q.imag()}},
             {"coefficient", {fit.coefficient.real(), fit.coefficient.imag()}},
             {"radius", fit.radius},
             {"fit_residual", fit.residual},
             {"quadrature", curvkit::quadrature_to_json(scene.quadrature)}};
    bool pass = true;
    if (analytic) {
        const double scale = std::abs(*analytic);
        // relative agreement for nonzero residues, absolute for balanced points
        const double err = scale > 1e-12 ? std::abs(fit.coefficient - *analytic) / scale
                                         : std::abs(fit.coefficient - *analytic);
        const double tol = scale > 1e-12 ? 1e-4 : 1e-6;
        pass = err <= tol;
        out["analytic"] = {analytic->real(), analytic->imag()};
        out["error"] = err;
        out["error_kind"] = scale > 1e-12 ? "relative" : "absolute";
        out["tolerance"] = tol;
        out["pass"] = pass;
    }
    if (g.json_out) {
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout << "residue at " << fmt(q) << ": " << fmt(fit.coefficient) << "  (radius " << fmt(fit.radius)
                  << ", fit residual " << fmt(fit.residual) << ")\n";
        if (analytic)
            std::cout << "analytic     " << fmt(*analytic) << "  error " << fmt(out["error"].get<double>()) << " ("
                      << out["error_kind"].get<std::string>() << ")  " << (pass ? "PASS" : "FAIL") << '\n';
    }
    return pass ? kExitPass : kExitFail;
}

int cmd_balance(const Globals& g) {
    const auto scene = load(g, true);
    const auto curve = scene.merged_curve();
    if (!curve) throw UsageError("scene has no curves");
    std::optional<Complex> apex;
    std::vector<curvkit::plane::FanRay> rays;
    for (const auto& piece : curve->pieces()) {
        const auto* ray = std::get_if<curvkit::Ray>(&piece.shape());
        if (!ray) throw UsageError("balance needs a scene made only of rays");
        if (apex && std::abs(*apex - ray->apex) > 1e-12) throw UsageError("all rays must share one apex");
        apex = ray->apex;
        rays.push_back({ray->direction, piece.density()});
    }
    const curvkit::plane::RayFan fan(*apex, rays);
    const Complex c = curvkit::plane::ray_balance_constant(fan);
    double total = 0.0;
    for (const auto& r : rays) total += r.density;
    const bool balanced = std::abs(c) <= 1e-12 * total;
    if (g.json_out) {
        std::cout << json{{"apex", {apex->real(), apex->imag()}},
                          {"rays", rays.size()},
                          {"constant", {c.real(), c.imag()}},
                          {"balanced", balanced}}
                         .dump(2)
                  << '\n';
    } else {
        std::cout << "fan at " << fmt(*apex) << " with " << rays.size() << " rays: constant " << fmt(c) << " ("
                  << (balanced ? "balanced" : "not balanced") << ")\n";
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature-measuring Cauchy integrals on curves and hypersurfaces"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--scene", g.scene_path, "Scene file (JSON)");
    app.add_flag("--json", g.json_out, "Machine-readable JSON output");
    app.add_option("--tol", g.tol, "Override the quadrature relative tolerance")->check(CLI::PositiveNumber);
    app.add_option("--threads", g.threads, "Worker threads for grid evaluation")->check(CLI::Range(1u, 1024u));
    app.add_option("--seed", g.seed, "Seed for randomized property suites");

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "Run identity suites");
    verify->add_option("suite", suite, "algebra | plane | clifford | all")
        ->check(CLI::IsMember({"algebra", "plane", "clifford", "all"}));
    verify->fallthrough();

    std::string out, format = "csv";
    auto* field = app.add_subcommand("field", "Sample the scene's integral on its grid");
    field->add_option("--out,-o", out, "Output file")->required();
    field->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    field->fallthrough();

    std::vector<double> point;
    std::string measure;
    auto* residue = app.add_subcommand("residue", "Fit the pole coefficient at a marked vertex");
    residue->add_option("--point", point, "Vertex as two numbers: re im")->required()->expected(2);
    residue->add_option("--measure", measure, "complex | arclength | weighted (default: scene)");
    residue->fallthrough();

    auto* balance = app.add_subcommand("balance", "Balance constant of a ray fan");
    balance->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify) return cmd_verify(g, suite);
        if (*field) return cmd_field(g, out, format);
        if (*residue) return cmd_residue(g, point, measure);
        if (*balance) return cmd_balance(g);
    } catch (const curvkit::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const curvkit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}
