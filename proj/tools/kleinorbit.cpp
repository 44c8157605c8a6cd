// kleinorbit: command-line driver for quadrilateral reflection groups,
// exotic-circle verification, orbit enumeration, and SVG emission.
//
// Exit codes: 0 success, 2 check failure, 3 input/parse error, 4 truncation.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kleinorbit/figures.hpp"
#include "kleinorbit/json_io.hpp"
#include "kleinorbit/render.hpp"

namespace {

using namespace kleinorbit;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 2;
constexpr int kExitInputError = 3;
constexpr int kExitTruncated = 4;

// ---------------------------------------------------------------------------
// Run reports

class RunReport {
  public:
    RunReport(std::string command) : command_(std::move(command)) {
        start_ = std::chrono::steady_clock::now();
    }

    ordered_json& inputs() { return inputs_; }
    ordered_json& results() { return results_; }

    void add_output(const std::string& path) { outputs_.push_back(path); }

    bool add_check(const std::string& name, bool pass, double residual) {
        checks_[name] = ordered_json{{"pass", pass}, {"residual", residual}};
        allPass_ = allPass_ && pass;
        return pass;
    }

    bool all_pass() const { return allPass_; }

    ordered_json to_json() const {
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                          .count();
        return ordered_json{{"schema", 1},       {"command", command_}, {"inputs", inputs_},
                            {"outputs", outputs_}, {"checks", checks_},   {"results", results_},
                            {"wall_time_s", wall}};
    }

    void print(std::ostream& os) const {
        os << "command: " << command_ << "\n";
        for (const auto& [name, c] : checks_.items()) {
            os << "  " << name << ": " << (c["pass"].get<bool>() ? "PASS" : "FAIL")
               << " (residual " << c["residual"].get<double>() << ")\n";
        }
        for (const std::string& path : outputs_) os << "  wrote " << path << "\n";
    }

    int finish(const std::optional<std::string>& jsonPath, int exitOnPass = kExitOk) {
        if (jsonPath) {
            std::ofstream out(*jsonPath);
            if (!out) {
                std::cerr << "cannot write " << *jsonPath << "\n";
                return kExitInputError;
            }
            out << to_json().dump(2) << "\n";
            add_output_silent(*jsonPath);
        }
        print(std::cout);
        if (!allPass_) return kExitCheckFailure;
        return exitOnPass;
    }

  private:
    void add_output_silent(const std::string& path) { outputs_.push_back(path); }

    std::string command_;
    ordered_json inputs_ = ordered_json::object();
    ordered_json results_ = ordered_json::object();
    ordered_json checks_ = ordered_json::object();
    std::vector<std::string> outputs_;
    bool allPass_ = true;
    std::chrono::steady_clock::time_point start_;
};

bool write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

// ---------------------------------------------------------------------------
// solve-t0

int run_solve_t0(std::optional<double> tOverride, std::optional<std::string> jsonPath) {
    RunReport report("solve-t0");
    report.inputs()["t_override"] = tOverride ? ordered_json(*tOverride) : ordered_json(nullptr);

    RootCertificate cert = find_t0_certified();
    double closed = closed_form_t0();
    double tEval = tOverride ? *tOverride : cert.t0;

    report.add_check("bisection_matches_closed_form", std::abs(cert.t0 - closed) <= 1e-12,
                     std::abs(cert.t0 - closed));
    report.add_check("t0_near_reference", std::abs(cert.t0 - 1.202) <= 5e-4,
                     std::abs(cert.t0 - 1.202));
    report.add_check("cubic_residual", std::abs(cubic(cert.t0)) < 1e-10,
                     std::abs(cubic(cert.t0)));

    double h1 = h_poly(1.0), h2 = h_poly(2.0);
    report.add_check("h_endpoints_exact", h1 == -5184.0 && h2 == -8281.0,
                     std::max(std::abs(h1 + 5184.0), std::abs(h2 + 8281.0)));
    double worstH = -1e300;
    for (int i = 1; i <= 1000; ++i) worstH = std::max(worstH, h_poly(1.0 + i / 1001.0));
    report.add_check("h_negative_on_interval", worstH < 0.0, worstH);

    TangencyReport tang = verify_exotic_tangency(tEval);
    double orthoMax = 0.0;
    for (double r : tang.orthogonality) orthoMax = std::max(orthoMax, std::abs(r));
    report.add_check("orthogonality_residuals", orthoMax < 1e-9, orthoMax);
    report.add_check("unit_residual", std::abs(tang.unit) < 1e-9, std::abs(tang.unit));
    report.add_check("tangency_inner_product", std::abs(tang.tangency) < 1e-9,
                     std::abs(tang.tangency));
    report.add_check("boundary_inversive_distance", std::abs(tang.boundary_tangency) < 1e-8,
                     std::abs(tang.boundary_tangency));

    double worstFactor = 0.0;
    bool plusMatches = true;
    for (int i = 1; i <= 20; ++i) {
        FactorIdentityReport fid = factor_identity_report(1.0 + i / 21.0);
        worstFactor = std::max({worstFactor, fid.chain_residual, fid.factor_residual});
        plusMatches = plusMatches && fid.plus_variant_matches;
    }
    report.add_check("factor_identity", worstFactor < 1e-9 && plusMatches, worstFactor);

    report.results() = ordered_json{{"t0_bisection", cert.t0},
                                    {"t0_closed_form", closed},
                                    {"bracket", {cert.bracket_lo, cert.bracket_hi}},
                                    {"evaluated_at", tEval},
                                    {"tangency", tangency_to_json(tang)},
                                    {"matched_variant", plusMatches ? "+29u^2" : "-29u^2"}};
    return report.finish(jsonPath);
}

// ---------------------------------------------------------------------------
// quad subcommands

struct QuadParams {
    int n = 3;
    double s = 2.0;
    double t = 1.5;
    OrbitConfig cfg;
    double pointDiameter = 1e-3;
    int workers = 1;
    int sizePx = 800;
    int kMax = 15;
    double tol = 1e-8;
    std::optional<std::string> outPath;
    std::optional<std::string> jsonPath;
};

void echo_quad_inputs(RunReport& report, const QuadParams& p) {
    report.inputs()["n"] = p.n;
    report.inputs()["s"] = p.s;
    report.inputs()["t"] = p.t;
    report.inputs()["max_depth"] = p.cfg.maxDepth;
    report.inputs()["min_diameter"] = p.cfg.minDiameter;
    report.inputs()["dedup_epsilon"] = p.cfg.dedupEpsilon;
    report.inputs()["max_items"] = p.cfg.maxItems;
    report.inputs()["workers"] = p.workers;
}

double construction_residual(const QuadGroupData& d) {
    double cosv = std::cos(M_PI / d.n);
    double worst = 0.0;
    worst = std::max(worst, std::abs(inversive_product(d.c1, d.c3) + d.s));
    worst = std::max(worst, std::abs(inversive_product(d.c2, d.c4) + d.t));
    for (auto [a, b] : {std::pair{&d.c1, &d.c2}, {&d.c2, &d.c3}, {&d.c3, &d.c4},
                        {&d.c4, &d.c1}}) {
        worst = std::max(worst, std::abs(inversive_product(*a, *b) + cosv));
    }
    return worst;
}

int run_quad_info(const QuadParams& p) {
    RunReport report("quad info");
    echo_quad_inputs(report, p);
    QuadGroupData d = solve_quadrilateral(p.n, p.s, p.t);
    double residual = construction_residual(d);
    report.add_check("construction_residuals", residual < 1e-9, residual);
    report.results() = quad_to_json(d);
    std::cout << "fuchsian_defect = " << fuchsian_defect(d) << "\n";
    return report.finish(p.jsonPath);
}

int run_quad_exotic(const QuadParams& p) {
    RunReport report("quad exotic");
    echo_quad_inputs(report, p);
    report.inputs()["k_max"] = p.kMax;
    report.inputs()["tol"] = p.tol;

    QuadGroupData d = solve_quadrilateral(p.n, p.s, p.t);
    AccumulationReport rep = verify_accumulation(d, p.kMax, p.tol);

    bool decreasing = true;
    double worstStep = 0.0;
    for (std::size_t i = 1; i < rep.distances.size(); ++i) {
        if (rep.distances[i].first < 2) continue;
        double step = rep.distances[i].second / rep.distances[i - 1].second;
        worstStep = std::max(worstStep, step);
        decreasing = decreasing && rep.distances[i].second < rep.distances[i - 1].second;
    }
    report.add_check("distance_strictly_decreasing", decreasing, worstStep);
    double last = rep.distances.empty() ? 1e300 : rep.distances.back().second;
    report.add_check("distance_below_threshold", rep.converged && last < p.tol, last);

    Complex kappa = multiplier_at(d.eta, d.pPrime);
    double predicted = std::abs(kappa);
    std::size_t mid = rep.distances.size() > 10 ? 10 : rep.distances.size() - 1;
    double ratio = rep.distances[mid].second / rep.distances[mid - 1].second;
    report.add_check("ratio_matches_multiplier", std::abs(ratio / predicted - 1.0) <= 0.05,
                     std::abs(ratio / predicted - 1.0));

    report.add_check("isolation_radius_positive", rep.isolation_radius > 0.0,
                     rep.isolation_radius);
    AccumulationReport shallow = verify_accumulation(d, p.kMax, p.tol, 8);
    AccumulationReport deep = verify_accumulation(d, p.kMax, p.tol, 12);
    double drift = std::abs(shallow.isolation_radius - deep.isolation_radius) /
                   std::max(shallow.isolation_radius, deep.isolation_radius);
    report.add_check("isolation_radius_stable", drift <= 0.10, drift);

    report.results() = accumulation_to_json(rep);
    report.results()["multiplier_modulus"] = predicted;
    return report.finish(p.jsonPath);
}

GenCircle quad_seed(const QuadGroupData& d) {
    return is_fuchsian(d) ? d.c1 : exotic_circle(d);
}

int run_quad_orbit(const QuadParams& p) {
    RunReport report("quad orbit");
    echo_quad_inputs(report, p);
    QuadGroupData d = solve_quadrilateral(p.n, p.s, p.t);
    GeneratorSet gens = quad_generators(d);
    OrbitSet orbit = enumerate_orbit(gens, quad_seed(d), p.cfg, p.workers);

    if (p.outPath) {
        if (!write_text_file(*p.outPath, orbit_to_jsonl(orbit))) {
            std::cerr << "cannot write " << *p.outPath << "\n";
            return kExitInputError;
        }
        report.add_output(*p.outPath);
    }

    report.results()["header"] = orbit_header_json(orbit);
    if (!orbit.truncated) {
        ClosureReport closure = closure_check(gens, orbit, 1000);
        report.add_check("closure_zero_misses", closure.misses == 0,
                         static_cast<double>(closure.misses));
        report.results()["closure"] = closure_to_json(closure);
    }
    if (!orbit.truncated && !is_fuchsian(d)) {
        GenCircle limit = limit_circle(d);
        std::vector<double> minDist(p.cfg.maxDepth + 1, 1e300);
        for (const OrbitItem& item : orbit.items) {
            minDist[item.depth] =
                std::min(minDist[item.depth], circle_distance(item.circle, limit));
        }
        bool decreasing = true;
        for (int k = 1; k <= p.cfg.maxDepth; ++k) {
            if (minDist[k] >= 1e300 || minDist[k - 1] >= 1e300) continue;
            decreasing = decreasing && minDist[k] < minDist[k - 1];
        }
        report.add_check("orbit_accumulates_on_limit", decreasing,
                         minDist[p.cfg.maxDepth] < 1e300 ? minDist[p.cfg.maxDepth] : -1.0);
    }
    return report.finish(p.jsonPath, orbit.truncated ? kExitTruncated : kExitOk);
}

int run_quad_limitset(const QuadParams& p) {
    RunReport report("quad limitset");
    echo_quad_inputs(report, p);
    report.inputs()["point_diameter"] = p.pointDiameter;

    QuadGroupData d = solve_quadrilateral(p.n, p.s, p.t);
    GeneratorSet gens = quad_generators(d);
    LimitCloud cloud = approximate_limit_set(gens, p.cfg, p.pointDiameter);

    if (p.outPath) {
        if (!write_text_file(*p.outPath, cloud_to_json(cloud).dump(2) + "\n")) {
            std::cerr << "cannot write " << *p.outPath << "\n";
            return kExitInputError;
        }
        report.add_output(*p.outPath);
    }

    if (!cloud.truncated) {
        report.add_check("cloud_nonempty", !cloud.degenerate,
                         static_cast<double>(cloud.points.size()));
        report.add_check("point_count_over_1000", cloud.points.size() > 1000,
                         static_cast<double>(cloud.points.size()));
        if (cloud.points.size() >= 2) {
            double gap = max_nearest_neighbor_gap(cloud.points, 0.02);
            report.add_check("nn_gap_below_threshold", gap < 0.02, gap);
        }
        if (is_fuchsian(d) && cloud.points.size() >= 3) {
            CircleFit fit = fit_sphere_circle(cloud.points);
            report.add_check("fuchsian_round_fit", fit.max_deviation < 1e-3, fit.max_deviation);
        }
    }
    report.results()["count"] = cloud.points.size();
    report.results()["truncated"] = cloud.truncated;
    return report.finish(p.jsonPath, cloud.truncated ? kExitTruncated : kExitOk);
}

std::string orbit_svg_path(const std::string& base) {
    std::filesystem::path path(base);
    std::filesystem::path derived = path.parent_path() / path.stem();
    return derived.string() + ".orbit" + path.extension().string();
}

int run_quad_render(const QuadParams& p) {
    RunReport report("quad render");
    echo_quad_inputs(report, p);
    report.inputs()["point_diameter"] = p.pointDiameter;
    report.inputs()["size_px"] = p.sizePx;

    QuadGroupData d = solve_quadrilateral(p.n, p.s, p.t);
    QuadFigures figures = make_quad_figures(d, p.cfg, p.pointDiameter, p.workers, p.sizePx);

    std::string planePath = p.outPath ? *p.outPath : std::string("quad.svg");
    std::string orbitPath = orbit_svg_path(planePath);
    if (!write_text_file(planePath, render_svg(figures.planeScene)) ||
        !write_text_file(orbitPath, render_svg(figures.orbitScene))) {
        std::cerr << "cannot write SVG output\n";
        return kExitInputError;
    }
    report.add_output(planePath);
    report.add_output(orbitPath);

    bool truncated = figures.orbit.truncated || figures.cloud.truncated;
    if (!truncated) {
        report.add_check("limit_points_over_1000", figures.cloud.points.size() > 1000,
                         static_cast<double>(figures.cloud.points.size()));
        if (figures.cloud.points.size() >= 2) {
            double gap = max_nearest_neighbor_gap(figures.cloud.points, 0.02);
            report.add_check("nn_gap_below_threshold", gap < 0.02, gap);
        }
    }
    if (!truncated && !is_fuchsian(d)) {
        GenCircle limit = limit_circle(d);
        std::vector<double> minDist(p.cfg.maxDepth + 1, 1e300);
        for (const OrbitItem& item : figures.orbit.items) {
            minDist[item.depth] =
                std::min(minDist[item.depth], circle_distance(item.circle, limit));
        }
        bool decreasing = true;
        for (int k = 1; k <= p.cfg.maxDepth; ++k) {
            if (minDist[k] >= 1e300 || minDist[k - 1] >= 1e300) continue;
            decreasing = decreasing && minDist[k] < minDist[k - 1];
        }
        report.add_check("orbit_min_distance_decreasing", decreasing, 0.0);
    }
    report.results()["orbit_header"] = orbit_header_json(figures.orbit);
    report.results()["limit_point_count"] = figures.cloud.points.size();
    return report.finish(p.jsonPath, truncated ? kExitTruncated : kExitOk);
}

// ---------------------------------------------------------------------------
// orbit on external generators

GenCircle parse_circle_spec(const std::string& spec) {
    std::array<double, 4> v{};
    std::stringstream ss(spec);
    std::string tok;
    for (int i = 0; i < 4; ++i) {
        if (!std::getline(ss, tok, ',')) throw std::runtime_error("seed needs A,B_re,B_im,D");
        try {
            v[i] = std::stod(tok);
        } catch (const std::exception&) {
            throw std::runtime_error("seed needs four numbers A,B_re,B_im,D");
        }
    }
    if (std::getline(ss, tok, ',')) throw std::runtime_error("seed needs A,B_re,B_im,D");
    double disc = v[1] * v[1] + v[2] * v[2] - v[0] * v[3];
    if (disc <= 0.0) throw std::runtime_error("seed has non-positive discriminant");
    return GenCircle::from_hermitian(v[0], Complex(v[1], v[2]), v[3]);
}

struct OrbitCmdParams {
    std::string gensPath;
    std::optional<std::string> seedSpec;
    OrbitConfig cfg;
    int workers = 1;
    std::optional<std::string> outPath;
    std::optional<std::string> svgPath;
    std::optional<std::string> jsonPath;
};

int run_orbit_cmd(const OrbitCmdParams& p) {
    std::ifstream in(p.gensPath);
    if (!in) {
        std::cerr << "cannot read " << p.gensPath << "\n";
        return kExitInputError;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    GeneratorSet gens;
    GenCircle seed = GenCircle::unit();
    try {
        gens = parse_generator_set(buffer.str());
        if (p.seedSpec) {
            seed = parse_circle_spec(*p.seedSpec);
        } else {
            bool found = false;
            for (const MoebiusMap& g : gens.generators) {
                if (g.is_anti() && is_involution(g, 1e-10)) {
                    seed = recover_mirror(g);
                    found = true;
                    break;
                }
            }
            if (!found) throw std::runtime_error("no --seed given and no inversion to seed from");
        }
    } catch (const std::exception& e) {
        std::cerr << p.gensPath << ": " << e.what() << "\n";
        return kExitInputError;
    }

    RunReport report("orbit");
    report.inputs()["gens"] = p.gensPath;
    report.inputs()["seed"] = circle_to_json(seed);
    report.inputs()["max_depth"] = p.cfg.maxDepth;
    report.inputs()["min_diameter"] = p.cfg.minDiameter;
    report.inputs()["dedup_epsilon"] = p.cfg.dedupEpsilon;
    report.inputs()["max_items"] = p.cfg.maxItems;
    report.inputs()["workers"] = p.workers;

    OrbitSet orbit = enumerate_orbit(gens, seed, p.cfg, p.workers);
    if (p.outPath) {
        if (!write_text_file(*p.outPath, orbit_to_jsonl(orbit))) {
            std::cerr << "cannot write " << *p.outPath << "\n";
            return kExitInputError;
        }
        report.add_output(*p.outPath);
    }
    if (p.svgPath) {
        double extent = 0.0;
        for (const OrbitItem& item : orbit.items) {
            if (item.circle.is_line()) continue;
            extent = std::max(extent, std::abs(item.circle.center()) + item.circle.radius());
        }
        Scene scene;
        scene.viewport = {Complex(0.0, 0.0), extent > 0.0 ? 1.15 * extent : 2.0, 800};
        CircleLayer layer;
        for (const OrbitItem& item : orbit.items) layer.circles.push_back(item.circle);
        layer.style = {0.6, "#1f4e9c", "none"};
        scene.circleLayers.push_back(layer);
        if (!write_text_file(*p.svgPath, render_svg(scene))) {
            std::cerr << "cannot write " << *p.svgPath << "\n";
            return kExitInputError;
        }
        report.add_output(*p.svgPath);
    }

    report.results()["header"] = orbit_header_json(orbit);
    if (!orbit.truncated) {
        ClosureReport closure = closure_check(gens, orbit, 1000);
        report.add_check("closure_zero_misses", closure.misses == 0,
                         static_cast<double>(closure.misses));
        report.results()["closure"] = closure_to_json(closure);
    }
    return report.finish(p.jsonPath, orbit.truncated ? kExitTruncated : kExitOk);
}

// ---------------------------------------------------------------------------
// repro: canonical invocations reproducing the headline numbers and figures

int run_repro(const std::string& outDir) {
    std::error_code ec;
    std::filesystem::create_directories(outDir, ec);
    if (ec) {
        std::cerr << "cannot create " << outDir << "\n";
        return kExitInputError;
    }
    auto path = [&outDir](const std::string& name) {
        return (std::filesystem::path(outDir) / name).string();
    };

    ordered_json manifest{{"schema", 1}, {"runs", ordered_json::array()}};
    int worst = kExitOk;
    auto record = [&](const std::vector<std::string>& argv, int code,
                      const std::vector<std::string>& outputs) {
        manifest["runs"].push_back(
            ordered_json{{"argv", argv}, {"exit", code}, {"outputs", outputs}});
        worst = std::max(worst, code);
    };

    {
        std::string j = path("solve_t0.json");
        int code = run_solve_t0(std::nullopt, j);
        record({"solve-t0", "--json", j}, code, {j});
    }
    {
        QuadParams p;
        p.jsonPath = path("quad_3_2_1.5_info.json");
        int code = run_quad_info(p);
        record({"quad", "--n", "3", "--s", "2", "--t", "1.5", "info", "--json", *p.jsonPath},
               code, {*p.jsonPath});
    }
    {
        QuadParams p;
        p.jsonPath = path("quad_3_2_1.5_exotic.json");
        int code = run_quad_exotic(p);
        record({"quad", "--n", "3", "--s", "2", "--t", "1.5", "exotic", "--json", *p.jsonPath},
               code, {*p.jsonPath});
    }
    {
        QuadParams p;
        p.outPath = path("fig_quadrilateral.svg");
        p.jsonPath = path("quad_3_2_1.5_render.json");
        int code = run_quad_render(p);
        record({"quad", "--n", "3", "--s", "2", "--t", "1.5", "render", "-o", *p.outPath,
                "--json", *p.jsonPath},
               code, {*p.outPath, orbit_svg_path(*p.outPath), *p.jsonPath});
    }
    {
        QuadParams p;
        p.t = 2.0;
        p.jsonPath = path("quad_fuchsian_info.json");
        int code = run_quad_info(p);
        record({"quad", "--n", "3", "--s", "2", "--t", "2", "info", "--json", *p.jsonPath},
               code, {*p.jsonPath});
    }

    std::string manifestPath = path("manifest.json");
    if (!write_text_file(manifestPath, manifest.dump(2) + "\n")) {
        std::cerr << "cannot write " << manifestPath << "\n";
        return kExitInputError;
    }
    std::cout << "wrote " << manifestPath << "\n";
    return worst;
}

// Classify library exceptions: anything thrown while building objects from
// user-supplied values is an input error.
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::domain_error& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

void add_orbit_flags(CLI::App* cmd, OrbitConfig& cfg, int& workers) {
    cmd->add_option("--depth", cfg.maxDepth, "maximum word length");
    cmd->add_option("--min-diameter", cfg.minDiameter, "chordal prune threshold");
    cmd->add_option("--dedup-eps", cfg.dedupEpsilon, "coefficient merge radius");
    cmd->add_option("--max-items", cfg.maxItems, "orbit size cap");
    cmd->add_option("--workers", workers, "worker threads (does not change output)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadrilateral reflection groups, exotic circles, orbits, and SVG renders"};
    app.require_subcommand(1);

    // solve-t0
    auto* solveT0 = app.add_subcommand("solve-t0", "certify the tangency parameter t0");
    std::optional<double> tOverride;
    std::optional<std::string> solveT0Json;
    solveT0->add_option("--t", tOverride, "evaluate the residual suite at this t instead of t0");
    solveT0->add_option("--json", solveT0Json, "write the JSON report here");

    // quad
    auto* quad = app.add_subcommand("quad", "build and analyze a quadrilateral datum");
    quad->require_subcommand(1);
    QuadParams qp;
    quad->add_option("--n", qp.n, "corner angle divisor (angle pi/n)")->required();
    quad->add_option("--s", qp.s, "opposite-pair inversive product, first pair")->required();
    quad->add_option("--t", qp.t, "opposite-pair inversive product, second pair")->required();

    auto* quadInfo = quad->add_subcommand("info", "construction data and residuals");
    quadInfo->add_option("--json", qp.jsonPath, "write the JSON report here");

    auto* quadExotic = quad->add_subcommand("exotic", "accumulation and isolation checks");
    quadExotic->add_option("--k-max", qp.kMax, "largest iterate");
    quadExotic->add_option("--tol", qp.tol, "convergence threshold");
    quadExotic->add_option("--json", qp.jsonPath, "write the JSON report here");

    auto* quadOrbit = quad->add_subcommand("orbit", "enumerate the circle orbit");
    add_orbit_flags(quadOrbit, qp.cfg, qp.workers);
    quadOrbit->add_option("-o,--out", qp.outPath, "write JSON-lines orbit here");
    quadOrbit->add_option("--json", qp.jsonPath, "write the JSON report here");

    auto* quadLimit = quad->add_subcommand("limitset", "approximate the limit set");
    add_orbit_flags(quadLimit, qp.cfg, qp.workers);
    quadLimit->add_option("--point-diameter", qp.pointDiameter, "emission threshold");
    quadLimit->add_option("-o,--out", qp.outPath, "write the point cloud JSON here");
    quadLimit->add_option("--json", qp.jsonPath, "write the JSON report here");

    auto* quadRender = quad->add_subcommand("render", "emit figure-style SVG pair");
    add_orbit_flags(quadRender, qp.cfg, qp.workers);
    quadRender->add_option("--point-diameter", qp.pointDiameter, "emission threshold");
    quadRender->add_option("--size", qp.sizePx, "canvas size in pixels");
    quadRender->add_option("-o,--out", qp.outPath, "main SVG path (orbit SVG derived)");
    quadRender->add_option("--json", qp.jsonPath, "write the JSON report here");

    // orbit
    auto* orbitCmd = app.add_subcommand("orbit", "enumerate an orbit from a generator file");
    OrbitCmdParams op;
    orbitCmd->add_option("--gens", op.gensPath, "generator set JSON file")->required();
    orbitCmd->add_option("--seed", op.seedSpec, "seed circle as A,B_re,B_im,D");
    add_orbit_flags(orbitCmd, op.cfg, op.workers);
    orbitCmd->add_option("-o,--out", op.outPath, "write JSON-lines orbit here");
    orbitCmd->add_option("--svg", op.svgPath, "render the orbit to this SVG");
    orbitCmd->add_option("--json", op.jsonPath, "write the JSON report here");

    // repro
    auto* repro = app.add_subcommand("repro", "re-run the bundled reference invocations");
    std::string reproDir = "repro_out";
    repro->add_option("--out", reproDir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    if (solveT0->parsed()) return guarded([&] { return run_solve_t0(tOverride, solveT0Json); });
    if (quad->parsed()) {
        return guarded([&] {
            if (quadInfo->parsed()) return run_quad_info(qp);
            if (quadExotic->parsed()) return run_quad_exotic(qp);
            if (quadOrbit->parsed()) return run_quad_orbit(qp);
            if (quadLimit->parsed()) return run_quad_limitset(qp);
            return run_quad_render(qp);
        });
    }
    if (orbitCmd->parsed()) return guarded([&] { return run_orbit_cmd(op); });
    if (repro->parsed()) return guarded([&] { return run_repro(reproDir); });
    return kExitInputError;
}
