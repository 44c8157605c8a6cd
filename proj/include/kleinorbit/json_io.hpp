#pragma once

#include <json.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kleinorbit/lunchbox.hpp"
#include "kleinorbit/orbit.hpp"
#include "kleinorbit/quadgroup.hpp"

namespace kleinorbit {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Circles

inline ordered_json circle_to_json(const GenCircle& c) {
    return ordered_json{{"A", c.a()}, {"B_re", c.b().real()}, {"B_im", c.b().imag()},
                        {"D", c.d()}};
}

inline GenCircle circle_from_json(const ordered_json& j, const std::string& where) {
    for (const char* key : {"A", "B_re", "B_im", "D"}) {
        if (!j.contains(key) || !j[key].is_number()) {
            throw std::runtime_error(where + ": circle needs numeric A, B_re, B_im, D");
        }
    }
    double A = j["A"], D = j["D"];
    Complex B(j["B_re"], j["B_im"]);
    if (std::norm(B) - A * D <= 0.0) {
        throw std::runtime_error(where + ": coefficients have non-positive discriminant");
    }
    return GenCircle::from_hermitian(A, B, D);
}

// ---------------------------------------------------------------------------
// Generator sets

inline ordered_json generator_set_to_json(const GeneratorSet& gens) {
    ordered_json out;
    out["schema"] = 1;
    out["generators"] = ordered_json::array();
    for (const MoebiusMap& g : gens.generators) {
        if (g.is_anti() && is_involution(g, 1e-10)) {
            out["generators"].push_back(
                ordered_json{{"kind", "inversion"}, {"circle", circle_to_json(recover_mirror(g))}});
        } else {
            out["generators"].push_back(ordered_json{
                {"kind", "mobius"},
                {"matrix",
                 {g.a().real(), g.a().imag(), g.b().real(), g.b().imag(), g.c().real(),
                  g.c().imag(), g.d().real(), g.d().imag()}},
                {"orientation", g.is_anti() ? "anti" : "holo"}});
        }
    }
    out["labels"] = gens.labels;
    return out;
}

inline GeneratorSet generator_set_from_json(const ordered_json& j) {
    if (!j.contains("schema") || j["schema"] != 1) {
        throw std::runtime_error("generator file: missing or unsupported schema (want 1)");
    }
    if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty()) {
        throw std::runtime_error("generator file: needs a nonempty 'generators' array");
    }
    GeneratorSet gens;
    std::size_t i = 0;
    for (const ordered_json& e : j["generators"]) {
        std::string where = "generators[" + std::to_string(i) + "]";
        if (!e.contains("kind") || !e["kind"].is_string()) {
            throw std::runtime_error(where + ": needs a 'kind' string");
        }
        std::string kind = e["kind"];
        if (kind == "inversion") {
            if (!e.contains("circle")) throw std::runtime_error(where + ": needs a 'circle'");
            gens.generators.push_back(inversion_in(circle_from_json(e["circle"], where)));
        } else if (kind == "mobius") {
            if (!e.contains("matrix") || !e["matrix"].is_array() || e["matrix"].size() != 8) {
                throw std::runtime_error(where + ": 'matrix' must hold 8 numbers");
            }
            std::array<double, 8> m{};
            for (int k = 0; k < 8; ++k) {
                if (!e["matrix"][k].is_number()) {
                    throw std::runtime_error(where + ": 'matrix' must hold 8 numbers");
                }
                m[k] = e["matrix"][k];
            }
            bool anti = false;
            if (e.contains("orientation")) {
                std::string o = e["orientation"];
                if (o == "anti") {
                    anti = true;
                } else if (o != "holo") {
                    throw std::runtime_error(where + ": orientation must be 'holo' or 'anti'");
                }
            }
            gens.generators.push_back(MoebiusMap::from_matrix(Complex(m[0], m[1]),
                                                              Complex(m[2], m[3]),
                                                              Complex(m[4], m[5]),
                                                              Complex(m[6], m[7]), anti));
        } else {
            throw std::runtime_error(where + ": unknown kind '" + kind + "'");
        }
        ++i;
    }
    if (j.contains("labels")) {
        if (!j["labels"].is_array()) throw std::runtime_error("generator file: labels must be an array");
        for (const ordered_json& l : j["labels"]) gens.labels.push_back(l.get<std::string>());
    }
    gens.validate();
    return gens;
}

// Parse a generator file. Malformed JSON raises with the offending line and
// column (tokenizer position); schema violations name the offending entry.
inline GeneratorSet parse_generator_set(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(e.what());  // includes "at line L, column C"
    }
    return generator_set_from_json(j);
}

// ---------------------------------------------------------------------------
// Orbit sets as JSON lines: one header object, then one object per item.

inline ordered_json orbit_header_json(const OrbitSet& orbit) {
    return ordered_json{
        {"schema", 1},
        {"kind", "orbit"},
        {"config",
         {{"max_depth", orbit.config.maxDepth},
          {"min_diameter", orbit.config.minDiameter},
          {"dedup_epsilon", orbit.config.dedupEpsilon},
          {"max_items", orbit.config.maxItems}}},
        {"stats",
         {{"per_depth", orbit.stats.perDepth},
          {"pruned", orbit.stats.pruned},
          {"dedup_hits", orbit.stats.dedupHits}}},
        {"truncated", orbit.truncated},
        {"count", orbit.items.size()}};
}

inline std::string orbit_to_jsonl(const OrbitSet& orbit) {
    std::string out = orbit_header_json(orbit).dump();
    out += '\n';
    for (const OrbitItem& item : orbit.items) {
        ordered_json line = circle_to_json(item.circle);
        line["depth"] = item.depth;
        line["word"] = item.firstWord;
        out += line.dump();
        out += '\n';
    }
    return out;
}

inline OrbitSet orbit_from_jsonl(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("orbit file: empty input");
    ordered_json header;
    try {
        header = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(e.what());
    }
    if (!header.contains("schema") || header["schema"] != 1 || header["kind"] != "orbit") {
        throw std::runtime_error("orbit file: missing or unsupported header");
    }
    OrbitSet orbit;
    orbit.config.maxDepth = header["config"]["max_depth"];
    orbit.config.minDiameter = header["config"]["min_diameter"];
    orbit.config.dedupEpsilon = header["config"]["dedup_epsilon"];
    orbit.config.maxItems = header["config"]["max_items"];
    orbit.stats.perDepth = header["stats"]["per_depth"].get<std::vector<std::size_t>>();
    orbit.stats.pruned = header["stats"]["pruned"];
    orbit.stats.dedupHits = header["stats"]["dedup_hits"];
    orbit.truncated = header["truncated"];
    std::size_t lineNo = 1;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::parse_error&) {
            throw std::runtime_error("orbit file: bad item at line " + std::to_string(lineNo));
        }
        GenCircle c = circle_from_json(j, "line " + std::to_string(lineNo));
        orbit.items.push_back({c, j["depth"].get<int>(), j["word"].get<std::string>()});
    }
    if (orbit.items.size() != header["count"].get<std::size_t>()) {
        throw std::runtime_error("orbit file: item count differs from header");
    }
    return orbit;
}

// ---------------------------------------------------------------------------
// Point clouds and reports

inline ordered_json cloud_to_json(const LimitCloud& cloud) {
    ordered_json pts = ordered_json::array();
    for (const SpherePoint& p : cloud.points) pts.push_back({p.x, p.y, p.z});
    return ordered_json{{"schema", 1},
                        {"kind", "limit_points"},
                        {"count", cloud.points.size()},
                        {"truncated", cloud.truncated},
                        {"degenerate", cloud.degenerate},
                        {"points", std::move(pts)}};
}

inline ordered_json point_to_json(const ComplexPoint& p) {
    if (p.at_infinity) return ordered_json("inf");
    return ordered_json{p.z.real(), p.z.imag()};
}

inline ordered_json quad_to_json(const QuadGroupData& d) {
    ordered_json out{{"schema", 1},
                     {"n", d.n},
                     {"s", d.s},
                     {"t", d.t},
                     {"fuchsian_defect", fuchsian_defect(d)},
                     {"fuchsian", is_fuchsian(d)},
                     {"circles",
                      {{"c1", circle_to_json(d.c1)},
                       {"c2", circle_to_json(d.c2)},
                       {"c3", circle_to_json(d.c3)},
                       {"c4", circle_to_json(d.c4)}}},
                     {"p", point_to_json(d.p)},
                     {"p_prime", point_to_json(d.pPrime)},
                     {"q", point_to_json(d.q)},
                     {"q_prime", point_to_json(d.qPrime)}};
    out["exotic"] = d.exoticC ? circle_to_json(*d.exoticC) : ordered_json(nullptr);
    out["limit"] = d.limitC ? circle_to_json(*d.limitC) : ordered_json(nullptr);
    return out;
}

inline ordered_json accumulation_to_json(const AccumulationReport& rep) {
    ordered_json distances = ordered_json::array();
    for (auto [k, dist] : rep.distances) distances.push_back({k, dist});
    return ordered_json{{"converged", rep.converged},
                        {"isolation_radius", rep.isolation_radius},
                        {"distances", std::move(distances)}};
}

inline ordered_json tangency_to_json(const TangencyReport& rep) {
    return ordered_json{{"t", rep.t},
                        {"orthogonality", rep.orthogonality},
                        {"unit", rep.unit},
                        {"tangency", rep.tangency},
                        {"boundary_inversive_distance_minus_one", rep.boundary_tangency},
                        {"pass", rep.pass}};
}

inline ordered_json factor_identity_to_json(const FactorIdentityReport& rep) {
    return ordered_json{{"chain_residual", rep.chain_residual},
                        {"factor_residual", rep.factor_residual},
                        {"minus_variant_residual", rep.minus_variant_residual},
                        {"plus_variant_matches", rep.plus_variant_matches}};
}

inline ordered_json closure_to_json(const ClosureReport& rep) {
    return ordered_json{{"samples", rep.samples},
                        {"misses", rep.misses},
                        {"pruned_misses", rep.prunedMisses}};
}

}  // namespace kleinorbit
