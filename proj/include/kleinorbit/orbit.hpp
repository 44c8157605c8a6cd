#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "kleinorbit/gen_circle.hpp"
#include "kleinorbit/moebius.hpp"
#include "kleinorbit/quadgroup.hpp"

namespace kleinorbit {

// ---------------------------------------------------------------------------
// Generator sets

struct GeneratorSet {
    std::vector<MoebiusMap> generators;
    std::vector<std::string> labels;

    void validate() const {
        if (generators.empty()) throw std::invalid_argument("generator set is empty");
        if (!labels.empty() && labels.size() != generators.size()) {
            throw std::invalid_argument("label count does not match generator count");
        }
        for (const MoebiusMap& g : generators) {
            if (g.is_anti() && !is_involution(g, 1e-10)) {
                throw std::invalid_argument("antiholomorphic generator is not an involution");
            }
        }
    }

    std::string label(std::size_t i) const {
        return i < labels.size() ? labels[i] : std::to_string(i);
    }
};

// The four side inversions of a quadrilateral datum.
inline GeneratorSet quad_generators(const QuadGroupData& d) {
    GeneratorSet g;
    g.generators = {d.tau1, d.tau2, d.tau3, d.tau4};
    g.labels = {"1", "2", "3", "4"};
    return g;
}

// Mirror circle of an inversion. Every inversion has matrix
// omega * [[-B, -D], [A, conj(B)]] with (A, B, D) the Hermitian data of its
// circle and omega = +-i after det-1 normalization; multiplying by -i and
// reading off the entries recovers the circle. Anti-involutions that are not
// inversions (the antipodal map) fail the realness checks.
inline GenCircle recover_mirror(const MoebiusMap& m) {
    if (!m.is_anti() || !is_involution(m, 1e-10)) {
        throw std::invalid_argument("not an inversion");
    }
    for (Complex omega : {Complex(0.0, -1.0), Complex(0.0, 1.0)}) {
        Complex h00 = omega * m.a(), h01 = omega * m.b();
        Complex h10 = omega * m.c(), h11 = omega * m.d();
        double scale = std::abs(h00) + std::abs(h01) + std::abs(h10) + 1.0;
        if (std::abs(h10.imag()) > 1e-9 * scale) continue;
        if (std::abs(h01.imag()) > 1e-9 * scale) continue;
        if (std::abs(h11 + std::conj(h00)) > 1e-9 * scale) continue;
        double A = h10.real(), D = -h01.real();
        Complex B = -h00;
        if (std::norm(B) - A * D <= 0.0) continue;
        return GenCircle::from_hermitian(A, B, D);
    }
    throw std::invalid_argument("not an inversion");
}

// ---------------------------------------------------------------------------
// Orbit enumeration

struct OrbitConfig {
    int maxDepth = 12;
    double minDiameter = 1e-4;   // chordal; smaller circles are pruned
    double dedupEpsilon = 1e-9;  // canonical-coefficient merge radius
    std::size_t maxItems = 5000000;
};

struct OrbitItem {
    GenCircle circle;
    int depth;
    std::string firstWord;  // generator labels along the first path found
};

struct OrbitStats {
    std::vector<std::size_t> perDepth;  // retained items per depth
    std::size_t pruned = 0;
    std::size_t dedupHits = 0;
};

struct OrbitSet {
    std::vector<OrbitItem> items;
    OrbitStats stats;
    OrbitConfig config;
    bool truncated = false;
};

namespace detail {

// Hash index over canonical circle coefficients quantized to an epsilon
// grid. Entries are inserted under both signs and lookups probe the 3^4
// neighboring cells, so any two circles within epsilon (mod sign) collide.
class CircleIndex {
  public:
    explicit CircleIndex(double eps) : eps_(eps) {}

    // Returns the index of a stored circle within eps (max-norm, mod sign),
    // or npos.
    std::size_t find(const GenCircle& c, const std::vector<OrbitItem>& items) const {
        std::array<double, 4> u = c.coeffs();
        for (int sign = 0; sign < 2; ++sign) {
            std::array<long long, 4> base = quantize(u);
            std::array<long long, 4> probe;
            for (int d0 = -1; d0 <= 1; ++d0)
                for (int d1 = -1; d1 <= 1; ++d1)
                    for (int d2 = -1; d2 <= 1; ++d2)
                        for (int d3 = -1; d3 <= 1; ++d3) {
                            probe = {base[0] + d0, base[1] + d1, base[2] + d2, base[3] + d3};
                            auto it = map_.find(mix(probe));
                            if (it == map_.end()) continue;
                            for (std::size_t idx : it->second) {
                                if (coefficient_distance(items[idx].circle, c) <= eps_) {
                                    return idx;
                                }
                            }
                        }
            for (double& v : u) v = -v;
        }
        return npos;
    }

    void insert(std::size_t idx, const GenCircle& c) {
        std::array<double, 4> u = c.coeffs();
        map_[mix(quantize(u))].push_back(idx);
        for (double& v : u) v = -v;
        std::uint64_t negKey = mix(quantize(u));
        auto& bucket = map_[negKey];
        if (bucket.empty() || bucket.back() != idx) bucket.push_back(idx);
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  private:
    std::array<long long, 4> quantize(const std::array<double, 4>& u) const {
        std::array<long long, 4> q;
        for (int i = 0; i < 4; ++i) {
            double v = u[i] / eps_;
            v = std::clamp(v, -9.0e18, 9.0e18);
            q[i] = std::llround(v);
        }
        return q;
    }

    static std::uint64_t mix(const std::array<long long, 4>& q) {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (long long v : q) {
            std::uint64_t x = static_cast<std::uint64_t>(v);
            x ^= x >> 30;
            x *= 0xbf58476d1ce4e5b9ull;
            x ^= x >> 27;
            x *= 0x94d049bb133111ebull;
            x ^= x >> 31;
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }

    double eps_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> map_;
};

struct FrontierRef {
    std::size_t item;  // index into OrbitSet::items
    int lastGen;       // generator that produced it, or -1
};

struct CandidateSlot {
    std::optional<GenCircle> circle;
    bool pruned = false;
};

}  // namespace detail

// Breadth-first closure of {seed} under the generators. The frontier of each
// depth may be split across `workers` threads; candidates are merged in
// frontier-then-generator order and deduplicated in one deterministic pass,
// so the result is independent of the worker count.
inline OrbitSet enumerate_orbit(const GeneratorSet& gens, const GenCircle& seed,
                                const OrbitConfig& cfg = {}, int workers = 1) {
    gens.validate();
    if (cfg.maxDepth < 1 || cfg.dedupEpsilon <= 0.0 || cfg.minDiameter < 0.0 ||
        cfg.minDiameter >= 2.0) {
        throw std::invalid_argument("invalid orbit configuration");
    }
    if (workers < 1) workers = 1;

    const std::size_t ngens = gens.generators.size();
    std::vector<bool> involution(ngens);
    for (std::size_t g = 0; g < ngens; ++g) involution[g] = is_involution(gens.generators[g]);

    OrbitSet out;
    out.config = cfg;
    out.stats.perDepth.assign(static_cast<std::size_t>(cfg.maxDepth) + 1, 0);

    detail::CircleIndex index(cfg.dedupEpsilon);
    out.items.push_back({seed, 0, ""});
    index.insert(0, seed);
    out.stats.perDepth[0] = 1;

    std::vector<detail::FrontierRef> frontier{{0, -1}};

    for (int depth = 1; depth <= cfg.maxDepth && !frontier.empty(); ++depth) {
        const std::size_t n = frontier.size();
        std::vector<detail::CandidateSlot> slots(n * ngens);

        auto work = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const detail::FrontierRef& ref = frontier[i];
                const GenCircle& src = out.items[ref.item].circle;
                for (std::size_t g = 0; g < ngens; ++g) {
                    if (static_cast<int>(g) == ref.lastGen && involution[g]) continue;
                    detail::CandidateSlot& slot = slots[i * ngens + g];
                    GenCircle image = apply_circle(gens.generators[g], src);
                    if (image.chordal_diameter() < cfg.minDiameter) {
                        slot.pruned = true;
                    } else {
                        slot.circle = image;
                    }
                }
            }
        };

        if (workers == 1 || n < 64) {
            work(0, n);
        } else {
            std::size_t chunk = (n + workers - 1) / workers;
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) {
                std::size_t lo = std::min(n, static_cast<std::size_t>(w) * chunk);
                std::size_t hi = std::min(n, lo + chunk);
                if (lo < hi) pool.emplace_back(work, lo, hi);
            }
            for (std::thread& th : pool) th.join();
        }

        std::vector<detail::FrontierRef> next;
        for (std::size_t i = 0; i < n && !out.truncated; ++i) {
            for (std::size_t g = 0; g < ngens; ++g) {
                detail::CandidateSlot& slot = slots[i * ngens + g];
                if (slot.pruned) {
                    ++out.stats.pruned;
                    continue;
                }
                if (!slot.circle) continue;
                if (index.find(*slot.circle, out.items) != detail::CircleIndex::npos) {
                    ++out.stats.dedupHits;
                    continue;
                }
                if (out.items.size() >= cfg.maxItems) {
                    out.truncated = true;
                    break;
                }
                std::size_t idx = out.items.size();
                out.items.push_back({*slot.circle, depth,
                                     out.items[frontier[i].item].firstWord + gens.label(g)});
                index.insert(idx, *slot.circle);
                ++out.stats.perDepth[depth];
                next.push_back({idx, static_cast<int>(g)});
            }
        }
        frontier = std::move(next);
    }

    std::stable_sort(out.items.begin(), out.items.end(),
                     [](const OrbitItem& x, const OrbitItem& y) {
                         if (x.depth != y.depth) return x.depth < y.depth;
                         return x.circle.coeffs() < y.circle.coeffs();
                     });
    return out;
}

// ---------------------------------------------------------------------------
// Closure certification

struct ClosureReport {
    std::size_t samples = 0;
    std::size_t misses = 0;        // images above the prune size yet absent
    std::size_t prunedMisses = 0;  // images absent because below minDiameter
};

inline ClosureReport closure_check(const GeneratorSet& gens, const OrbitSet& orbit,
                                   std::size_t sample) {
    if (orbit.truncated) throw std::domain_error("cannot certify closure");
    gens.validate();

    detail::CircleIndex index(orbit.config.dedupEpsilon);
    for (std::size_t i = 0; i < orbit.items.size(); ++i) {
        index.insert(i, orbit.items[i].circle);
    }
    std::vector<std::size_t> inner;  // items whose images must be present
    for (std::size_t i = 0; i < orbit.items.size(); ++i) {
        if (orbit.items[i].depth < orbit.config.maxDepth) inner.push_back(i);
    }

    ClosureReport rep;
    if (inner.empty()) return rep;
    std::uint64_t state = 0x853c49e6748fea9bull;  // fixed-seed splitmix stream
    auto next = [&state]() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    for (std::size_t k = 0; k < sample; ++k) {
        const OrbitItem& item = orbit.items[inner[next() % inner.size()]];
        const MoebiusMap& g = gens.generators[next() % gens.generators.size()];
        GenCircle image = apply_circle(g, item.circle);
        ++rep.samples;
        if (index.find(image, orbit.items) != detail::CircleIndex::npos) continue;
        if (image.chordal_diameter() < orbit.config.minDiameter) {
            ++rep.prunedMisses;
        } else {
            ++rep.misses;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Limit-set approximation

struct LimitCloud {
    std::vector<SpherePoint> points;
    bool truncated = false;
    bool degenerate = false;  // no usable seeds or nothing reached point size
};

// Approximate the limit set: run the circle orbit of the inversion mirrors
// and record a sphere representative (the spherical cap center) of every
// orbit circle once its chordal diameter falls below pointDiameter; union
// the fixed points of non-elliptic pairwise generator products (axis
// endpoints, which lie in the limit set; elliptic fixed points generally do
// not and are excluded).
inline LimitCloud approximate_limit_set(const GeneratorSet& gens, const OrbitConfig& cfg = {},
                                        double pointDiameter = 1e-3) {
    gens.validate();
    if (pointDiameter <= 0.0) throw std::invalid_argument("pointDiameter must be positive");

    LimitCloud cloud;

    std::vector<GenCircle> seeds;
    for (const MoebiusMap& g : gens.generators) {
        if (g.is_anti() && is_involution(g, 1e-10)) seeds.push_back(recover_mirror(g));
    }

    const std::size_t ngens = gens.generators.size();
    std::vector<bool> involution(ngens);
    for (std::size_t g = 0; g < ngens; ++g) involution[g] = is_involution(gens.generators[g]);

    detail::CircleIndex index(cfg.dedupEpsilon);
    std::vector<OrbitItem> known;  // backing store for the index
    struct Entry {
        std::size_t item;
        int lastGen;
    };
    std::vector<Entry> frontier;
    for (const GenCircle& s : seeds) {
        if (index.find(s, known) != detail::CircleIndex::npos) continue;
        index.insert(known.size(), s);
        known.push_back({s, 0, ""});
        frontier.push_back({known.size() - 1, -1});
    }

    auto emit = [&cloud](const GenCircle& c) {
        SpherePoint n = c.sphere_normal();
        double h = c.sphere_offset();
        if (h < 0.0) n = SpherePoint{-n.x, -n.y, -n.z};
        cloud.points.push_back(n);
    };

    for (int depth = 1; depth <= cfg.maxDepth && !frontier.empty() && !cloud.truncated;
         ++depth) {
        std::vector<Entry> next;
        for (const Entry& e : frontier) {
            if (cloud.truncated) break;
            GenCircle src = known[e.item].circle;
            for (std::size_t g = 0; g < ngens; ++g) {
                if (static_cast<int>(g) == e.lastGen && involution[g]) continue;
                GenCircle image = apply_circle(gens.generators[g], src);
                if (index.find(image, known) != detail::CircleIndex::npos) continue;
                if (known.size() >= cfg.maxItems) {
                    cloud.truncated = true;
                    break;
                }
                index.insert(known.size(), image);
                known.push_back({image, depth, ""});
                if (image.chordal_diameter() < pointDiameter) {
                    emit(image);  // absorbed into a point; do not expand
                } else {
                    next.push_back({known.size() - 1, static_cast<int>(g)});
                }
            }
        }
        frontier = std::move(next);
    }

    // Axis endpoints of pairwise products.
    for (std::size_t i = 0; i < ngens; ++i) {
        for (std::size_t j = i + 1; j < ngens; ++j) {
            MoebiusMap prod = compose(gens.generators[i], gens.generators[j]);
            if (prod.is_anti() || prod.is_identity(1e-12)) continue;
            MapKind kind = classify(prod);
            if (kind == MapKind::elliptic || kind == MapKind::identity) continue;
            auto [att, rep] = fixed_points(prod);
            cloud.points.push_back(to_sphere(att));
            cloud.points.push_back(to_sphere(rep));
        }
    }

    std::sort(cloud.points.begin(), cloud.points.end(),
              [](const SpherePoint& a, const SpherePoint& b) {
                  if (a.x != b.x) return a.x < b.x;
                  if (a.y != b.y) return a.y < b.y;
                  return a.z < b.z;
              });
    cloud.degenerate = cloud.points.empty();
    return cloud;
}

// ---------------------------------------------------------------------------
// Point-cloud analysis helpers

struct CircleFit {
    SpherePoint normal;    // best-fit plane normal (unit)
    double offset;         // plane offset h, |h| < 1 for a real circle
    double max_deviation;  // largest distance from a point to the fit circle
};

namespace detail {

// Smallest-eigenvalue eigenvector of a symmetric 3x3 matrix by cyclic Jacobi
// rotations (deterministic, ample precision for covariance use).
inline std::array<double, 3> smallest_eigenvector(std::array<std::array<double, 3>, 3> m) {
    std::array<std::array<double, 3>, 3> v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = std::abs(m[0][1]) + std::abs(m[0][2]) + std::abs(m[1][2]);
        if (off < 1e-15) break;
        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(m[p][q]) < 1e-18) continue;
                double theta = 0.5 * std::atan2(2.0 * m[p][q], m[q][q] - m[p][p]);
                double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < 3; ++k) {
                    double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (int k = 0; k < 3; ++k) {
                    double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i < 3; ++i) {
        if (m[i][i] < m[best][best]) best = i;
    }
    return {v[0][best], v[1][best], v[2][best]};
}

}  // namespace detail

// Least-squares circle (sphere section) through a cloud: the plane normal is
// the smallest-covariance direction, the offset the mean projection.
inline CircleFit fit_sphere_circle(const std::vector<SpherePoint>& pts) {
    if (pts.size() < 3) throw std::invalid_argument("need at least three points to fit");
    double mx = 0, my = 0, mz = 0;
    for (const SpherePoint& p : pts) {
        mx += p.x;
        my += p.y;
        mz += p.z;
    }
    mx /= pts.size();
    my /= pts.size();
    mz /= pts.size();
    std::array<std::array<double, 3>, 3> cov{{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
    for (const SpherePoint& p : pts) {
        double d[3] = {p.x - mx, p.y - my, p.z - mz};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cov[i][j] += d[i] * d[j];
    }
    auto n = detail::smallest_eigenvector(cov);
    double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    SpherePoint normal{n[0] / len, n[1] / len, n[2] / len};
    double h = normal.x * mx + normal.y * my + normal.z * mz;
    h = std::clamp(h, -1.0 + 1e-15, 1.0 - 1e-15);
    double rho = std::sqrt(1.0 - h * h);

    CircleFit fit{normal, h, 0.0};
    for (const SpherePoint& p : pts) {
        double t = std::clamp(normal.x * p.x + normal.y * p.y + normal.z * p.z, -1.0, 1.0);
        double ring = std::sqrt(std::max(0.0, 1.0 - t * t)) - rho;
        fit.max_deviation = std::max(fit.max_deviation, std::hypot(ring, t - h));
    }
    return fit;
}

// Largest nearest-neighbor gap in a cloud, exact below `cutoff`: grid
// bucketing by cutoff-sized cells makes any neighbor within cutoff visible
// in the 27 surrounding cells. Points with no neighbor inside cutoff report
// 2*cutoff, which keeps the maximum honest for threshold checks.
inline double max_nearest_neighbor_gap(const std::vector<SpherePoint>& pts, double cutoff) {
    if (pts.size() < 2) throw std::invalid_argument("need at least two points");
    if (cutoff <= 0.0) throw std::invalid_argument("cutoff must be positive");
    auto cell = [cutoff](double v) { return static_cast<long long>(std::floor(v / cutoff)); };
    auto key = [](long long x, long long y, long long z) {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint64_t v : {static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y),
                                static_cast<std::uint64_t>(z)}) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    };
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
    grid.reserve(pts.size() * 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        grid[key(cell(pts[i].x), cell(pts[i].y), cell(pts[i].z))].push_back(i);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double best = 2.0 * cutoff;
        long long cx = cell(pts[i].x), cy = cell(pts[i].y), cz = cell(pts[i].z);
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy)
                for (long long dz = -1; dz <= 1; ++dz) {
                    auto it = grid.find(key(cx + dx, cy + dy, cz + dz));
                    if (it == grid.end()) continue;
                    for (std::size_t j : it->second) {
                        if (j == i) continue;
                        double d = euclidean_distance(pts[i], pts[j]);
                        if (d < best) best = d;
                    }
                }
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace kleinorbit
