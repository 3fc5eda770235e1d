#include "bmoext/covering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace bmoext {

namespace {

// Sub-sample offsets for the half-open square [0,s) x [0,s): the lower-left
// boundary is included, the upper-right stays just inside.
constexpr int kSub = 5;
const double kSubOffsets[kSub] = {0.0, 0.25, 0.5, 0.75, 1.0 - 1e-9};

}  // namespace

int BoundaryAtlas::max_neighbor_count() const {
    size_t m = 0;
    for (const auto& l : neighbor_lists) m = std::max(m, l.size());
    return (int)m;
}

BoundaryAtlas build_atlas(const Domain& domain, double rho, const Rect& bbox) {
    if (!(rho > 0 && rho < domain.rho0() / 2))
        throw ConfigError("atlas scale must satisfy 0 < rho < rho0/2");

    BoundaryAtlas atlas;
    atlas.rho = rho;
    atlas.bbox = bbox;

    int k = 0;
    while (std::ldexp(1.0, -k) > rho / std::sqrt(2.0)) ++k;
    atlas.k_star = k;
    const double s = atlas.square_side();

    const long mx_lo = (long)std::floor(bbox.xmin / s);
    const long mx_hi = (long)std::ceil(bbox.xmax / s - 1e-12) - 1;
    const long my_lo = (long)std::floor(bbox.ymin / s);
    const long my_hi = (long)std::ceil(bbox.ymax / s - 1e-12) - 1;

    for (long my = my_lo; my <= my_hi; ++my) {
        for (long mx = mx_lo; mx <= mx_hi; ++mx) {
            const double x0 = mx * s, y0 = my * s;
            double d[kSub][kSub];
            double dmin = 1e300, dmax = -1e300;
            for (int a = 0; a < kSub; ++a) {
                for (int b = 0; b < kSub; ++b) {
                    d[a][b] = domain.signed_distance(
                        {x0 + kSubOffsets[a] * s, y0 + kSubOffsets[b] * s});
                    dmin = std::min(dmin, d[a][b]);
                    dmax = std::max(dmax, d[a][b]);
                }
            }
            if (!(dmin <= 0.0 && 0.0 <= dmax)) continue;

            // Seed: a zero sample if one exists, otherwise bisection along
            // the first sign-changing sub-edge (rows first, then columns).
            Vec2 seed{0, 0};
            bool found = false;
            for (int a = 0; a < kSub && !found; ++a)
                for (int b = 0; b < kSub && !found; ++b)
                    if (d[a][b] == 0.0) {
                        seed = {x0 + kSubOffsets[a] * s, y0 + kSubOffsets[b] * s};
                        found = true;
                    }
            if (!found) {
                Vec2 lo{0, 0}, hi{0, 0};
                for (int b = 0; b < kSub && !found; ++b)
                    for (int a = 0; a + 1 < kSub && !found; ++a)
                        if (d[a][b] * d[a + 1][b] < 0) {
                            lo = {x0 + kSubOffsets[a] * s, y0 + kSubOffsets[b] * s};
                            hi = {x0 + kSubOffsets[a + 1] * s, y0 + kSubOffsets[b] * s};
                            found = true;
                        }
                for (int a = 0; a < kSub && !found; ++a)
                    for (int b = 0; b + 1 < kSub && !found; ++b)
                        if (d[a][b] * d[a][b + 1] < 0) {
                            lo = {x0 + kSubOffsets[a] * s, y0 + kSubOffsets[b] * s};
                            hi = {x0 + kSubOffsets[a] * s, y0 + kSubOffsets[b + 1] * s};
                            found = true;
                        }
                if (!found) continue;  // sub-resolution wiggle, skip
                if (domain.signed_distance(lo) > 0) std::swap(lo, hi);
                for (int it = 0; it < 60; ++it) {
                    const Vec2 mid = 0.5 * (lo + hi);
                    if (domain.signed_distance(mid) <= 0) lo = mid; else hi = mid;
                }
                seed = 0.5 * (lo + hi);
            }
            atlas.seeds.push_back(domain.boundary_projection(seed));
            atlas.squares.emplace_back(mx, my);
        }
    }
    if (atlas.seeds.empty())
        throw EmptyAtlasError("window does not meet the boundary");

    // Neighbor discovery: hash seeds on a coarse lattice so only pairs within
    // 12*rho are tested, then sample the boundary through each seed's chart
    // and test membership in the other neighborhood (set-symmetric).
    const int n = (int)atlas.seeds.size();
    atlas.neighbor_lists.assign(n, {});
    const double cell = 12 * rho;
    std::map<std::pair<long, long>, std::vector<int>> hash;
    for (int i = 0; i < n; ++i) {
        const Vec2 p = atlas.seeds[i].position;
        hash[{(long)std::floor(p.x / cell), (long)std::floor(p.y / cell)}].push_back(i);
    }
    auto boundary_samples = [&](int i) {
        std::vector<Vec2> pts;
        const NormalChart chart(domain, atlas.seeds[i], 2 * rho);
        const int m = 33;
        for (int a = 0; a < m; ++a) {
            const double u = -0.9999 * 2 * rho + (a + 0.5) / m * 2 * 0.9999 * 2 * rho;
            pts.push_back(chart.forward_unchecked({u, 0.0}));
        }
        return pts;
    };
    std::vector<std::vector<Vec2>> samples(n);
    for (int i = 0; i < n; ++i) samples[i] = boundary_samples(i);

    auto overlaps = [&](int i, int j) {
        for (const Vec2& y : samples[i])
            if (neighborhood_contains(domain, atlas.seeds[j], 2 * rho, y)) return true;
        for (const Vec2& y : samples[j])
            if (neighborhood_contains(domain, atlas.seeds[i], 2 * rho, y)) return true;
        return false;
    };
    for (int i = 0; i < n; ++i) {
        const Vec2 p = atlas.seeds[i].position;
        const long cx = (long)std::floor(p.x / cell);
        const long cy = (long)std::floor(p.y / cell);
        for (long ax = cx - 1; ax <= cx + 1; ++ax) {
            for (long ay = cy - 1; ay <= cy + 1; ++ay) {
                auto it = hash.find({ax, ay});
                if (it == hash.end()) continue;
                for (int j : it->second) {
                    if (j <= i) continue;
                    if (dist(p, atlas.seeds[j].position) > 12 * rho) continue;
                    if (overlaps(i, j)) {
                        atlas.neighbor_lists[i].push_back(j);
                        atlas.neighbor_lists[j].push_back(i);
                    }
                }
            }
        }
    }
    for (auto& l : atlas.neighbor_lists) std::sort(l.begin(), l.end());
    return atlas;
}

bool neighborhood_contains(const Domain& domain, const BoundaryPoint& w0,
                           double rho, Vec2 x) {
    const double d = domain.signed_distance(x);
    if (!(std::abs(d) < rho)) return false;
    if (!(std::abs(d) < domain.reach())) return false;
    BoundaryPoint p;
    try {
        p = domain.boundary_projection(x);
    } catch (const Error&) {
        return false;
    }
    const Vec2 rel = p.position - w0.position;
    const double t = rel.dot(w0.tangent);
    const double nn = rel.dot(w0.inward());
    return std::abs(t) < rho && std::abs(t) < domain.graph_window_r() &&
           std::abs(nn) < domain.graph_window_d();
}

double mollifier_theta(double t) {
    t = std::abs(t);
    auto bump = [](double u) { return u > 0 ? std::exp(-1.0 / u) : 0.0; };
    const double num = bump(2.0 - t);
    const double den = bump(t - 1.0) + num;
    return num == 0.0 ? 0.0 : num / den;
}

double boundary_cutoff(const Domain& domain, double rho, Vec2 x) {
    if (!(rho > 0)) throw ConfigError("cutoff scale must be positive");
    return mollifier_theta(std::abs(domain.signed_distance(x)) / rho);
}

double PartitionWeights::sum() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

PartitionWeights partition_weights(const BoundaryAtlas& atlas,
                                   const Domain& domain, Vec2 x) {
    const double rho = atlas.rho;
    const double d = domain.signed_distance(x);
    const double band = mollifier_theta(std::abs(d) / rho);
    if (band == 0.0)
        throw UncoveredPointError("point outside the covered band");
    const BoundaryPoint px = domain.boundary_projection(x);

    const int n = (int)atlas.seeds.size();
    std::vector<double> pre(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const BoundaryPoint& w = atlas.seeds[i];
        const Vec2 rel = px.position - w.position;
        const double t = rel.dot(w.tangent);
        const double nn = rel.dot(w.inward());
        if (!(std::abs(nn) < domain.graph_window_d())) continue;
        if (!(std::abs(t) < domain.graph_window_r())) continue;
        pre[i] = mollifier_theta(std::abs(t) / rho);
    }

    PartitionWeights pw;
    pw.point = x;
    for (int i = 0; i < n; ++i) {
        if (pre[i] <= 0.0) continue;
        double denom = pre[i];
        for (int j : atlas.neighbor_lists[i]) denom += pre[j];
        pw.seeds.push_back(i);
        pw.weights.push_back(band * pre[i] / denom);
    }
    if (pw.seeds.empty())
        throw UncoveredPointError("no seed neighborhood contains the point");
    return pw;
}

}  // namespace bmoext
