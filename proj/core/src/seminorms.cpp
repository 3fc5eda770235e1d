#include "bmoext/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>

namespace bmoext {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RowRange {
    int lo, hi;  // inclusive; empty if lo > hi
};

// Conservative index range of cells a ball can cover in row j; callers filter
// with the exact predicate dx*dx + dy*dy <= r*r.
RowRange ball_row_range(const Grid& g, const Ball& b, int j, double* dy_out) {
    const double cy = g.y0 + (j + 0.5) * g.h;
    const double dy = cy - b.center.y;
    *dy_out = dy;
    if (std::abs(dy) > b.radius) return {1, 0};
    const double half = std::sqrt(std::max(b.radius * b.radius - dy * dy, 0.0));
    int lo = (int)std::floor((b.center.x - half - g.x0) / g.h - 0.5) - 1;
    int hi = (int)std::ceil((b.center.x + half - g.x0) / g.h - 0.5) + 1;
    lo = std::max(lo, 0);
    hi = std::min(hi, g.nx - 1);
    return {lo, hi};
}

std::pair<int, int> ball_rows(const Grid& g, const Ball& b) {
    int jlo = (int)std::floor((b.center.y - b.radius - g.y0) / g.h - 0.5) - 1;
    int jhi = (int)std::ceil((b.center.y + b.radius - g.y0) / g.h - 0.5) + 1;
    return {std::max(jlo, 0), std::min(jhi, g.ny - 1)};
}

struct OscEval {
    double value{0};
    long count{0};
    bool all_masked{true};
};

// Mean oscillation of f over the closed ball, visiting cells in row-major
// order (the brute-force oracle visits them identically).
OscEval eval_mean_oscillation(const ScalarField& f, const Ball& b) {
    const Grid& g = f.grid();
    const double r2 = b.radius * b.radius;
    const auto [jlo, jhi] = ball_rows(g, b);
    double sum = 0;
    long count = 0;
    OscEval out;
    for (int j = jlo; j <= jhi; ++j) {
        double dy;
        const RowRange rr = ball_row_range(g, b, j, &dy);
        for (int i = rr.lo; i <= rr.hi; ++i) {
            const double dx = g.x0 + (i + 0.5) * g.h - b.center.x;
            if (dx * dx + dy * dy > r2) continue;
            if (!f.masked(i, j)) {
                out.all_masked = false;
                return out;
            }
            sum += f.value(i, j);
            ++count;
        }
    }
    if (count == 0) {
        out.all_masked = false;
        return out;
    }
    const double mean = sum / count;
    double dev = 0;
    for (int j = jlo; j <= jhi; ++j) {
        double dy;
        const RowRange rr = ball_row_range(g, b, j, &dy);
        for (int i = rr.lo; i <= rr.hi; ++i) {
            const double dx = g.x0 + (i + 0.5) * g.h - b.center.x;
            if (dx * dx + dy * dy > r2) continue;
            dev += std::abs(f.value(i, j) - mean);
        }
    }
    out.value = dev / count;
    out.count = count;
    return out;
}

// Per-row prefix sums of a selected nonnegative-weight value; used by the
// integral sup searches so each ball costs O(rows).
class RowPrefix {
public:
    template <typename ValueFn, typename ActiveFn>
    RowPrefix(const Grid& g, ValueFn value, ActiveFn active) : g_(g) {
        pre_.assign((size_t)(g.nx + 1) * g.ny, 0.0);
        for (int j = 0; j < g.ny; ++j) {
            double acc = 0;
            const size_t base = (size_t)j * (g.nx + 1);
            for (int i = 0; i < g.nx; ++i) {
                if (active(i, j)) acc += value(i, j);
                pre_[base + i + 1] = acc;
            }
        }
    }

    double sum(int j, int lo, int hi) const {  // inclusive cell range
        if (lo > hi) return 0;
        const size_t base = (size_t)j * (g_.nx + 1);
        return pre_[base + hi + 1] - pre_[base + lo];
    }

    double ball_sum(const Ball& b) const {
        const auto [jlo, jhi] = ball_rows(g_, b);
        double total = 0;
        for (int j = jlo; j <= jhi; ++j) {
            const double cy = g_.y0 + (j + 0.5) * g_.h;
            const double dy = cy - b.center.y;
            if (std::abs(dy) > b.radius) continue;
            const double half =
                std::sqrt(std::max(b.radius * b.radius - dy * dy, 0.0));
            int lo = (int)std::ceil((b.center.x - half - g_.x0) / g_.h - 0.5 - 1e-12);
            int hi = (int)std::floor((b.center.x + half - g_.x0) / g_.h - 0.5 + 1e-12);
            lo = std::max(lo, 0);
            hi = std::min(hi, g_.nx - 1);
            total += sum(j, lo, hi);
        }
        return total;
    }

private:
    Grid g_;
    std::vector<double> pre_;
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct BestBall {
    double value{-1};
    long center_rank{0};
    int radius_rank{0};
    Ball ball;
    long candidates{0};

    void consider(double v, long cr, int rr, const Ball& b) {
        ++candidates;
        if (v > value ||
            (v == value && (cr < center_rank ||
                            (cr == center_rank && rr < radius_rank)))) {
            value = v;
            center_rank = cr;
            radius_rank = rr;
            ball = b;
        }
    }
    void merge(const BestBall& o) {
        candidates += o.candidates;
        if (o.value > value ||
            (o.value == value &&
             (o.center_rank < center_rank ||
              (o.center_rank == center_rank && o.radius_rank < radius_rank)))) {
            value = o.value;
            center_rank = o.center_rank;
            radius_rank = o.radius_rank;
            ball = o.ball;
        }
    }
};

double window_edge_distance(const Rect& w, Vec2 c) {
    return std::min(std::min(c.x - w.xmin, w.xmax - c.x),
                    std::min(c.y - w.ymin, w.ymax - c.y));
}

SeminormReport run_bmo_search(const ScalarField& f, const Domain* domain,
                              double mu, const SearchStrategy& strat,
                              const std::string& name) {
    const Grid& g = f.grid();
    const Rect win = g.window();
    const double cap = win.diagonal();
    const double mu_eff = std::isinf(mu) ? cap : mu;

    std::vector<std::pair<int, int>> centers;
    const int stride = std::max(1, strat.center_stride);
    for (int j = 0; j < g.ny; j += stride)
        for (int i = 0; i < g.nx; i += stride)
            if (f.masked(i, j)) centers.emplace_back(i, j);

    auto scan = [&](size_t begin, size_t end) {
        BestBall best;
        for (size_t k = begin; k < end; ++k) {
            const auto [i, j] = centers[k];
            const Vec2 c = g.center(i, j);
            double dmax = std::min(mu_eff, window_edge_distance(win, c));
            if (domain) dmax = std::min(dmax, domain->signed_distance(c));
            int rank = 0;
            if (strat.radii.empty()) {
                for (int m = 1;; ++m) {
                    const double r = m * g.h;
                    if (!(r < dmax)) break;
                    const Ball b{c, r};
                    const OscEval e = eval_mean_oscillation(f, b);
                    if (e.all_masked) best.consider(e.value, (long)k, rank, b);
                    ++rank;
                }
            } else {
                for (double r : strat.radii) {
                    if (!(r < dmax) || !(r > 0)) { ++rank; continue; }
                    const Ball b{c, r};
                    const OscEval e = eval_mean_oscillation(f, b);
                    if (e.all_masked) best.consider(e.value, (long)k, rank, b);
                    ++rank;
                }
            }
        }
        return best;
    };

    BestBall best;
    const int threads = std::max(1, strat.threads);
    if (threads == 1 || centers.size() < 64) {
        best = scan(0, centers.size());
    } else {
        std::vector<std::future<BestBall>> futs;
        const size_t chunk = (centers.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const size_t b0 = std::min(centers.size(), t * chunk);
            const size_t b1 = std::min(centers.size(), b0 + chunk);
            if (b0 < b1)
                futs.push_back(std::async(std::launch::async, scan, b0, b1));
        }
        for (auto& fu : futs) best.merge(fu.get());
    }

    if (best.candidates == 0)
        throw NoAdmissibleBallError("no ball fits the constraints of " + name);

    SeminormReport rep;
    rep.name = name;
    rep.value = best.value;
    rep.maximizer = best.ball;
    rep.has_maximizer = true;
    rep.strategy = strat.describe(g.h);
    if (std::isinf(mu)) rep.cap = cap;
    return rep;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::string SearchStrategy::describe(double h) const {
    std::ostringstream os;
    if (center_stride <= 1 && radii.empty()) {
        os << "exhaustive(h=" << format_double(h) << ")";
    } else {
        os << "strided(stride=" << std::max(1, center_stride) << ",radii=";
        if (radii.empty()) {
            os << "lattice";
        } else {
            os << "[";
            for (size_t i = 0; i < radii.size(); ++i)
                os << (i ? "," : "") << format_double(radii[i]);
            os << "]";
        }
        os << ",h=" << format_double(h) << ")";
    }
    return os.str();
}

std::string SeminormReport::to_csv_row() const {
    std::ostringstream os;
    os << name << "," << format_double(value) << ","
       << format_double(maximizer.center.x) << ","
       << format_double(maximizer.center.y) << ","
       << format_double(maximizer.radius) << "," << (oracle ? 1 : 0) << ",\""
       << strategy << "\"";
    return os.str();
}

double integrate_ball(const ScalarField& f, const Ball& ball, Integrand kind) {
    const Grid& g = f.grid();
    const double r2 = ball.radius * ball.radius;
    const auto [jlo, jhi] = ball_rows(g, ball);

    double mean = 0;
    if (kind == Integrand::dev_from_mean) {
        double sum = 0;
        long count = 0;
        for (int j = jlo; j <= jhi; ++j) {
            double dy;
            const RowRange rr = ball_row_range(g, ball, j, &dy);
            for (int i = rr.lo; i <= rr.hi; ++i) {
                const double dx = g.x0 + (i + 0.5) * g.h - ball.center.x;
                if (dx * dx + dy * dy > r2 || !f.masked(i, j)) continue;
                sum += f.value(i, j);
                ++count;
            }
        }
        if (count == 0)
            throw EmptyIntersectionError("ball meets no masked cell");
        mean = sum / count;
    }

    double acc = 0;
    long count = 0;
    for (int j = jlo; j <= jhi; ++j) {
        double dy;
        const RowRange rr = ball_row_range(g, ball, j, &dy);
        for (int i = rr.lo; i <= rr.hi; ++i) {
            const double dx = g.x0 + (i + 0.5) * g.h - ball.center.x;
            if (dx * dx + dy * dy > r2 || !f.masked(i, j)) continue;
            const double v = f.value(i, j);
            switch (kind) {
                case Integrand::raw: acc += v; break;
                case Integrand::abs: acc += std::abs(v); break;
                case Integrand::dev_from_mean: acc += std::abs(v - mean); break;
            }
            ++count;
        }
    }
    if (count == 0) throw EmptyIntersectionError("ball meets no masked cell");
    return acc * g.h * g.h;
}

double integrate_window(const ScalarField& f, const Rect& rect, Integrand kind) {
    const Grid& g = f.grid();
    double mean = 0;
    long count = 0;
    auto covered = [&](int i, int j) {
        const Vec2 c = g.center(i, j);
        return c.x >= rect.xmin && c.x <= rect.xmax && c.y >= rect.ymin &&
               c.y <= rect.ymax && f.masked(i, j);
    };
    if (kind == Integrand::dev_from_mean) {
        double sum = 0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (covered(i, j)) { sum += f.value(i, j); ++count; }
        if (count == 0)
            throw EmptyIntersectionError("window meets no masked cell");
        mean = sum / count;
        count = 0;
    }
    double acc = 0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!covered(i, j)) continue;
            const double v = f.value(i, j);
            switch (kind) {
                case Integrand::raw: acc += v; break;
                case Integrand::abs: acc += std::abs(v); break;
                case Integrand::dev_from_mean: acc += std::abs(v - mean); break;
            }
            ++count;
        }
    }
    if (count == 0) throw EmptyIntersectionError("window meets no masked cell");
    return acc * g.h * g.h;
}

double mean_oscillation(const ScalarField& f, const Ball& ball) {
    const OscEval e = eval_mean_oscillation(f, ball);
    if (!e.all_masked)
        throw BallNotContainedError("ball not contained in the field region");
    return e.value;
}

SeminormReport bmo_seminorm(const ScalarField& f, const Domain& domain,
                            double mu, const SearchStrategy& strategy) {
    return run_bmo_search(f, &domain, mu, strategy, "BMO^mu(Omega)");
}

SeminormReport bmo_seminorm_window(const ScalarField& f, double mu,
                                   const SearchStrategy& strategy) {
    return run_bmo_search(f, nullptr, mu, strategy, "BMO^mu(R2)");
}

SeminormReport l1_ul_norm(const ScalarField& f, const Domain& domain,
                          BandRegion region, double delta,
                          const L1Strategy& strategy) {
    const Grid& g = f.grid();
    const Rect win = g.window();

    auto active = [&](int i, int j) {
        if (!f.masked(i, j)) return false;
        if (region == BandRegion::all) return true;
        const double d = domain.signed_distance(g.center(i, j));
        if (region == BandRegion::inner_band) return d > 0 && d < delta;
        return std::abs(d) < delta;
    };
    const RowPrefix prefix(
        g, [&](int i, int j) { return std::abs(f.value(i, j)); }, active);

    double spacing = strategy.center_spacing;
    if (!(spacing > 0))
        spacing = std::max(g.h, std::min(win.width(), win.height()) / 64.0);
    const long m = std::max(1L, (long)std::llround(spacing / g.h));
    spacing = m * g.h;

    const double margin = strategy.margin;
    const long kx_lo = (long)std::floor(-margin / spacing);
    const long kx_hi = (long)std::ceil((win.width() + margin) / spacing);
    const long ky_lo = (long)std::floor(-margin / spacing);
    const long ky_hi = (long)std::ceil((win.height() + margin) / spacing);

    SeminormReport rep;
    rep.name = "L1_ul";
    rep.strategy = "unit-balls(spacing=" + format_double(spacing) +
                   ",margin=" + format_double(margin) + ")";
    double best = 0;
    bool any = false;
    for (long ky = ky_lo; ky <= ky_hi; ++ky) {
        for (long kx = kx_lo; kx <= kx_hi; ++kx) {
            const Vec2 c{g.x0 + 0.5 * g.h + kx * spacing,
                         g.y0 + 0.5 * g.h + ky * spacing};
            const double s = prefix.ball_sum({c, 1.0}) * g.h * g.h;
            if (!any || s > best) {
                best = s;
                rep.maximizer = {c, 1.0};
                rep.has_maximizer = true;
                any = true;
            }
        }
    }
    rep.value = best;
    return rep;
}

SeminormReport b_seminorm(const ScalarField& f, const Domain& domain,
                          double nu, const BoundaryBallStrategy& strategy) {
    const Grid& g = f.grid();
    const Rect win = g.window();
    const double diag = win.diagonal();
    const double cap = std::isinf(nu) ? diag : std::min(nu, diag);

    auto active = [&](int i, int j) {
        if (!f.masked(i, j)) return false;
        if (strategy.both_sides) return true;
        return domain.signed_distance(g.center(i, j)) > 0;
    };
    const RowPrefix prefix(
        g, [&](int i, int j) { return std::abs(f.value(i, j)); }, active);

    const auto centers =
        domain.sample_boundary(win.inflated(1.0), strategy.boundary_samples);

    std::vector<double> radii = strategy.radii;
    if (radii.empty()) {
        for (int m = 1;; ++m) {
            const double r = m * g.h;
            if (!(r < cap)) break;
            radii.push_back(r);
        }
    } else {
        std::erase_if(radii, [&](double r) { return !(r > 0 && r < cap); });
    }

    SeminormReport rep;
    rep.name = "b^nu";
    rep.strategy = "boundary-balls(centers=" + std::to_string(centers.size()) +
                   ",radii=" + std::to_string(radii.size()) +
                   (strategy.both_sides ? ",both-sides" : "") + ")";
    if (std::isinf(nu) || nu > diag) rep.cap = cap;
    double best = 0;
    bool any = false;
    for (const auto& bp : centers) {
        for (double r : radii) {
            const double s = prefix.ball_sum({bp.position, r}) * g.h * g.h;
            const double v = s / (r * r);
            if (!any || v > best) {
                best = v;
                rep.maximizer = {bp.position, r};
                rep.has_maximizer = true;
                any = true;
            }
        }
    }
    rep.value = best;
    return rep;
}

CompositeNorms composite_norms(const ScalarField& f, const Domain& domain,
                               double mu, double delta, double nu,
                               const CompositeStrategy& strategy) {
    CompositeNorms out;
    out.bmo_mu = bmo_seminorm(f, domain, mu, strategy.bmo);
    out.bmo_mu.name = "BMO^mu(Omega)";
    out.bmo_inf = bmo_seminorm(f, domain, kInf, strategy.bmo);
    out.bmo_inf.name = "BMO^inf(Omega)";
    out.l1_delta = l1_ul_norm(f, domain, BandRegion::inner_band, delta, strategy.l1);
    out.l1_delta.name = "L1_ul(Gamma_delta)";
    out.l1_all = l1_ul_norm(f, domain, BandRegion::all, delta, strategy.l1);
    out.l1_all.name = "L1_ul(Omega)";
    out.b_nu = b_seminorm(f, domain, nu, strategy.b);
    out.bmo_mu_delta = out.bmo_mu.value + out.l1_delta.value;
    out.bmo_inf_inf = out.bmo_inf.value + out.l1_all.value;
    out.bmo_b_mu_nu = out.bmo_mu.value + out.b_nu.value;
    return out;
}

double holder_norm(const ScalarField& f, double gamma) {
    if (!(gamma > 0 && gamma < 1))
        throw ConfigError("holder exponent must lie in (0,1)");
    const Grid& g = f.grid();
    std::vector<std::pair<int, int>> cells;
    double sup = 0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!f.masked(i, j)) continue;
            cells.emplace_back(i, j);
            sup = std::max(sup, std::abs(f.value(i, j)));
        }
    }
    if (cells.empty()) return 0;

    double quot = 0;
    auto consider = [&](std::pair<int, int> a, std::pair<int, int> b) {
        const Vec2 pa = g.center(a.first, a.second);
        const Vec2 pb = g.center(b.first, b.second);
        const double d = dist(pa, pb);
        if (d <= 0) return;
        const double q = std::abs(f.value(a.first, a.second) -
                                  f.value(b.first, b.second)) /
                         std::pow(d, gamma);
        quot = std::max(quot, q);
    };

    // Adjacent pairs always, so jump quotients at the grid scale are seen.
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!f.masked(i, j)) continue;
            if (i + 1 < g.nx && f.masked(i + 1, j)) consider({i, j}, {i + 1, j});
            if (j + 1 < g.ny && f.masked(i, j + 1)) consider({i, j}, {i, j + 1});
        }
    }

    // All pairs within distance 1, subsampled on large grids.
    const size_t max_subset = 4096;
    const size_t step = cells.size() > max_subset
                            ? (cells.size() + max_subset - 1) / max_subset
                            : 1;
    std::vector<std::pair<int, int>> subset;
    for (size_t k = 0; k < cells.size(); k += step) subset.push_back(cells[k]);
    for (size_t a = 0; a < subset.size(); ++a) {
        const Vec2 pa = g.center(subset[a].first, subset[a].second);
        for (size_t b = a + 1; b < subset.size(); ++b) {
            const Vec2 pb = g.center(subset[b].first, subset[b].second);
            if (dist(pa, pb) <= 1.0 + 1e-12) consider(subset[a], subset[b]);
        }
    }

    // Seeded long-range pairs.
    std::uint64_t state = 0x5eedULL;
    for (int k = 0; k < 10000; ++k) {
        const size_t a = splitmix64(state) % cells.size();
        const size_t b = splitmix64(state) % cells.size();
        if (a != b) consider(cells[a], cells[b]);
    }
    return sup + quot;
}

SeminormReport brute_force_oracle(const ScalarField& f, const Domain& domain,
                                  double mu) {
    const Grid& g = f.grid();
    if (g.size() > 4096)
        throw TooLargeError("brute_force_oracle is limited to 4096 cells");
    const Rect win = g.window();
    const double mu_eff = std::isinf(mu) ? win.diagonal() : mu;

    double best = -1;
    Ball best_ball;
    long candidates = 0;
    for (int cj = 0; cj < g.ny; ++cj) {
        for (int ci = 0; ci < g.nx; ++ci) {
            if (!f.masked(ci, cj)) continue;
            const Vec2 c = g.center(ci, cj);
            const double dmax =
                std::min({mu_eff, window_edge_distance(win, c),
                          domain.signed_distance(c)});
            for (int m = 1;; ++m) {
                const double r = m * g.h;
                if (!(r < dmax)) break;
                const double r2 = r * r;
                double sum = 0;
                long count = 0;
                bool ok = true;
                for (int j = 0; j < g.ny && ok; ++j) {
                    const double dy = g.y0 + (j + 0.5) * g.h - c.y;
                    for (int i = 0; i < g.nx; ++i) {
                        const double dx = g.x0 + (i + 0.5) * g.h - c.x;
                        if (dx * dx + dy * dy > r2) continue;
                        if (!f.masked(i, j)) { ok = false; break; }
                        sum += f.value(i, j);
                        ++count;
                    }
                }
                if (!ok || count == 0) continue;
                const double mean = sum / count;
                double dev = 0;
                for (int j = 0; j < g.ny; ++j) {
                    const double dy = g.y0 + (j + 0.5) * g.h - c.y;
                    for (int i = 0; i < g.nx; ++i) {
                        const double dx = g.x0 + (i + 0.5) * g.h - c.x;
                        if (dx * dx + dy * dy > r2) continue;
                        dev += std::abs(f.value(i, j) - mean);
                    }
                }
                const double v = dev / count;
                ++candidates;
                if (v > best) {
                    best = v;
                    best_ball = {c, r};
                }
            }
        }
    }
    if (candidates == 0)
        throw NoAdmissibleBallError("oracle found no admissible ball");
    SeminormReport rep;
    rep.name = "BMO^mu(Omega)";
    rep.value = best;
    rep.maximizer = best_ball;
    rep.has_maximizer = true;
    rep.strategy = "oracle(exhaustive)";
    rep.oracle = true;
    if (std::isinf(mu)) rep.cap = win.diagonal();
    return rep;
}

}  // namespace bmoext
