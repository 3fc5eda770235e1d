#include "bmoext/extension.hpp"

#include <cmath>

#include "bmoext/covering.hpp"

namespace bmoext {

namespace {

ScalarField reflect_extend(const ScalarField& f, const Domain& domain,
                           double band, double sign, ExtendStats* stats) {
    if (!(band > 0)) throw ConfigError("extension band must be positive");
    if (!(band <= domain.reach()))
        throw ConfigError("extension band exceeds the unique-projection reach");
    ScalarField out = f;
    ExtendStats local;
    const Grid& g = f.grid();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 c = g.center(i, j);
            const double d = domain.signed_distance(c);
            if (d > 0) continue;            // interior cells unchanged
            if (!(-d < band)) continue;     // beyond the band: untouched
            const BoundaryPoint p = domain.boundary_projection(c);
            const Vec2 mirror = p.position + d * p.normal;
            const auto v = f.interpolate(mirror);
            if (!v) {
                out.set(i, j, 0.0);
                ++local.zeroed_cells;
            } else {
                out.set(i, j, sign * *v);
            }
        }
    }
    if (stats) *stats = local;
    return out;
}

}  // namespace

Vec2 reflect_point(const Domain& domain, Vec2 x, double band) {
    const double d = domain.signed_distance(x);
    if (!(std::abs(d) < band))
        throw OutsideBandError("point outside the extension band");
    const BoundaryPoint p = domain.boundary_projection(x);
    return p.position + d * p.normal;
}

ScalarField even_extend(const ScalarField& f, const Domain& domain,
                        double band, ExtendStats* stats) {
    return reflect_extend(f, domain, band, 1.0, stats);
}

ScalarField odd_extend(const ScalarField& f, const Domain& domain,
                       double band, ExtendStats* stats) {
    return reflect_extend(f, domain, band, -1.0, stats);
}

ScalarField zero_extend(const ScalarField& f, const Domain& domain,
                        const Grid& target) {
    if (!f.grid().aligned_with(target))
        throw ConfigError("zero_extend requires an aligned target grid");
    const auto [oi, oj] = f.grid().offset_in(target);
    ScalarField out(target);
    for (int j = 0; j < target.ny; ++j) {
        for (int i = 0; i < target.nx; ++i) {
            const Vec2 c = target.center(i, j);
            double v = 0.0;
            if (domain.signed_distance(c) > 0) {
                const long si = i - oi, sj = j - oj;
                if (si >= 0 && si < f.nx() && sj >= 0 && sj < f.ny() &&
                    f.masked((int)si, (int)sj))
                    v = f.value((int)si, (int)sj);
            }
            out.set(i, j, v);
        }
    }
    return out;
}

ExtensionResult bmo_extend(const ScalarField& v, const Domain& domain,
                           const ExtensionConfig& config) {
    ExtensionConfig cfg = config;
    if (!(cfg.rho > 0)) throw ConfigError("extension scale rho must be positive");
    if (cfg.band == 0) cfg.band = 2 * cfg.rho;
    if (cfg.band < 2 * cfg.rho * (1 - 1e-12))
        throw ConfigError("extension band must cover 2*rho");
    if (!(cfg.band <= domain.reach()))
        throw ConfigError("extension band exceeds the unique-projection reach");
    if (cfg.target.nx == 0) cfg.target = v.grid();
    if (!v.grid().aligned_with(cfg.target))
        throw ConfigError("extension target grid must align with the input");

    const GeometryConstants gc = admissible_rho(domain, cfg.epsilon);

    ExtensionResult res;
    res.config = cfg;
    res.c_star = gc.c_star;
    res.in_theorem_regime = cfg.rho < gc.c_star;

    const Grid& gin = v.grid();
    // v1 = theta_rho * v on the input cells, v2 = v - v1.
    ScalarField v1(gin), v2(gin);
    for (int j = 0; j < gin.ny; ++j) {
        for (int i = 0; i < gin.nx; ++i) {
            if (!v.masked(i, j)) continue;
            const double theta = boundary_cutoff(domain, cfg.rho, gin.center(i, j));
            const double a = theta * v.value(i, j);
            v1.set(i, j, a);
            v2.set(i, j, v.value(i, j) - a);
        }
    }

    res.zero_part = zero_extend(v2, domain, cfg.target);

    // Even part on the target grid: interior cells copy v1 (0 where
    // uncovered), exterior band cells interpolate v1 at the mirror point.
    const auto [oi, oj] = gin.offset_in(cfg.target);
    ScalarField even(cfg.target);
    ScalarField extended(cfg.target);
    for (int j = 0; j < cfg.target.ny; ++j) {
        for (int i = 0; i < cfg.target.nx; ++i) {
            const Vec2 c = cfg.target.center(i, j);
            const double d = domain.signed_distance(c);
            if (d > 0) {
                const long si = i - oi, sj = j - oj;
                const bool covered = si >= 0 && si < gin.nx && sj >= 0 &&
                                     sj < gin.ny && v.masked((int)si, (int)sj);
                if (covered) {
                    even.set(i, j, v1.value((int)si, (int)sj));
                    extended.set(i, j, v.value((int)si, (int)sj));
                } else {
                    even.set(i, j, 0.0);
                    extended.set(i, j, 0.0);
                    ++res.stats.dropped_cells;
                }
            } else if (-d < cfg.band) {
                const BoundaryPoint p = domain.boundary_projection(c);
                const Vec2 mirror = p.position + d * p.normal;
                const auto val = v1.interpolate(mirror);
                if (!val) {
                    even.set(i, j, 0.0);
                    ++res.stats.zeroed_cells;
                } else {
                    even.set(i, j, *val);
                }
                extended.set(i, j, even.value(i, j));
            } else {
                even.set(i, j, 0.0);
                extended.set(i, j, 0.0);
            }
        }
    }
    res.even_part = std::move(even);
    res.extended = std::move(extended);
    return res;
}

ProductEstimateReport verify_product_estimate(const ScalarField& phi,
                                              const ScalarField& v,
                                              const Domain& domain,
                                              double gamma, double mu,
                                              double delta,
                                              const CompositeStrategy& s) {
    ProductEstimateReport rep;
    const ScalarField pv = multiply(phi, v);
    const CompositeNorms npv = composite_norms(pv, domain, mu, delta, 1.0, s);
    const CompositeNorms nv = composite_norms(v, domain, mu, delta, 1.0, s);
    rep.product_norm = npv.bmo_mu_delta;
    rep.holder = holder_norm(phi, gamma);
    rep.field_norm = nv.bmo_mu_delta;
    const double denom = rep.holder * rep.field_norm;
    if (denom > 0) {
        rep.ratio = rep.product_norm / denom;
        rep.defined = true;
    }
    return rep;
}

bool support_within(const ScalarField& f, const Domain& domain, double slack) {
    const Grid& g = f.grid();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!f.masked(i, j) || f.value(i, j) == 0.0) continue;
            const double d = domain.signed_distance(g.center(i, j));
            if (-d >= slack) return false;  // d(x, closure) = max(-d, 0)
        }
    }
    return true;
}

EdmReport edm_extend_report(const ScalarField& v, const Domain& domain,
                            double mu, double delta, double rho,
                            const CompositeStrategy& s) {
    if (std::isinf(mu) || std::isinf(delta))
        throw ConfigError("edm_extend_report requires finite mu and delta");
    const Grid& gin = v.grid();
    const int pad = (int)std::ceil(2 * rho / gin.h) + 1;
    Grid target = gin;
    target.x0 -= pad * gin.h;
    target.y0 -= pad * gin.h;
    target.nx += 2 * pad;
    target.ny += 2 * pad;

    ExtensionConfig cfg;
    cfg.rho = rho;
    cfg.target = target;
    const ExtensionResult ext = bmo_extend(v, domain, cfg);

    EdmReport rep;
    rep.in_theorem_regime = ext.in_theorem_regime;
    rep.support_ok = support_within(ext.extended, domain, 2 * rho + gin.h);
    rep.extended_bmo = bmo_seminorm_window(ext.extended, mu, s.bmo).value;
    rep.extended_l1 =
        l1_ul_norm(ext.extended, domain, BandRegion::two_sided_band, delta, s.l1)
            .value;
    rep.input_norm = bmo_seminorm(v, domain, mu, s.bmo).value +
                     l1_ul_norm(v, domain, BandRegion::inner_band, delta, s.l1)
                         .value;
    if (rep.input_norm > 0) {
        rep.ratio = (rep.extended_bmo + rep.extended_l1) / rep.input_norm;
        rep.defined = true;
    }
    return rep;
}

}  // namespace bmoext
