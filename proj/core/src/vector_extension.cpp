#include "bmoext/vector_extension.hpp"

#include <cmath>

#include "bmoext/covering.hpp"

namespace bmoext {

SplitField normal_tangential_split(const VectorField& u, const Domain& domain) {
    const Grid& g = u.grid();
    ScalarField p1(g), p2(g), q1(g), q2(g);
    const double band = domain.rho0();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!u.c1.masked(i, j)) continue;
            const Vec2 c = g.center(i, j);
            if (!(std::abs(domain.signed_distance(c)) < band)) continue;
            const Vec2 nu = domain.grad_distance(c);
            const Vec2 v{u.c1.value(i, j), u.c2.value(i, j)};
            const Vec2 pn = nu.dot(v) * nu;
            p1.set(i, j, pn.x);
            p2.set(i, j, pn.y);
            q1.set(i, j, v.x - pn.x);
            q2.set(i, j, v.y - pn.y);
        }
    }
    return {VectorField{std::move(p1), std::move(p2)},
            VectorField{std::move(q1), std::move(q2)}};
}

VbmoNorm vbmo_norm(const VectorField& u, const Domain& domain, double nu,
                   const CompositeStrategy& s) {
    const double inf = std::numeric_limits<double>::infinity();
    VbmoNorm out;
    const CompositeNorms n1 = composite_norms(u.c1, domain, inf, inf, nu, s);
    const CompositeNorms n2 = composite_norms(u.c2, domain, inf, inf, nu, s);
    out.bmo_component = n1.bmo_inf_inf + n2.bmo_inf_inf;

    // Normal scalar grad d . u, defined where grad d is (the reach band).
    const Grid& g = u.grid();
    ScalarField normal_scalar(g);
    const double band = std::min(domain.reach(), 1e300);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!u.c1.masked(i, j)) continue;
            const Vec2 c = g.center(i, j);
            if (!(std::abs(domain.signed_distance(c)) < band)) continue;
            const Vec2 nv = domain.grad_distance(c);
            normal_scalar.set(i, j,
                              nv.x * u.c1.value(i, j) + nv.y * u.c2.value(i, j));
        }
    }
    out.normal_b = b_seminorm(normal_scalar, domain, nu, s.b);
    out.value = out.bmo_component + out.normal_b.value;
    return out;
}

VectorExtensionResult vbmo_extend(const VectorField& u, const Domain& domain,
                                  const ExtensionConfig& config,
                                  const CompositeStrategy& s) {
    ExtensionConfig cfg = config;
    if (!(cfg.rho > 0)) throw ConfigError("extension scale rho must be positive");
    if (cfg.band == 0) cfg.band = 2 * cfg.rho;
    if (cfg.band < 2 * cfg.rho * (1 - 1e-12))
        throw ConfigError("extension band must cover 2*rho");
    if (!(cfg.band <= domain.reach()))
        throw ConfigError("extension band exceeds the unique-projection reach");
    if (cfg.target.nx == 0) cfg.target = u.grid();
    if (!u.grid().aligned_with(cfg.target))
        throw ConfigError("extension target grid must align with the input");

    const GeometryConstants gc = admissible_rho(domain, cfg.epsilon);

    const Grid& gin = u.grid();
    // u1 = theta_rho u, then p = grad d . u1 and q = u1 - p grad d.
    ScalarField p(gin), q1(gin), q2(gin), u2a(gin), u2b(gin);
    for (int j = 0; j < gin.ny; ++j) {
        for (int i = 0; i < gin.nx; ++i) {
            if (!u.c1.masked(i, j)) continue;
            const Vec2 c = gin.center(i, j);
            const double theta = boundary_cutoff(domain, cfg.rho, c);
            const Vec2 v{u.c1.value(i, j), u.c2.value(i, j)};
            const Vec2 v1 = theta * v;
            u2a.set(i, j, v.x - v1.x);
            u2b.set(i, j, v.y - v1.y);
            if (theta > 0) {
                const Vec2 nv = domain.grad_distance(c);
                const double pn = nv.dot(v1);
                p.set(i, j, pn);
                q1.set(i, j, v1.x - pn * nv.x);
                q2.set(i, j, v1.y - pn * nv.y);
            } else {
                p.set(i, j, 0.0);
                q1.set(i, j, 0.0);
                q2.set(i, j, 0.0);
            }
        }
    }

    const auto [oi, oj] = gin.offset_in(cfg.target);
    ScalarField e1(cfg.target), e2(cfg.target);
    for (int j = 0; j < cfg.target.ny; ++j) {
        for (int i = 0; i < cfg.target.nx; ++i) {
            const Vec2 c = cfg.target.center(i, j);
            const double d = domain.signed_distance(c);
            if (d > 0) {
                const long si = i - oi, sj = j - oj;
                const bool covered = si >= 0 && si < gin.nx && sj >= 0 &&
                                     sj < gin.ny && u.c1.masked((int)si, (int)sj);
                e1.set(i, j, covered ? u.c1.value((int)si, (int)sj) : 0.0);
                e2.set(i, j, covered ? u.c2.value((int)si, (int)sj) : 0.0);
            } else if (-d < cfg.band) {
                const BoundaryPoint bp = domain.boundary_projection(c);
                const Vec2 mirror = bp.position + d * bp.normal;
                const double po = -p.interpolate(mirror).value_or(0.0);
                const double qe1 = q1.interpolate(mirror).value_or(0.0);
                const double qe2 = q2.interpolate(mirror).value_or(0.0);
                const Vec2 nv = bp.inward();  // continued unit normal field
                e1.set(i, j, po * nv.x + qe1);
                e2.set(i, j, po * nv.y + qe2);
            } else {
                e1.set(i, j, 0.0);
                e2.set(i, j, 0.0);
            }
        }
    }

    VectorExtensionResult res;
    res.config = cfg;
    res.c_star2 = gc.c_star2;
    res.in_theorem_regime = cfg.rho < gc.c_star2;
    res.extended = VectorField{std::move(e1), std::move(e2)};

    res.support_ok =
        support_within(res.extended.c1, domain, 2 * cfg.rho + gin.h) &&
        support_within(res.extended.c2, domain, 2 * cfg.rho + gin.h);

    const double inf = std::numeric_limits<double>::infinity();
    res.extended_bmo = bmo_seminorm_window(res.extended.c1, inf, s.bmo).value +
                       bmo_seminorm_window(res.extended.c2, inf, s.bmo).value;

    // Normal trace of the extension over both sides of the boundary.
    ScalarField normal_scalar(cfg.target);
    for (int j = 0; j < cfg.target.ny; ++j) {
        for (int i = 0; i < cfg.target.nx; ++i) {
            const Vec2 c = cfg.target.center(i, j);
            if (!(std::abs(domain.signed_distance(c)) < domain.reach())) continue;
            const Vec2 nv = domain.grad_distance(c);
            normal_scalar.set(i, j, nv.x * res.extended.c1.value(i, j) +
                                        nv.y * res.extended.c2.value(i, j));
        }
    }
    BoundaryBallStrategy bs = s.b;
    bs.both_sides = true;
    res.extended_normal_b = b_seminorm(normal_scalar, domain, inf, bs).value;

    res.input_vbmo = vbmo_norm(u, domain, inf, s).value;
    if (res.input_vbmo > 0) {
        res.ratio = (res.extended_bmo + res.extended_normal_b) / res.input_vbmo;
        res.defined = true;
    }
    return res;
}

}  // namespace bmoext
