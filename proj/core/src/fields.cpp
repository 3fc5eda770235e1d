#include "bmoext/fields.hpp"

#include <cmath>
#include <limits>

namespace bmoext {

namespace {
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}

bool Grid::aligned_with(const Grid& o) const {
    if (std::abs(h - o.h) > 1e-12 * h) return false;
    const double ox = (x0 - o.x0) / h;
    const double oy = (y0 - o.y0) / h;
    return std::abs(ox - std::round(ox)) < 1e-9 &&
           std::abs(oy - std::round(oy)) < 1e-9;
}

std::pair<long, long> Grid::offset_in(const Grid& o) const {
    return {(long)std::round((x0 - o.x0) / h), (long)std::round((y0 - o.y0) / h)};
}

Grid make_grid(const Rect& window, double h) {
    if (!(h > 0)) throw ConfigError("grid spacing must be positive");
    Grid g;
    g.h = h;
    g.x0 = window.xmin;
    g.y0 = window.ymin;
    g.nx = (int)std::ceil(window.width() / h - 1e-12);
    g.ny = (int)std::ceil(window.height() / h - 1e-12);
    if (g.nx <= 0 || g.ny <= 0) throw ConfigError("empty grid window");
    return g;
}

ScalarField::ScalarField(const Grid& g)
    : grid_(g), values_(g.size(), kNaN), mask_(g.size(), 0) {}

void ScalarField::unset(int i, int j) {
    values_[idx(i, j)] = kNaN;
    mask_[idx(i, j)] = 0;
}

long ScalarField::masked_count() const {
    long c = 0;
    for (auto m : mask_) c += m;
    return c;
}

std::optional<double> ScalarField::interpolate(Vec2 p) const {
    const double u = (p.x - grid_.x0) / grid_.h - 0.5;
    const double v = (p.y - grid_.y0) / grid_.h - 0.5;
    const double fi = std::floor(u);
    const double fj = std::floor(v);
    int i0 = (int)fi, j0 = (int)fj;
    double fx = u - fi, fy = v - fj;
    // Exact-hit fast path keeps mirror-symmetric lookups bitwise exact.
    if (fx == 0.0 && fy == 0.0) {
        if (i0 >= 0 && i0 < grid_.nx && j0 >= 0 && j0 < grid_.ny && masked(i0, j0))
            return value(i0, j0);
    }

    double vals[4];
    bool have[4];
    Vec2 centers[4];
    int n_have = 0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const int i = i0 + a, j = j0 + b;
            const int s = 2 * b + a;
            const bool ok =
                i >= 0 && i < grid_.nx && j >= 0 && j < grid_.ny && masked(i, j);
            have[s] = ok;
            vals[s] = ok ? value(i, j) : 0.0;
            centers[s] = grid_.center(i, j);
            n_have += ok;
        }
    }
    if (n_have == 0) return std::nullopt;
    if (n_have < 4) {
        // Constant extrapolation: missing corners take the nearest stored one.
        for (int s = 0; s < 4; ++s) {
            if (have[s]) continue;
            double best = std::numeric_limits<double>::max();
            int pick = -1;
            for (int t = 0; t < 4; ++t) {
                if (!have[t]) continue;
                const double dd = (centers[s] - centers[t]).norm2();
                if (dd < best) { best = dd; pick = t; }
            }
            vals[s] = vals[pick];
        }
    }
    const double w00 = (1 - fx) * (1 - fy), w10 = fx * (1 - fy);
    const double w01 = (1 - fx) * fy, w11 = fx * fy;
    return w00 * vals[0] + w10 * vals[1] + w01 * vals[2] + w11 * vals[3];
}

ScalarField ScalarField::sample(const Grid& g,
                                const std::function<double(Vec2)>& f,
                                const std::function<bool(Vec2)>& inside) {
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 c = g.center(i, j);
            if (inside(c)) out.set(i, j, f(c));
        }
    }
    return out;
}

VectorField::VectorField(ScalarField a, ScalarField b)
    : c1(std::move(a)), c2(std::move(b)) {
    if (c1.grid().nx != c2.grid().nx || c1.grid().ny != c2.grid().ny)
        throw ConfigError("vector components must share a grid");
}

VectorField VectorField::sample(const Grid& g,
                                const std::function<Vec2(Vec2)>& f,
                                const std::function<bool(Vec2)>& inside) {
    ScalarField a(g), b(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 c = g.center(i, j);
            if (inside(c)) {
                const Vec2 v = f(c);
                a.set(i, j, v.x);
                b.set(i, j, v.y);
            }
        }
    }
    return {std::move(a), std::move(b)};
}

ScalarField linear_combination(double a, const ScalarField& f, double b,
                               const ScalarField& g) {
    if (f.grid().nx != g.grid().nx || f.grid().ny != g.grid().ny)
        throw ConfigError("linear_combination requires a shared grid");
    ScalarField out(f.grid());
    for (int j = 0; j < f.ny(); ++j)
        for (int i = 0; i < f.nx(); ++i)
            if (f.masked(i, j) && g.masked(i, j))
                out.set(i, j, a * f.value(i, j) + b * g.value(i, j));
    return out;
}

ScalarField multiply(const ScalarField& f, const ScalarField& g) {
    if (f.grid().nx != g.grid().nx || f.grid().ny != g.grid().ny)
        throw ConfigError("multiply requires a shared grid");
    ScalarField out(f.grid());
    for (int j = 0; j < f.ny(); ++j)
        for (int i = 0; i < f.nx(); ++i)
            if (f.masked(i, j) && g.masked(i, j))
                out.set(i, j, f.value(i, j) * g.value(i, j));
    return out;
}

}  // namespace bmoext
