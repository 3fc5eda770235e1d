#include "bmoext/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bmoext {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

double sq(double v) { return v * v; }

}  // namespace

std::string shape_name(Shape s) {
    switch (s) {
        case Shape::half_plane: return "half_plane";
        case Shape::disk: return "disk";
        case Shape::strip: return "strip";
        case Shape::perturbed_strip: return "perturbed_strip";
    }
    return "unknown";
}

Domain Domain::half_plane(double floor_y) {
    Domain d;
    d.shape_ = Shape::half_plane;
    d.floor_y_ = floor_y;
    return d;
}

Domain Domain::disk(Vec2 center, double radius) {
    if (!(radius > 0)) throw ConfigError("disk radius must be positive");
    Domain d;
    d.shape_ = Shape::disk;
    d.center_ = center;
    d.radius_ = radius;
    return d;
}

Domain Domain::strip(double y0, double y1) {
    if (!(y0 < y1)) throw ConfigError("strip requires y0 < y1");
    Domain d;
    d.shape_ = Shape::strip;
    d.y0_ = y0;
    d.y1_ = y1;
    return d;
}

Domain Domain::perturbed_strip(double amplitude, double wavelength,
                               double offset, double phase) {
    if (!(amplitude > 0) || !(wavelength > 0))
        throw ConfigError("perturbed_strip requires positive amplitude and wavelength");
    Domain d;
    d.shape_ = Shape::perturbed_strip;
    d.amplitude_ = amplitude;
    d.wavelength_ = wavelength;
    d.offset_ = offset;
    d.phase_ = phase;
    return d;
}

Domain Domain::flipped() const {
    Domain d = *this;
    d.flipped_ = !flipped_;
    return d;
}

Domain Domain::translated(Vec2 delta) const {
    Domain d = *this;
    switch (shape_) {
        case Shape::half_plane:
            d.floor_y_ += delta.y;
            break;
        case Shape::disk:
            d.center_ = center_ + delta;
            break;
        case Shape::strip:
            d.y0_ += delta.y;
            d.y1_ += delta.y;
            break;
        case Shape::perturbed_strip:
            d.phase_ += delta.x;
            d.offset_ += delta.y;
            break;
    }
    return d;
}

std::string Domain::describe() const {
    std::ostringstream os;
    os << shape_name(shape_);
    switch (shape_) {
        case Shape::half_plane:
            os << "(y>" << floor_y_ << ")";
            break;
        case Shape::disk:
            os << "(c=(" << center_.x << "," << center_.y << "),R=" << radius_ << ")";
            break;
        case Shape::strip:
            os << "(" << y0_ << "," << y1_ << ")";
            break;
        case Shape::perturbed_strip:
            os << "(a=" << amplitude_ << ",lambda=" << wavelength_
               << ",offset=" << offset_ << ")";
            break;
    }
    if (flipped_) os << "[flipped]";
    return os.str();
}

double Domain::wave_height(double s) const {
    return amplitude_ * std::sin(2 * kPi * (s - phase_) / wavelength_) + offset_;
}

double Domain::wave_slope(double s) const {
    const double w = 2 * kPi / wavelength_;
    return amplitude_ * w * std::cos(w * (s - phase_));
}

double Domain::wave_curv(double s) const {
    const double w = 2 * kPi / wavelength_;
    return -amplitude_ * w * w * std::sin(w * (s - phase_));
}

double Domain::wave_nearest(Vec2 x, bool detect_ambiguous) const {
    // The minimizer s* of |x - (s, psi(s))| satisfies |s* - x1| <= |x - (x1, psi(x1))|.
    const double vertical = std::abs(x.y - wave_height(x.x));
    const double window = vertical + wavelength_ / 8.0;
    const int coarse_n = 64;
    const double step = 2 * window / coarse_n;

    auto dist2 = [&](double s) {
        const double dx = x.x - s;
        const double dy = x.y - wave_height(s);
        return dx * dx + dy * dy;
    };
    auto polish = [&](double s0) {
        // Newton on the squared-distance derivative with a bisection fallback.
        double s = s0;
        const double tol = 1e-12 * std::max(1.0, std::abs(s0));
        int it = 0;
        for (; it < 50; ++it) {
            const double psi = wave_height(s);
            const double dpsi = wave_slope(s);
            const double ddpsi = wave_curv(s);
            const double rx = x.x - s;
            const double ry = x.y - psi;
            const double g = -(rx + ry * dpsi);           // d/ds (dist^2)/2
            const double gg = 1.0 + dpsi * dpsi - ry * ddpsi;
            if (gg <= 1e-14) break;
            const double delta = g / gg;
            s -= delta;
            if (std::abs(delta) < tol) {
                s -= 0.0;  // one polish pass below
                const double psi2 = wave_height(s);
                const double dpsi2 = wave_slope(s);
                const double ddpsi2 = wave_curv(s);
                const double g2 = -((x.x - s) + (x.y - psi2) * dpsi2);
                const double gg2 = 1.0 + dpsi2 * dpsi2 - (x.y - psi2) * ddpsi2;
                if (gg2 > 1e-14) s -= g2 / gg2;
                return s;
            }
            if (std::abs(s - s0) > 2 * step) break;  // left the basin
        }
        // Bisection on the derivative over the coarse bracket.
        double lo = s0 - step, hi = s0 + step;
        auto deriv = [&](double t) {
            return -((x.x - t) + (x.y - wave_height(t)) * wave_slope(t));
        };
        double dlo = deriv(lo), dhi = deriv(hi);
        if (dlo > 0 || dhi < 0) {
            throw ProjectionConvergenceError(
                "perturbed_strip projection did not converge", it);
        }
        for (int k = 0; k < 200; ++k) {
            const double mid = 0.5 * (lo + hi);
            if (deriv(mid) < 0) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    // Coarse scan, then polish every local minimum.
    double best_s = x.x, best_d2 = dist2(x.x);
    std::vector<double> d2(coarse_n + 1);
    for (int i = 0; i <= coarse_n; ++i)
        d2[i] = dist2(x.x - window + i * step);
    std::vector<double> candidates;
    for (int i = 0; i <= coarse_n; ++i) {
        const bool left_ok = (i == 0) || d2[i] <= d2[i - 1];
        const bool right_ok = (i == coarse_n) || d2[i] <= d2[i + 1];
        if (left_ok && right_ok)
            candidates.push_back(x.x - window + i * step);
    }
    std::vector<std::pair<double, double>> minima;  // (s, dist)
    for (double c : candidates) {
        const double s = polish(c);
        const double dd = std::sqrt(dist2(s));
        bool dup = false;
        for (auto& m : minima)
            if (std::abs(m.first - s) < 1e-6 * wavelength_) { dup = true; break; }
        if (!dup) minima.emplace_back(s, dd);
        if (dist2(s) < best_d2) { best_d2 = dist2(s); best_s = s; }
    }
    if (detect_ambiguous && minima.size() > 1) {
        std::sort(minima.begin(), minima.end(),
                  [](auto& a, auto& b) { return a.second < b.second; });
        const double d0 = minima[0].second, d1 = minima[1].second;
        if (d1 - d0 <= 1e-9 * std::max(1.0, d0))
            throw AmbiguousProjectionError(
                "two nearest boundary points at equal distance");
        return minima[0].first;
    }
    return best_s;
}

double Domain::signed_distance(Vec2 x) const {
    const double sign = flipped_ ? -1.0 : 1.0;
    switch (shape_) {
        case Shape::half_plane:
            return sign * (x.y - floor_y_);
        case Shape::disk:
            return sign * (radius_ - dist(x, center_));
        case Shape::strip:
            return sign * std::min(x.y - y0_, y1_ - x.y);
        case Shape::perturbed_strip: {
            const double s = wave_nearest(x, false);
            const double d = dist(x, {s, wave_height(s)});
            const double side = x.y >= wave_height(x.x) ? 1.0 : -1.0;
            return sign * side * d;
        }
    }
    return 0;
}

double Domain::curvature_bound() const {
    switch (shape_) {
        case Shape::half_plane:
        case Shape::strip:
            return 0.0;
        case Shape::disk:
            return 1.0 / radius_;
        case Shape::perturbed_strip: {
            const double w = 2 * kPi / wavelength_;
            return amplitude_ * w * w;  // max |psi''|
        }
    }
    return 0;
}

double Domain::reach() const {
    switch (shape_) {
        case Shape::half_plane:
            return kInf;
        case Shape::disk:
            return radius_;
        case Shape::strip:
            return 0.5 * (y1_ - y0_);
        case Shape::perturbed_strip:
            return 1.0 / curvature_bound();  // focal distance of the graph
    }
    return 0;
}

double Domain::graph_window_r() const {
    switch (shape_) {
        case Shape::half_plane:
        case Shape::strip:
            return kInf;
        case Shape::disk:
        case Shape::perturbed_strip:
            return 0.5 * reach();
    }
    return 0;
}

double Domain::graph_window_d() const {
    switch (shape_) {
        case Shape::half_plane:
            return kInf;
        case Shape::strip:
            return 0.5 * (y1_ - y0_);
        case Shape::disk:
        case Shape::perturbed_strip:
            return 0.5 * reach();
    }
    return 0;
}

double Domain::rho0() const {
    const double m = std::min(std::min(graph_window_r(), graph_window_d()),
                              std::min(reach(), 1.0));
    return 0.5 * m;
}

int Domain::boundary_components() const {
    return shape_ == Shape::strip ? 2 : 1;
}

Vec2 Domain::boundary_point(int component, double s) const {
    switch (shape_) {
        case Shape::half_plane:
            return {s, floor_y_};
        case Shape::disk:
            return center_ + radius_ * Vec2{std::cos(s), std::sin(s)};
        case Shape::strip:
            return {s, component == 0 ? y0_ : y1_};
        case Shape::perturbed_strip:
            return {s, wave_height(s)};
    }
    return {0, 0};
}

Vec2 Domain::boundary_velocity(int component, double s) const {
    switch (shape_) {
        case Shape::half_plane:
            return {1, 0};
        case Shape::disk:
            return radius_ * Vec2{-std::sin(s), std::cos(s)};
        case Shape::strip:
            (void)component;
            return {1, 0};
        case Shape::perturbed_strip:
            return {1, wave_slope(s)};
    }
    return {1, 0};
}

BoundaryPoint Domain::boundary_frame(int component, double s) const {
    BoundaryPoint bp;
    bp.component = component;
    bp.param = s;
    bp.position = boundary_point(component, s);
    Vec2 outward{0, 0};
    switch (shape_) {
        case Shape::half_plane:
            outward = {0, -1};
            break;
        case Shape::disk:
            outward = (bp.position - center_).normalized();
            break;
        case Shape::strip:
            outward = component == 0 ? Vec2{0, -1} : Vec2{0, 1};
            break;
        case Shape::perturbed_strip: {
            const double m = wave_slope(s);
            outward = Vec2{m, -1} * (1.0 / std::sqrt(1 + m * m));
            break;
        }
    }
    if (flipped_) outward = -outward;
    bp.normal = outward;
    bp.tangent = bp.inward().rot_cw();
    return bp;
}

BoundaryPoint Domain::boundary_projection(Vec2 x) const {
    const double d = signed_distance(x);
    if (!(std::abs(d) < reach()))
        throw OutsideReachError("point at |d|=" + std::to_string(std::abs(d)) +
                                " is outside the unique-projection band");
    switch (shape_) {
        case Shape::half_plane:
            return boundary_frame(0, x.x);
        case Shape::disk: {
            const Vec2 r = x - center_;
            return boundary_frame(0, std::atan2(r.y, r.x));
        }
        case Shape::strip: {
            const double lo = x.y - y0_, hi = y1_ - x.y;
            if (lo == hi)
                throw AmbiguousProjectionError("point on the strip midline");
            return boundary_frame(lo < hi ? 0 : 1, x.x);
        }
        case Shape::perturbed_strip:
            return boundary_frame(0, wave_nearest(x, true));
    }
    throw Error("unreachable");
}

Vec2 Domain::grad_distance(Vec2 x) const {
    switch (shape_) {
        case Shape::half_plane:
            return flipped_ ? Vec2{0, -1} : Vec2{0, 1};
        case Shape::disk: {
            const Vec2 r = x - center_;
            const Vec2 g = r.norm() > 0 ? -r.normalized() : Vec2{0, 0};
            return flipped_ ? -g : g;
        }
        case Shape::strip: {
            const Vec2 g = (x.y - y0_) <= (y1_ - x.y) ? Vec2{0, 1} : Vec2{0, -1};
            return flipped_ ? -g : g;
        }
        case Shape::perturbed_strip:
            return boundary_projection(x).inward();
    }
    return {0, 0};
}

std::vector<BoundaryPoint> Domain::sample_boundary(const Rect& window,
                                                   int per_component) const {
    std::vector<BoundaryPoint> out;
    if (per_component < 1) return out;
    for (int c = 0; c < boundary_components(); ++c) {
        double s_lo = 0, s_hi = 0;
        if (shape_ == Shape::disk) {
            s_lo = -kPi;
            s_hi = kPi;
        } else {
            s_lo = window.xmin;
            s_hi = window.xmax;
        }
        for (int i = 0; i < per_component; ++i) {
            const double s = s_lo + (s_hi - s_lo) * (i + 0.5) / per_component;
            BoundaryPoint bp = boundary_frame(c, s);
            if (window.inflated(1e-12).contains(bp.position)) out.push_back(bp);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// NormalChart

NormalChart::NormalChart(const Domain& domain, const BoundaryPoint& anchor,
                         double rho)
    : domain_(domain), anchor_(anchor), rho_(rho) {
    if (!(rho > 0)) throw ConfigError("chart scale must be positive");
}

double NormalChart::solve_boundary_param(double tangential) const {
    // Find s near the anchor with (gamma(s) - w0) . tangent = tangential.
    // The map is monotone at chart scale; Newton with bisection fallback.
    const int comp = anchor_.component;
    const Vec2 w0 = anchor_.position;
    const Vec2 tau = anchor_.tangent;
    auto g = [&](double s) {
        return (domain_.boundary_point(comp, s) - w0).dot(tau) - tangential;
    };
    double s = anchor_.param;
    const double scale = std::max(1.0, std::abs(anchor_.param)) ;
    for (int it = 0; it < 50; ++it) {
        const double gi = g(s);
        const double gp = domain_.boundary_velocity(comp, s).dot(tau);
        if (std::abs(gp) < 1e-14) break;
        const double delta = gi / gp;
        s -= delta;
        if (std::abs(delta) < 1e-14 * scale) {
            const double gi2 = g(s);
            const double gp2 = domain_.boundary_velocity(comp, s).dot(tau);
            if (std::abs(gp2) > 1e-14) s -= gi2 / gp2;
            return s;
        }
    }
    // Bracketed bisection fallback.
    const double speed = domain_.boundary_velocity(comp, anchor_.param).norm();
    double w = 4 * std::abs(tangential) / std::max(speed, 1e-12) + 1e-9;
    double lo = anchor_.param - w, hi = anchor_.param + w;
    double glo = g(lo), ghi = g(hi);
    if (glo > 0) { std::swap(lo, hi); std::swap(glo, ghi); }
    if (!(glo <= 0 && ghi >= 0))
        throw ProjectionConvergenceError("chart boundary solve failed", 50);
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

Vec2 NormalChart::forward_unchecked(Vec2 eta) const {
    const double s = solve_boundary_param(eta.x);
    const BoundaryPoint b = domain_.boundary_frame(anchor_.component, s);
    return b.position + eta.y * b.inward();
}

Vec2 NormalChart::forward(Vec2 eta) const {
    if (!(std::abs(eta.x) < rho_ && std::abs(eta.y) < rho_))
        throw OutsideChartError("eta outside V_rho");
    return forward_unchecked(eta);
}

Vec2 NormalChart::inverse_unchecked(Vec2 x) const {
    const BoundaryPoint p = domain_.boundary_projection(x);
    const double t = (p.position - anchor_.position).dot(anchor_.tangent);
    return {t, domain_.signed_distance(x)};
}

bool NormalChart::contains(Vec2 x) const {
    const double d = domain_.signed_distance(x);
    if (!(std::abs(d) < rho_) || !(std::abs(d) < domain_.reach())) return false;
    BoundaryPoint p;
    try {
        p = domain_.boundary_projection(x);
    } catch (const Error&) {
        return false;
    }
    const Vec2 rel = p.position - anchor_.position;
    const double t = rel.dot(anchor_.tangent);
    const double n = rel.dot(anchor_.inward());
    return std::abs(t) < rho_ && std::abs(t) < domain_.graph_window_r() &&
           std::abs(n) < domain_.graph_window_d();
}

Vec2 NormalChart::inverse(Vec2 x) const {
    if (!contains(x))
        throw NotInNeighborhoodError("point outside the chart neighborhood");
    return inverse_unchecked(x);
}

Vec2 NormalChart::local_forward(Vec2 eta) const {
    const Vec2 p = forward_unchecked(eta) - anchor_.position;
    return {p.dot(anchor_.tangent), p.dot(anchor_.inward())};
}

Vec2 NormalChart::local_inverse(Vec2 xloc) const {
    const Vec2 x = anchor_.position + xloc.x * anchor_.tangent +
                   xloc.y * anchor_.inward();
    return inverse_unchecked(x);
}

ChartDeviation chart_deviation(const Domain& domain, const BoundaryPoint& w0,
                               double rho, int n_samples) {
    if (n_samples < 1) throw ConfigError("chart_deviation needs n_samples >= 1");
    const NormalChart chart(domain, w0, rho);
    const double step = 1e-5 * rho;
    const double margin = 0.999 * rho - 2 * step;
    const int k = std::max(1, (int)std::ceil(std::sqrt((double)n_samples)));

    ChartDeviation dev;
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            const Vec2 eta{-margin + 2 * margin * (a + 0.5) / k,
                           -margin + 2 * margin * (b + 0.5) / k};
            // grad F by central differences, in the anchor frame
            const Vec2 fx1 = chart.local_forward({eta.x + step, eta.y});
            const Vec2 fx0 = chart.local_forward({eta.x - step, eta.y});
            const Vec2 fy1 = chart.local_forward({eta.x, eta.y + step});
            const Vec2 fy0 = chart.local_forward({eta.x, eta.y - step});
            const double m11 = (fx1.x - fx0.x) / (2 * step);
            const double m21 = (fx1.y - fx0.y) / (2 * step);
            const double m12 = (fy1.x - fy0.x) / (2 * step);
            const double m22 = (fy1.y - fy0.y) / (2 * step);
            dev.forward_dev = std::max(
                {dev.forward_dev, std::abs(m11 - 1), std::abs(m21),
                 std::abs(m12), std::abs(m22 - 1)});
            // grad F^{-1} at the image point
            const Vec2 xloc = chart.local_forward(eta);
            const Vec2 ix1 = chart.local_inverse({xloc.x + step, xloc.y});
            const Vec2 ix0 = chart.local_inverse({xloc.x - step, xloc.y});
            const Vec2 iy1 = chart.local_inverse({xloc.x, xloc.y + step});
            const Vec2 iy0 = chart.local_inverse({xloc.x, xloc.y - step});
            const double n11 = (ix1.x - ix0.x) / (2 * step);
            const double n21 = (ix1.y - ix0.y) / (2 * step);
            const double n12 = (iy1.x - iy0.x) / (2 * step);
            const double n22 = (iy1.y - iy0.y) / (2 * step);
            dev.inverse_dev = std::max(
                {dev.inverse_dev, std::abs(n11 - 1), std::abs(n21),
                 std::abs(n12), std::abs(n22 - 1)});
        }
    }
    return dev;
}

GeometryConstants admissible_rho(const Domain& domain, double epsilon) {
    if (!(epsilon > 0 && epsilon < 1))
        throw ConfigError("epsilon must lie in (0,1)");
    const int n = 2;
    auto factorial = [](int m) {
        double f = 1;
        for (int i = 2; i <= m; ++i) f *= i;
        return f;
    };
    GeometryConstants gc;
    gc.curvature_bound = domain.curvature_bound();
    gc.graph_window_r = domain.graph_window_r();
    gc.graph_window_d = domain.graph_window_d();
    gc.rho0 = domain.rho0();
    gc.reach = domain.reach();
    gc.epsilon = epsilon;
    const double denom =
        gc.curvature_bound * sq(factorial(n + 1)) * std::ldexp(1.0, 2 * n + 5);
    const double first = gc.curvature_bound > 0 ? epsilon / denom : kInf;
    gc.c_eps = std::min(first, gc.rho0 / 2);
    gc.c_star = gc.c_eps / 64;
    gc.c_star2 = gc.c_eps / 96;
    return gc;
}

}  // namespace bmoext
