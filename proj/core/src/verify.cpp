#include "bmoext/verify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <sstream>

#include "bmoext/covering.hpp"
#include "bmoext/rng.hpp"
#include "bmoext/vector_extension.hpp"

namespace bmoext {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

CheckResult check(const std::string& name, bool passed, double measured,
                  double threshold, const std::string& detail = "") {
    return {name, passed, measured, threshold, detail};
}

ScalarField random_field(const Grid& g, const Domain& domain, Rng& rng) {
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (domain.signed_distance(g.center(i, j)) > 0)
                f.set(i, j, rng.uniform(-1.0, 1.0));
    return f;
}

Grid padded_grid(const Grid& g, int pad) {
    Grid t = g;
    t.x0 -= pad * g.h;
    t.y0 -= pad * g.h;
    t.nx += 2 * pad;
    t.ny += 2 * pad;
    return t;
}

ExtensionResult extend_padded(const ScalarField& v, const Domain& domain,
                              double rho) {
    ExtensionConfig ec;
    ec.rho = rho;
    ec.target = padded_grid(v.grid(), (int)std::ceil(2 * rho / v.h()) + 1);
    return bmo_extend(v, domain, ec);
}

double max_restriction_diff(const ScalarField& v, const ScalarField& ext) {
    const auto [oi, oj] = v.grid().offset_in(ext.grid());
    double m = 0;
    for (int j = 0; j < v.ny(); ++j)
        for (int i = 0; i < v.nx(); ++i)
            if (v.masked(i, j))
                m = std::max(m, std::abs(ext.value(i + (int)oi, j + (int)oj) -
                                         v.value(i, j)));
    return m;
}

std::vector<Domain> catalog() {
    return {Domain::half_plane(), Domain::disk({0, 0}, 1.0),
            Domain::strip(0.0, 1.0), Domain::perturbed_strip(0.05, 2.0)};
}

BoundaryPoint random_anchor(const Domain& d, Rng& rng) {
    switch (d.shape()) {
        case Shape::half_plane:
            return d.boundary_frame(0, rng.uniform(0.0, 4.0));
        case Shape::disk:
            return d.boundary_frame(0, rng.uniform(-kPi, kPi));
        case Shape::strip:
            return d.boundary_frame((int)rng.below(2), rng.uniform(0.0, 4.0));
        case Shape::perturbed_strip:
            return d.boundary_frame(0, rng.uniform(0.0, 4.0));
    }
    return d.boundary_frame(0, 0.0);
}

// ---- criterion runners ----------------------------------------------------

std::vector<CheckResult> crit_unit_integral(const VerifyConfig&) {
    const double v = log_layer_unit_integral(1.0 / 512);
    return {check("unit-window |log| integral", std::abs(v - 1.0) <= 0.01, v,
                  0.01, "|value - 1| vs tolerance, h=1/512")};
}

std::vector<CheckResult> crit_log_layer(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    double prev = 0;
    bool increasing = true;
    LogLayerResult fine;
    for (double h : {1.0 / 128, 1.0 / 256, 1.0 / 512}) {
        LogLayerResult r = example_log_layer(0.25, h, cfg.threads);
        if (r.max_abs <= prev) increasing = false;
        prev = r.max_abs;
        if (h == 1.0 / 512) fine = std::move(r);
    }
    out.push_back(check("log-layer b_inf <= 2.1", fine.b_inf <= 2.1, fine.b_inf, 2.1));
    out.push_back(check("log-layer support in {1<x2<4}", fine.support_ok,
                        fine.support_ok ? 1 : 0, 1));
    out.push_back(check("log-layer max|g| >= 4 at h=1/512", fine.max_abs >= 4.0,
                        fine.max_abs, 4.0));
    out.push_back(check("log-layer max|g| grows under refinement", increasing,
                        increasing ? 1 : 0, 1, "h in {1/128,1/256,1/512}"));
    return out;
}

std::vector<CheckResult> crit_restriction(const VerifyConfig& cfg) {
    Rng rng(cfg.seed);
    double worst = 0;
    const Grid g = make_grid({0, 0, 1, 1}, 1.0 / 64);
    for (const Domain& d : {Domain::half_plane(), Domain::strip(0.0, 1.0)}) {
        for (int k = 0; k < 10; ++k) {
            const ScalarField v = random_field(g, d, rng);
            const ExtensionResult ext = extend_padded(v, d, 0.1);
            worst = std::max(worst, max_restriction_diff(v, ext.extended));
        }
    }
    return {check("restriction identity exact", worst == 0.0, worst, 0.0,
                  "10 random fields on half_plane and strip")};
}

std::vector<CheckResult> crit_support(const VerifyConfig& cfg) {
    Rng rng(cfg.seed + 1);
    std::vector<CheckResult> out;
    const Grid g = make_grid({0, 0, 1, 1}, 1.0 / 64);
    for (const Domain& d : {Domain::half_plane(), Domain::strip(0.0, 1.0)}) {
        for (double rho : {0.05, 0.1, 0.25}) {
            const ScalarField v = random_field(g, d, rng);
            const ExtensionResult ext = extend_padded(v, d, rho);
            const bool ok =
                support_within(ext.extended, d, 2 * rho + g.h);
            out.push_back(check("support " + shape_name(d.shape()) + " rho=" +
                                    format_value(rho),
                                ok, ok ? 1 : 0, 1, "d(x,closure) < 2rho+h"));
        }
    }
    return out;
}

std::vector<CheckResult> crit_linearity(const VerifyConfig& cfg) {
    Rng rng(cfg.seed + 2);
    const Grid g = make_grid({0, 0, 1, 1}, 1.0 / 64);
    const Domain d = Domain::strip(0.0, 1.0);
    double worst = 0;
    for (int k = 0; k < 3; ++k) {
        const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
        const ScalarField v = random_field(g, d, rng);
        const ScalarField w = random_field(g, d, rng);
        const ScalarField vw = linear_combination(a, v, b, w);
        const ExtensionResult ev = extend_padded(v, d, 0.1);
        const ExtensionResult ew = extend_padded(w, d, 0.1);
        const ExtensionResult evw = extend_padded(vw, d, 0.1);
        for (int j = 0; j < evw.extended.ny(); ++j)
            for (int i = 0; i < evw.extended.nx(); ++i)
                worst = std::max(
                    worst, std::abs(evw.extended.value(i, j) -
                                    (a * ev.extended.value(i, j) +
                                     b * ew.extended.value(i, j))));
    }
    return {check("linearity of the extension", worst <= 1e-12, worst, 1e-12,
                  "sup |ext(av+bw) - a ext(v) - b ext(w)|")};
}

std::vector<CheckResult> crit_oracle(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    const Domain d = Domain::strip(0.0, 1.0);
    const Grid g = make_grid({0, 0, 1, 1}, 1.0 / 16);
    const double mu = 0.4;
    Rng rng(cfg.seed + 3);

    std::map<std::string, ScalarField> instances;
    auto inside = [&](Vec2 p) { return d.signed_distance(p) > 0; };
    instances.emplace("jump-y-0.25", ScalarField::sample(
        g, [](Vec2 p) { return p.y >= 0.25 ? 1.0 : -1.0; }, inside));
    instances.emplace("jump-y-0.5", ScalarField::sample(
        g, [](Vec2 p) { return p.y >= 0.5 ? 1.0 : -1.0; }, inside));
    instances.emplace("jump-x-0.5", ScalarField::sample(
        g, [](Vec2 p) { return p.x >= 0.5 ? 1.0 : -1.0; }, inside));
    instances.emplace("linear", ScalarField::sample(
        g, [](Vec2 p) { return p.y; }, inside));
    instances.emplace("constant", ScalarField::sample(
        g, [](Vec2) { return 1.0; }, inside));
    instances.emplace("random", random_field(g, d, rng));

    bool exact_all = true;
    double jump_worst_fraction = 1.0;
    for (const auto& [name, f] : instances) {
        const SeminormReport oracle = brute_force_oracle(f, d, mu);
        const SeminormReport stride1 = bmo_seminorm(f, d, mu, SearchStrategy{});
        if (stride1.value != oracle.value) exact_all = false;
        if (name.rfind("jump", 0) == 0) {
            const SeminormReport s4 =
                bmo_seminorm(f, d, mu, SearchStrategy::strided(4, {}));
            if (!(s4.value <= oracle.value)) exact_all = false;
            if (oracle.value > 0)
                jump_worst_fraction =
                    std::min(jump_worst_fraction, s4.value / oracle.value);
        }
    }
    out.push_back(check("stride-1 equals oracle exactly", exact_all,
                        exact_all ? 1 : 0, 1, "all 16x16 instances"));
    out.push_back(check("stride-4 >= 0.8 oracle on jumps",
                        jump_worst_fraction >= 0.8, jump_worst_fraction, 0.8));
    return out;
}

std::vector<CheckResult> crit_closed_forms(const VerifyConfig&) {
    std::vector<CheckResult> out;
    // constant: exactly zero
    {
        const Domain d = Domain::strip(0.0, 1.0);
        const Grid g = make_grid({0, 0, 1, 1}, 1.0 / 16);
        const ScalarField f = ScalarField::sample(
            g, [](Vec2) { return 3.25; },
            [&](Vec2 p) { return d.signed_distance(p) > 0; });
        const double v = bmo_seminorm(f, d, 0.4).value;
        out.push_back(check("constant oscillation exactly 0", v == 0.0, v, 0.0));
    }
    const Grid g = make_grid({-1, -1, 1, 1}, 1.0 / 256);
    // sign jump, axis-centered ball
    {
        const ScalarField f = ScalarField::sample(
            g, [](Vec2 p) { return p.y >= 0 ? 1.0 : -1.0; },
            [](Vec2) { return true; });
        const double v = mean_oscillation(f, {{0, 0}, 0.5});
        out.push_back(check("sign jump oscillation = 1 +- 2%",
                            std::abs(v - 1.0) <= 0.02, v, 0.02));
    }
    // linear profile
    {
        const ScalarField f = ScalarField::sample(
            g, [](Vec2 p) { return p.y; }, [](Vec2) { return true; });
        const double r = 0.5;
        const double expect = 4 * r / (3 * kPi);
        const double v = mean_oscillation(f, {{0, 0}, r});
        out.push_back(check("linear oscillation = 4r/(3pi) +- 2%",
                            std::abs(v - expect) <= 0.02 * expect, v,
                            0.02 * expect));
    }
    return out;
}

std::vector<CheckResult> crit_partition(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    Rng rng(cfg.seed + 4);
    struct Setup {
        Domain domain;
        Rect bbox;
    };
    const std::vector<Setup> setups = {
        {Domain::half_plane(), {0, -0.5, 2, 0.5}},
        {Domain::disk({0, 0}, 1.0), {-1.3, -1.3, 1.3, 1.3}},
    };
    for (const auto& su : setups) {
        const double rho = 0.1;
        const BoundaryAtlas atlas = build_atlas(su.domain, rho, su.bbox);
        double max_sum_err = 0;
        bool in_range = true;
        long samples = 0;
        while (samples < 10000) {
            Vec2 x;
            if (su.domain.shape() == Shape::half_plane) {
                x = {rng.uniform(3 * rho, 2.0 - 3 * rho),
                     rng.uniform(-0.999 * rho, 0.999 * rho)};
            } else {
                const double phi = rng.uniform(-kPi, kPi);
                const double t = rng.uniform(-0.999 * rho, 0.999 * rho);
                x = Vec2{std::cos(phi), std::sin(phi)} * (1.0 + t);
            }
            ++samples;
            const PartitionWeights pw = partition_weights(atlas, su.domain, x);
            max_sum_err = std::max(max_sum_err, std::abs(pw.sum() - 1.0));
            for (double w : pw.weights)
                if (!(w >= 0.0 && w <= 1.0)) in_range = false;
        }
        const std::string tag = shape_name(su.domain.shape());
        out.push_back(check("partition sum = 1 +- 1e-10 (" + tag + ")",
                            max_sum_err <= 1e-10, max_sum_err, 1e-10,
                            "10^4 band samples"));
        out.push_back(check("partition weights in [0,1] (" + tag + ")", in_range,
                            in_range ? 1 : 0, 1));
        out.push_back(check("neighbor overlap <= 1152 (" + tag + ")",
                            atlas.max_neighbor_count() <= 1152,
                            atlas.max_neighbor_count(), 1152));
    }
    return out;
}

std::vector<CheckResult> crit_chart_bounds(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    Rng rng(cfg.seed + 5);
    const int anchors = 20;
    const int samples = 10000;
    for (const Domain& d : catalog()) {
        const GeometryConstants gc = admissible_rho(d, 0.1);
        const double rho = gc.c_eps;
        std::vector<BoundaryPoint> pts;
        for (int a = 0; a < anchors; ++a) pts.push_back(random_anchor(d, rng));

        auto worst_of = [&](int lo, int hi) {
            double w = 0;
            for (int a = lo; a < hi; ++a) {
                const ChartDeviation dev = chart_deviation(d, pts[a], rho, samples);
                w = std::max({w, dev.forward_dev, dev.inverse_dev});
            }
            return w;
        };
        double worst = 0;
        const int threads = std::max(1, cfg.threads);
        if (threads == 1) {
            worst = worst_of(0, anchors);
        } else {
            std::vector<std::future<double>> futs;
            const int chunk = (anchors + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                const int lo = std::min(anchors, t * chunk);
                const int hi = std::min(anchors, lo + chunk);
                if (lo < hi)
                    futs.push_back(std::async(std::launch::async, worst_of, lo, hi));
            }
            for (auto& f : futs) worst = std::max(worst, f.get());
        }
        const std::string tag = shape_name(d.shape());
        out.push_back(check("chart deviation < eps (" + tag + ")",
                            worst < cfg.chart_epsilon, worst, cfg.chart_epsilon,
                            "rho = c_eps = " + format_value(rho)));
        if (d.shape() == Shape::half_plane)
            out.push_back(check("half-plane deviation <= 1e-8", worst <= 1e-8,
                                worst, 1e-8));
    }
    return out;
}

std::vector<CheckResult> crit_ball_inclusion(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    Rng rng(cfg.seed + 6);
    const double eps = 0.1;
    for (const Domain& d : catalog()) {
        const double L = d.curvature_bound();
        const double bound = L > 0 ? std::min(eps / (8 * L), d.rho0()) : d.rho0();
        const double rho = 0.9 * bound;
        bool all_in = true;
        for (int a = 0; a < 10; ++a) {
            const BoundaryPoint w0 = random_anchor(d, rng);
            for (int k = 0; k < 1000; ++k) {
                const double r = rho * (1 - eps / 2) * std::sqrt(rng.uniform());
                const double phi = rng.uniform(-kPi, kPi);
                const Vec2 x =
                    w0.position + r * Vec2{std::cos(phi), std::sin(phi)};
                if (!neighborhood_contains(d, w0, rho, x)) all_in = false;
            }
        }
        out.push_back(check(
            "ball inclusion (" + shape_name(d.shape()) + ")", all_in,
            all_in ? 1 : 0, 1,
            "10^4 points of B_{rho(1-eps/2)} per shape, rho=" + format_value(rho)));
    }
    return out;
}

std::vector<CheckResult> crit_reflection(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    Rng rng(cfg.seed + 7);

    // bit-exact mirrors on a symmetric half-plane grid
    {
        const Domain d = Domain::half_plane();
        const Grid g = make_grid({-1, -1, 1, 1}, 1.0 / 64);
        const ScalarField v = random_field(g, d, rng);
        const double band = 0.5;
        const ScalarField even = even_extend(v, d, band);
        const ScalarField odd = odd_extend(v, d, band);
        bool exact = true;
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const double y = g.center(i, j).y;
                if (!(y < 0 && -y < band)) continue;
                const int jm = g.ny - 1 - j;  // mirrored row
                if (!v.masked(i, jm)) continue;
                if (even.value(i, j) != v.value(i, jm)) exact = false;
                if (odd.value(i, j) != -v.value(i, jm)) exact = false;
            }
        }
        out.push_back(check("half-plane even/odd mirrors bit-exact", exact,
                            exact ? 1 : 0, 1));
    }

    // reflect involution on every shape
    double worst = 0;
    for (const Domain& d : catalog()) {
        const double band = std::min(d.reach(), 1.0) * 0.9;
        long tested = 0;
        while (tested < 10000) {
            const BoundaryPoint w0 = random_anchor(d, rng);
            const double t = rng.uniform(-0.999, 0.999) * band;
            if (std::abs(t) < 1e-6) continue;
            const Vec2 x = w0.position - t * w0.normal;
            if (!(std::abs(d.signed_distance(x)) < band)) continue;
            ++tested;
            const Vec2 y = reflect_point(d, x, band);
            const Vec2 z = reflect_point(d, y, band);
            worst = std::max(worst, dist(z, x));
        }
    }
    out.push_back(check("reflect involution <= 1e-9", worst <= 1e-9, worst,
                        1e-9, "10^4 band points per shape"));
    return out;
}

double product_sweep_max_ratio(double h, const VerifyConfig& cfg,
                               bool* all_defined) {
    const Domain d = Domain::strip(0.0, 1.0);
    const Grid g = make_grid({0, 0, 2, 1}, h);
    const double gamma = 0.5;
    auto inside = [&](Vec2 p) { return d.signed_distance(p) > 0; };

    CompositeStrategy cs;
    cs.bmo.center_stride = std::max(1, (int)std::llround((1.0 / 16) / h));
    cs.bmo.radii = {0.05, 0.1, 0.2, 0.4};
    cs.bmo.threads = cfg.threads;
    cs.l1.center_spacing = 1.0 / 16;
    cs.b.boundary_samples = 33;
    cs.b.radii = {0.05, 0.1, 0.2, 0.4};

    std::vector<ScalarField> vs;
    vs.push_back(ScalarField::sample(
        g, [](Vec2 p) { return p.y >= 0.5 ? 1.0 : -1.0; }, inside));
    vs.push_back(ScalarField::sample(
        g,
        [&](Vec2 p) { return std::log(std::max(d.signed_distance(p), 1.0 / 64)); },
        inside));

    double max_ratio = 0;
    for (int k : {1, 2, 4, 8}) {
        const ScalarField phi = ScalarField::sample(
            g,
            [&](Vec2 p) { return std::cos(k * p.x) / std::pow((double)k, gamma); },
            inside);
        for (const auto& v : vs) {
            const ProductEstimateReport r =
                verify_product_estimate(phi, v, d, gamma, 0.25, 0.5, cs);
            if (!r.defined || !std::isfinite(r.ratio)) *all_defined = false;
            max_ratio = std::max(max_ratio, r.ratio);
        }
    }
    return max_ratio;
}

std::vector<CheckResult> crit_product_estimate(const VerifyConfig& cfg) {
    bool defined = true;
    const double coarse = product_sweep_max_ratio(1.0 / 64, cfg, &defined);
    const double fine = product_sweep_max_ratio(1.0 / 128, cfg, &defined);
    const double change =
        std::abs(fine - coarse) / std::max(std::max(coarse, fine), 1e-300);
    std::vector<CheckResult> out;
    out.push_back(check("product ratios finite", defined, defined ? 1 : 0, 1,
                        "phi_k = cos(k x1)/k^gamma, k in {1,2,4,8}"));
    out.push_back(check("product max ratio stable under h/2", change <= 0.10,
                        change, 0.10,
                        "coarse=" + format_value(coarse) +
                            " fine=" + format_value(fine)));
    return out;
}

std::map<std::string, double> extension_ratios(const Domain& domain, double h,
                                               const VerifyConfig& cfg) {
    ExperimentConfig ec;
    ec.domain = domain;
    ec.window = {0, 0, 2, 1};
    ec.h = h;
    ec.rhos = {0.05, 0.1, 0.25};
    ec.bmo_radii = {0.05, 0.1, 0.2, 0.4};
    ec.threads = cfg.threads;
    ec.seed = cfg.seed;
    const Report rep = run_extension_experiment(ec);
    std::map<std::string, double> ratios;
    for (const auto& row : rep.table_rows) {
        if (row[8] == "1")  // defined
            ratios[row[0] + "@" + row[1]] = std::stod(row[4]);
    }
    return ratios;
}

std::vector<CheckResult> crit_extension_stability(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    for (const Domain& d : {Domain::half_plane(), Domain::strip(0.0, 1.0)}) {
        const auto coarse = extension_ratios(d, 1.0 / 64, cfg);
        const auto fine = extension_ratios(d, 1.0 / 128, cfg);
        double worst = 0;
        for (const auto& [key, rc] : coarse) {
            auto it = fine.find(key);
            if (it == fine.end()) continue;
            worst = std::max(worst,
                             std::abs(it->second - rc) / std::max(rc, it->second));
        }
        out.push_back(check(
            "extension ratios stable under h/2 (" + shape_name(d.shape()) + ")",
            worst <= 0.10, worst, 0.10, "per-field per-rho relative change"));
    }
    return out;
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
    static const std::vector<Criterion> criteria = {
        {"unit-integral", 1.0, crit_unit_integral},
        {"log-layer-counterexample", 30.0, crit_log_layer},
        {"restriction-identity", 10.0, crit_restriction},
        {"support", 0, crit_support},
        {"linearity", 0, crit_linearity},
        {"oracle-equivalence", 0, crit_oracle},
        {"mean-oscillation-closed-forms", 0, crit_closed_forms},
        {"partition-of-unity", 0, crit_partition},
        {"chart-bounds", 60.0, crit_chart_bounds},
        {"ball-inclusion", 0, crit_ball_inclusion},
        {"reflection-exactness", 0, crit_reflection},
        {"product-estimate-boundedness", 0, crit_product_estimate},
        {"extension-bound-stability", 0, crit_extension_stability},
    };
    return criteria;
}

Report verify_all(const VerifyConfig& config) {
    Report rep;
    rep.id = "verify";
    rep.add_param("chart_epsilon", config.chart_epsilon);
    rep.add_param("seed", format_value((double)config.seed));
    rep.table_header = {"criterion", "passed", "checks"};
    for (const Criterion& c : acceptance_criteria()) {
        const auto checks = c.run(config);
        bool ok = true;
        for (const auto& ch : checks) {
            rep.checks.push_back(ch);
            ok = ok && ch.passed;
        }
        rep.table_rows.push_back(
            {c.name, ok ? "1" : "0", std::to_string(checks.size())});
    }
    return rep;
}

}  // namespace bmoext
