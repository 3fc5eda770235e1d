#include "bmoext/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bmoext {

namespace {
using json = nlohmann::json;
constexpr double kPi = 3.14159265358979323846;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool Report::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

void Report::add_param(const std::string& key, const std::string& value) {
    params.emplace_back(key, value);
}

void Report::add_param(const std::string& key, double value) {
    params.emplace_back(key, format_value(value));
}

namespace {
std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') { out += '\\'; out += c; }
        else if (c == '\n') out += "\\n";
        else out += c;
    }
    return out;
}
}  // namespace

std::string Report::to_json() const {
    std::ostringstream os;
    os << "{\n  \"id\": \"" << json_escape(id) << "\",\n  \"params\": {";
    for (size_t i = 0; i < params.size(); ++i)
        os << (i ? ", " : "") << "\"" << json_escape(params[i].first) << "\": \""
           << json_escape(params[i].second) << "\"";
    os << "},\n  \"table\": {\"columns\": [";
    for (size_t i = 0; i < table_header.size(); ++i)
        os << (i ? ", " : "") << "\"" << json_escape(table_header[i]) << "\"";
    os << "], \"rows\": [";
    for (size_t r = 0; r < table_rows.size(); ++r) {
        os << (r ? ", " : "") << "[";
        for (size_t c = 0; c < table_rows[r].size(); ++c)
            os << (c ? ", " : "") << "\"" << json_escape(table_rows[r][c]) << "\"";
        os << "]";
    }
    os << "]},\n  \"checks\": [";
    for (size_t i = 0; i < checks.size(); ++i) {
        const auto& c = checks[i];
        os << (i ? ", " : "") << "{\"name\": \"" << json_escape(c.name)
           << "\", \"passed\": " << (c.passed ? "true" : "false")
           << ", \"measured\": \"" << format_value(c.measured)
           << "\", \"threshold\": \"" << format_value(c.threshold)
           << "\", \"detail\": \"" << json_escape(c.detail) << "\"}";
    }
    os << "],\n  \"all_passed\": " << (all_passed() ? "true" : "false")
       << "\n}\n";
    return os.str();
}

std::string Report::to_csv() const {
    std::ostringstream os;
    for (size_t i = 0; i < table_header.size(); ++i)
        os << (i ? "," : "") << table_header[i];
    os << "\n";
    for (const auto& row : table_rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

DomainSpec parse_domain_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad domain config: ") + e.what());
    }
    DomainSpec spec;
    const std::string shape = j.value("shape", "");
    try {
        if (shape == "half_plane") {
            spec.domain = Domain::half_plane(j.value("floor", 0.0));
        } else if (shape == "disk") {
            Vec2 c{0, 0};
            if (j.contains("center")) {
                c.x = j["center"].at(0).get<double>();
                c.y = j["center"].at(1).get<double>();
            }
            spec.domain = Domain::disk(c, j.at("radius").get<double>());
        } else if (shape == "strip") {
            spec.domain =
                Domain::strip(j.at("y0").get<double>(), j.at("y1").get<double>());
        } else if (shape == "perturbed_strip") {
            spec.domain = Domain::perturbed_strip(
                j.at("amplitude").get<double>(), j.at("wavelength").get<double>(),
                j.value("offset", 0.0), j.value("phase", 0.0));
        } else {
            throw ConfigError("bad domain config: unknown shape '" + shape + "'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad domain config: ") + e.what());
    }
    if (j.value("flip", false)) spec.domain = spec.domain.flipped();
    spec.epsilon = j.value("epsilon", 0.1);
    if (!(spec.epsilon > 0 && spec.epsilon < 1))
        throw ConfigError("bad domain config: epsilon must lie in (0,1)");
    return spec;
}

DomainSpec read_domain_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open domain config " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_domain_config(ss.str());
}

std::string domain_config_to_json(const DomainSpec& spec) {
    std::ostringstream os;
    const Domain& d = spec.domain;
    os << "{\"shape\":\"" << shape_name(d.shape()) << "\"";
    switch (d.shape()) {
        case Shape::half_plane:
            break;
        case Shape::disk:
            os << ",\"center\":[" << format_value(d.disk_center().x) << ","
               << format_value(d.disk_center().y)
               << "],\"radius\":" << format_value(d.disk_radius());
            break;
        case Shape::strip:
            os << ",\"y0\":" << format_value(d.strip_y0())
               << ",\"y1\":" << format_value(d.strip_y1());
            break;
        case Shape::perturbed_strip:
            os << ",\"amplitude\":" << format_value(d.wave_amplitude())
               << ",\"wavelength\":" << format_value(d.wave_length())
               << ",\"offset\":" << format_value(d.wave_offset())
               << ",\"phase\":" << format_value(d.wave_phase());
            break;
    }
    if (d.is_flipped()) os << ",\"flip\":true";
    os << ",\"epsilon\":" << format_value(spec.epsilon) << "}";
    return os.str();
}

const std::vector<std::string> kBuiltinFieldNames = {
    "constant", "linear", "jump", "logdist", "oscillatory"};

ScalarField builtin_field(const std::string& name, const Grid& grid,
                          const Domain& domain) {
    const Rect win = grid.window();
    const double ymid = 0.5 * (win.ymin + win.ymax);
    auto inside = [&](Vec2 p) { return domain.signed_distance(p) > 0; };
    if (name == "constant")
        return ScalarField::sample(grid, [](Vec2) { return 1.0; }, inside);
    if (name == "linear")
        return ScalarField::sample(grid, [](Vec2 p) { return p.y; }, inside);
    if (name == "jump")
        return ScalarField::sample(
            grid, [&](Vec2 p) { return p.y >= ymid ? 1.0 : -1.0; }, inside);
    if (name == "logdist")
        return ScalarField::sample(
            grid,
            [&](Vec2 p) {
                return std::log(std::max(domain.signed_distance(p), 1.0 / 64));
            },
            inside);
    if (name == "oscillatory")
        return ScalarField::sample(
            grid,
            [](Vec2 p) { return std::cos(4 * kPi * p.x) * std::cos(4 * kPi * p.y); },
            inside);
    throw ConfigError("unknown built-in field '" + name + "'");
}

SearchStrategy ExperimentConfig::bmo_strategy() const {
    SearchStrategy s;
    s.center_stride = std::max(1, (int)std::llround(center_spacing / h));
    s.radii = bmo_radii;
    s.threads = threads;
    return s;
}

CompositeStrategy ExperimentConfig::composite_strategy() const {
    CompositeStrategy s;
    s.bmo = bmo_strategy();
    s.l1.center_spacing = center_spacing;
    s.b.boundary_samples = 65;
    s.b.radii = bmo_radii;
    return s;
}

Report run_extension_experiment(const ExperimentConfig& config) {
    Report rep;
    rep.id = "extension-experiment";
    rep.add_param("domain", config.domain.describe());
    rep.add_param("h", config.h);
    rep.add_param("window", "[" + format_value(config.window.xmin) + "," +
                                format_value(config.window.xmax) + "]x[" +
                                format_value(config.window.ymin) + "," +
                                format_value(config.window.ymax) + "]");
    rep.add_param("seed", format_value((double)config.seed));
    rep.table_header = {"field",      "rho",        "norm_ext", "norm_in",
                        "ratio",      "in_regime",  "restriction_ok",
                        "support_ok", "ratio_defined"};

    const Grid grid = make_grid(config.window, config.h);
    const CompositeStrategy cs = config.composite_strategy();
    const double inf = std::numeric_limits<double>::infinity();

    struct FitRow { double log_rho, log_ratio; };
    std::vector<std::pair<std::string, std::vector<FitRow>>> fits;

    for (const auto& name : kBuiltinFieldNames) {
        const ScalarField v = builtin_field(name, grid, config.domain);
        const CompositeNorms nv =
            composite_norms(v, config.domain, config.mu, config.delta, config.nu, cs);
        std::vector<FitRow> fit;
        for (double rho : config.rhos) {
            const int pad = (int)std::ceil(2 * rho / config.h) + 1;
            Grid target = grid;
            target.x0 -= pad * config.h;
            target.y0 -= pad * config.h;
            target.nx += 2 * pad;
            target.ny += 2 * pad;
            ExtensionConfig ec;
            ec.rho = rho;
            ec.target = target;
            ec.epsilon = config.epsilon;
            const ExtensionResult ext = bmo_extend(v, config.domain, ec);

            // restriction: interior target cells must copy v bitwise
            const auto [oi, oj] = grid.offset_in(target);
            bool restriction_ok = true;
            for (int j = 0; j < grid.ny && restriction_ok; ++j)
                for (int i = 0; i < grid.nx; ++i)
                    if (v.masked(i, j) &&
                        ext.extended.value(i + (int)oi, j + (int)oj) !=
                            v.value(i, j)) {
                        restriction_ok = false;
                        break;
                    }
            const bool support_ok =
                support_within(ext.extended, config.domain, 2 * rho + config.h);

            const double norm_ext =
                bmo_seminorm_window(ext.extended, inf, cs.bmo).value +
                l1_ul_norm(ext.extended, config.domain, BandRegion::all,
                           config.delta, cs.l1)
                    .value;
            const double norm_in = nv.bmo_inf_inf;
            const bool defined = norm_in > 0;
            const double ratio = defined ? norm_ext / norm_in : 0.0;
            if (defined && ratio > 0)
                fit.push_back({std::log(rho), std::log(ratio)});

            rep.table_rows.push_back(
                {name, format_value(rho), format_value(norm_ext),
                 format_value(norm_in), format_value(ratio),
                 ext.in_theorem_regime ? "1" : "0", restriction_ok ? "1" : "0",
                 support_ok ? "1" : "0", defined ? "1" : "0"});

            CheckResult cr;
            cr.name = name + "/rho=" + format_value(rho);
            cr.passed = restriction_ok && support_ok;
            cr.measured = ratio;
            cr.threshold = 0;
            cr.detail = "restriction and support";
            rep.checks.push_back(cr);
        }
        fits.emplace_back(name, std::move(fit));
    }

    // least-squares slope of log(ratio) against log(rho), per field
    for (const auto& [name, rows] : fits) {
        if (rows.size() < 2) continue;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& r : rows) {
            sx += r.log_rho;
            sy += r.log_ratio;
            sxx += r.log_rho * r.log_rho;
            sxy += r.log_rho * r.log_ratio;
        }
        const double n = (double)rows.size();
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        rep.add_param("slope/" + name, slope);
    }
    return rep;
}

double log_layer_unit_integral(double h) {
    const Grid g = make_grid({-0.5, 0.0, 0.5, 1.0}, h);
    const Domain layer = Domain::strip(0.0, 1.0);
    const ScalarField f = ScalarField::sample(
        g, [](Vec2 p) { return std::log(p.y); },
        [&](Vec2 p) { return layer.signed_distance(p) > 0; });
    return integrate_window(f, {-0.5, 0.0, 0.5, 1.0}, Integrand::abs);
}

LogLayerResult example_log_layer(double rho, double h, int threads) {
    if (!(rho > 0 && rho <= 0.25))
        throw ConfigError("example_log_layer requires rho in (0, 1/4]");
    const Domain layer = Domain::strip(0.0, 1.0);
    const Domain half = Domain::half_plane();

    LogLayerResult out;
    out.unit_integral = log_layer_unit_integral(h);

    // the layer field and its extension across both layer boundaries
    const Grid gin = make_grid({-8.0, -1.0, 8.0, 2.0}, h);
    const ScalarField f = ScalarField::sample(
        gin, [](Vec2 p) { return std::log(p.y); },
        [&](Vec2 p) { return layer.signed_distance(p) > 0; });
    ExtensionConfig ec;
    ec.rho = rho;
    ScalarField extended;
    {
        ExtensionResult ext = bmo_extend(f, layer, ec);
        extended = std::move(ext.extended);
    }

    // shift up by 2 and restrict to the upper half plane
    const Grid gout = make_grid({-8.0, 0.0, 8.0, 8.0}, h);
    const long shift = (long)std::llround(2.0 / h);
    const auto [oi, oj] = gin.offset_in(gout);
    ScalarField g_field(gout);
    for (int j = 0; j < gout.ny; ++j) {
        for (int i = 0; i < gout.nx; ++i) {
            const long si = i - oi, sj = j - shift - oj;
            double v = 0.0;
            if (si >= 0 && si < gin.nx && sj >= 0 && sj < gin.ny)
                v = extended.value((int)si, (int)sj);
            g_field.set(i, j, v);
        }
    }
    extended = ScalarField{};  // release before the sup searches

    // support of g inside {1 < x2 < 4}
    out.support_ok = true;
    double max_abs = 0;
    for (int j = 0; j < gout.ny; ++j) {
        for (int i = 0; i < gout.nx; ++i) {
            const double v = g_field.value(i, j);
            if (v == 0.0) continue;
            const double y = gout.center(i, j).y;
            if (!(y > 1.0 && y < 4.0)) out.support_ok = false;
            max_abs = std::max(max_abs, std::abs(v));
        }
    }
    out.max_abs = max_abs;

    // boundary-growth estimate over balls anchored on x2 = 0
    BoundaryBallStrategy bs;
    bs.boundary_samples = 17;
    for (int m = 1; m <= 8; ++m) bs.radii.push_back(m * h);
    for (double r = 0.25; r < 18.0; r += 0.25) bs.radii.push_back(r);
    const double inf = std::numeric_limits<double>::infinity();
    out.b_inf = b_seminorm(g_field, half, inf, bs).value;

    SearchStrategy ss;
    ss.center_stride = std::max(1, (int)std::llround(0.5 / h));
    ss.radii = {0.25, 0.5, 1.0, 2.0, 3.0};
    ss.threads = threads;
    out.bmo_inf = bmo_seminorm_window(g_field, inf, ss).value;

    Report rep;
    rep.id = "log-layer";
    rep.add_param("rho", rho);
    rep.add_param("h", h);
    rep.table_header = {"h", "b_inf", "bmo_inf", "max_abs", "unit_integral",
                        "support_ok"};
    rep.table_rows.push_back({format_value(h), format_value(out.b_inf),
                              format_value(out.bmo_inf), format_value(out.max_abs),
                              format_value(out.unit_integral),
                              out.support_ok ? "1" : "0"});
    CheckResult c1{"support in {1<x2<4}", out.support_ok, out.support_ok ? 1.0 : 0.0,
                   1.0, "all nonzero cells"};
    CheckResult c2{"b_inf <= 2.1", out.b_inf <= 2.1, out.b_inf, 2.1, ""};
    rep.checks.push_back(c1);
    rep.checks.push_back(c2);
    out.report = std::move(rep);
    return out;
}

}  // namespace bmoext
