#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bmoext/covering.hpp"
#include "bmoext/experiments.hpp"
#include "bmoext/field_io.hpp"
#include "bmoext/vector_extension.hpp"
#include "bmoext/verify.hpp"

namespace {

using namespace bmoext;

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << text;
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

int run_extend(const std::string& domain_path, const std::string& input,
               double rho, double band, const std::string& output,
               const std::string& report_path, bool vector, int threads) {
    const DomainSpec spec = read_domain_config(domain_path);
    ExtensionConfig ec;
    ec.rho = rho;
    ec.band = band;
    ec.epsilon = spec.epsilon;

    Report rep;
    rep.add_param("domain", spec.domain.describe());
    rep.add_param("rho", rho);
    rep.table_header = {"quantity", "value"};

    auto padded = [&](const Grid& g) {
        const int pad = (int)std::ceil(2 * rho / g.h) + 1;
        Grid t = g;
        t.x0 -= pad * g.h;
        t.y0 -= pad * g.h;
        t.nx += 2 * pad;
        t.ny += 2 * pad;
        return t;
    };
    if (!vector) {
        const ScalarField v = read_scalar_field_file(input);
        ec.target = padded(v.grid());
        const ExtensionResult ext = bmo_extend(v, spec.domain, ec);
        write_field_file(output, ext.extended);
        rep.id = "extend";
        rep.table_rows.push_back(
            {"in_theorem_regime", ext.in_theorem_regime ? "1" : "0"});
        rep.table_rows.push_back({"c_star", format_value(ext.c_star)});
        rep.table_rows.push_back(
            {"zeroed_cells", std::to_string(ext.stats.zeroed_cells)});
        rep.table_rows.push_back(
            {"dropped_cells", std::to_string(ext.stats.dropped_cells)});
        if (!ext.in_theorem_regime)
            std::cerr << "warning: rho=" << rho << " is above c_star="
                      << ext.c_star << "; the norm bound is not guaranteed\n";
    } else {
        const VectorField u = read_vector_field_file(input);
        ec.target = padded(u.grid());
        CompositeStrategy cs;
        cs.bmo.center_stride = 4;
        cs.bmo.threads = threads;
        const VectorExtensionResult ext = vbmo_extend(u, spec.domain, ec, cs);
        write_field_file(output, ext.extended);
        rep.id = "vextend";
        rep.table_rows.push_back(
            {"in_theorem_regime", ext.in_theorem_regime ? "1" : "0"});
        rep.table_rows.push_back({"c_star2", format_value(ext.c_star2)});
        rep.table_rows.push_back({"extended_bmo", format_value(ext.extended_bmo)});
        rep.table_rows.push_back(
            {"extended_normal_b", format_value(ext.extended_normal_b)});
        rep.table_rows.push_back({"input_vbmo", format_value(ext.input_vbmo)});
        rep.table_rows.push_back({"ratio", format_value(ext.ratio)});
        rep.table_rows.push_back({"support_ok", ext.support_ok ? "1" : "0"});
        if (!ext.in_theorem_regime)
            std::cerr << "warning: rho=" << rho << " is above c_star2="
                      << ext.c_star2 << "; the norm bound is not guaranteed\n";
    }
    if (!report_path.empty()) write_text_file(report_path, rep.to_json());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bmoext: boundary extension operator and seminorm estimators"};
    app.require_subcommand(1);

    std::uint64_t seed = 20260801;
    int threads = 1;
    bool with_oracle = false;
    app.add_option("--seed", seed, "random seed for sampled checks");
    app.add_option("--threads", threads, "worker threads for sup searches");
    app.add_flag("--oracle", with_oracle,
                 "cross-check estimates against the brute-force oracle");

    // extend / vextend
    std::string domain_path, input, output, report_path;
    double rho = 0.1, band = 0.0;
    auto add_extend_opts = [&](CLI::App* cmd) {
        cmd->add_option("--domain", domain_path, "domain config (JSON)")->required();
        cmd->add_option("--input", input, "input field (FLD/1)")->required();
        cmd->add_option("--rho", rho, "cutoff scale")->required();
        cmd->add_option("--band", band, "extension band (default 2*rho)");
        cmd->add_option("--output", output, "output field (FLD/1)")->required();
        cmd->add_option("--report", report_path, "report path (JSON)");
    };
    CLI::App* extend = app.add_subcommand("extend", "extend a scalar field");
    add_extend_opts(extend);
    CLI::App* vextend = app.add_subcommand("vextend", "extend a vector field");
    add_extend_opts(vextend);

    // seminorm
    std::string sn_domain, sn_input, sn_report;
    double mu = 0.25, delta = 0.5, nu = 0.5, gamma = 0.0;
    int stride = 1;
    std::string radii_csv;
    CLI::App* seminorm =
        app.add_subcommand("seminorm", "estimate the seminorms of a field");
    seminorm->add_option("--domain", sn_domain, "domain config (JSON)")->required();
    seminorm->add_option("--input", sn_input, "input field (FLD/1)")->required();
    seminorm->add_option("--mu", mu, "BMO radius bound (inf allowed)");
    seminorm->add_option("--delta", delta, "L1_ul band width");
    seminorm->add_option("--nu", nu, "boundary-ball radius bound");
    seminorm->add_option("--gamma", gamma, "also report the C^gamma norm");
    seminorm->add_option("--stride", stride, "center stride of the sup search");
    seminorm->add_option("--radii", radii_csv, "comma-separated radii list");
    seminorm->add_option("--report", sn_report, "report base path")->required();

    // partition
    std::string pt_domain, pt_out;
    double pt_rho = 0.1;
    std::vector<double> bbox_vals;
    CLI::App* partition =
        app.add_subcommand("partition", "build and dump a boundary atlas");
    partition->add_option("--domain", pt_domain, "domain config (JSON)")->required();
    partition->add_option("--rho", pt_rho, "atlas scale")->required();
    partition->add_option("--bbox", bbox_vals, "window: xmin ymin xmax ymax")
        ->expected(4)
        ->required();
    partition->add_option("--out", pt_out, "dump base path")->required();

    // example-log
    double el_rho = 0.25, el_h = 1.0 / 512;
    int el_levels = 3;
    std::string el_out;
    CLI::App* example_log =
        app.add_subcommand("example-log", "run the log-layer example");
    example_log->add_option("--rho", el_rho, "cutoff scale (<= 1/4)");
    example_log->add_option("--h", el_h, "finest grid spacing");
    example_log->add_option("--levels", el_levels, "number of refinement levels");
    example_log->add_option("--out", el_out, "report path (JSON)");

    // verify
    double chart_epsilon = 0.1;
    std::string vf_out;
    CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--chart-epsilon", chart_epsilon,
                       "chart-deviation pass threshold");
    verify->add_option("--out", vf_out, "report path (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (*extend || *vextend) {
            return run_extend(domain_path, input, rho, band, output, report_path,
                              (bool)*vextend, threads);
        }
        if (*seminorm) {
            const DomainSpec spec = read_domain_config(sn_domain);
            const ScalarField f = read_scalar_field_file(sn_input);
            CompositeStrategy cs;
            cs.bmo.center_stride = stride;
            cs.bmo.radii = parse_list(radii_csv);
            cs.bmo.threads = threads;
            const CompositeNorms n =
                composite_norms(f, spec.domain, mu, delta, nu, cs);
            Report rep;
            rep.id = "seminorm";
            rep.add_param("domain", spec.domain.describe());
            rep.add_param("mu", mu);
            rep.add_param("delta", delta);
            rep.add_param("nu", nu);
            rep.table_header = {"name", "value", "cx", "cy", "r", "oracle",
                                "strategy"};
            for (const SeminormReport* r :
                 {&n.bmo_mu, &n.bmo_inf, &n.l1_delta, &n.l1_all, &n.b_nu}) {
                std::stringstream row(r->to_csv_row());
                std::vector<std::string> cols;
                std::string tok;
                while (std::getline(row, tok, ',')) cols.push_back(tok);
                rep.table_rows.push_back(cols);
            }
            rep.add_param("bmo_mu_delta", n.bmo_mu_delta);
            rep.add_param("bmo_inf_inf", n.bmo_inf_inf);
            rep.add_param("bmo_b_mu_nu", n.bmo_b_mu_nu);
            if (gamma > 0) rep.add_param("holder", holder_norm(f, gamma));
            if (with_oracle && f.grid().size() <= 4096) {
                const SeminormReport o = brute_force_oracle(f, spec.domain, mu);
                rep.add_param("oracle_bmo_mu", o.value);
            }
            write_text_file(sn_report + ".json", rep.to_json());
            write_text_file(sn_report + ".csv", rep.to_csv());
            std::cout << rep.to_csv();
            return 0;
        }
        if (*partition) {
            const DomainSpec spec = read_domain_config(pt_domain);
            const Rect bbox{bbox_vals[0], bbox_vals[1], bbox_vals[2], bbox_vals[3]};
            const BoundaryAtlas atlas = build_atlas(spec.domain, pt_rho, bbox);
            std::ostringstream os;
            os << "# atlas domain=" << spec.domain.describe()
               << " rho=" << format_value(atlas.rho) << " k_star=" << atlas.k_star
               << " seeds=" << atlas.seeds.size() << "\n";
            os << "# seed: index x y nx ny square_mx square_my\n";
            for (size_t i = 0; i < atlas.seeds.size(); ++i) {
                const auto& s = atlas.seeds[i];
                os << i << " " << format_value(s.position.x) << " "
                   << format_value(s.position.y) << " "
                   << format_value(s.normal.x) << " " << format_value(s.normal.y)
                   << " " << atlas.squares[i].first << " "
                   << atlas.squares[i].second << "\n";
            }
            os << "# neighbors: index: list\n";
            for (size_t i = 0; i < atlas.neighbor_lists.size(); ++i) {
                os << i << ":";
                for (int j : atlas.neighbor_lists[i]) os << " " << j;
                os << "\n";
            }
            write_text_file(pt_out, os.str());
            std::ostringstream csv;
            csv << "x,y\n";
            for (const auto& s : atlas.seeds)
                csv << format_value(s.position.x) << ","
                    << format_value(s.position.y) << "\n";
            write_text_file(pt_out + ".csv", csv.str());
            std::cout << "atlas: " << atlas.seeds.size() << " seeds, k_star="
                      << atlas.k_star << ", max neighbors="
                      << atlas.max_neighbor_count() << "\n";
            return 0;
        }
        if (*example_log) {
            Report combined;
            combined.id = "log-layer";
            combined.add_param("rho", el_rho);
            combined.table_header = {"h", "b_inf", "bmo_inf", "max_abs",
                                     "unit_integral", "support_ok"};
            bool ok = true;
            for (int l = el_levels - 1; l >= 0; --l) {
                const double h = el_h * std::ldexp(1.0, l);
                const LogLayerResult r = example_log_layer(el_rho, h, threads);
                combined.table_rows.push_back(r.report.table_rows[0]);
                for (const auto& c : r.report.checks) combined.checks.push_back(c);
                ok = ok && r.report.all_passed();
                std::cout << "h=" << format_value(h) << " b_inf="
                          << format_value(r.b_inf) << " max|g|="
                          << format_value(r.max_abs)
                          << (r.support_ok ? " support-ok" : " SUPPORT-FAIL")
                          << "\n";
            }
            if (!el_out.empty()) write_text_file(el_out, combined.to_json());
            return ok ? 0 : 1;
        }
        if (*verify) {
            VerifyConfig vc;
            vc.chart_epsilon = chart_epsilon;
            vc.threads = threads;
            vc.seed = seed;
            bool all_ok = true;
            Report rep;
            rep.id = "verify";
            rep.add_param("chart_epsilon", chart_epsilon);
            rep.add_param("seed", format_value((double)seed));
            rep.table_header = {"criterion", "passed", "checks"};
            for (const Criterion& c : acceptance_criteria()) {
                const auto t0 = std::chrono::steady_clock::now();
                const auto checks = c.run(vc);
                const double secs =
                    std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
                bool ok = true;
                for (const auto& ch : checks) {
                    rep.checks.push_back(ch);
                    ok = ok && ch.passed;
                    std::cout << "  [" << (ch.passed ? "pass" : "FAIL") << "] "
                              << ch.name << " (measured "
                              << format_value(ch.measured) << ", threshold "
                              << format_value(ch.threshold) << ")\n";
                }
                rep.table_rows.push_back(
                    {c.name, ok ? "1" : "0", std::to_string(checks.size())});
                std::cout << (ok ? "PASS " : "FAIL ") << c.name << "  ["
                          << format_value(secs) << " s";
                if (c.time_limit_s > 0) std::cout << " / limit " << c.time_limit_s;
                std::cout << "]\n";
                all_ok = all_ok && ok;
                if (c.time_limit_s > 0 && secs > c.time_limit_s) {
                    std::cout << "FAIL " << c.name << " exceeded its time limit\n";
                    all_ok = false;
                }
            }
            if (!vf_out.empty()) write_text_file(vf_out, rep.to_json());
            std::cout << (all_ok ? "verify: all criteria passed\n"
                                 : "verify: FAILURES detected\n");
            return all_ok ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
