#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bmoext/extension.hpp"
#include "bmoext/fields.hpp"
#include "bmoext/geometry.hpp"
#include "bmoext/seminorms.hpp"

namespace bmoext {

struct CheckResult {
    std::string name;
    bool passed{false};
    double measured{0};
    double threshold{0};
    std::string detail;
};

/// Deterministic experiment report: a parameter echo, one value table and a
/// list of checks. Serialization is byte-stable for a fixed configuration.
struct Report {
    std::string id;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> table_header;
    std::vector<std::vector<std::string>> table_rows;
    std::vector<CheckResult> checks;

    bool all_passed() const;
    void add_param(const std::string& key, const std::string& value);
    void add_param(const std::string& key, double value);
    std::string to_json() const;
    std::string to_csv() const;
};

std::string format_value(double v);  // %.17g

/// Domain plus the deviation target, as read from a domain config document.
struct DomainSpec {
    Domain domain;
    double epsilon{0.1};
};

DomainSpec parse_domain_config(const std::string& json_text);
DomainSpec read_domain_config(const std::string& path);
std::string domain_config_to_json(const DomainSpec& spec);

/// Fixed, versioned family of test fields used by the experiments.
extern const std::vector<std::string> kBuiltinFieldNames;
ScalarField builtin_field(const std::string& name, const Grid& grid,
                          const Domain& domain);

struct ExperimentConfig {
    Domain domain{Domain::half_plane()};
    double epsilon{0.1};
    Rect window{0, 0, 2, 1};
    double h{1.0 / 64};
    std::vector<double> rhos{0.05, 0.1, 0.25};
    double mu{0.25};
    double delta{0.5};
    double nu{0.5};
    double gamma{0.5};
    double center_spacing{1.0 / 16};  // physical stride of the sup searches
    std::vector<double> bmo_radii{0.05, 0.1, 0.15, 0.2, 0.3, 0.4};
    int threads{1};
    std::uint64_t seed{20260801};

    SearchStrategy bmo_strategy() const;
    CompositeStrategy composite_strategy() const;
};

/// Extends every built-in field at every rho, tabulates the norm ratios
/// ||ext|| / ||v||_{bmo_inf_inf} and fits the log-log slope in rho.
Report run_extension_experiment(const ExperimentConfig& config);

struct LogLayerResult {
    Report report;
    double b_inf{0};
    double bmo_inf{0};
    double max_abs{0};
    double unit_integral{0};
    bool support_ok{false};
};

/// The layer example: log x2 on the unit layer, extended at scale rho,
/// shifted up by 2 and restricted to the upper half plane. Reports the
/// boundary-growth estimate, a BMO estimate, the support check and the
/// maximum magnitude.
LogLayerResult example_log_layer(double rho, double h, int threads = 1);

/// Midpoint quadrature of the |log| mass of one unit window of the layer.
double log_layer_unit_integral(double h);

}  // namespace bmoext
