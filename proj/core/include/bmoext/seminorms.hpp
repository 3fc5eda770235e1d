#pragma once
#include <string>
#include <vector>

#include "bmoext/fields.hpp"
#include "bmoext/geometry.hpp"

namespace bmoext {

enum class Integrand { raw, abs, dev_from_mean };

/// Midpoint-rule integral over the masked cells whose centers lie in the
/// closed ball. Throws EmptyIntersectionError when no masked cell is covered.
double integrate_ball(const ScalarField& f, const Ball& ball, Integrand kind);

/// Midpoint-rule integral over masked cells with centers in the closed rect.
double integrate_window(const ScalarField& f, const Rect& rect, Integrand kind);

/// (1/|B|) int_B |f - f_B| with the quadrature mean and the quadrature area
/// of the same cell set. Requires every covered cell center to be masked.
double mean_oscillation(const ScalarField& f, const Ball& ball);

/// Candidate enumeration for the sup-over-balls searches. Centers are cell
/// centers subsampled by `center_stride`; radii are either the full lattice
/// {h, 2h, ...} (empty list) or the given physical radii. Ties in the sup are
/// broken first-found in row-major-then-radius order, also under threading.
struct SearchStrategy {
    int center_stride{1};
    std::vector<double> radii;
    int threads{1};

    static SearchStrategy exhaustive() { return {}; }
    static SearchStrategy strided(int stride, std::vector<double> r, int threads = 1) {
        return {stride, std::move(r), threads};
    }
    std::string describe(double h) const;
};

struct SeminormReport {
    std::string name;
    double value{0};
    Ball maximizer;
    bool has_maximizer{false};
    std::string strategy;
    bool oracle{false};
    double cap{0};  // nonzero when an infinite parameter was capped

    std::string to_csv_row() const;
};

/// sup of the mean oscillation over balls B_r(x) contained in the domain with
/// r < mu; centers are masked cell centers, radii run below min(mu, d(x)).
/// The estimate is a lower bound of the true sup by construction.
SeminormReport bmo_seminorm(const ScalarField& f, const Domain& domain,
                            double mu, const SearchStrategy& strategy = {});

/// Same sup without a domain constraint: balls must be covered by the grid
/// window and meet only masked cells (for fields defined on the whole plane).
SeminormReport bmo_seminorm_window(const ScalarField& f, double mu,
                                   const SearchStrategy& strategy = {});

enum class BandRegion { all, inner_band, two_sided_band };

struct L1Strategy {
    double center_spacing{0};  // 0 = auto (snapped to the cell lattice)
    double margin{1.0};        // how far unit-ball centers range past the window
};

/// sup over unit-ball centers of the L1 mass of f in the ball intersected
/// with the region: all masked cells, the inner band {0 < d < delta}, or the
/// two-sided band {|d| < delta}.
SeminormReport l1_ul_norm(const ScalarField& f, const Domain& domain,
                          BandRegion region, double delta,
                          const L1Strategy& strategy = {});

struct BoundaryBallStrategy {
    int boundary_samples{129};  // centers per boundary component
    std::vector<double> radii;  // empty = lattice {h,2h,...} up to the cap
    bool both_sides{false};     // integrate masked cells on both sides of the boundary
};

/// sup over boundary-centered balls of r^{-n} times the L1 mass in the
/// domain side (n = 2); radii below nu, capped at the window diagonal.
SeminormReport b_seminorm(const ScalarField& f, const Domain& domain,
                          double nu, const BoundaryBallStrategy& strategy = {});

struct CompositeStrategy {
    SearchStrategy bmo;
    L1Strategy l1;
    BoundaryBallStrategy b;
};

struct CompositeNorms {
    SeminormReport bmo_mu;    // [f]_{BMO^mu(Omega)}
    SeminormReport bmo_inf;   // [f]_{BMO^inf(Omega)} (capped)
    SeminormReport l1_delta;  // L1_ul over the inner delta-band
    SeminormReport l1_all;    // L1_ul over Omega
    SeminormReport b_nu;      // boundary-growth seminorm
    double bmo_mu_delta{0};   // bmo_mu + l1_delta
    double bmo_inf_inf{0};    // bmo_inf + l1_all
    double bmo_b_mu_nu{0};    // bmo_mu + b_nu
};

CompositeNorms composite_norms(const ScalarField& f, const Domain& domain,
                               double mu, double delta, double nu,
                               const CompositeStrategy& strategy = {});

/// sup|f| plus the sup Hoelder quotient |f(x)-f(y)|/|x-y|^gamma over sampled
/// masked cell pairs: all pairs within distance 1 (subsampled on large
/// grids, always including adjacent cells) plus 10^4 seeded long-range pairs.
double holder_norm(const ScalarField& f, double gamma);

/// Ground-truth exhaustive enumeration for small instances (nx*ny <= 4096),
/// written independently of the search engine above.
SeminormReport brute_force_oracle(const ScalarField& f, const Domain& domain,
                                  double mu);

}  // namespace bmoext
