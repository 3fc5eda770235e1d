#pragma once
#include <string>

#include "bmoext/fields.hpp"
#include "bmoext/geometry.hpp"
#include "bmoext/seminorms.hpp"

namespace bmoext {

/// Parameters of the boundary extension. Reflection needs a unique nearest
/// boundary point, so the band is checked against the reach; the cutoff
/// vanishes beyond |d| >= 2*rho, hence 2*rho <= band.
struct ExtensionConfig {
    double rho{0};
    double band{0};       // 0 = default 2*rho
    Grid target;          // grid covering the 2*rho-inflated domain
    double epsilon{0.1};  // deviation target used for the threshold record
};

struct ExtendStats {
    long fallback_cells{0};  // stencil partially unmasked, nearest-cell fill
    long zeroed_cells{0};    // stencil fully unmasked, value set to 0
    long dropped_cells{0};   // interior target cells not covered by the input
};

/// Mirror of x across the boundary along the normal ray through its
/// projection; an involution on the band. Throws OutsideBandError /
/// OutsideReachError.
Vec2 reflect_point(const Domain& domain, Vec2 x, double band);

/// Even extension: exterior band cells take the bilinearly interpolated value
/// of the field at the mirrored point; interior cells are unchanged. The
/// output mask covers the input mask plus the exterior band.
ScalarField even_extend(const ScalarField& f, const Domain& domain,
                        double band, ExtendStats* stats = nullptr);

/// Odd extension: as even_extend with the sign flipped outside.
ScalarField odd_extend(const ScalarField& f, const Domain& domain,
                       double band, ExtendStats* stats = nullptr);

/// Values copied on interior cells of the target grid, 0 elsewhere; the
/// result is masked everywhere. Grids must be aligned.
ScalarField zero_extend(const ScalarField& f, const Domain& domain,
                        const Grid& target);

struct ExtensionResult {
    ScalarField extended;   // defined on the whole target grid
    ScalarField even_part;  // cutoff component, evenly reflected
    ScalarField zero_part;  // remainder, zero-extended
    ExtensionConfig config;
    bool in_theorem_regime{false};  // rho < c_star for the config epsilon
    double c_star{0};
    ExtendStats stats;
};

/// The boundary extension: v1 = theta_rho * v, v2 = v - v1, result
/// even_extend(v1) + zero_extend(v2). The restriction to interior cells
/// copies v exactly; the result vanishes where d(x, closure) >= 2*rho + h.
ExtensionResult bmo_extend(const ScalarField& v, const Domain& domain,
                           const ExtensionConfig& config);

struct ProductEstimateReport {
    double ratio{0};       // ||phi v|| / (||phi||_Cgamma * ||v||)
    bool defined{false};   // false when a denominator vanishes
    double product_norm{0};
    double holder{0};
    double field_norm{0};
};

/// Empirical constant of the product estimate in the bmo^mu_delta norm.
ProductEstimateReport verify_product_estimate(const ScalarField& phi,
                                              const ScalarField& v,
                                              const Domain& domain,
                                              double gamma, double mu,
                                              double delta,
                                              const CompositeStrategy& s = {});

struct EdmReport {
    double extended_bmo{0};  // [ext]_{BMO^mu(R2)}
    double extended_l1{0};   // [ext]_{L1_ul(Gamma^delta)}
    double input_norm{0};    // ||v||_{bmo^mu_delta}
    double ratio{0};
    bool defined{false};
    bool support_ok{false};  // every nonzero cell within 2*rho + h of the closure
    bool in_theorem_regime{false};
};

/// Runs bmo_extend and compares the finite-parameter norms of the extension
/// against the input norm.
EdmReport edm_extend_report(const ScalarField& v, const Domain& domain,
                            double mu, double delta, double rho,
                            const CompositeStrategy& s = {});

/// True when every nonzero cell of f lies within `slack` of the closure of
/// the domain.
bool support_within(const ScalarField& f, const Domain& domain, double slack);

}  // namespace bmoext
