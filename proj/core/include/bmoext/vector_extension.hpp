#pragma once
#include "bmoext/extension.hpp"
#include "bmoext/fields.hpp"
#include "bmoext/geometry.hpp"
#include "bmoext/seminorms.hpp"

namespace bmoext {

/// Normal/tangential decomposition along grad d: P u = (grad d . u) grad d,
/// Q u = u - P u, on cells within the chart band. Cells outside the band are
/// excluded by the mask.
struct SplitField {
    VectorField normal_part;      // P u
    VectorField tangential_part;  // Q u
};

SplitField normal_tangential_split(const VectorField& u, const Domain& domain);

struct VbmoNorm {
    double value{0};          // bmo component norms plus the boundary term
    double bmo_component{0};  // sum of per-component bmo_inf_inf norms
    SeminormReport normal_b;  // [grad d . u]_{b^nu}
};

/// ||u||_vbmo = ||u1||_bmo + ||u2||_bmo + [grad d . u]_{b^nu}.
VbmoNorm vbmo_norm(const VectorField& u, const Domain& domain, double nu,
                   const CompositeStrategy& s = {});

struct VectorExtensionResult {
    VectorField extended;
    ExtensionConfig config;
    bool in_theorem_regime{false};  // rho < c_star2
    double c_star2{0};
    double extended_bmo{0};       // sum of per-component window bmo norms
    double extended_normal_b{0};  // [grad d . ext]_{b^inf} over both sides
    double input_vbmo{0};
    double ratio{0};
    bool defined{false};
    bool support_ok{false};
};

/// Vector extension: the cutoff part splits into normal and tangential
/// components; the normal scalar extends oddly and is recombined with the
/// continued unit normal field, the tangential part extends evenly
/// componentwise, the remainder extends by zero. Interior cells copy u.
VectorExtensionResult vbmo_extend(const VectorField& u, const Domain& domain,
                                  const ExtensionConfig& config,
                                  const CompositeStrategy& s = {});

}  // namespace bmoext
