#pragma once
#include <string>
#include <vector>

#include "bmoext/errors.hpp"
#include "bmoext/vec2.hpp"

namespace bmoext {

enum class Shape { half_plane, disk, strip, perturbed_strip };

std::string shape_name(Shape s);

/// Point on the boundary with its local frame. `normal` points out of the
/// interior; `tangent` is the inward normal rotated by -90 degrees, so
/// (tangent, inward normal) is an orthonormal frame adapted to the local
/// graph representation of the boundary.
struct BoundaryPoint {
    Vec2 position;
    Vec2 normal;
    Vec2 tangent;
    int component{0};   // boundary component index
    double param{0.0};  // parameter on that component

    Vec2 inward() const { return -normal; }
};

/// Scale constants attached to a domain for a given deviation target.
/// All lengths; `curvature_bound` is the graph C^2 bound.
struct GeometryConstants {
    double curvature_bound{0};  // graph second-derivative bound
    double graph_window_r{0};   // tangential half-width of the graph windows
    double graph_window_d{0};   // normal half-width of the graph windows
    double rho0{0};             // chart band half-width
    double reach{0};            // unique-projection band half-width
    double epsilon{0};          // deviation target used to derive the thresholds
    double c_eps{0};            // largest chart scale with deviation < epsilon
    double c_star{0};           // scalar extension threshold (c_eps / 64)
    double c_star2{0};          // vector extension threshold (c_eps / 96)
};

/// Implicit planar domain from a closed catalog of shapes, each with an
/// analytic signed distance (positive inside, negative outside, zero on the
/// boundary) and exact scale constants. The perturbed strip is the region
/// above a sinusoidal graph and projects by Newton iteration; the other three
/// shapes are closed-form.
class Domain {
public:
    /// Interior {x2 > floor_y}.
    static Domain half_plane(double floor_y = 0.0);
    /// Interior of the circle of the given radius.
    static Domain disk(Vec2 center, double radius);
    /// Interior {y0 < x2 < y1}.
    static Domain strip(double y0, double y1);
    /// Interior above the graph y = amplitude*sin(2*pi*(x - phase)/wavelength) + offset.
    static Domain perturbed_strip(double amplitude, double wavelength,
                                  double offset = 0.0, double phase = 0.0);

    /// Interior-side flag: returns the domain with the opposite side as interior.
    Domain flipped() const;
    bool is_flipped() const { return flipped_; }

    Domain translated(Vec2 delta) const;

    Shape shape() const { return shape_; }
    std::string describe() const;

    double signed_distance(Vec2 x) const;
    /// Unique nearest boundary point; requires |d(x)| < reach().
    BoundaryPoint boundary_projection(Vec2 x) const;
    /// Unit gradient of the signed distance, i.e. the inward normal of the
    /// nearest boundary point, continued through the reach band.
    Vec2 grad_distance(Vec2 x) const;

    double curvature_bound() const;  // 0 for flat boundaries
    double reach() const;            // +inf for the half plane
    double rho0() const;
    double graph_window_r() const;
    double graph_window_d() const;

    int boundary_components() const;
    Vec2 boundary_point(int component, double s) const;
    Vec2 boundary_velocity(int component, double s) const;
    BoundaryPoint boundary_frame(int component, double s) const;
    /// Uniform parameter samples of each boundary component clipped to the window.
    std::vector<BoundaryPoint> sample_boundary(const Rect& window, int per_component) const;

    // shape parameters (valid for the matching shape only)
    Vec2 disk_center() const { return center_; }
    double disk_radius() const { return radius_; }
    double strip_y0() const { return y0_; }
    double strip_y1() const { return y1_; }
    double wave_amplitude() const { return amplitude_; }
    double wave_length() const { return wavelength_; }
    double wave_offset() const { return offset_; }
    double wave_phase() const { return phase_; }

private:
    Domain() = default;
    double wave_height(double s) const;   // psi(s)
    double wave_slope(double s) const;    // psi'(s)
    double wave_curv(double s) const;     // psi''(s)
    /// Nearest point on the sinusoidal graph; returns parameter, distance and
    /// iteration count. Throws on non-convergence or ambiguity (if requested).
    double wave_nearest(Vec2 x, bool detect_ambiguous) const;

    Shape shape_{Shape::half_plane};
    bool flipped_{false};
    double floor_y_{0};
    Vec2 center_{0, 0};
    double radius_{1};
    double y0_{0}, y1_{1};
    double amplitude_{0}, wavelength_{1}, offset_{0}, phase_{0};
};

/// Normal-coordinate chart anchored at a boundary point: eta = (tangential
/// coordinate of the projected point, signed distance) and x = F(eta) walks
/// the normal ray over the boundary point with that tangential coordinate.
class NormalChart {
public:
    NormalChart(const Domain& domain, const BoundaryPoint& anchor, double rho);

    const BoundaryPoint& anchor() const { return anchor_; }
    double rho() const { return rho_; }

    /// x = F(eta) for eta in V_rho = (-rho,rho)^2; throws OutsideChartError.
    Vec2 forward(Vec2 eta) const;
    /// eta = F^{-1}(x) for x in the chart neighborhood; throws NotInNeighborhoodError.
    Vec2 inverse(Vec2 x) const;
    bool contains(Vec2 x) const;

    /// Same maps expressed in the anchor frame (origin at the anchor, axes
    /// tangent/inward); grad of these is I at the origin.
    Vec2 local_forward(Vec2 eta) const;
    Vec2 local_inverse(Vec2 xloc) const;

    Vec2 forward_unchecked(Vec2 eta) const;
    Vec2 inverse_unchecked(Vec2 x) const;

private:
    double solve_boundary_param(double tangential) const;

    Domain domain_;
    BoundaryPoint anchor_;
    double rho_;
};

struct ChartDeviation {
    double forward_dev{0};  // max entry of |grad F - I| over sampled V_rho
    double inverse_dev{0};  // max entry of |grad F^{-1} - I| over the image
};

/// Max-norm deviation of the chart gradients from the identity, by central
/// finite differences with step 1e-5*rho over a deterministic sample lattice.
ChartDeviation chart_deviation(const Domain& domain, const BoundaryPoint& w0,
                               double rho, int n_samples);

/// Admissible chart scales for a deviation target epsilon in (0,1):
/// c_eps = min{epsilon / (L * ((n+1)!)^2 * 2^(2n+5)), rho0/2} at n = 2,
/// then c_star = c_eps/64 and c_star2 = c_eps/96. A flat boundary (L = 0)
/// resolves the min to rho0/2.
GeometryConstants admissible_rho(const Domain& domain, double epsilon);

}  // namespace bmoext
