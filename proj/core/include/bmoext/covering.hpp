#pragma once
#include <vector>

#include "bmoext/geometry.hpp"

namespace bmoext {

/// Dyadic boundary atlas over a window: one seed point per dyadic square of
/// side 2^(-k_star) that meets the boundary, with per-seed lists of seeds
/// whose scale-2*rho neighborhoods overlap. k_star is the smallest integer
/// with 2^(-k_star) <= rho/sqrt(n) at n = 2.
struct BoundaryAtlas {
    double rho{0};
    int k_star{0};
    Rect bbox;
    std::vector<BoundaryPoint> seeds;
    std::vector<std::vector<int>> neighbor_lists;
    std::vector<std::pair<long, long>> squares;  // dyadic index of each seed

    double square_side() const { return std::ldexp(1.0, -k_star); }
    int max_neighbor_count() const;
};

/// Builds the atlas; squares are detected by a sign change of the signed
/// distance over a 5x5 sub-sampling and seeds are placed by bisection along
/// the first sign-changing sub-edge. Deterministic: seeds ordered by square
/// index (row-major), neighbor lists sorted. The window is half-open.
BoundaryAtlas build_atlas(const Domain& domain, double rho, const Rect& bbox);

/// Membership in the chart neighborhood of w0 at scale rho: |d(x)| < rho and
/// the projected point lies in the anchor's graph window with tangential
/// coordinate of length < rho. Projection failures count as outside.
bool neighborhood_contains(const Domain& domain, const BoundaryPoint& w0,
                           double rho, Vec2 x);

/// Smooth even bump: 1 for |t| <= 1, 0 for |t| >= 2, C^infinity in between.
double mollifier_theta(double t);

/// theta(|d(x)|/rho): 1 on the |d| <= rho band, 0 beyond |d| >= 2*rho.
double boundary_cutoff(const Domain& domain, double rho, Vec2 x);

struct PartitionWeights {
    Vec2 point;
    std::vector<int> seeds;       // active seed indices
    std::vector<double> weights;  // phi_i(point), same order
    double sum() const;
};

/// Partition weights at x: tangential bumps theta(|t_i|/rho) normalized over
/// each seed's neighbor list, multiplied by the band cutoff theta(|d|/rho).
/// The weights sum to theta(|d|/rho), hence to 1 on the |d| <= rho band.
/// Throws UncoveredPointError when no seed neighborhood covers x.
PartitionWeights partition_weights(const BoundaryAtlas& atlas,
                                   const Domain& domain, Vec2 x);

}  // namespace bmoext
