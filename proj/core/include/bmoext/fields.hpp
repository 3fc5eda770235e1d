#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bmoext/errors.hpp"
#include "bmoext/vec2.hpp"

namespace bmoext {

/// Uniform cell-centered Cartesian grid; cell (i,j) has center
/// (x0 + (i+1/2)h, y0 + (j+1/2)h), row j = 0 at the bottom.
struct Grid {
    double x0{0}, y0{0}, h{1};
    int nx{0}, ny{0};

    Vec2 center(int i, int j) const {
        return {x0 + (i + 0.5) * h, y0 + (j + 0.5) * h};
    }
    long size() const { return (long)nx * ny; }
    Rect window() const { return {x0, y0, x0 + nx * h, y0 + ny * h}; }
    /// Same spacing and grid-aligned offset (used for exact index copies).
    bool aligned_with(const Grid& o) const;
    /// Index offset of this grid's origin inside `o` (requires aligned_with).
    std::pair<long, long> offset_in(const Grid& o) const;
};

/// Grid from a window and spacing; the window is snapped outward to whole cells.
Grid make_grid(const Rect& window, double h);

/// Cell-centered samples with a membership mask; unmasked cells hold NaN and
/// are excluded from every integral.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g);

    const Grid& grid() const { return grid_; }
    double h() const { return grid_.h; }
    int nx() const { return grid_.nx; }
    int ny() const { return grid_.ny; }

    double value(int i, int j) const { return values_[idx(i, j)]; }
    bool masked(int i, int j) const { return mask_[idx(i, j)] != 0; }
    void set(int i, int j, double v) {
        values_[idx(i, j)] = v;
        mask_[idx(i, j)] = 1;
    }
    void unset(int i, int j);
    long masked_count() const;

    const std::vector<double>& values() const { return values_; }
    const std::vector<std::uint8_t>& mask() const { return mask_; }
    std::vector<double>& values() { return values_; }
    std::vector<std::uint8_t>& mask() { return mask_; }

    /// Bilinear interpolation at p from masked cells. Stencil cells without
    /// data take the value of the nearest masked stencil cell; returns
    /// nothing when the whole stencil is unmasked. Exact cell-center hits
    /// return the stored sample bitwise.
    std::optional<double> interpolate(Vec2 p) const;

    static ScalarField sample(const Grid& g,
                              const std::function<double(Vec2)>& f,
                              const std::function<bool(Vec2)>& inside);

    long idx(int i, int j) const { return (long)j * grid_.nx + i; }

private:
    Grid grid_;
    std::vector<double> values_;
    std::vector<std::uint8_t> mask_;
};

/// Two components on a shared grid and mask.
struct VectorField {
    ScalarField c1, c2;

    VectorField() = default;
    VectorField(ScalarField a, ScalarField b);
    const Grid& grid() const { return c1.grid(); }

    static VectorField sample(const Grid& g,
                              const std::function<Vec2(Vec2)>& f,
                              const std::function<bool(Vec2)>& inside);
};

/// Closed ball, the unit of mean-oscillation evaluation.
struct Ball {
    Vec2 center{0, 0};
    double radius{0};
};

/// a*f + b*g on the intersection of the masks (shared grid required).
ScalarField linear_combination(double a, const ScalarField& f, double b,
                               const ScalarField& g);
/// Pointwise product on the intersection of the masks.
ScalarField multiply(const ScalarField& f, const ScalarField& g);

}  // namespace bmoext
