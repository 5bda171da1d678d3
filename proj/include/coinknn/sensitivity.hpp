#pragma once

/**
 * @file sensitivity.hpp
 *
 * Comparator profiles against a fixed reference, their numerical sensitivity
 * |d value / d y|, and iso-contours of a comparator over a 2D rectangle.
 */

#include "coinknn/similarity.hpp"

#include <array>
#include <optional>
#include <vector>

namespace coinknn {

struct ProfileCurve {
    ComparatorKind kind;
    double reference = 0.0;
    std::vector<double> grid;    ///< strictly increasing
    std::vector<double> values;  ///< compare(kind, [reference], [grid[i]])
};

/// min, min + step, ... up to max (inclusive when max - min is a multiple of step).
std::vector<double> uniform_grid(double min, double max, double step);

ProfileCurve profile(const ComparatorKind& kind, double reference, std::vector<double> grid);

/**
 * |d value / d y| by central differences (one-sided at the ends).
 *
 * An entry is empty when the reference lies strictly inside its difference stencil
 * or coincides with its abscissa: the profiles have a corner there.
 * Throws InvalidInput for grids with fewer than 3 points.
 */
std::vector<std::optional<double>> sensitivity_curve(const ProfileCurve& curve);

using Point2 = std::array<double, 2>;

struct Rect {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 1.0;
    double y_max = 1.0;

    bool contains(const Point2& p) const {
        return p[0] >= x_min && p[0] <= x_max && p[1] >= y_min && p[1] <= y_max;
    }
};

struct Polyline {
    std::vector<Point2> vertices;
    /// Closed polylines repeat their first vertex at the end; open ones end on the rectangle boundary.
    bool closed = false;
};

struct LevelContours {
    double level = 0.0;
    std::vector<Polyline> polylines;
};

struct LevelSetGrid {
    ComparatorKind kind;
    Point2 reference{};
    Rect rect;
    std::size_t resolution = 0;  ///< lattice nodes per side
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> values;  ///< row-major: values[j * xs.size() + i] at (xs[i], ys[j])
    std::vector<LevelContours> contours;

    double at(std::size_t i, std::size_t j) const { return values[j * xs.size() + i]; }
};

/// Iso-contours of a scalar lattice by marching squares with linear edge interpolation.
/// Saddle cells are resolved with the mean of the four corners.
std::vector<Polyline> marching_squares(const std::vector<double>& xs, const std::vector<double>& ys,
                                       const std::vector<double>& values, double level);

/**
 * Evaluates compare(kind, reference, p) over a resolution x resolution lattice
 * covering rect and extracts one set of contours per level.
 *
 * Throws InvalidInput when resolution < 2, rect is empty, the reference is outside
 * rect, or a coincidence comparator is used outside the non-negative quadrant.
 */
LevelSetGrid level_set_grid(const ComparatorKind& kind, const Point2& reference, const Rect& rect,
                            std::size_t resolution, const std::vector<double>& levels);

}  // namespace coinknn
