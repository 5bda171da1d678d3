#include "coinknn/sensitivity.hpp"

#include "coinknn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_map>

#include <fmt/format.h>

namespace coinknn {

std::vector<double> uniform_grid(double min, double max, double step) {
    if (!(step > 0.0) || !(max > min) || !std::isfinite(min) || !std::isfinite(max)) {
        throw InvalidInput(fmt::format("uniform_grid: need min < max and step > 0, got [{}, {}] step {}", min, max, step));
    }
    const auto intervals = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9));
    std::vector<double> grid;
    grid.reserve(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        grid.push_back(min + static_cast<double>(i) * step);
    }
    return grid;
}

ProfileCurve profile(const ComparatorKind& kind, double reference, std::vector<double> grid) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw InvalidInput("profile: grid must be strictly increasing");
        }
    }
    ProfileCurve curve{kind, reference, std::move(grid), {}};
    curve.values.reserve(curve.grid.size());
    const double ref[1] = {reference};
    for (double y : curve.grid) {
        const double point[1] = {y};
        curve.values.push_back(compare(kind, ref, point));
    }
    return curve;
}

std::vector<std::optional<double>> sensitivity_curve(const ProfileCurve& curve) {
    const auto& g = curve.grid;
    const auto& v = curve.values;
    if (g.size() < 3 || v.size() != g.size()) {
        throw InvalidInput("sensitivity_curve: need at least 3 grid points with one value each");
    }
    std::vector<std::optional<double>> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == g.size() ? i : i + 1;
        const bool corner = g[i] == curve.reference || (curve.reference > g[lo] && curve.reference < g[hi]);
        if (corner) {
            continue;
        }
        out[i] = std::abs((v[hi] - v[lo]) / (g[hi] - g[lo]));
    }
    return out;
}

std::vector<Polyline> marching_squares(const std::vector<double>& xs, const std::vector<double>& ys,
                                       const std::vector<double>& values, double level) {
    const std::size_t nx = xs.size();
    const std::size_t ny = ys.size();
    if (nx < 2 || ny < 2 || values.size() != nx * ny) {
        throw InvalidInput("marching_squares: lattice must be at least 2 x 2 with one value per node");
    }
    const auto val = [&](std::size_t i, std::size_t j) { return values[j * nx + i]; };
    const auto above = [&](std::size_t i, std::size_t j) { return val(i, j) >= level; };

    // Edge ids: horizontal (i,j)-(i+1,j) first, then vertical (i,j)-(i,j+1).
    const std::size_t n_horizontal = ny * (nx - 1);
    const auto h_edge = [&](std::size_t i, std::size_t j) { return j * (nx - 1) + i; };
    const auto v_edge = [&](std::size_t i, std::size_t j) { return n_horizontal + j * nx + i; };

    std::unordered_map<std::size_t, Point2> crossings;
    std::unordered_map<std::size_t, std::vector<std::size_t>> links;

    const auto interpolate = [&](double a, double b) {
        const double t = (level - a) / (b - a);
        return std::clamp(t, 0.0, 1.0);
    };
    const auto crossing_at = [&](std::size_t edge) -> std::size_t {
        if (crossings.contains(edge)) {
            return edge;
        }
        Point2 c;
        if (edge < n_horizontal) {
            const std::size_t j = edge / (nx - 1);
            const std::size_t i = edge % (nx - 1);
            const double t = interpolate(val(i, j), val(i + 1, j));
            c = {xs[i] + t * (xs[i + 1] - xs[i]), ys[j]};
        } else {
            const std::size_t rel = edge - n_horizontal;
            const std::size_t j = rel / nx;
            const std::size_t i = rel % nx;
            const double t = interpolate(val(i, j), val(i, j + 1));
            c = {xs[i], ys[j] + t * (ys[j + 1] - ys[j])};
        }
        crossings.emplace(edge, c);
        return edge;
    };
    const auto link = [&](std::size_t e1, std::size_t e2) {
        links[crossing_at(e1)].push_back(e2);
        links[crossing_at(e2)].push_back(e1);
    };

    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const bool c00 = above(i, j);
            const bool c10 = above(i + 1, j);
            const bool c11 = above(i + 1, j + 1);
            const bool c01 = above(i, j + 1);
            const std::size_t bottom = h_edge(i, j);
            const std::size_t top = h_edge(i, j + 1);
            const std::size_t left = v_edge(i, j);
            const std::size_t right = v_edge(i + 1, j);

            std::vector<std::size_t> cut;
            if (c00 != c10) cut.push_back(bottom);
            if (c10 != c11) cut.push_back(right);
            if (c01 != c11) cut.push_back(top);
            if (c00 != c01) cut.push_back(left);

            if (cut.size() == 2) {
                link(cut[0], cut[1]);
            } else if (cut.size() == 4) {
                const double center = 0.25 * (val(i, j) + val(i + 1, j) + val(i + 1, j + 1) + val(i, j + 1));
                if ((center >= level) == c00) {
                    // 00 and 11 joined through the center: cut off corners 10 and 01.
                    link(bottom, right);
                    link(top, left);
                } else {
                    link(left, bottom);
                    link(right, top);
                }
            }
        }
    }

    std::vector<Polyline> out;
    std::unordered_map<std::size_t, bool> visited;
    const auto walk = [&](std::size_t start) {
        Polyline line;
        std::size_t cur = start;
        visited[start] = true;
        line.vertices.push_back(crossings.at(start));
        for (;;) {
            std::optional<std::size_t> next;
            for (std::size_t n : links.at(cur)) {
                if (!visited[n]) {
                    next = n;
                    break;
                }
            }
            if (!next) {
                const auto& tail = links.at(cur);
                if (line.vertices.size() > 2 && std::find(tail.begin(), tail.end(), start) != tail.end()) {
                    line.vertices.push_back(crossings.at(start));
                    line.closed = true;
                }
                return line;
            }
            visited[*next] = true;
            line.vertices.push_back(crossings.at(*next));
            cur = *next;
        }
    };

    // Sorted starts keep the output order deterministic.
    std::vector<std::size_t> edges;
    edges.reserve(links.size());
    for (const auto& [edge, _] : links) {
        edges.push_back(edge);
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t e : edges) {
        if (!visited[e] && links.at(e).size() == 1) {
            out.push_back(walk(e));
        }
    }
    for (std::size_t e : edges) {
        if (!visited[e]) {
            out.push_back(walk(e));
        }
    }
    return out;
}

LevelSetGrid level_set_grid(const ComparatorKind& kind, const Point2& reference, const Rect& rect,
                            std::size_t resolution, const std::vector<double>& levels) {
    if (resolution < 2) {
        throw InvalidInput("level_set_grid: resolution must be >= 2");
    }
    if (!(rect.x_max > rect.x_min) || !(rect.y_max > rect.y_min)) {
        throw InvalidInput("level_set_grid: empty rectangle");
    }
    if (!rect.contains(reference)) {
        throw InvalidInput("level_set_grid: reference lies outside the rectangle");
    }
    if (std::holds_alternative<CoincidenceDissimilarity>(kind) && (rect.x_min < 0.0 || rect.y_min < 0.0)) {
        throw InvalidInput("level_set_grid: coincidence comparisons need a rectangle in the non-negative quadrant");
    }
    validate(kind);

    LevelSetGrid grid{kind, reference, rect, resolution, {}, {}, {}, {}};
    const double last = static_cast<double>(resolution - 1);
    for (std::size_t i = 0; i < resolution; ++i) {
        const double t = static_cast<double>(i) / last;
        grid.xs.push_back(i + 1 == resolution ? rect.x_max : rect.x_min + t * (rect.x_max - rect.x_min));
        grid.ys.push_back(i + 1 == resolution ? rect.y_max : rect.y_min + t * (rect.y_max - rect.y_min));
    }
    grid.values.resize(resolution * resolution);
    for (std::size_t j = 0; j < resolution; ++j) {
        for (std::size_t i = 0; i < resolution; ++i) {
            const double p[2] = {grid.xs[i], grid.ys[j]};
            grid.values[j * resolution + i] = compare(kind, reference, p);
        }
    }
    for (double level : levels) {
        grid.contours.push_back({level, marching_squares(grid.xs, grid.ys, grid.values, level)});
    }
    return grid;
}

}  // namespace coinknn
