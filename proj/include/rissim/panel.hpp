#pragma once

#include <utility>
#include <vector>

#include "rissim/errors.hpp"
#include "rissim/reflection.hpp"
#include "rissim/types.hpp"

namespace rissim {

/// RIS geometry: a centered rectangular element grid in the z = 0 plane with
/// boresight +z. Columns are grouped into super-columns that share one
/// control signal. Elements are stored row-major.
struct Panel {
    int rows = 0;
    int cols = 0;
    double dx_m = 0.0;
    double dy_m = 0.0;
    int group_cols = 1;
    std::vector<Vec3> element_positions;
    ReflectionModel cell_model;

    int element_count() const { return rows * cols; }
    int group_count() const { return cols / group_cols; }

    int group_of(int element_index) const {
        const int c = element_index % cols;
        return c / group_cols;
    }

    /// Center x of super-column g (mean of its member columns).
    double group_center_x(int g) const {
        const double c0 = g * group_cols + 0.5 * (group_cols - 1);
        return (c0 - 0.5 * (cols - 1)) * dx_m;
    }

    std::vector<double> group_centers_x() const {
        std::vector<double> xs(group_count());
        for (int g = 0; g < group_count(); ++g) xs[g] = group_center_x(g);
        return xs;
    }

    friend bool operator==(const Panel& a, const Panel& b) {
        return a.rows == b.rows && a.cols == b.cols && a.dx_m == b.dx_m && a.dy_m == b.dy_m &&
               a.group_cols == b.group_cols && a.element_positions == b.element_positions &&
               a.cell_model == b.cell_model;
    }
};

inline Panel build_panel(int rows, int cols, double dx_m, double dy_m, int group_cols,
                         ReflectionModel cell_model) {
    if (rows < 1 || cols < 1) throw ConfigError("panel: rows and cols must be >= 1");
    if (!(dx_m > 0.0 && dy_m > 0.0)) throw ConfigError("panel: spacings must be > 0");
    if (group_cols < 1 || cols % group_cols != 0)
        throw ConfigError("panel: cols must be divisible by group_cols");

    Panel p{rows, cols, dx_m, dy_m, group_cols, {}, std::move(cell_model)};
    p.element_positions.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            p.element_positions.push_back(
                {(c - 0.5 * (cols - 1)) * dx_m, (r - 0.5 * (rows - 1)) * dy_m, 0.0});
    return p;
}

}  // namespace rissim
