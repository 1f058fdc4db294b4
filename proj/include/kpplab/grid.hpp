#pragma once

#include <cmath>
#include <stdexcept>

namespace kpplab {

// Uniform 1-D grid: node i sits at x0 + i*dx, i in [0, n).
struct Grid1D {
    double x0 = 0.0;
    double dx = 1.0;
    int n = 0;

    double x(int i) const { return x0 + i * dx; }
    double x_end() const { return x0 + (n - 1) * dx; }
    double length() const { return (n - 1) * dx; }

    void validate() const {
        if (!(dx > 0.0)) throw std::invalid_argument("Grid1D: dx must be positive");
        if (n < 16) throw std::invalid_argument("Grid1D: need at least 16 nodes");
    }

    // Largest i with x(i) <= xq, clamped to [0, n-2].
    int cell_of(double xq) const {
        int i = static_cast<int>(std::floor((xq - x0) / dx));
        if (i < 0) i = 0;
        if (i > n - 2) i = n - 2;
        return i;
    }
};

// Builds a grid spanning [x_min, x_max] with spacing ~dx (node-aligned ends).
inline Grid1D make_grid(double x_min, double x_max, double dx) {
    if (!(x_max > x_min)) throw std::invalid_argument("make_grid: x_max must exceed x_min");
    if (!(dx > 0.0)) throw std::invalid_argument("make_grid: dx must be positive");
    int n = static_cast<int>(std::lround((x_max - x_min) / dx)) + 1;
    if (n < 16) n = 16;
    return Grid1D{x_min, (x_max - x_min) / (n - 1), n};
}

}  // namespace kpplab
