#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kpplab/grid.hpp"

namespace kpplab {

struct FrontSample {
    double t = 0.0;
    bool has_front = false;
    double X = 0.0;               // window-absolute position of the rightmost 1/2 level
    std::vector<double> widths;   // one per eps level
    double mass = 0.0;            // trapezoid of u over the window
};

struct FrontTrace {
    std::vector<double> eps_levels{0.1, 0.01};
    std::vector<FrontSample> samples;
};

// Rightmost crossing of u = 1/2, linearly interpolated; nullopt when the
// level is never attained.
std::optional<double> locate_front(std::span<const double> u, const Grid1D& grid);

// Diameter of {x : eps <= u(x) <= 1-eps}, band edges interpolated; 0 if empty.
double interface_width(std::span<const double> u, const Grid1D& grid, double eps);

struct SpeedFit {
    double c_hat = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    int n_samples = 0;
};

// Least-squares slope of X(t) over [t_lo, t_hi]; needs >= 10 front-bearing samples.
SpeedFit mean_speed(const FrontTrace& trace, double t_lo, double t_hi);

// Log-linear fit of the tail ahead of the front: slope of -log u over
// [X+d_lo, X+d_hi], keeping 5 cells clear of each window boundary.
// Throws if u is not strictly positive on the fit window.
double tail_decay_rate(std::span<const double> u, const Grid1D& grid, double X, double d_lo,
                       double d_hi);

}  // namespace kpplab
