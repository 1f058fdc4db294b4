#include "kpplab/fronts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kpplab {

std::optional<double> locate_front(std::span<const double> u, const Grid1D& grid) {
    const int n = static_cast<int>(u.size());
    if (n < 2) return std::nullopt;
    if (u[n - 1] == 0.5) return grid.x(n - 1);
    for (int i = n - 2; i >= 0; --i) {
        double a = u[i] - 0.5, b = u[i + 1] - 0.5;
        if (a == 0.0) return grid.x(i);  // exact node crossing
        if (a * b < 0.0) {
            double w = a / (a - b);  // in (0,1)
            return grid.x(i) + w * grid.dx;
        }
    }
    return std::nullopt;
}

double interface_width(std::span<const double> u, const Grid1D& grid, double eps) {
    const int n = static_cast<int>(u.size());
    auto in_band = [&](int i) { return u[i] >= eps && u[i] <= 1.0 - eps; };

    int il = -1, ir = -1;
    for (int i = 0; i < n; ++i)
        if (in_band(i)) {
            il = i;
            break;
        }
    if (il < 0) return 0.0;
    for (int i = n - 1; i >= 0; --i)
        if (in_band(i)) {
            ir = i;
            break;
        }

    // extend each extreme node to the interpolated band-edge crossing
    auto edge = [&](int inside, int outside) -> double {
        double ui = u[inside], uo = u[outside];
        double level;
        if (uo < eps)
            level = eps;
        else if (uo > 1.0 - eps)
            level = 1.0 - eps;
        else
            return grid.x(inside);  // neighbor also in band numerically; no crossing
        double w = (level - ui) / (uo - ui);
        w = std::clamp(w, 0.0, 1.0);
        return grid.x(inside) + w * (grid.x(outside) - grid.x(inside));
    };

    double left = (il > 0) ? edge(il, il - 1) : grid.x(0);
    double right = (ir < n - 1) ? edge(ir, ir + 1) : grid.x(n - 1);
    return std::max(0.0, right - left);
}

SpeedFit mean_speed(const FrontTrace& trace, double t_lo, double t_hi) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : trace.samples)
        if (s.has_front && s.t >= t_lo && s.t <= t_hi) pts.emplace_back(s.t, s.X);
    if (pts.size() < 10)
        throw std::invalid_argument("mean_speed: need at least 10 front samples in the window");

    double tm = 0.0, xm = 0.0;
    for (auto& [t, x] : pts) {
        tm += t;
        xm += x;
    }
    tm /= pts.size();
    xm /= pts.size();
    double stt = 0.0, stx = 0.0;
    for (auto& [t, x] : pts) {
        stt += (t - tm) * (t - tm);
        stx += (t - tm) * (x - xm);
    }
    SpeedFit fit;
    fit.n_samples = static_cast<int>(pts.size());
    fit.c_hat = stx / stt;
    fit.intercept = xm - fit.c_hat * tm;
    for (auto& [t, x] : pts)
        fit.max_residual = std::max(fit.max_residual, std::abs(x - (fit.c_hat * t + fit.intercept)));
    return fit;
}

double tail_decay_rate(std::span<const double> u, const Grid1D& grid, double X, double d_lo,
                       double d_hi) {
    if (!(d_hi > d_lo)) throw std::invalid_argument("tail_decay_rate: empty fit window");
    const int n = static_cast<int>(u.size());
    const int margin = 5;  // keep clear of boundary contamination
    double lo = std::max(X + d_lo, grid.x(margin));
    double hi = std::min(X + d_hi, grid.x(n - 1 - margin));
    int i_lo = static_cast<int>(std::ceil((lo - grid.x0) / grid.dx));
    int i_hi = static_cast<int>(std::floor((hi - grid.x0) / grid.dx));
    if (i_hi - i_lo < 4)
        throw std::invalid_argument("tail_decay_rate: fit window holds fewer than 5 nodes");

    double xm = 0.0, ym = 0.0;
    int cnt = i_hi - i_lo + 1;
    std::vector<double> logs(cnt);
    for (int i = i_lo; i <= i_hi; ++i) {
        if (!(u[i] > 0.0))
            throw std::invalid_argument("tail_decay_rate: nonpositive u inside the fit window");
        logs[i - i_lo] = std::log(u[i]);
        xm += grid.x(i);
        ym += logs[i - i_lo];
    }
    xm /= cnt;
    ym /= cnt;
    double sxx = 0.0, sxy = 0.0;
    for (int i = i_lo; i <= i_hi; ++i) {
        double dxc = grid.x(i) - xm;
        sxx += dxc * dxc;
        sxy += dxc * (logs[i - i_lo] - ym);
    }
    return -sxy / sxx;
}

}  // namespace kpplab
