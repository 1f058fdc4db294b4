#include "kpplab/pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kpplab {

namespace {

constexpr double kRangeTol = 1e-10;

// Tridiagonal factorization/solve of (I - (dt/2) D) with the boundary
// structure baked in (identity rows for pinned Dirichlet nodes, mirrored
// ghost for zero-flux ends).
struct CrankNicolsonMatrix {
    int n = 0;
    double r = 0.0;  // dt / (2 dx^2)
    BcKind left, right;
    std::vector<double> cp;  // Thomas forward coefficients (precomputed)

    CrankNicolsonMatrix(int n_, double r_, BcKind l, BcKind rgt)
        : n(n_), r(r_), left(l), right(rgt), cp(n_) {
        double b0 = diag(0);
        cp[0] = upper(0) / b0;
        for (int i = 1; i < n; ++i) {
            double denom = diag(i) - lower(i) * cp[i - 1];
            cp[i] = upper(i) / denom;
        }
    }

    double diag(int i) const {
        if ((i == 0 && left == BcKind::dirichlet) || (i == n - 1 && right == BcKind::dirichlet))
            return 1.0;
        return 1.0 + 2.0 * r;
    }
    double upper(int i) const {
        if (i == n - 1) return 0.0;
        if (i == 0) {
            if (left == BcKind::dirichlet) return 0.0;
            return -2.0 * r;  // mirrored ghost
        }
        return -r;
    }
    double lower(int i) const {
        if (i == 0) return 0.0;
        if (i == n - 1) {
            if (right == BcKind::dirichlet) return 0.0;
            return -2.0 * r;
        }
        return -r;
    }

    void solve(std::vector<double>& rhs) const {
        rhs[0] /= diag(0);
        for (int i = 1; i < n; ++i) {
            double denom = diag(i) - lower(i) * cp[i - 1];
            rhs[i] = (rhs[i] - lower(i) * rhs[i - 1]) / denom;
        }
        for (int i = n - 2; i >= 0; --i) rhs[i] -= cp[i] * rhs[i + 1];
    }
};

// Discrete Laplacian with the boundary structure of the run; Dirichlet rows
// produce 0 (those nodes are pinned, their delta is forced to 0).
void apply_laplacian(const std::vector<double>& u, double dx, const BoundarySpec& bc,
                     std::vector<double>& out) {
    const int n = static_cast<int>(u.size());
    const double inv = 1.0 / (dx * dx);
    out[0] = (bc.left.kind == BcKind::neumann_zero) ? 2.0 * (u[1] - u[0]) * inv : 0.0;
    for (int i = 1; i + 1 < n; ++i) out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv;
    out[n - 1] = (bc.right.kind == BcKind::neumann_zero) ? 2.0 * (u[n - 2] - u[n - 1]) * inv : 0.0;
}

struct Stepper {
    const ReactionProfile& profile;
    const BoundarySpec& bc;
    Grid1D grid;
    double dt;
    CrankNicolsonMatrix mat;
    std::vector<double> lap, f0, f1, rhs, ustar;
    bool clamp_and_check;

    Stepper(const ReactionProfile& p, const BoundarySpec& b, const Grid1D& g, double dt_,
            bool clamp)
        : profile(p),
          bc(b),
          grid(g),
          dt(dt_),
          mat(g.n, dt_ / (2.0 * g.dx * g.dx), b.left.kind, b.right.kind),
          lap(g.n),
          f0(g.n),
          f1(g.n),
          rhs(g.n),
          ustar(g.n),
          clamp_and_check(clamp) {}

    void enforce_dirichlet(std::vector<double>& u) const {
        if (bc.left.kind == BcKind::dirichlet) u.front() = bc.left.value;
        if (bc.right.kind == BcKind::dirichlet) u.back() = bc.right.value;
    }

    void reaction(const std::vector<double>& u, std::vector<double>& out) const {
        for (int i = 0; i < grid.n; ++i) out[i] = profile.f(grid.x(i), u[i]);
    }

    // advances u in place by one step; t only used for error reporting
    void advance(std::vector<double>& u, double t) {
        enforce_dirichlet(u);
        apply_laplacian(u, grid.dx, bc, lap);
        reaction(u, f0);

        // predictor: (I - r D) delta* = dt (D u + f(u))
        for (int i = 0; i < grid.n; ++i) rhs[i] = dt * (lap[i] + f0[i]);
        pin_boundary_rows();
        mat.solve(rhs);
        for (int i = 0; i < grid.n; ++i) ustar[i] = u[i] + rhs[i];

        // corrector: reaction by the explicit trapezoid
        reaction(ustar, f1);
        for (int i = 0; i < grid.n; ++i) rhs[i] = dt * (lap[i] + 0.5 * (f0[i] + f1[i]));
        pin_boundary_rows();
        mat.solve(rhs);
        for (int i = 0; i < grid.n; ++i) u[i] += rhs[i];

        if (clamp_and_check) {
            for (int i = 0; i < grid.n; ++i) {
                if (u[i] < -kRangeTol || u[i] > 1.0 + kRangeTol) {
                    std::ostringstream msg;
                    msg << "step: u out of [0,1] beyond tolerance at t=" << t
                        << " x=" << grid.x(i) << " u=" << u[i];
                    throw RangeViolation(msg.str(), t, grid.x(i), u[i]);
                }
                u[i] = std::clamp(u[i], 0.0, 1.0);
            }
        }
    }

    void pin_boundary_rows() {
        if (bc.left.kind == BcKind::dirichlet) rhs.front() = 0.0;
        if (bc.right.kind == BcKind::dirichlet) rhs.back() = 0.0;
    }
};

}  // namespace

double reaction_dt_budget(const ReactionProfile& profile) {
    return 1.0 / profile.lipschitz_bound();
}

void step(SimulationState& state, const ReactionProfile& profile, const BoundarySpec& bc,
          double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    if (dt > reaction_dt_budget(profile))
        throw std::invalid_argument("step: dt exceeds the explicit-reaction stability budget");
    bc.validate();
    state.grid.validate();
    Stepper s(profile, bc, state.grid, dt, /*clamp=*/true);
    s.advance(state.u, state.t);
    state.t += dt;
}

RunOutput run(SimulationState initial, const ReactionProfile& profile, const BoundarySpec& bc,
              const RunOptions& opt) {
    if (!(opt.t_end > initial.t)) throw std::invalid_argument("run: t_end must exceed t_initial");
    if (!(opt.dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
    if (opt.dt > reaction_dt_budget(profile))
        throw std::invalid_argument("run: dt exceeds the explicit-reaction stability budget");
    bc.validate();
    initial.grid.validate();

    RunOutput out;
    out.state = std::move(initial);
    out.trace.eps_levels = opt.eps_levels;
    auto& st = out.state;

    const double t0 = st.t;
    const long long total_steps =
        std::max<long long>(1, static_cast<long long>(std::ceil((opt.t_end - t0) / opt.dt - 1e-9)));
    const long long sample_every =
        std::max<long long>(1, static_cast<long long>(std::lround(opt.sample_interval / opt.dt)));

    Stepper stepper(profile, bc, st.grid, opt.dt, /*clamp=*/true);

    long long samples_taken = 0;
    auto record = [&]() {
        FrontSample s;
        s.t = st.t;
        auto X = locate_front(st.u, st.grid);
        s.has_front = X.has_value();
        s.X = X.value_or(0.0);
        for (double eps : opt.eps_levels)
            s.widths.push_back(interface_width(st.u, st.grid, eps));
        double mass = 0.0;
        for (int i = 0; i + 1 < st.grid.n; ++i) mass += 0.5 * (st.u[i] + st.u[i + 1]) * st.grid.dx;
        s.mass = mass;
        out.trace.samples.push_back(std::move(s));
        ++samples_taken;
        if (opt.snapshot_every > 0 && (samples_taken - 1) % opt.snapshot_every == 0)
            out.snapshots.push_back(Snapshot{st.t, st.grid, st.u});
    };

    record();  // initial sample

    for (long long k = 1; k <= total_steps; ++k) {
        double target = (k == total_steps) ? opt.t_end : t0 + k * opt.dt;
        double dt_k = target - st.t;
        if (dt_k <= 0.0) break;
        if (std::abs(dt_k - opt.dt) < 1e-12 * opt.dt) {
            stepper.advance(st.u, st.t);
        } else {
            Stepper last(profile, bc, st.grid, dt_k, true);
            last.advance(st.u, st.t);
        }
        st.t = target;

        auto X = locate_front(st.u, st.grid);
        if (X) {
            if (opt.window == WindowPolicyKind::follow_front) {
                double trigger = st.grid.x0 + opt.trigger_fraction * st.grid.length();
                if (*X > trigger) {
                    int shift = static_cast<int>(std::ceil((*X - trigger) / st.grid.dx));
                    shift = std::min(shift, st.grid.n / 3);
                    double fill = (bc.right.kind == BcKind::dirichlet) ? bc.right.value
                                                                       : st.u.back();
                    std::rotate(st.u.begin(), st.u.begin() + shift, st.u.end());
                    std::fill(st.u.end() - shift, st.u.end(), fill);
                    st.grid.x0 += shift * st.grid.dx;
                    st.window_shift += shift * st.grid.dx;
                    stepper.grid = st.grid;  // reaction samples a(x) at absolute positions
                    if (bc.left.kind == BcKind::dirichlet) st.u.front() = bc.left.value;
                }
            } else if (opt.check_front_exit) {
                if (*X > st.grid.x_end() - 5.0 * st.grid.dx) {
                    std::ostringstream msg;
                    msg << "run: front reached the fixed window edge at t=" << st.t
                        << " (X=" << *X << ")";
                    throw FrontExitError(msg.str());
                }
            }
        }

        if (k % sample_every == 0 || k == total_steps) record();
    }
    return out;
}

std::vector<double> solve_linear_kernel_ivp(const Potential& pot, std::vector<double> u0,
                                            double t, const Grid1D& grid, double dt,
                                            LinearScheme scheme) {
    if (!(t > 0.0)) throw std::invalid_argument("solve_linear_kernel_ivp: t must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("solve_linear_kernel_ivp: dt must be positive");
    grid.validate();
    if (static_cast<int>(u0.size()) != grid.n)
        throw std::invalid_argument("solve_linear_kernel_ivp: field size does not match grid");

    const int n = grid.n;
    const long long steps =
        std::max<long long>(1, static_cast<long long>(std::lround(t / dt)));
    const double dt_eff = t / static_cast<double>(steps);

    auto overflow_guard = [&](const std::vector<double>& u) {
        double m = 0.0;
        for (double v : u) m = std::max(m, std::abs(v));
        if (m > 1e150)
            throw std::overflow_error("solve_linear_kernel_ivp: field overflow (growth unbounded)");
    };

    if (scheme == LinearScheme::imex_match) {
        // exactly the nonlinear stepper's arithmetic with f = a(x) u
        BoundarySpec bc{BoundaryCondition::dirichlet(0.0), BoundaryCondition::dirichlet(0.0)};
        ReactionProfile lin(pot, NonlinearityKind::linear_below_theta, /*theta=*/0.999999);
        Stepper stepper(lin, bc, grid, dt_eff, /*clamp=*/false);
        double tc = 0.0;
        for (long long k = 0; k < steps; ++k) {
            stepper.advance(u0, tc);
            tc += dt_eff;
            if ((k & 63) == 0) overflow_guard(u0);
        }
        return u0;
    }

    // full Crank-Nicolson on D + diag(a): (I - h/2 L) u+ = (I + h/2 L) u
    // with cell-averaged coefficients so wells keep O(dx^2)
    std::vector<double> acoef(n);
    for (int i = 0; i < n; ++i) acoef[i] = pot.cell_average(grid.x(i), grid.dx);

    const double r = dt_eff / (2.0 * grid.dx * grid.dx);
    std::vector<double> diag(n), cp(n), rhs(n);
    for (int i = 0; i < n; ++i) diag[i] = 1.0 + 2.0 * r - 0.5 * dt_eff * acoef[i];
    diag[0] = diag[n - 1] = 1.0;  // pinned Dirichlet-0 ends

    auto lower = [&](int i) { return (i == 0 || i == n - 1) ? 0.0 : -r; };
    auto upper = [&](int i) { return (i == 0 || i == n - 1) ? 0.0 : -r; };
    cp[0] = upper(0) / diag[0];
    for (int i = 1; i < n; ++i) cp[i] = upper(i) / (diag[i] - lower(i) * cp[i - 1]);

    for (long long k = 0; k < steps; ++k) {
        rhs[0] = 0.0;
        rhs[n - 1] = 0.0;
        for (int i = 1; i + 1 < n; ++i) {
            double lap = r * (u0[i + 1] - 2.0 * u0[i] + u0[i - 1]);
            rhs[i] = u0[i] + lap + 0.5 * dt_eff * acoef[i] * u0[i];
        }
        rhs[0] /= diag[0];
        for (int i = 1; i < n; ++i)
            rhs[i] = (rhs[i] - lower(i) * rhs[i - 1]) / (diag[i] - lower(i) * cp[i - 1]);
        for (int i = n - 2; i >= 0; --i) rhs[i] -= cp[i] * rhs[i + 1];
        u0.swap(rhs);
        if ((k & 63) == 0) overflow_guard(u0);
    }
    return u0;
}

}  // namespace kpplab
