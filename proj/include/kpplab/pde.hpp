#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "kpplab/fronts.hpp"
#include "kpplab/grid.hpp"
#include "kpplab/profiles.hpp"

namespace kpplab {

enum class BcKind { dirichlet, neumann_zero };

struct BoundaryCondition {
    BcKind kind = BcKind::dirichlet;
    double value = 0.0;

    static BoundaryCondition dirichlet(double v) { return {BcKind::dirichlet, v}; }
    static BoundaryCondition neumann() { return {BcKind::neumann_zero, 0.0}; }
};

struct BoundarySpec {
    BoundaryCondition left = BoundaryCondition::dirichlet(1.0);
    BoundaryCondition right = BoundaryCondition::dirichlet(0.0);

    void validate() const {
        auto check = [](const BoundaryCondition& bc) {
            if (bc.kind == BcKind::dirichlet && (bc.value < 0.0 || bc.value > 1.0))
                throw std::invalid_argument("BoundarySpec: dirichlet values must lie in [0,1]");
        };
        check(left);
        check(right);
    }
};

struct SimulationState {
    Grid1D grid;
    std::vector<double> u;
    double t = 0.0;
    double window_shift = 0.0;  // accumulated rightward translation of the window
};

class RangeViolation : public std::runtime_error {
public:
    RangeViolation(const std::string& msg, double t, double x, double value)
        : std::runtime_error(msg), t_at(t), x_at(x), value_at(value) {}
    double t_at, x_at, value_at;
};

class FrontExitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Explicit-reaction dt budget: 1 / sup|df/du|.
double reaction_dt_budget(const ReactionProfile& profile);

// One IMEX step: Crank-Nicolson diffusion, explicit trapezoidal (predictor/
// corrector) reaction, advanced in delta form so the equilibria 0 and 1 are
// bit-exact fixed points. Values drifting past [0,1] by more than 1e-10 raise
// RangeViolation; smaller overshoot is clamped as roundoff.
void step(SimulationState& state, const ReactionProfile& profile, const BoundarySpec& bc,
          double dt);

enum class WindowPolicyKind { fixed, follow_front };

struct Snapshot {
    double t = 0.0;
    Grid1D grid;
    std::vector<double> u;
};

struct RunOptions {
    double dt = 0.0;                 // required
    double t_end = 0.0;              // required
    double sample_interval = 0.5;    // FrontTrace cadence
    WindowPolicyKind window = WindowPolicyKind::fixed;
    double trigger_fraction = 2.0 / 3.0;  // follow_front: shift when X passes this mark
    std::vector<double> eps_levels{0.1, 0.01};
    int snapshot_every = 0;          // full-field snapshot every k samples (0 = none)
    bool check_front_exit = true;    // fixed window: error when the front nears the edge
};

struct RunOutput {
    SimulationState state;
    FrontTrace trace;
    std::vector<Snapshot> snapshots;
};

RunOutput run(SimulationState initial, const ReactionProfile& profile, const BoundarySpec& bc,
              const RunOptions& opt);

enum class LinearScheme {
    cn_full,     // Crank-Nicolson on diffusion + potential: second order, the kernel oracle
    imex_match,  // arithmetic-identical to step() with f = a(x)u: for cross-validation
};

// Linear Cauchy problem u_t = u_xx + a(x) u with Dirichlet-0 ends, no
// clamping. Aborts if the field overflows past 1e150.
std::vector<double> solve_linear_kernel_ivp(const Potential& pot, std::vector<double> u0,
                                            double t, const Grid1D& grid, double dt,
                                            LinearScheme scheme = LinearScheme::cn_full);

}  // namespace kpplab
