#pragma once

#include <utility>
#include <vector>

#include "kpplab/grid.hpp"
#include "kpplab/profiles.hpp"

namespace kpplab {

// Largest eigenvalue/eigenvector of a symmetric tridiagonal matrix with
// constant off-diagonal, via Sturm-sequence bisection + inverse iteration.
struct TridiagEigen {
    double lambda = 0.0;
    std::vector<double> vec;      // L2-normalized
    double residual = 0.0;        // ||T v - lambda v||_inf / ||v||_inf
    int count_above_one = 0;      // eigenvalues > 1 + count_tol (uniqueness heuristic)
};
TridiagEigen largest_eigen_tridiag(const std::vector<double>& diag, double off,
                                   double count_tol = 1e-6);

struct DirichletEigen {
    double lambda_M = 0.0;
    Grid1D grid;                  // full node set including the zero endpoints
    std::vector<double> psi;      // sup-normalized, zero at both ends
    double M = 0.0;
    double residual = 0.0;
    int count_above_one = 0;
};

// Principal Dirichlet eigenpair of d^2/dx^2 + a(x) on [-M, M] discretized with
// the symmetric second difference on n intervals; potential coefficients are
// cell averages so discontinuous wells keep O(dx^2).
DirichletEigen principal_eigen_dirichlet(const Potential& pot, double M, int n_intervals);

struct SpectralResult {
    double lambda = 1.0;          // reported whole-line eigenvalue (1.0 when not isolated)
    bool isolated = false;        // false: essential-spectrum case, no eigenvalue above 1
    double M = 0.0;               // final half-width used
    Grid1D grid;
    std::vector<double> psi;      // sup-normalized eigenfunction samples on grid
    std::vector<std::pair<double, double>> lambda_trace;  // (M, lambda_M)
    int count_above_one = 0;
    double residual = 0.0;

    // Interpolates psi, continuing with the exact exponential tail outside
    // the trusted part of the grid. Only meaningful when isolated.
    double psi_at(double x) const;
    // L2 norm including the analytic tails.
    double psi_l2_norm() const;
};

struct LineSolveOptions {
    double tol = 1e-8;       // |lambda_{2M} - lambda_M| convergence threshold
    double dx = 5e-3;        // spatial resolution, fixed across the M-doubling
    double M_init = 8.0;
    double M_cap = 200.0;
};

// Whole-line principal eigenvalue by doubling the Dirichlet half-width until
// the eigenvalue settles. Flags the essential-spectrum case (lambda <= 1+tol)
// instead of failing; throws only when the trace is still moving at the cap.
SpectralResult principal_eigen_line(const Potential& pot, const LineSolveOptions& opt = {});

// Solution of phi'' + a(x) phi = gamma phi normalized to exp(-sqrt(gamma-1) x)
// on [M0, +inf); integrated right-to-left (the stable direction).
struct GeneralizedEigenfunction {
    double gamma = 0.0;
    double alpha = 0.0;          // left-tail coefficient of exp(-s x)
    double beta = 0.0;           // left-tail coefficient of exp(+s x)
    double match_radius = 0.0;   // M0
    double x_left = 0.0;
    double dx = 0.0;
    std::vector<double> samples;  // phi on x_left + i*dx, ascending, up to M0

    double decay() const;         // s = sqrt(gamma - 1)
    double eval(double x) const;  // exact tails outside [x_left, M0], interpolation inside
};

class SignChangeError : public std::runtime_error {
public:
    SignChangeError(const std::string& msg, double x) : std::runtime_error(msg), x_at(x) {}
    double x_at;
};

GeneralizedEigenfunction shoot_phi_gamma(const Potential& pot, double gamma, double x_left,
                                         double step = 1e-3);

struct DecayRates {
    double r_minus = 0.0;
    double r_plus = 0.0;
};

// Roots of r^2 - c r + 1 = 0; requires c >= 2.
DecayRates decay_rate(double c);

}  // namespace kpplab
