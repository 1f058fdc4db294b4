#include "kpplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kpplab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Number of eigenvalues of tridiag(off, diag, off) strictly below sigma.
int sturm_count_below(const std::vector<double>& diag, double off, double sigma) {
    const double off2 = off * off;
    int count = 0;
    double q = diag[0] - sigma;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        double denom = (q == 0.0) ? std::numeric_limits<double>::min() : q;
        q = (diag[i] - sigma) - off2 / denom;
        if (q < 0.0) ++count;
    }
    return count;
}

// Thomas solve of (T - sigma I) x = b for symmetric tridiag(off, diag, off).
void shifted_solve(const std::vector<double>& diag, double off, double sigma,
                   std::vector<double>& x, std::vector<double>& scratch) {
    const std::size_t m = diag.size();
    scratch.resize(m);
    double piv = diag[0] - sigma;
    if (std::abs(piv) < 1e-300) piv = 1e-300;
    scratch[0] = off / piv;
    x[0] /= piv;
    for (std::size_t i = 1; i < m; ++i) {
        piv = (diag[i] - sigma) - off * scratch[i - 1];
        if (std::abs(piv) < 1e-300) piv = (piv < 0 ? -1e-300 : 1e-300);
        scratch[i] = off / piv;
        x[i] = (x[i] - off * x[i - 1]) / piv;
    }
    for (std::size_t i = m - 1; i-- > 0;) x[i] -= scratch[i] * x[i + 1];
}

}  // namespace

TridiagEigen largest_eigen_tridiag(const std::vector<double>& diag, double off,
                                   double count_tol) {
    if (diag.empty()) throw std::invalid_argument("largest_eigen_tridiag: empty matrix");
    const int m = static_cast<int>(diag.size());

    double lo = diag[0], hi = diag[0];
    for (double d : diag) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    lo -= 2.0 * std::abs(off);
    hi += 2.0 * std::abs(off);

    // bisect for the boundary where all m eigenvalues lie below sigma
    double scale = std::max(std::abs(lo), std::abs(hi));
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * scale; ++it) {
        double mid = 0.5 * (lo + hi);
        if (sturm_count_below(diag, off, mid) == m)
            hi = mid;
        else
            lo = mid;
    }
    double lambda = 0.5 * (lo + hi);

    TridiagEigen out;
    out.vec.assign(diag.size(), 1.0);
    std::vector<double> scratch;
    // inverse iteration at the converged shift; a handful of sweeps suffices
    for (int it = 0; it < 8; ++it) {
        shifted_solve(diag, off, lambda, out.vec, scratch);
        double norm = 0.0;
        for (double v : out.vec) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : out.vec) v /= norm;
    }
    // fix sign so the ground state is positive
    double extremum = 0.0;
    for (double v : out.vec)
        if (std::abs(v) > std::abs(extremum)) extremum = v;
    if (extremum < 0.0)
        for (double& v : out.vec) v = -v;

    // Rayleigh quotient refinement and residual
    double ray = 0.0;
    for (int i = 0; i < m; ++i) {
        double tv = diag[i] * out.vec[i];
        if (i > 0) tv += off * out.vec[i - 1];
        if (i + 1 < m) tv += off * out.vec[i + 1];
        ray += out.vec[i] * tv;
    }
    out.lambda = ray;
    double res = 0.0, vmax = 0.0;
    for (int i = 0; i < m; ++i) {
        double tv = diag[i] * out.vec[i];
        if (i > 0) tv += off * out.vec[i - 1];
        if (i + 1 < m) tv += off * out.vec[i + 1];
        res = std::max(res, std::abs(tv - out.lambda * out.vec[i]));
        vmax = std::max(vmax, std::abs(out.vec[i]));
    }
    out.residual = res / vmax;
    out.count_above_one = m - sturm_count_below(diag, off, 1.0 + count_tol);
    return out;
}

DirichletEigen principal_eigen_dirichlet(const Potential& pot, double M, int n_intervals) {
    if (!(M > pot.support_radius()))
        throw std::invalid_argument("principal_eigen_dirichlet: M must exceed the support radius");
    if (n_intervals < 64)
        throw std::invalid_argument("principal_eigen_dirichlet: need at least 64 intervals");

    const double dx = 2.0 * M / n_intervals;
    const int interior = n_intervals - 1;
    std::vector<double> diag(interior);
    for (int i = 0; i < interior; ++i) {
        double x = -M + (i + 1) * dx;
        diag[i] = -2.0 / (dx * dx) + pot.cell_average(x, dx);
    }
    TridiagEigen eig = largest_eigen_tridiag(diag, 1.0 / (dx * dx));

    DirichletEigen out;
    out.lambda_M = eig.lambda;
    out.M = M;
    out.grid = Grid1D{-M, dx, n_intervals + 1};
    out.psi.assign(n_intervals + 1, 0.0);
    double sup = 0.0;
    for (double v : eig.vec) sup = std::max(sup, std::abs(v));
    for (int i = 0; i < interior; ++i) out.psi[i + 1] = eig.vec[i] / sup;
    out.residual = eig.residual;
    out.count_above_one = eig.count_above_one;
    return out;
}

SpectralResult principal_eigen_line(const Potential& pot, const LineSolveOptions& opt) {
    if (!(opt.tol > 0.0)) throw std::invalid_argument("principal_eigen_line: tol must be positive");

    SpectralResult out;
    double M = std::max(opt.M_init, pot.support_radius() + 4.0);
    DirichletEigen last;
    bool converged = false;
    double prev_lambda = std::numeric_limits<double>::quiet_NaN();

    while (M <= opt.M_cap + 1e-9) {
        int n = std::max(64, static_cast<int>(std::lround(2.0 * M / opt.dx)));
        last = principal_eigen_dirichlet(pot, M, n);
        out.lambda_trace.emplace_back(M, last.lambda_M);
        if (!std::isnan(prev_lambda) && std::abs(last.lambda_M - prev_lambda) < opt.tol) {
            converged = true;
            break;
        }
        prev_lambda = last.lambda_M;
        M *= 2.0;
    }

    if (!converged) {
        // still moving at the cap: legitimate only in the essential-spectrum
        // case, where lambda_M creeps up to 1 like 1 - O(M^-2)
        double gap_scale = 3.0 * std::pow(kPi / (2.0 * last.M), 2);
        if (last.lambda_M <= 1.0 + std::max(opt.tol, gap_scale)) {
            out.isolated = false;
            out.lambda = 1.0;
        } else {
            throw std::runtime_error(
                "principal_eigen_line: M cap reached without convergence (lambda_M still moving)");
        }
    } else {
        out.isolated = last.lambda_M > 1.0 + opt.tol;
        out.lambda = out.isolated ? last.lambda_M : 1.0;
    }
    out.M = last.M;
    out.grid = last.grid;
    out.psi = std::move(last.psi);
    out.residual = last.residual;
    out.count_above_one = last.count_above_one;
    return out;
}

double SpectralResult::psi_at(double x) const {
    if (psi.empty()) return 0.0;
    const double trusted = M - 3.0;
    if (isolated && std::abs(x) > trusted) {
        double s = std::sqrt(lambda - 1.0);
        int iref = grid.cell_of(std::copysign(trusted, x));
        double xr = grid.x(iref);
        return psi[iref] * std::exp(-s * (std::abs(x) - std::abs(xr)));
    }
    int i = grid.cell_of(x);
    double w = (x - grid.x(i)) / grid.dx;
    return (1.0 - w) * psi[i] + w * psi[i + 1];
}

double SpectralResult::psi_l2_norm() const {
    double acc = 0.0;
    for (int i = 0; i + 1 < grid.n; ++i)
        acc += 0.5 * (psi[i] * psi[i] + psi[i + 1] * psi[i + 1]) * grid.dx;
    if (isolated) {
        // grid truncates the exponential tails; add them analytically
        double s = std::sqrt(lambda - 1.0);
        double trusted = M - 3.0;
        int ir = grid.cell_of(trusted);
        int il = grid.cell_of(-trusted);
        double tail = (psi[ir] * psi[ir] + psi[il] * psi[il]) / (2.0 * s);
        // replace the numerically truncated ends by the analytic continuation
        double ends = 0.0;
        for (int i = 0; i < il; ++i)
            ends += 0.5 * (psi[i] * psi[i] + psi[i + 1] * psi[i + 1]) * grid.dx;
        for (int i = ir; i + 1 < grid.n; ++i)
            ends += 0.5 * (psi[i] * psi[i] + psi[i + 1] * psi[i + 1]) * grid.dx;
        acc = acc - ends + tail;
    }
    return std::sqrt(acc);
}

double GeneralizedEigenfunction::decay() const { return std::sqrt(gamma - 1.0); }

double GeneralizedEigenfunction::eval(double x) const {
    const double s = decay();
    if (x >= match_radius) return std::exp(-s * x);
    // exact left representation, valid for all x <= -M0 where a == 1
    if (x <= -match_radius)
        return alpha * std::exp(-s * x) + beta * std::exp(s * x);
    // cubic interpolation on the stored uniform samples
    double fi = (x - x_left) / dx;
    int i = static_cast<int>(std::floor(fi));
    int n = static_cast<int>(samples.size());
    i = std::clamp(i, 1, n - 3);
    double w = fi - i;
    double ym1 = samples[i - 1], y0 = samples[i], y1 = samples[i + 1], y2 = samples[i + 2];
    double a3 = 0.5 * (-ym1 + 3.0 * y0 - 3.0 * y1 + y2);
    double a2 = ym1 - 2.5 * y0 + 2.0 * y1 - 0.5 * y2;
    double a1 = 0.5 * (y1 - ym1);
    return ((a3 * w + a2) * w + a1) * w + y0;
}

GeneralizedEigenfunction shoot_phi_gamma(const Potential& pot, double gamma, double x_left,
                                         double step) {
    if (!(gamma > 1.0))
        throw std::invalid_argument("shoot_phi_gamma: gamma must exceed 1");
    const double m0 = pot.support_radius();
    if (!(x_left <= -m0))
        throw std::invalid_argument("shoot_phi_gamma: x_left must be <= -M0");

    const double s = std::sqrt(gamma - 1.0);
    // one uniform step everywhere, chosen so -M0 lands exactly on a node
    // (the alpha/beta extraction needs the pure-tail point); x_left extends
    // leftward to the nearest node
    const int n1 = std::max(4, static_cast<int>(std::ceil(2.0 * m0 / step)));
    const double h = 2.0 * m0 / n1;
    const int n2 = std::max(1, static_cast<int>(std::ceil((-m0 - x_left) / h)));

    auto rhs = [&](double x, double phi) { return (gamma - pot(x)) * phi; };

    GeneralizedEigenfunction out;
    out.gamma = gamma;
    out.match_radius = m0;

    std::vector<double> xs, vals;
    double x = m0;
    double phi = std::exp(-s * m0);
    double dphi = -s * phi;
    xs.push_back(x);
    vals.push_back(phi);
    double phi_min = phi;
    double x_min = x;

    auto rk4_step = [&](double h) {
        // classic RK4 on (phi, phi') with phi'' = (gamma - a(x)) phi
        double k1p = dphi, k1v = rhs(x, phi);
        double k2p = dphi + 0.5 * h * k1v, k2v = rhs(x + 0.5 * h, phi + 0.5 * h * k1p);
        double k3p = dphi + 0.5 * h * k2v, k3v = rhs(x + 0.5 * h, phi + 0.5 * h * k2p);
        double k4p = dphi + h * k3v, k4v = rhs(x + h, phi + h * k3p);
        phi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        dphi += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        x += h;
    };

    for (int i = 0; i < n1; ++i) {
        rk4_step(-h);
        x = m0 - (i + 1) * h;  // avoid drift
        xs.push_back(x);
        vals.push_back(phi);
        if (phi < phi_min) {
            phi_min = phi;
            x_min = x;
        }
    }
    double phi_at_m0 = phi, dphi_at_m0 = dphi;
    for (int i = 0; i < n2; ++i) {
        rk4_step(-h);
        x = -m0 - (i + 1) * h;
        xs.push_back(x);
        vals.push_back(phi);
        if (phi < phi_min) {
            phi_min = phi;
            x_min = x;
        }
    }

    if (phi_min <= 0.0)
        throw SignChangeError(
            "shoot_phi_gamma: phi_gamma changes sign (gamma is at or below the principal "
            "eigenvalue)",
            x_min);

    // 2x2 solve for (alpha, beta) from value and derivative at -M0, where
    // a == 1 exactly so the two-exponential representation is exact
    const double E = std::exp(s * m0);
    out.alpha = (s * phi_at_m0 - dphi_at_m0) / (2.0 * s * E);
    out.beta = E * (s * phi_at_m0 + dphi_at_m0) / (2.0 * s);

    // store ascending
    std::reverse(xs.begin(), xs.end());
    std::reverse(vals.begin(), vals.end());
    out.x_left = xs.front();
    out.dx = h;
    out.samples = std::move(vals);
    return out;
}

DecayRates decay_rate(double c) {
    if (!(c >= 2.0))
        throw std::invalid_argument("decay_rate: requires c >= 2 (real decay rates)");
    double disc = std::sqrt(c * c - 4.0);
    return DecayRates{(c - disc) / 2.0, (c + disc) / 2.0};
}

}  // namespace kpplab
