#pragma once

#include <functional>
#include <string>
#include <vector>

namespace kpplab {

enum class PotentialKind { square_well, bump, tabulated };

// The linearized rate a(x) = 1 + excess(x), with excess supported in
// [-M0, M0]. Outside the support a(x) is exactly 1 (no interpolation,
// no roundoff): callers rely on that bit-exactness.
class Potential {
public:
    static Potential square_well(double height, double half_width);
    // C^1 well: flat top of half-width w, cosine ramps of width ramp down to 1.
    static Potential bump(double height, double half_width, double ramp_width = 0.2);
    static Potential tabulated(std::vector<double> xs, std::vector<double> values);
    static Potential tabulated_from_csv(const std::string& path);

    double operator()(double x) const;          // a(x)
    // Mean of a over [x-dx/2, x+dx/2], exact per kind. Discretized operators
    // use this so that discontinuous wells keep O(dx^2) convergence.
    double cell_average(double x, double dx) const;
    // Integral of a-1 over [lo, hi], closed form.
    double integral_excess(double lo, double hi) const;

    PotentialKind kind() const { return kind_; }
    double support_radius() const { return m0_; }  // M0
    double min_rate() const { return a_min_; }     // a_-
    double max_rate() const { return a_max_; }     // a_+
    double height() const { return height_; }
    double half_width() const { return half_width_; }
    bool even() const { return even_; }

private:
    Potential() = default;

    PotentialKind kind_ = PotentialKind::square_well;
    double height_ = 0.0;
    double half_width_ = 0.0;
    double ramp_ = 0.0;
    double m0_ = 0.0;
    double a_min_ = 1.0;
    double a_max_ = 1.0;
    bool even_ = true;
    std::vector<double> tab_x_, tab_v_;
};

enum class NonlinearityKind { linear_below_theta, logistic_scaled, custom, ignition };

struct KppConstants {
    double C = 1.0;
    double delta = 1.0;
};

// The reaction f(x,u). Built-in families:
//   linear_below_theta: f = a(x)u for u <= theta, linear down to f(x,1)=0 above;
//   logistic_scaled:    f = a(x) u (1-u);
//   custom:             f = a(x) g(u) for a user-supplied g;
//   ignition:           f = 0 on [0,theta], a(x)(u-theta)(1-u)/(1-theta)^2 above
//                       (diagnostic only; deliberately fails the KPP hypotheses).
class ReactionProfile {
public:
    ReactionProfile(Potential pot, NonlinearityKind kind, double theta = 0.25);
    ReactionProfile(Potential pot, std::function<double(double)> g,
                    KppConstants constants = {});

    double a(double x) const { return potential_(x); }
    double f(double x, double u) const;
    // sup_u |df/du| bound; explicit reaction steps must keep dt below 1/L.
    double lipschitz_bound() const;

    const Potential& potential() const { return potential_; }
    NonlinearityKind kind() const { return kind_; }
    double theta() const { return theta_; }
    const KppConstants& kpp() const { return kpp_; }
    void set_kpp(KppConstants k) { kpp_ = k; }
    bool linear_below_theta() const { return kind_ == NonlinearityKind::linear_below_theta; }

private:
    double g_of(double u) const;  // shape with a(x) factored out

    Potential potential_;
    NonlinearityKind kind_;
    double theta_ = 0.25;
    std::function<double(double)> custom_g_;
    KppConstants kpp_;
};

// Spec'd operation names.
double evaluate_a(const ReactionProfile& profile, double x);
double evaluate_f(const ReactionProfile& profile, double x, double u);

struct SamplingPlan {
    double x_lo, x_hi;
    int nx = 512;
    int nu = 512;
};
SamplingPlan default_sampling_plan(const ReactionProfile& profile);

enum class KppHypothesis { positivity, upper_linear, lower_sublinear, rate_bounds };

struct KppViolation {
    KppHypothesis which;
    double x, u;
    double margin;  // how far on the wrong side
};

struct ValidationReport {
    std::vector<KppViolation> violations;
    double a_min_sampled = 0.0;
    double a_max_sampled = 0.0;
    bool pass() const { return violations.empty(); }
};

// Dense-sampling check of the structural hypotheses:
//   0 < f(x,u) <= a(x)u          on (0,1),
//   f(x,u) >= a(x)u - C u^(1+delta),
//   0 < a_- <= a(x) <= a_+.
// Throws if the sampled a_- is not positive.
ValidationReport validate_kpp(const ReactionProfile& profile, const SamplingPlan& plan);
ValidationReport validate_kpp(const ReactionProfile& profile);

}  // namespace kpplab
