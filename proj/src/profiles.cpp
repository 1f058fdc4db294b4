#include "kpplab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kpplab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Antiderivative of the unit cosine ramp r(s) = (1 + cos(pi*s/ramp))/2 on [0, ramp].
double ramp_integral(double s, double ramp) {
    if (s <= 0.0) return 0.0;
    if (s >= ramp) return ramp / 2.0;
    return 0.5 * (s + ramp / kPi * std::sin(kPi * s / ramp));
}

}  // namespace

Potential Potential::square_well(double height, double half_width) {
    if (!(half_width > 0.0)) throw std::invalid_argument("square_well: half_width must be positive");
    if (!(1.0 + height > 0.0)) throw std::invalid_argument("square_well: rate 1+h must stay positive");
    Potential p;
    p.kind_ = PotentialKind::square_well;
    p.height_ = height;
    p.half_width_ = half_width;
    p.m0_ = half_width;
    p.a_min_ = std::min(1.0, 1.0 + height);
    p.a_max_ = std::max(1.0, 1.0 + height);
    p.even_ = true;
    return p;
}

Potential Potential::bump(double height, double half_width, double ramp_width) {
    if (!(half_width > 0.0)) throw std::invalid_argument("bump: half_width must be positive");
    if (!(ramp_width > 0.0)) throw std::invalid_argument("bump: ramp_width must be positive");
    if (!(1.0 + height > 0.0)) throw std::invalid_argument("bump: rate 1+h must stay positive");
    Potential p;
    p.kind_ = PotentialKind::bump;
    p.height_ = height;
    p.half_width_ = half_width;
    p.ramp_ = ramp_width;
    p.m0_ = half_width + ramp_width;
    p.a_min_ = std::min(1.0, 1.0 + height);
    p.a_max_ = std::max(1.0, 1.0 + height);
    p.even_ = true;
    return p;
}

Potential Potential::tabulated(std::vector<double> xs, std::vector<double> values) {
    if (xs.size() != values.size() || xs.size() < 2)
        throw std::invalid_argument("tabulated: need matching x/value columns, at least 2 rows");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument("tabulated: x column must be strictly increasing");
    Potential p;
    p.kind_ = PotentialKind::tabulated;
    p.m0_ = std::max(std::abs(xs.front()), std::abs(xs.back()));
    p.a_min_ = 1.0;
    p.a_max_ = 1.0;
    for (double v : values) {
        p.a_min_ = std::min(p.a_min_, v);
        p.a_max_ = std::max(p.a_max_, v);
    }
    p.tab_x_ = std::move(xs);
    p.tab_v_ = std::move(values);
    // declared even only if the table itself is mirror symmetric
    p.even_ = true;
    for (std::size_t i = 0; i < p.tab_x_.size(); ++i) {
        std::size_t j = p.tab_x_.size() - 1 - i;
        if (std::abs(p.tab_x_[i] + p.tab_x_[j]) > 1e-12 ||
            std::abs(p.tab_v_[i] - p.tab_v_[j]) > 1e-12) {
            p.even_ = false;
            break;
        }
    }
    return p;
}

Potential Potential::tabulated_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("tabulated_from_csv: cannot open " + path);
    std::vector<double> xs, vs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x, v;
        if (row >> x >> v) {
            xs.push_back(x);
            vs.push_back(v);
        }  // header rows simply fail to parse and are skipped
    }
    return tabulated(std::move(xs), std::move(vs));
}

double Potential::operator()(double x) const {
    if (std::abs(x) > m0_) return 1.0;
    switch (kind_) {
        case PotentialKind::square_well:
            return 1.0 + height_;
        case PotentialKind::bump: {
            double ax = std::abs(x);
            if (ax <= half_width_) return 1.0 + height_;
            double s = ax - half_width_;  // in (0, ramp]
            return 1.0 + height_ * 0.5 * (1.0 + std::cos(kPi * s / ramp_));
        }
        case PotentialKind::tabulated: {
            if (x < tab_x_.front() || x > tab_x_.back()) return 1.0;
            auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
            if (it == tab_x_.begin()) return tab_v_.front();
            if (it == tab_x_.end()) return tab_v_.back();
            std::size_t j = static_cast<std::size_t>(it - tab_x_.begin());
            double w = (x - tab_x_[j - 1]) / (tab_x_[j] - tab_x_[j - 1]);
            return (1.0 - w) * tab_v_[j - 1] + w * tab_v_[j];
        }
    }
    return 1.0;
}

double Potential::integral_excess(double lo, double hi) const {
    if (hi <= lo) return 0.0;
    switch (kind_) {
        case PotentialKind::square_well: {
            double overlap = std::min(hi, half_width_) - std::max(lo, -half_width_);
            return height_ * std::max(0.0, overlap);
        }
        case PotentialKind::bump: {
            // excess = h on [-w,w] plus mirrored cosine ramps
            auto one_sided = [&](double s_lo, double s_hi) {
                // integral of the ramp shape over offsets measured from w
                return ramp_integral(s_hi, ramp_) - ramp_integral(s_lo, ramp_);
            };
            double total = height_ * std::max(0.0, std::min(hi, half_width_) - std::max(lo, -half_width_));
            // right ramp: x in [w, w+ramp]
            if (hi > half_width_)
                total += height_ * one_sided(std::max(0.0, lo - half_width_), hi - half_width_);
            // left ramp: x in [-w-ramp, -w], mirror via s = -x - w
            if (lo < -half_width_)
                total += height_ * one_sided(std::max(0.0, -hi - half_width_), -lo - half_width_);
            return total;
        }
        case PotentialKind::tabulated: {
            // exact integral of the piecewise-linear interpolant minus 1
            double clo = std::max(lo, tab_x_.front());
            double chi = std::min(hi, tab_x_.back());
            if (chi <= clo) return 0.0;
            double total = 0.0;
            for (std::size_t j = 0; j + 1 < tab_x_.size(); ++j) {
                double sl = std::max(clo, tab_x_[j]);
                double sh = std::min(chi, tab_x_[j + 1]);
                if (sh <= sl) continue;
                double seg = tab_x_[j + 1] - tab_x_[j];
                auto value_at = [&](double x) {
                    double w = (x - tab_x_[j]) / seg;
                    return (1.0 - w) * tab_v_[j] + w * tab_v_[j + 1] - 1.0;
                };
                total += 0.5 * (value_at(sl) + value_at(sh)) * (sh - sl);
            }
            return total;
        }
    }
    return 0.0;
}

double Potential::cell_average(double x, double dx) const {
    if (std::abs(x) > m0_ + 0.5 * dx) return 1.0;
    return 1.0 + integral_excess(x - 0.5 * dx, x + 0.5 * dx) / dx;
}

namespace {

// Tight constant for 10.1 when f is the linear-below-theta family:
// C >= a_+ * max_{u in (theta,1)} (u - theta) / ((1-theta) u^2), delta = 1.
double linear_family_kpp_C(double a_plus, double theta) {
    double peak = (2.0 * theta < 1.0) ? 1.0 / (4.0 * theta) : (1.0 - theta);
    return a_plus * peak / (1.0 - theta);
}

}  // namespace

ReactionProfile::ReactionProfile(Potential pot, NonlinearityKind kind, double theta)
    : potential_(std::move(pot)), kind_(kind), theta_(theta) {
    if (kind == NonlinearityKind::custom)
        throw std::invalid_argument("ReactionProfile: custom profiles need an explicit g(u)");
    if (kind == NonlinearityKind::linear_below_theta || kind == NonlinearityKind::ignition) {
        if (!(theta > 0.0 && theta < 1.0))
            throw std::invalid_argument("ReactionProfile: theta must lie in (0,1)");
    }
    kpp_.delta = 1.0;
    switch (kind) {
        case NonlinearityKind::linear_below_theta:
            kpp_.C = linear_family_kpp_C(potential_.max_rate(), theta_);
            break;
        case NonlinearityKind::logistic_scaled:
            kpp_.C = potential_.max_rate();
            break;
        default:
            kpp_.C = 1.0;
            break;
    }
}

ReactionProfile::ReactionProfile(Potential pot, std::function<double(double)> g,
                                 KppConstants constants)
    : potential_(std::move(pot)),
      kind_(NonlinearityKind::custom),
      custom_g_(std::move(g)),
      kpp_(constants) {
    if (!custom_g_) throw std::invalid_argument("ReactionProfile: null custom g");
}

double ReactionProfile::g_of(double u) const {
    switch (kind_) {
        case NonlinearityKind::linear_below_theta:
            return (u <= theta_) ? u : theta_ * (1.0 - u) / (1.0 - theta_);
        case NonlinearityKind::logistic_scaled:
            return u * (1.0 - u);
        case NonlinearityKind::ignition:
            return (u <= theta_) ? 0.0
                                 : (u - theta_) * (1.0 - u) / ((1.0 - theta_) * (1.0 - theta_));
        case NonlinearityKind::custom:
            return custom_g_(u);
    }
    return 0.0;
}

double ReactionProfile::f(double x, double u) const {
    // exact zeros at u=0 and u=1; f == 0 outside [0,1] by convention
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return potential_(x) * g_of(u);
}

double ReactionProfile::lipschitz_bound() const {
    double slope = 1.0;
    switch (kind_) {
        case NonlinearityKind::linear_below_theta:
            slope = std::max(1.0, theta_ / (1.0 - theta_));
            break;
        case NonlinearityKind::logistic_scaled:
            slope = 1.0;
            break;
        case NonlinearityKind::ignition:
            slope = 1.0 / (1.0 - theta_);
            break;
        case NonlinearityKind::custom: {
            // sampled estimate
            slope = 0.0;
            const int n = 2048;
            double prev = custom_g_(0.0);
            for (int i = 1; i <= n; ++i) {
                double u = static_cast<double>(i) / n;
                double cur = custom_g_(u);
                slope = std::max(slope, std::abs(cur - prev) * n);
                prev = cur;
            }
            break;
        }
    }
    return potential_.max_rate() * slope;
}

double evaluate_a(const ReactionProfile& profile, double x) { return profile.a(x); }
double evaluate_f(const ReactionProfile& profile, double x, double u) { return profile.f(x, u); }

SamplingPlan default_sampling_plan(const ReactionProfile& profile) {
    double m0 = profile.potential().support_radius();
    return SamplingPlan{-m0 - 1.0, m0 + 1.0, 512, 512};
}

ValidationReport validate_kpp(const ReactionProfile& profile, const SamplingPlan& plan) {
    ValidationReport report;
    report.a_min_sampled = profile.potential().min_rate();
    report.a_max_sampled = profile.potential().max_rate();

    const double C = profile.kpp().C;
    const double delta = profile.kpp().delta;

    for (int ix = 0; ix < plan.nx; ++ix) {
        double x = plan.x_lo + (plan.x_hi - plan.x_lo) * ix / (plan.nx - 1);
        double ax = profile.a(x);
        report.a_min_sampled = std::min(report.a_min_sampled, ax);
        report.a_max_sampled = std::max(report.a_max_sampled, ax);
    }
    if (!(report.a_min_sampled > 0.0))
        throw std::invalid_argument("validate_kpp: rate a(x) must stay positive (a_- > 0)");

    for (int ix = 0; ix < plan.nx; ++ix) {
        double x = plan.x_lo + (plan.x_hi - plan.x_lo) * ix / (plan.nx - 1);
        double ax = profile.a(x);
        for (int iu = 1; iu < plan.nu; ++iu) {
            double u = static_cast<double>(iu) / plan.nu;  // interior of (0,1)
            double fu = profile.f(x, u);
            if (!(fu > 0.0))
                report.violations.push_back({KppHypothesis::positivity, x, u, -fu});
            if (fu > ax * u + 1e-14)
                report.violations.push_back({KppHypothesis::upper_linear, x, u, fu - ax * u});
            double floor_val = ax * u - C * std::pow(u, 1.0 + delta);
            if (fu < floor_val - 1e-14)
                report.violations.push_back(
                    {KppHypothesis::lower_sublinear, x, u, floor_val - fu});
        }
    }
    return report;
}

ValidationReport validate_kpp(const ReactionProfile& profile) {
    return validate_kpp(profile, default_sampling_plan(profile));
}

}  // namespace kpplab
