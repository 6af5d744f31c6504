#include "spectral_circle/connection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sc {

PeriodicFunction::PeriodicFunction(double mean, std::vector<Harmonic> harmonics)
    : mean_(mean), harmonics_(std::move(harmonics)) {
    if (!std::isfinite(mean_)) throw std::invalid_argument("PeriodicFunction: non-finite mean");
    for (const auto& h : harmonics_) {
        if (h.m < 1) throw std::invalid_argument("PeriodicFunction: harmonic order must be >= 1");
        if (!std::isfinite(h.cos_coeff) || !std::isfinite(h.sin_coeff))
            throw std::invalid_argument("PeriodicFunction: non-finite coefficient");
    }
}

double PeriodicFunction::value(double t) const {
    double v = mean_;
    for (const auto& h : harmonics_) v += h.cos_coeff * std::cos(h.m * t) + h.sin_coeff * std::sin(h.m * t);
    return v;
}

double PeriodicFunction::integral(double tau) const {
    double v = mean_ * tau;
    for (const auto& h : harmonics_) {
        const double m = h.m;
        // 1 - cos(m tau) written as 2 sin^2 to keep precision near 0
        const double s = std::sin(0.5 * m * tau);
        v += h.cos_coeff * std::sin(m * tau) / m + h.sin_coeff * 2.0 * s * s / m;
    }
    return v;
}

PeriodicFunction PeriodicFunction::shifted(double x0) const {
    std::vector<Harmonic> out;
    out.reserve(harmonics_.size());
    for (const auto& h : harmonics_) {
        const double c = std::cos(h.m * x0), s = std::sin(h.m * x0);
        // cos(m(t+x0)) = cos mt c - sin mt s ; sin(m(t+x0)) = sin mt c + cos mt s
        out.push_back({h.m, h.cos_coeff * c + h.sin_coeff * s, h.sin_coeff * c - h.cos_coeff * s});
    }
    return PeriodicFunction(mean_, std::move(out));
}

ConnectionSpec::ConnectionSpec(std::vector<PeriodicFunction> theta) : theta_(std::move(theta)) {
    if (theta_.empty()) throw std::invalid_argument("ConnectionSpec: need at least one direction");
}

const PeriodicFunction& ConnectionSpec::theta(std::size_t j) const {
    if (j >= theta_.size())
        throw std::out_of_range("ConnectionSpec: direction " + std::to_string(j) + " out of range");
    return theta_[j];
}

ConnectionSpec ConnectionSpec::shifted(double x0) const {
    std::vector<PeriodicFunction> t;
    t.reserve(theta_.size());
    for (const auto& f : theta_) t.push_back(f.shifted(x0));
    return ConnectionSpec(std::move(t));
}

double theta_integral(const ConnectionSpec& spec, std::size_t j, double tau) {
    return spec.theta(j).integral(tau);
}

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) <= tol; }

double wrap_2pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

HolonomySummary holonomy_summary(const ConnectionSpec& spec, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("holonomy_summary: tol must be positive");
    HolonomySummary h;
    const std::size_t n = spec.n();
    h.theta_2pi.resize(n);
    h.omega.resize(n);
    for (std::size_t j = 0; j < n; ++j) h.theta_2pi[j] = theta_integral(spec, j, kTwoPi);
    // Theta_j(2pi) = 2pi mean_j exactly; use the means to avoid rounding in the sum
    for (std::size_t j = 0; j < n; ++j) h.omega[j] = spec.theta(0).mean() - spec.theta(j).mean();

    h.far_class.assign(n, -1);
    for (std::size_t j = 0; j < n; ++j) {
        if (h.far_class[j] >= 0) continue;
        const int label = static_cast<int>(h.classes.size());
        h.classes.emplace_back();
        for (std::size_t i = j; i < n; ++i) {
            if (h.far_class[i] >= 0) continue;
            if (near_integer(h.omega[i] - h.omega[j], tol)) {
                h.far_class[i] = label;
                h.classes.back().push_back(i);
            }
        }
    }
    return h;
}

}  // namespace sc
