#pragma once

#include <cstddef>
#include <vector>

namespace sc {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383279;

struct Harmonic {
    int m = 1;  // >= 1
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
};

// A real 2pi-periodic function given as a finite Fourier series
//   f(t) = mean + sum_m (c_m cos(m t) + s_m sin(m t)).
class PeriodicFunction {
public:
    PeriodicFunction() = default;
    explicit PeriodicFunction(double mean, std::vector<Harmonic> harmonics = {});

    double mean() const { return mean_; }
    const std::vector<Harmonic>& harmonics() const { return harmonics_; }

    double value(double t) const;
    // exact antiderivative vanishing at 0: int_0^tau f
    double integral(double tau) const;
    // t -> f(t + x0), still a finite Fourier series
    PeriodicFunction shifted(double x0) const;

private:
    double mean_ = 0.0;
    std::vector<Harmonic> harmonics_;
};

// Diagonal connection theta_j, one periodic function per direction.
// Directions are 0-based; direction 0 is the reference for omega and phases.
class ConnectionSpec {
public:
    ConnectionSpec() = default;
    explicit ConnectionSpec(std::vector<PeriodicFunction> theta);

    std::size_t n() const { return theta_.size(); }
    const PeriodicFunction& theta(std::size_t j) const;
    const std::vector<PeriodicFunction>& thetas() const { return theta_; }

    // every direction re-expanded around x0 (so x0 becomes the new origin)
    ConnectionSpec shifted(double x0) const;

private:
    std::vector<PeriodicFunction> theta_;
};

// Theta_j(tau) = int_0^tau theta_j
double theta_integral(const ConnectionSpec& spec, std::size_t j, double tau);

struct HolonomySummary {
    std::vector<double> theta_2pi;             // Theta_j(2pi)
    std::vector<double> omega;                 // (Theta_0(2pi) - Theta_j(2pi)) / 2pi
    std::vector<int> far_class;                // class label of each direction
    std::vector<std::vector<std::size_t>> classes;
    std::size_t n_classes() const { return classes.size(); }
};

bool near_integer(double x, double tol);

// Directions i, j are "far" when omega_j - omega_i is an integer up to tol.
// Labels are assigned in order of the smallest member index.
HolonomySummary holonomy_summary(const ConnectionSpec& spec, double tol = 1e-9);

// wrap to [0, 2pi)
double wrap_2pi(double x);

}  // namespace sc
