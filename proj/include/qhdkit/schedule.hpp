#pragma once

#include <vector>

#include "qhdkit/errors.hpp"

namespace qhdkit {

/// Time-dependent log-coefficients (phi_t, chi_t) weighting the kinetic
/// and potential groups. Either the smooth form
///   phi_t = -log(1 + gamma t^2),  chi_t = log(1 + gamma t^2)
/// or a piecewise-linear table of (t, phi, chi) breakpoints covering
/// [0, T].
class Schedule {
public:
    struct Breakpoint {
        double t, phi, chi;
    };

    static Schedule smooth_log(double gamma, double total_time);
    static Schedule piecewise_linear(std::vector<Breakpoint> breakpoints);

    double phi(double t) const;
    double chi(double t) const;
    double kinetic_coeff(double t) const;    // e^phi
    double potential_coeff(double t) const;  // e^chi
    double total_time() const { return total_time_; }

    bool is_smooth_log() const { return smooth_; }
    double gamma() const { return gamma_; }
    /// The breakpoint table; smooth schedules are sampled uniformly.
    std::vector<Breakpoint> breakpoints(int samples = 21) const;

private:
    Schedule() = default;
    bool smooth_ = true;
    double gamma_ = 1.0;
    double total_time_ = 10.0;
    std::vector<Breakpoint> table_;
};

}  // namespace qhdkit
