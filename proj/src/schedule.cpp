#include "qhdkit/schedule.hpp"

#include <algorithm>
#include <cmath>

namespace qhdkit {

Schedule Schedule::smooth_log(double gamma, double total_time) {
    if (!(gamma > 0.0)) throw Error("schedule gamma must be positive");
    if (!(total_time > 0.0)) throw Error("schedule total time must be positive");
    Schedule s;
    s.smooth_ = true;
    s.gamma_ = gamma;
    s.total_time_ = total_time;
    return s;
}

Schedule Schedule::piecewise_linear(std::vector<Breakpoint> breakpoints) {
    if (breakpoints.size() < 2) throw Error("piecewise schedule needs at least two breakpoints");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (breakpoints[i].t < breakpoints[i - 1].t)
            throw Error("piecewise schedule breakpoints must be nondecreasing in t");
    if (breakpoints.front().t != 0.0)
        throw Error("piecewise schedule must start at t = 0");
    Schedule s;
    s.smooth_ = false;
    s.total_time_ = breakpoints.back().t;
    s.table_ = std::move(breakpoints);
    if (!(s.total_time_ > 0.0)) throw Error("piecewise schedule must cover a positive interval");
    return s;
}

namespace {

double interpolate(const std::vector<Schedule::Breakpoint>& table, double t, bool chi) {
    if (t <= table.front().t) return chi ? table.front().chi : table.front().phi;
    if (t >= table.back().t) return chi ? table.back().chi : table.back().phi;
    auto it = std::upper_bound(table.begin(), table.end(), t,
                               [](double v, const Schedule::Breakpoint& b) { return v < b.t; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double span = hi.t - lo.t;
    if (span == 0.0) return chi ? hi.chi : hi.phi;
    const double w = (t - lo.t) / span;
    return chi ? lo.chi + w * (hi.chi - lo.chi) : lo.phi + w * (hi.phi - lo.phi);
}

}  // namespace

double Schedule::phi(double t) const {
    if (smooth_) return -std::log1p(gamma_ * t * t);
    return interpolate(table_, t, false);
}

double Schedule::chi(double t) const {
    if (smooth_) return std::log1p(gamma_ * t * t);
    return interpolate(table_, t, true);
}

double Schedule::kinetic_coeff(double t) const { return std::exp(phi(t)); }
double Schedule::potential_coeff(double t) const { return std::exp(chi(t)); }

std::vector<Schedule::Breakpoint> Schedule::breakpoints(int samples) const {
    if (!smooth_) return table_;
    std::vector<Breakpoint> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double t = total_time_ * static_cast<double>(i) / static_cast<double>(samples - 1);
        out.push_back({t, phi(t), chi(t)});
    }
    return out;
}

}  // namespace qhdkit
