#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pqchaos/core.hpp"

namespace pqchaos {

/// `points` times spaced evenly in log t over [t_min, t_max].
inline std::vector<double> log_grid(double t_min, double t_max, int points) {
    if (!(t_min > 0.0) || !(t_max > t_min)) throw DomainError("log_grid: need 0 < t_min < t_max");
    if (points < 2) throw InvalidDimension("log_grid: need at least two points");
    std::vector<double> t(static_cast<std::size_t>(points));
    const double a = std::log(t_min), b = std::log(t_max);
    for (int i = 0; i < points; ++i) t[i] = std::exp(a + (b - a) * i / (points - 1));
    t.front() = t_min;
    t.back() = t_max;
    return t;
}

inline std::vector<double> linear_grid(double t_min, double t_max, int points) {
    if (!(t_max > t_min)) throw DomainError("linear_grid: need t_min < t_max");
    if (points < 2) throw InvalidDimension("linear_grid: need at least two points");
    std::vector<double> t(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) t[i] = t_min + (t_max - t_min) * i / (points - 1);
    return t;
}

/// Distinct step counts j >= 1 nearest to t / tau, ascending.
inline std::vector<long> step_grid(const std::vector<double>& times, double tau) {
    if (!(tau > 0.0)) throw DomainError("step_grid: tau must be positive");
    std::vector<long> steps;
    steps.reserve(times.size());
    for (double t : times) steps.push_back(std::max(1L, std::lround(t / tau)));
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    return steps;
}

}  // namespace pqchaos
