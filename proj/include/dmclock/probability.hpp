#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace dmclock
{

//! Inputs with k|f| above this leave the first-order regime.
inline constexpr double first_order_kf_limit = 0.1;

/*!
 * Detection probability with its first-order scattering correction.
 *
 * Probabilities are never clamped: a value outside [0, 1] by more than the
 * second-order slack (correction^2) marks a breakdown of the expansion.
 */
struct ProbabilityEstimate
{
    double value = 0;
    double correction = 0;
    std::vector<std::string> warnings;

    bool first_order_valid() const { return warnings.empty(); }
};

namespace detail
{
inline void check_kf(std::vector<std::string>& warnings, double k, double f_abs)
{
    if (k * f_abs >= first_order_kf_limit)
    {
        warnings.push_back("k|f| >= 0.1: outside first-order regime");
    }
}

inline void check_range(ProbabilityEstimate& p)
{
    double const slack = p.correction * p.correction;
    if (p.value < -slack || p.value > 1 + slack)
    {
        p.warnings.push_back("probability outside [0, 1]: first-order breakdown");
    }
}
}  // namespace detail

}  // namespace dmclock
