#pragma once

#include <cmath>

#include "dmclock/error.hpp"

namespace dmclock
{

/*!
 * Bisection for a sign change of g on [lo, hi].
 *
 * Iterates until the bracket collapses to adjacent floating-point values
 * (or an exact zero is hit), so the result is as accurate as the sign of g
 * allows. Throws NumericError when g does not change sign on the bracket.
 */
template<class Real, class G>
Real bisect_root(G const& g, Real lo, Real hi, int max_iter = 400)
{
    Real g_lo = g(lo);
    Real g_hi = g(hi);
    if (g_lo == 0)
    {
        return lo;
    }
    if (g_hi == 0)
    {
        return hi;
    }
    if ((g_lo < 0) == (g_hi < 0))
    {
        throw NumericError("root not bracketed", static_cast<double>(hi - lo));
    }
    for (int i = 0; i < max_iter; ++i)
    {
        Real const mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi)
        {
            return mid;
        }
        Real const g_mid = g(mid);
        if (g_mid == 0)
        {
            return mid;
        }
        if ((g_mid < 0) == (g_lo < 0))
        {
            lo = mid;
            g_lo = g_mid;
        }
        else
        {
            hi = mid;
        }
    }
    throw NumericError("bisection did not converge",
                       static_cast<double>(std::abs(hi - lo)));
}

/*!
 * Locate the maximum of a smooth unimodal function through the zero of its
 * derivative on a bracket where the derivative goes from positive to
 * negative.
 */
template<class Real, class Derivative>
Real maximize_by_derivative(Derivative const& dfdx, Real lo, Real hi)
{
    if (!(dfdx(lo) > 0 && dfdx(hi) < 0))
    {
        throw NumericError("maximum not bracketed by derivative sign change",
                           static_cast<double>(hi - lo));
    }
    return bisect_root<Real>(dfdx, lo, hi);
}

}  // namespace dmclock
