#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <type_traits>
#include <vector>

#include "dmclock/error.hpp"

namespace dmclock
{

struct QuadratureConfig
{
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_intervals = 4000;
};

template<class T>
struct QuadratureResult
{
    T value{};
    double error = 0;
    std::size_t intervals = 0;
};

namespace detail
{
// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1]
inline constexpr std::array<double, 8> gk15_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk15_wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gk15_wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template<class T>
double magnitude(T const& v)
{
    return std::abs(v);
}

template<class F>
auto gk15(F const& f, double a, double b)
{
    using T = std::decay_t<decltype(f(a))>;
    double const center = 0.5 * (a + b);
    double const half = 0.5 * (b - a);

    T const fc = f(center);
    T kronrod = fc * gk15_wk[7];
    T gauss = fc * gk15_wg[3];
    for (std::size_t j = 0; j < 7; ++j)
    {
        double const dx = half * gk15_x[j];
        T const sum = f(center - dx) + f(center + dx);
        kronrod += sum * gk15_wk[j];
        if (j % 2 == 1)
        {
            gauss += sum * gk15_wg[j / 2];
        }
    }
    struct
    {
        T value;
        double error;
    } out{kronrod * half, magnitude((kronrod - gauss) * half)};
    return out;
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Globally adaptive Gauss-Kronrod (7/15) integration of a real- or
 * complex-valued function over [a, b].
 *
 * The interval with the largest error estimate is bisected until the summed
 * error meets max(abs_tol, rel_tol * |I|). Throws NumericError carrying the
 * achieved relative tolerance when the interval budget is exhausted.
 */
template<class F>
auto integrate(F const& f, double a, double b, QuadratureConfig const& cfg = {})
{
    using T = std::decay_t<decltype(f(a))>;
    struct Segment
    {
        double a, b;
        T value;
        double error;
        bool operator<(Segment const& other) const
        {
            return error < other.error;
        }
    };

    QuadratureResult<T> result;
    if (a == b)
    {
        return result;
    }

    std::priority_queue<Segment> heap;
    auto first = detail::gk15(f, a, b);
    heap.push({a, b, first.value, first.error});
    T total = first.value;
    double total_error = first.error;

    auto converged = [&] {
        return total_error
               <= std::max(cfg.abs_tol, cfg.rel_tol * detail::magnitude(total));
    };

    while (!converged())
    {
        if (heap.size() >= cfg.max_intervals)
        {
            double const achieved
                = total_error / std::max(detail::magnitude(total), 1e-300);
            throw NumericError("adaptive quadrature did not converge", achieved);
        }
        Segment worst = heap.top();
        heap.pop();
        double const mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
        {
            // Interval can no longer be split in floating point
            heap.push(worst);
            double const achieved
                = total_error / std::max(detail::magnitude(total), 1e-300);
            throw NumericError("adaptive quadrature hit floating-point resolution",
                               achieved);
        }
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
    }

    // Re-sum to shed accumulated update roundoff
    T sum{};
    double err = 0;
    result.intervals = heap.size();
    while (!heap.empty())
    {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    result.value = sum;
    result.error = err;
    return result;
}

//---------------------------------------------------------------------------//
/*!
 * Integrate over [a, b] split into fixed panels of (at most) the given
 * length, each integrated adaptively to the configured tolerance.
 *
 * Used for oscillatory integrands, with the panel length matched to half a
 * period so every panel sees a bounded number of sign changes.
 */
template<class F>
auto integrate_panels(F const& f,
                      double a,
                      double b,
                      double panel_length,
                      QuadratureConfig const& cfg = {})
{
    using T = std::decay_t<decltype(f(a))>;
    detail::require(panel_length > 0, "panel length must be positive");
    auto const panels = static_cast<std::size_t>(
        std::max(1.0, std::ceil((b - a) / panel_length)));
    double const width = (b - a) / static_cast<double>(panels);

    QuadratureResult<T> result;
    for (std::size_t i = 0; i < panels; ++i)
    {
        double const lo = a + width * static_cast<double>(i);
        double const hi = (i + 1 == panels) ? b : lo + width;
        auto part = integrate(f, lo, hi, cfg);
        result.value += part.value;
        result.error += part.error;
        result.intervals += part.intervals;
    }
    return result;
}

//! Composite 15-point Kronrod rule on equal panels of at most panel_length.
//! Non-adaptive, so the result is a smooth function of any parameter of f.
template<class F>
auto integrate_fixed_panels(F const& f, double a, double b, double panel_length)
{
    using T = std::decay_t<decltype(f(a))>;
    detail::require(panel_length > 0, "panel length must be positive");
    auto const panels = static_cast<std::size_t>(
        std::max(1.0, std::ceil((b - a) / panel_length)));
    double const width = (b - a) / static_cast<double>(panels);

    QuadratureResult<T> result;
    result.intervals = panels;
    for (std::size_t i = 0; i < panels; ++i)
    {
        double const lo = a + width * static_cast<double>(i);
        double const hi = (i + 1 == panels) ? b : lo + width;
        auto part = detail::gk15(f, lo, hi);
        result.value += part.value;
        result.error += part.error;
    }
    return result;
}

}  // namespace dmclock
