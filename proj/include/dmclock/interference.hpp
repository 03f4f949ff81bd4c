#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "dmclock/constants.hpp"
#include "dmclock/quadrature.hpp"
#include "dmclock/scattering.hpp"

namespace dmclock
{

struct InterferenceConfig
{
    //! Evaluation time, as packet-center displacement v t in units of d.
    double displacement_in_d = 4.0;
    //! Radial window half-width around v t, in units of d.
    double radial_window_in_d = 8.0;
    //! Relative tolerance per radial half-period panel.
    double panel_rel_tol = 1e-4;
    std::size_t max_intervals_per_panel = 200;
};

struct InterferenceResult
{
    double shadow_fraction;  // \int d^3x |Psi_int|^2 by quadrature
    double optical_theorem;  // -(1/2 pi d^2)(4 pi / k) Im f(0)
    double error_estimate;   // summed quadrature error estimate
    double kd;
    std::vector<std::string> warnings;
};

inline constexpr double interference_min_kd = 20.0;

namespace detail
{
//! Allocation-free f(1 - u) for a fixed phase set.
class PartialWaveEvaluator
{
  public:
    PartialWaveEvaluator(PartialWaveSet const& phases, double k)
    {
        coeffs_.reserve(phases.size());
        for (std::size_t l = 0; l < phases.size(); ++l)
        {
            double const delta = phases[l];
            coeffs_.push_back((2.0 * static_cast<double>(l) + 1)
                              * std::sin(delta) * std::polar(1.0, delta) / k);
        }
    }

    std::complex<double> operator()(double x) const
    {
        std::complex<double> sum = coeffs_[0];
        double p_prev = 1.0;
        double p = x;
        for (std::size_t l = 1; l < coeffs_.size(); ++l)
        {
            sum += coeffs_[l] * p;
            auto const lf = static_cast<double>(l);
            double const next = ((2 * lf + 1) * x * p - lf * p_prev) / (lf + 1);
            p_prev = p;
            p = next;
        }
        return sum;
    }

  private:
    std::vector<std::complex<double>> coeffs_;
};
}  // namespace detail

/*!
 * Evaluate the interference integral of the incident Gaussian packet and
 * the outgoing spherical packet by direct quadrature.
 *
 * With x = cos(theta) and u = 1 - x the integrand reduces, after the
 * azimuthal integral, to
 *
 *   2 pi N^2 \int dr r exp(-(r - vt)^2 / 2d^2)
 *            \int_0^2 du f(1 - u) exp[(i k r - r vt / 2d^2) u]
 *
 * with N^2 = (2 pi d^2)^{-3/2}. Both integrals are oscillatory and are split
 * into half-period panels (pi/k in r, pi/(k r) in u) integrated by
 * Gauss-Kronrod (fixed 15-point rule in u, adaptive in r). The time is fixed after the packets have separated (v t =
 * displacement_in_d * d). Slow: intended as an optional cross-check of the
 * optical theorem.
 */
inline InterferenceResult
interference_integral_oracle(WavePacket const& packet,
                             PartialWaveSet const& phases,
                             InterferenceConfig const& cfg = {})
{
    detail::require(packet.k > 0 && packet.d > 0, "invalid wave packet");
    detail::require(!phases.empty(), "partial-wave set is empty");

    double const k = packet.k;
    double const d = packet.d;
    double const vt = cfg.displacement_in_d * d;

    InterferenceResult result{};
    result.kd = k * d;
    if (result.kd < interference_min_kd)
    {
        result.warnings.push_back("k*d below stationary-phase regime (< 20)");
    }
    double s_wave = std::pow(std::sin(phases[0]), 2);
    double higher = 0;
    for (std::size_t l = 1; l < phases.size(); ++l)
    {
        higher += (2.0 * static_cast<double>(l) + 1)
                  * std::pow(std::sin(phases[l]), 2);
    }
    if (higher > s_wave)
    {
        result.warnings.push_back("phase set is not s-wave dominated");
    }

    detail::PartialWaveEvaluator amplitude(phases, k);
    std::complex<double> const f0 = amplitude(1.0);
    result.optical_theorem = -2.0 * f0.imag() / (k * d * d);

    double scale = 0;
    for (std::size_t l = 0; l < phases.size(); ++l)
    {
        scale += (2.0 * static_cast<double>(l) + 1) * std::abs(std::sin(phases[l]));
    }
    scale /= k;
    if (scale == 0)
    {
        result.shadow_fraction = 0;
        return result;
    }

    double const decay = vt / (2 * d * d);
    double const r_lo = std::max(0.0, vt - cfg.radial_window_in_d * d);
    double const r_hi = vt + cfg.radial_window_in_d * d;

    QuadratureConfig outer_cfg{cfg.panel_rel_tol, 0, cfg.max_intervals_per_panel};
    // Floor keeps panels in negligible tails from chasing relative accuracy
    outer_cfg.abs_tol = 1e-12 * scale * r_hi * d;

    auto radial = [&](double r) -> std::complex<double> {
        if (r == 0)
        {
            return {};
        }
        std::complex<double> const rate{-r * decay, k * r};
        auto angular = [&](double u) {
            return amplitude(1.0 - u) * std::exp(rate * u);
        };
        double const panel = constants::pi / (k * r);
        auto in = integrate_fixed_panels(angular, 0.0, 2.0, panel);
        double const envelope = std::exp(-(r - vt) * (r - vt) / (2 * d * d));
        return r * envelope * in.value;
    };

    auto outer = integrate_panels(radial, r_lo, r_hi, constants::pi / k, outer_cfg);

    double const norm2 = std::pow(2 * constants::pi * d * d, -1.5);
    std::complex<double> const overlap = 2 * constants::pi * norm2 * outer.value;
    // |Psi_int|^2 = Psi_inc^* Psi_sc + c.c.
    result.shadow_fraction = 2 * overlap.real();
    result.error_estimate = 4 * constants::pi * norm2 * outer.error;
    return result;
}

}  // namespace dmclock
