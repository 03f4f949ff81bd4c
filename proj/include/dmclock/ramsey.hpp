#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <concepts>
#include <string>
#include <vector>

#include "dmclock/constants.hpp"
#include "dmclock/error.hpp"
#include "dmclock/probability.hpp"
#include "dmclock/roots.hpp"
#include "dmclock/scattering.hpp"

namespace dmclock
{

//---------------------------------------------------------------------------//
/*!
 * Ramsey interrogation: two ideal pi/2 pulses separated by free evolution T.
 *
 * Either the laser phase at the second pulse or the detuning is the
 * independent input; the other follows from phi = delta * T.
 */
class RamseyConfig
{
  public:
    static RamseyConfig from_phase(double T, double phi)
    {
        detail::require(T > 0, "Ramsey time must be positive");
        return RamseyConfig(T, phi / T);
    }
    static RamseyConfig from_detuning(double T, double delta)
    {
        detail::require(T > 0, "Ramsey time must be positive");
        return RamseyConfig(T, delta);
    }

    double T() const { return T_; }
    double delta() const { return delta_; }
    double phi() const { return delta_ * T_; }

  private:
    RamseyConfig(double T, double delta) : T_(T), delta_(delta) {}
    double T_;
    double delta_;
};

//! Above this delta*T the small-detuning expansion behind the shift is suspect.
inline constexpr double detuning_expansion_limit = 0.1;

//---------------------------------------------------------------------------//
// Detection probabilities
//---------------------------------------------------------------------------//
/*!
 * Full first-order Ramsey probability for state |2>:
 *
 *   P2 = (1 + cos phi)/2
 *      + [Re F12 / 4pi - Im(f1 + f2) / 2k] cos(phi) / d^2
 *      + [Im F12 / 4pi + Re(f1 - f2) / 2k] sin(phi) / d^2
 *
 * with f1, f2 the forward amplitudes.
 */
inline ProbabilityEstimate ramsey_p2_full(double phi,
                                          AmplitudeModel const& f1,
                                          AmplitudeModel const& f2,
                                          WavePacket const& packet)
{
    double const k = packet.k;
    double const d2 = packet.d * packet.d;
    auto const F12 = forward_overlap_F12(f1, f2);
    auto const a1 = forward_amplitude(f1);
    auto const a2 = forward_amplitude(f2);

    double const cos_coeff = F12.real() / (4 * constants::pi)
                             - (a1 + a2).imag() / (2 * k);
    double const sin_coeff = F12.imag() / (4 * constants::pi)
                             + (a1 - a2).real() / (2 * k);

    ProbabilityEstimate p;
    p.correction = (cos_coeff * std::cos(phi) + sin_coeff * std::sin(phi)) / d2;
    p.value = 0.5 * (1 + std::cos(phi)) + p.correction;
    detail::check_kf(p.warnings, k, std::max(std::abs(a1), std::abs(a2)));
    detail::check_range(p);
    return p;
}

/*!
 * Full-order P1, defined as 1 - P2 (no independent full-order expression
 * for state |1> is available).
 */
inline ProbabilityEstimate ramsey_p1_full(double phi,
                                          AmplitudeModel const& f1,
                                          AmplitudeModel const& f2,
                                          WavePacket const& packet)
{
    auto p = ramsey_p2_full(phi, f1, f2, packet);
    p.value = 1 - p.value;
    p.correction = -p.correction;
    return p;
}

//! Leading-order P2 for k|f| << 1; re_df = Re[f1(0) - f2(0)].
template<std::floating_point Real>
Real ramsey_p2_simplified(Real phi, Real re_df, Real k, Real d)
{
    using std::cos;
    using std::sin;
    return Real(0.5) * (1 + cos(phi)) + re_df / (2 * k * d * d) * sin(phi);
}

template<std::floating_point Real>
Real ramsey_p1_simplified(Real phi, Real re_df, Real k, Real d)
{
    using std::cos;
    using std::sin;
    return Real(0.5) * (1 - cos(phi)) - re_df / (2 * k * d * d) * sin(phi);
}

inline double
ramsey_p2_simplified(double phi, double re_df, WavePacket const& packet)
{
    return ramsey_p2_simplified<double>(phi, re_df, packet.k, packet.d);
}

inline double
ramsey_p1_simplified(double phi, double re_df, WavePacket const& packet)
{
    return ramsey_p1_simplified<double>(phi, re_df, packet.k, packet.d);
}

/*!
 * P2 written directly in partial-wave phases (shorter set zero-padded):
 *
 *   P2 = (1 + cos phi)/2
 *      - 1/(2 k^2 d^2) sum (2l+1) sin^2(d1 - d2) cos phi
 *      + 1/(4 k^2 d^2) sum (2l+1) sin(2 d1 - 2 d2) sin phi
 */
inline double ramsey_p2_partial_wave(double phi,
                                     PartialWaveSet const& set1,
                                     PartialWaveSet const& set2,
                                     WavePacket const& packet)
{
    detail::require(!set1.empty() && !set2.empty(), "partial-wave set is empty");
    std::size_t const n = std::max(set1.size(), set2.size());
    double cos_sum = 0;
    double sin_sum = 0;
    for (std::size_t l = 0; l < n; ++l)
    {
        double const w = 2.0 * static_cast<double>(l) + 1;
        double const diff = set1[l] - set2[l];
        cos_sum += w * std::sin(diff) * std::sin(diff);
        sin_sum += w * std::sin(2 * diff);
    }
    double const kd2 = packet.k * packet.k * packet.d * packet.d;
    return 0.5 * (1 + std::cos(phi)) - cos_sum * std::cos(phi) / (2 * kd2)
           + sin_sum * std::sin(phi) / (4 * kd2);
}

//---------------------------------------------------------------------------//
// Central-fringe shift
//---------------------------------------------------------------------------//
//! Shift of the central fringe maximum (rad/s): Re[f1 - f2] / (k d^2 T).
inline double ramsey_shift(double re_df, WavePacket const& packet, double T)
{
    detail::require(T > 0, "Ramsey time must be positive");
    return re_df / (packet.k * packet.d * packet.d * T);
}

/*!
 * Central-fringe maximum of the leading-order P2, found numerically on
 * (-pi/2T, pi/2T) from the sign change of dP2/d(delta). The exact
 * stationary point obeys tan(delta T) = re_df / (k d^2).
 */
template<std::floating_point Real>
Real ramsey_shift_numeric(Real re_df, Real k, Real d, Real T)
{
    detail::require(T > 0, "Ramsey time must be positive");
    detail::require(k > 0 && d > 0, "wave packet needs k, d > 0");
    using std::cos;
    using std::sin;
    Real const amp = re_df / (2 * k * d * d);
    auto dp_ddelta = [&](Real delta) {
        Real const phi = delta * T;
        return T * (-sin(phi) / 2 + amp * cos(phi));
    };
    Real const half_width = std::numbers::pi_v<Real> / (2 * T);
    // Stay strictly inside the open interval
    Real const edge = half_width * (1 - std::numeric_limits<Real>::epsilon() * 8);
    return maximize_by_derivative<Real>(dp_ddelta, -edge, edge);
}

inline double
ramsey_shift_numeric(double re_df, WavePacket const& packet, double T)
{
    return ramsey_shift_numeric<double>(re_df, packet.k, packet.d, T);
}

//! Warnings for a shift extracted outside the small-detuning regime.
inline std::vector<std::string> shift_warnings(double delta_max, double T)
{
    std::vector<std::string> w;
    if (std::abs(delta_max * T) > detuning_expansion_limit)
    {
        w.push_back("|delta_max T| > 0.1: small-detuning expansion suspect");
    }
    return w;
}

}  // namespace dmclock
