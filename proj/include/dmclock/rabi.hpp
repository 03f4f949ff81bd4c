#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
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
 * Single Rabi pulse of duration T with one collision at t_c.
 *
 * The light phase at pulse start is zero. Derived quantities follow the
 * usual two-level conventions: Omega_r = sqrt(Omega^2 + delta^2),
 * sin(theta) = Omega / Omega_r, cos(theta) = -delta / Omega_r.
 */
struct RabiConfig
{
    double omega;  // Rabi frequency, rad/s
    double T;      // pulse duration, s
    double delta;  // detuning, rad/s
    double t_c;    // collision time, s

    //! Resonant pi pulse (Omega T = pi) of the given duration.
    static RabiConfig pi_pulse(double T, double delta, double t_c)
    {
        RabiConfig cfg{constants::pi / T, T, delta, t_c};
        cfg.validate();
        return cfg;
    }

    void validate() const
    {
        detail::require(omega > 0, "Rabi frequency must be positive");
        detail::require(T > 0, "pulse duration must be positive");
        detail::require(t_c >= 0 && t_c <= T, "collision time outside [0, T]");
        detail::require(std::isfinite(delta), "detuning must be finite");
    }

    double omega_r() const { return std::hypot(omega, delta); }
    double sin_theta() const { return omega / omega_r(); }
    double cos_theta() const { return -delta / omega_r(); }

    //! Omega T = pi, the pulse area assumed by the analytic shift formulas.
    bool is_pi_pulse() const
    {
        return std::abs(omega * T - constants::pi) <= 1e-9;
    }
};

//! Amplitudes (c2, c1) of states |2> and |1> at time `at`, without scattering.
inline std::pair<std::complex<double>, std::complex<double>>
rabi_state_amplitudes(RabiConfig const& cfg, double at)
{
    cfg.validate();
    detail::require(at >= 0 && at <= cfg.T, "time outside [0, T]");
    using namespace std::complex_literals;
    double const half = cfg.omega_r() * at / 2;
    double const s = std::sin(half);
    double const c = std::cos(half);
    std::complex<double> const c2
        = -1.0i * std::polar(1.0, -cfg.delta * at / 2) * cfg.sin_theta() * s;
    std::complex<double> const c1 = std::polar(1.0, cfg.delta * at / 2)
                                    * (c + 1.0i * cfg.cos_theta() * s);
    return {c2, c1};
}

namespace detail
{
//! sin(pi t / T), exactly symmetric about T/2 and exactly zero at 0 and T.
inline double sin_pi_fraction(double t, double T)
{
    return std::sin(constants::pi * std::min(t, T - t) / T);
}

struct RabiTerms
{
    double classical;   // sin^2(theta) sin^2(Omega_r T / 2)
    double deficit;     // 1 - classical, without cancellation near 1
    double scattering;  // sin^2(theta) S_c A_T S_T A_c (2/k d^2) sin(d alpha)
                        //   per unit Re[f1 - f2]
};

inline RabiTerms rabi_terms(RabiConfig const& cfg, double k, double d)
{
    using namespace std::complex_literals;
    double const wr = cfg.omega_r();
    double const sin_t = cfg.sin_theta();
    double const cos_t = cfg.cos_theta();
    double const s_c = std::sin(wr * cfg.t_c / 2);
    double const c_c = std::cos(wr * cfg.t_c / 2);
    double const s_T = std::sin(wr * (cfg.T - cfg.t_c) / 2);
    double const c_T = std::cos(wr * (cfg.T - cfg.t_c) / 2);

    std::complex<double> const x_T = c_T - 1.0i * cos_t * s_T;
    std::complex<double> const x_c = c_c + 1.0i * cos_t * s_c;
    double const d_alpha = std::arg(x_T) - std::arg(x_c);

    double const half_T = std::sin(wr * cfg.T / 2);
    RabiTerms out;
    double const half_T_cos = std::cos(wr * cfg.T / 2);
    out.classical = sin_t * sin_t * half_T * half_T;
    out.deficit = cos_t * cos_t + sin_t * sin_t * half_T_cos * half_T_cos;
    out.scattering = sin_t * sin_t * s_c * std::abs(x_T) * s_T * std::abs(x_c)
                     * (2 / (k * d * d)) * std::sin(d_alpha);
    return out;
}
}  // namespace detail

/*!
 * Rabi probability for |2> with a collision at t_c, to first order in the
 * forward amplitudes:
 *
 *   P2 = sin^2(theta) { sin^2(Omega_r T/2)
 *                      + S_c A_T S_T A_c (2 / k d^2) Re[f1 - f2] sin(dalpha) }
 *
 * where X_T = C_T - i cos(theta) S_T = A_T e^{i alpha_T},
 * X_c = C_c + i cos(theta) S_c = A_c e^{i alpha_c}, dalpha = alpha_T - alpha_c.
 */
inline ProbabilityEstimate rabi_p2(RabiConfig const& cfg,
                                   AmplitudeModel const& f1,
                                   AmplitudeModel const& f2,
                                   WavePacket const& packet)
{
    cfg.validate();
    auto const a1 = forward_amplitude(f1);
    auto const a2 = forward_amplitude(f2);
    auto const terms = detail::rabi_terms(cfg, packet.k, packet.d);

    ProbabilityEstimate p;
    p.correction = terms.scattering * (a1 - a2).real();
    p.value = terms.classical + p.correction;
    detail::check_kf(p.warnings, packet.k, std::max(std::abs(a1), std::abs(a2)));
    detail::check_range(p);
    return p;
}

//! rabi_p2 for forward amplitudes differing by re_df.
inline double
rabi_p2(RabiConfig const& cfg, double re_df, WavePacket const& packet)
{
    cfg.validate();
    auto const terms = detail::rabi_terms(cfg, packet.k, packet.d);
    return terms.classical + terms.scattering * re_df;
}

/*!
 * Small-detuning expansion of the pi-pulse probability:
 *
 *   P2 = 1 - delta^2/Omega^2
 *      + (2 S_c^2 C_c^2 / k d^2) Re[f1 - f2] (2 / sin(Omega t_c)) delta/Omega
 *
 * S_c^2 C_c^2 / sin(Omega t_c) is evaluated as sin(Omega t_c)/4, which is
 * regular at t_c = 0 and t_c = T.
 */
inline ProbabilityEstimate
rabi_p2_expanded(RabiConfig const& cfg, double re_df, WavePacket const& packet)
{
    cfg.validate();
    detail::require(cfg.is_pi_pulse(), "expanded Rabi probability needs Omega T = pi");
    double const x = cfg.delta / cfg.omega;
    double const kd2 = packet.k * packet.d * packet.d;

    ProbabilityEstimate p;
    p.correction = detail::sin_pi_fraction(cfg.t_c, cfg.T) / kd2 * re_df * x;
    p.value = 1 - x * x + p.correction;
    if (std::abs(x) > 0.1)
    {
        p.warnings.push_back("|delta/Omega| > 0.1: expansion outside validity");
    }
    return p;
}

//---------------------------------------------------------------------------//
// Shift
//---------------------------------------------------------------------------//
//! Rabi shift (rad/s) for a pi pulse: sin(Omega t_c) (pi/2) re_df / (k d^2 T).
inline double
rabi_shift(double t_c, double re_df, WavePacket const& packet, double T)
{
    detail::require(T > 0, "pulse duration must be positive");
    detail::require(t_c >= 0 && t_c <= T, "collision time outside [0, T]");
    return detail::sin_pi_fraction(t_c, T) * (constants::pi / 2) * re_df
           / (packet.k * packet.d * packet.d * T);
}

//! Half-width of the detuning window searched by rabi_shift_numeric.
inline constexpr double rabi_search_window = 0.3;

/*!
 * Detuning maximizing the full first-order rabi_p2 of a pi pulse
 * (Omega T = pi), searched on [-0.3 Omega, 0.3 Omega] through the sign
 * change of a central-difference derivative.
 */
inline double
rabi_shift_numeric(double t_c, double re_df, WavePacket const& packet, double T)
{
    detail::require(T > 0, "pulse duration must be positive");
    double const omega = constants::pi / T;
    double const h = 1e-6 * omega;
    // P2 - 1, so the difference quotient does not cancel against 1
    auto p2 = [&](double delta) {
        RabiConfig const cfg{omega, T, delta, t_c};
        cfg.validate();
        auto const terms = detail::rabi_terms(cfg, packet.k, packet.d);
        return terms.scattering * re_df - terms.deficit;
    };
    auto dp = [&](double delta) { return p2(delta + h) - p2(delta - h); };
    double const w = rabi_search_window * omega;
    return maximize_by_derivative<double>(dp, -w, w);
}

//---------------------------------------------------------------------------//
// Shift profile versus collision time
//---------------------------------------------------------------------------//
struct Fig1Row
{
    double t_over_T;
    double rabi;    // shift in units of Re[f1 - f2] / (k d^2 T)
    double ramsey;  // same units; constant
};

//! Shift profile for Rabi and Ramsey interrogation on a uniform t_c grid.
inline std::vector<Fig1Row> fig1_curve(std::size_t samples, double T)
{
    detail::require(samples >= 2, "need at least two samples");
    detail::require(T > 0, "pulse duration must be positive");
    std::vector<Fig1Row> rows;
    rows.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i)
    {
        double const x = static_cast<double>(i) / static_cast<double>(samples - 1);
        rows.push_back({x, (constants::pi / 2) * detail::sin_pi_fraction(x, 1.0), 1.0});
    }
    return rows;
}

}  // namespace dmclock
