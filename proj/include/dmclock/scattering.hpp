#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dmclock/constants.hpp"
#include "dmclock/error.hpp"
#include "dmclock/quadrature.hpp"

namespace dmclock
{

//! Complex scattering amplitude, in meters.
using ComplexAmplitude = std::complex<double>;

inline bool is_finite(ComplexAmplitude f)
{
    return std::isfinite(f.real()) && std::isfinite(f.imag());
}

//---------------------------------------------------------------------------//
/*!
 * Real partial-wave phase shifts delta_l (radians) for l = 0..l_max.
 *
 * Truncation is explicit: sets larger than max_partial_waves are rejected,
 * never silently cut.
 */
class PartialWaveSet
{
  public:
    static constexpr std::size_t default_lmax = 8;
    static constexpr std::size_t max_lmax = 64;

    PartialWaveSet() = default;

    explicit PartialWaveSet(std::vector<double> phases)
        : phases_(std::move(phases))
    {
        detail::require(!phases_.empty(), "partial-wave set is empty");
        detail::require(phases_.size() <= max_lmax + 1,
                        "partial-wave set exceeds l_max cap of 64");
        for (double p : phases_)
        {
            detail::require(std::isfinite(p), "partial-wave phase is not finite");
        }
    }

    PartialWaveSet(std::initializer_list<double> phases)
        : PartialWaveSet(std::vector<double>(phases))
    {
    }

    std::span<double const> phases() const { return phases_; }
    std::size_t size() const { return phases_.size(); }
    std::size_t lmax() const { return phases_.size() - 1; }
    bool empty() const { return phases_.empty(); }
    double operator[](std::size_t l) const
    {
        return l < phases_.size() ? phases_[l] : 0.0;
    }

    //! Copy keeping partial waves l <= lmax.
    PartialWaveSet truncated(std::size_t lmax) const
    {
        auto n = std::min(lmax + 1, phases_.size());
        return PartialWaveSet(
            std::vector<double>(phases_.begin(), phases_.begin() + n));
    }

    //! Copy zero-padded to hold l = 0..lmax.
    PartialWaveSet padded(std::size_t lmax) const
    {
        auto p = phases_;
        if (p.size() < lmax + 1)
        {
            p.resize(lmax + 1, 0.0);
        }
        return PartialWaveSet(std::move(p));
    }

    bool operator==(PartialWaveSet const&) const = default;

  private:
    std::vector<double> phases_;
};

//---------------------------------------------------------------------------//
/*!
 * Relative-motion kinematics of a Gaussian wave packet.
 *
 * Invariant: k = mu v / hbar.
 */
struct WavePacket
{
    double k;   // 1/m
    double d;   // m
    double v;   // m/s
    double mu;  // kg

    static WavePacket from_kinematics(double mu, double v, double d)
    {
        detail::require(mu > 0 && v > 0 && d > 0,
                        "wave packet needs mu, v, d > 0");
        return {mu * v / constants::hbar, d, v, mu};
    }

    //! Packet from (k, d); v follows from k for the given reduced mass.
    static WavePacket
    from_wavenumber(double k, double d, double mu = constants::eV_mass)
    {
        detail::require(k > 0 && d > 0 && mu > 0,
                        "wave packet needs k, d, mu > 0");
        return {k, d, constants::hbar * k / mu, mu};
    }

    void validate() const
    {
        detail::require(k > 0 && d > 0 && v > 0 && mu > 0,
                        "wave packet fields must be positive");
        double const k_kin = mu * v / constants::hbar;
        detail::require(std::abs(k - k_kin) <= 1e-9 * k,
                        "wave packet violates k = mu v / hbar");
    }
};

//---------------------------------------------------------------------------//
// Legendre polynomials
//---------------------------------------------------------------------------//
//! P_0(x)..P_lmax(x) by upward recurrence.
inline std::vector<double> legendre_all(std::size_t lmax, double x)
{
    std::vector<double> p(lmax + 1);
    p[0] = 1.0;
    if (lmax >= 1)
    {
        p[1] = x;
    }
    for (std::size_t l = 1; l < lmax; ++l)
    {
        auto const lf = static_cast<double>(l);
        p[l + 1] = ((2 * lf + 1) * x * p[l] - lf * p[l - 1]) / (lf + 1);
    }
    return p;
}

//---------------------------------------------------------------------------//
// Partial-wave amplitude
//---------------------------------------------------------------------------//
/*!
 * Scattering amplitude from partial-wave phases:
 *   f(theta) = 1/(2ik) sum_l (2l+1) (exp(2i delta_l) - 1) P_l(cos theta)
 */
inline ComplexAmplitude
partial_wave_amplitude_cos(PartialWaveSet const& phases, double k, double x)
{
    detail::require(!phases.empty(), "partial-wave set is empty");
    detail::require(k > 0, "wavenumber must be positive");
    detail::require(x >= -1 && x <= 1, "cos(theta) outside [-1, 1]");

    // (exp(2i d) - 1)/(2i) = sin(d) exp(i d)
    auto const p = legendre_all(phases.lmax(), x);
    ComplexAmplitude sum{};
    for (std::size_t l = 0; l < phases.size(); ++l)
    {
        double const delta = phases[l];
        sum += (2.0 * static_cast<double>(l) + 1) * std::sin(delta)
               * std::polar(1.0, delta) * p[l];
    }
    return sum / k;
}

inline ComplexAmplitude
partial_wave_amplitude(PartialWaveSet const& phases, double k, double theta)
{
    detail::require(theta >= 0 && theta <= constants::pi,
                    "scattering angle outside [0, pi]");
    return partial_wave_amplitude_cos(phases, k, std::cos(theta));
}

//---------------------------------------------------------------------------//
// Amplitude models
//---------------------------------------------------------------------------//
//! Forward amplitude f(0) only; enough for the first-order shift formulas.
struct ForwardAmplitude
{
    ComplexAmplitude f0;
};

//! Full angular amplitude from a phase set at wavenumber k.
struct PartialWaveAmplitude
{
    PartialWaveSet phases;
    double k;
};

//! f(theta) tabulated on an ascending cos(theta) grid spanning [-1, 1].
class TabulatedAmplitude
{
  public:
    TabulatedAmplitude(std::vector<double> cos_grid,
                       std::vector<ComplexAmplitude> values)
        : x_(std::move(cos_grid)), f_(std::move(values))
    {
        detail::require(x_.size() >= 2 && x_.size() == f_.size(),
                        "tabulated amplitude needs >= 2 matching points");
        detail::require(x_.front() == -1.0 && x_.back() == 1.0,
                        "tabulated cos(theta) grid must span [-1, 1]");
        detail::require(std::is_sorted(x_.begin(), x_.end())
                            && std::adjacent_find(x_.begin(), x_.end())
                                   == x_.end(),
                        "tabulated cos(theta) grid must be strictly ascending");
        for (auto const& v : f_)
        {
            detail::require(is_finite(v), "tabulated amplitude is not finite");
        }
    }

    ComplexAmplitude operator()(double x) const
    {
        detail::require(x >= -1 && x <= 1, "cos(theta) outside [-1, 1]");
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        if (it == x_.end())
        {
            return f_.back();
        }
        auto const i = static_cast<std::size_t>(it - x_.begin()) - 1;
        double const t = (x - x_[i]) / (x_[i + 1] - x_[i]);
        return f_[i] + t * (f_[i + 1] - f_[i]);
    }

    std::span<double const> grid() const { return x_; }

  private:
    std::vector<double> x_;
    std::vector<ComplexAmplitude> f_;
};

using AmplitudeModel
    = std::variant<ForwardAmplitude, PartialWaveAmplitude, TabulatedAmplitude>;

inline bool has_angular_dependence(AmplitudeModel const& m)
{
    return !std::holds_alternative<ForwardAmplitude>(m);
}

//! Forward (theta = 0) amplitude of any model.
inline ComplexAmplitude forward_amplitude(AmplitudeModel const& m)
{
    if (auto const* fwd = std::get_if<ForwardAmplitude>(&m))
    {
        return fwd->f0;
    }
    if (auto const* pw = std::get_if<PartialWaveAmplitude>(&m))
    {
        return partial_wave_amplitude_cos(pw->phases, pw->k, 1.0);
    }
    return std::get<TabulatedAmplitude>(m)(1.0);
}

//! Amplitude at cos(theta) = x; forward-only models accept only x = 1.
inline ComplexAmplitude amplitude_at(AmplitudeModel const& m, double x)
{
    if (auto const* fwd = std::get_if<ForwardAmplitude>(&m))
    {
        detail::require(x == 1.0,
                        "forward-only amplitude model has no angular data");
        return fwd->f0;
    }
    if (auto const* pw = std::get_if<PartialWaveAmplitude>(&m))
    {
        return partial_wave_amplitude_cos(pw->phases, pw->k, x);
    }
    return std::get<TabulatedAmplitude>(m)(x);
}

//---------------------------------------------------------------------------//
// Solid-angle overlap F12 = \int dOmega f1(theta) f2*(theta)
//---------------------------------------------------------------------------//
/*!
 * Closed form of F12 for two phase sets at the same wavenumber, l-by-l:
 *   Re F12 = 4pi/k^2 sum (2l+1) [sin^2 d1 sin^2 d2 + sin 2d1 sin 2d2 / 4]
 *   Im F12 = 4pi/k^2 sum (2l+1) sin d1 sin d2 sin(d1 - d2)
 */
inline std::complex<double> forward_overlap_F12_closed(PartialWaveSet const& set1,
                                                       PartialWaveSet const& set2,
                                                       double k)
{
    detail::require(!set1.empty() && !set2.empty(), "partial-wave set is empty");
    detail::require(k > 0, "wavenumber must be positive");
    std::size_t const n = std::max(set1.size(), set2.size());
    double re = 0;
    double im = 0;
    for (std::size_t l = 0; l < n; ++l)
    {
        double const a = set1[l];
        double const b = set2[l];
        double const w = 2.0 * static_cast<double>(l) + 1;
        double const sa = std::sin(a);
        double const sb = std::sin(b);
        re += w * (sa * sa * sb * sb + std::sin(2 * a) * std::sin(2 * b) / 4);
        im += w * sa * sb * std::sin(a - b);
    }
    double const scale = 4 * constants::pi / (k * k);
    return {scale * re, scale * im};
}

//! F12 by adaptive quadrature over cos(theta) (azimuth integrated out).
inline QuadratureResult<std::complex<double>>
forward_overlap_F12_quadrature(AmplitudeModel const& f1,
                               AmplitudeModel const& f2,
                               QuadratureConfig cfg = {1e-13, 0, 4000})
{
    detail::require(has_angular_dependence(f1) && has_angular_dependence(f2),
                    "F12 needs angular amplitude models");
    auto integrand = [&](double x) {
        return amplitude_at(f1, x) * std::conj(amplitude_at(f2, x));
    };
    // Tabulated models are piecewise linear: integrate between knots.
    std::vector<double> knots{-1.0, 1.0};
    for (auto const* m : {&f1, &f2})
    {
        if (auto const* tab = std::get_if<TabulatedAmplitude>(m))
        {
            knots.insert(knots.end(), tab->grid().begin(), tab->grid().end());
        }
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    QuadratureResult<std::complex<double>> total;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    {
        auto part = integrate(integrand, knots[i], knots[i + 1], cfg);
        total.value += part.value;
        total.error += part.error;
        total.intervals += part.intervals;
    }
    total.value *= 2 * constants::pi;
    total.error *= 2 * constants::pi;
    return total;
}

/*!
 * F12 between two amplitude models (m^2).
 *
 * Two phase sets at equal k use the closed form; other angular models fall
 * back to quadrature. Forward-only models carry no angular information and
 * are rejected.
 */
inline std::complex<double>
forward_overlap_F12(AmplitudeModel const& f1, AmplitudeModel const& f2)
{
    auto const* p1 = std::get_if<PartialWaveAmplitude>(&f1);
    auto const* p2 = std::get_if<PartialWaveAmplitude>(&f2);
    if (p1 && p2 && p1->k == p2->k)
    {
        return forward_overlap_F12_closed(p1->phases, p2->phases, p1->k);
    }
    return forward_overlap_F12_quadrature(f1, f2).value;
}

//---------------------------------------------------------------------------//
// Optical theorem
//---------------------------------------------------------------------------//
struct OpticalTheoremCheck
{
    double sigma_integrated;  // \int |f|^2 dOmega, m^2
    double sigma_forward;     // (4 pi / k) Im f(0), m^2
};

//! Both sides of the optical theorem, by independent routes.
inline OpticalTheoremCheck
optical_theorem_check(PartialWaveSet const& phases, double k)
{
    detail::require(k > 0, "wavenumber must be positive");
    AmplitudeModel model = PartialWaveAmplitude{phases, k};
    auto integrated = forward_overlap_F12_quadrature(model, model);
    double const forward
        = 4 * constants::pi / k
          * partial_wave_amplitude_cos(phases, k, 1.0).imag();
    return {integrated.value.real(), forward};
}

//---------------------------------------------------------------------------//
// Kinematic regime
//---------------------------------------------------------------------------//
struct KinematicsInput
{
    double m_a;        // kg
    double m_chi;      // kg
    double v_chi_i;    // m/s, scatterer speed in the atom frame
    double dv_a_max;   // m/s, largest atom kick still reaching detection
};

enum class Regime
{
    FullDetection,
    ForwardOnly,
    Marginal
};

inline char const* to_string(Regime r)
{
    switch (r)
    {
        case Regime::FullDetection: return "FullDetection";
        case Regime::ForwardOnly: return "ForwardOnly";
        case Regime::Marginal: return "Marginal";
    }
    return "?";
}

struct RegimeReport
{
    Regime regime;
    bool theta_unbounded;  // true: any scattering angle is detected
    double theta_bound;    // rad; meaningful when !theta_unbounded
    double kick_ratio;     // m_a dv_a / (m_chi v_chi)
    double max_kick;       // 2 m_chi v_chi / m_a, m/s
};

inline constexpr double forward_only_kick_ratio = 0.1;

/*!
 * Decide whether every scattered atom reaches detection (light scatterer)
 * or only forward-scattered ones do (heavy scatterer).
 *
 * The largest virtual-particle angle compatible with an atom velocity change
 * dv_a follows from classical energy-momentum conservation,
 *   tan(theta) = R sqrt(1 - R^2/4) / (1 - R^2/2),  R = m_a dv_a / (m_chi v),
 * and is unconstrained once R > 2, i.e. once the largest possible kick
 * 2 m_chi v / m_a is below dv_a.
 */
inline RegimeReport classify_regime(KinematicsInput const& kin)
{
    detail::require(kin.m_a > 0 && kin.m_chi > 0 && kin.v_chi_i > 0
                        && kin.dv_a_max > 0,
                    "kinematics inputs must be positive");
    RegimeReport report{};
    report.kick_ratio = kin.m_a * kin.dv_a_max / (kin.m_chi * kin.v_chi_i);
    report.max_kick = 2 * kin.m_chi * kin.v_chi_i / kin.m_a;

    double const r = report.kick_ratio;
    double const radicand = 1 - r * r / 4;
    if (radicand < 0)
    {
        report.theta_unbounded = true;
        report.theta_bound = constants::pi;
    }
    else
    {
        report.theta_unbounded = false;
        report.theta_bound = std::atan2(r * std::sqrt(radicand), 1 - r * r / 2);
    }

    if (report.max_kick <= kin.dv_a_max)
    {
        report.regime = Regime::FullDetection;
    }
    else if (r <= forward_only_kick_ratio)
    {
        report.regime = Regime::ForwardOnly;
    }
    else
    {
        report.regime = Regime::Marginal;
    }
    return report;
}

}  // namespace dmclock
