#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dmclock/constants.hpp"
#include "dmclock/ensemble.hpp"
#include "dmclock/error.hpp"

namespace dmclock
{

enum class Strategy
{
    OffsetM0,        // m_F = 0 offset against a shielded reference
    ZeemanFreeRbCs,  // K nu(Cs) - nu(Rb) Zeeman-free combination
    RabiVsRamsey,    // excess Rabi frequency noise
};

inline char const* to_string(Strategy s)
{
    switch (s)
    {
        case Strategy::OffsetM0: return "offset_mF0";
        case Strategy::ZeemanFreeRbCs: return "zeeman_free_RbCs";
        case Strategy::RabiVsRamsey: return "rabi_vs_ramsey";
    }
    return "?";
}

//---------------------------------------------------------------------------//
/*!
 * Inputs of a detection-strategy estimate. Defaults describe present-day Cs
 * and Rb fountain clocks and the standard local dark-matter density.
 */
struct SensitivityScenario
{
    Strategy strategy = Strategy::OffsetM0;
    double delta_delta = 1e-5;  // frequency uncertainty, rad/s
    double sigma_a = 1e-3;      // shot noise per cycle, rad/s
    double N_a = 5e6;           // atoms per cycle
    double K = 2;               // Zeeman-free combination coefficient
    double rho_GeV_cm3 = defaults::rho_GeV_cm3;
    double m_chi_eV = 1;
    double T = defaults::T;     // s
    //! Use mu = m_chi m_a / (m_chi + m_a) instead of mu = m_chi.
    bool exact_reduced_mass = false;
    double m_a = constants::cs133_mass;

    void validate() const
    {
        detail::require(rho_GeV_cm3 > 0, "density must be positive");
        detail::require(m_chi_eV > 0, "scatterer mass must be positive");
        detail::require(T > 0, "interrogation time must be positive");
        switch (strategy)
        {
            case Strategy::OffsetM0:
            case Strategy::ZeemanFreeRbCs:
                detail::require(delta_delta > 0,
                                "strategy needs a frequency uncertainty");
                break;
            case Strategy::RabiVsRamsey:
                detail::require(sigma_a > 0 && N_a >= 1,
                                "strategy needs shot noise and atom number");
                break;
        }
    }

    double rho_kg_m3() const
    {
        return convert(rho_GeV_cm3, Unit::GeV_per_cm3, Unit::kg_per_m3);
    }
    double m_chi_kg() const { return m_chi_eV * constants::eV_mass; }
    double mu() const
    {
        double const m = m_chi_kg();
        return exact_reduced_mass ? m * m_a / (m + m_a) : m;
    }
    //! n hbar / mu per unit Re[f1 - f2], i.e. rho hbar / (m_chi mu).
    double response() const
    {
        return rho_kg_m3() * constants::hbar / (m_chi_kg() * mu());
    }
};

struct SensitivityLimit
{
    double value;  // minimum detectable amplitude (combination), m
    std::vector<std::string> warnings;
};

/*!
 * Offset strategy: smallest Re[f1(0) - f2(0)] whose ensemble shift reaches
 * the frequency uncertainty, (rho hbar / m_chi^2) Re df = Delta delta / 2pi.
 */
inline SensitivityLimit offset_limit(SensitivityScenario const& s)
{
    detail::require(s.strategy == Strategy::OffsetM0, "scenario is not OffsetM0");
    s.validate();
    return {s.delta_delta / (2 * constants::pi * s.response()), {}};
}

//! K Re[df]^Cs - Re[df]^Rb for the Zeeman-free two-species comparison.
inline double zeeman_free_combination(double K, double re_df_cs, double re_df_rb)
{
    return K * re_df_cs - re_df_rb;
}

/*!
 * Zeeman-free Rb-Cs strategy: the threshold applies to
 * K Re[df]^Cs - Re[df]^Rb, measured with the same uncertainty as the
 * m_F = 0 transition.
 */
inline SensitivityLimit zeeman_free_limit(SensitivityScenario const& s)
{
    detail::require(s.strategy == Strategy::ZeemanFreeRbCs,
                    "scenario is not ZeemanFreeRbCs");
    s.validate();
    return {s.delta_delta / (2 * constants::pi * s.response()), {}};
}

//! Event count per cycle used by the Rabi-vs-Ramsey estimate (r_A << d).
inline double scenario_n_sc(SensitivityScenario const& s)
{
    auto pop = ScattererPopulation::from_density(s.rho_GeV_cm3, s.m_chi_eV);
    pop.m_a = s.m_a;
    return n_sc(pop, s.T).short_range;
}

/*!
 * Rabi-vs-Ramsey strategy:
 *   (rho hbar / (m_chi^2 sqrt(N_a N_sc))) Re df
 *       = sigma_a / (2 pi sqrt(pi^2/8 - 1)).
 * The N_sc branch (atom- or scatterer-limited packet width) switches at
 * m_chi = 1e4 eV through d_eff = max(d_a, d_chi).
 */
inline SensitivityLimit rabi_vs_ramsey_limit(SensitivityScenario const& s)
{
    detail::require(s.strategy == Strategy::RabiVsRamsey,
                    "scenario is not RabiVsRamsey");
    s.validate();
    double const events = scenario_n_sc(s);
    SensitivityLimit out;
    out.value = s.sigma_a * std::sqrt(s.N_a * events)
                / (2 * constants::pi * rabi_spread_factor() * s.response());
    if (events < 1)
    {
        out.warnings.push_back("expected N_sc < 1 per cycle: limit is an "
                               "average-rate estimate");
    }
    return out;
}

inline SensitivityLimit sensitivity_limit(SensitivityScenario const& s)
{
    switch (s.strategy)
    {
        case Strategy::OffsetM0: return offset_limit(s);
        case Strategy::ZeemanFreeRbCs: return zeeman_free_limit(s);
        case Strategy::RabiVsRamsey: return rabi_vs_ramsey_limit(s);
    }
    throw InvalidInput("unknown strategy");
}

//---------------------------------------------------------------------------//
// Summary table
//---------------------------------------------------------------------------//
//! Crossover mass where d_chi = d_a.
inline constexpr double branch_mass_eV = 1e4;

struct PowerLawFit
{
    double exponent;
    double coefficient;  // limit at m_chi = 1 eV extrapolated along the fit, m
};

//! Least-squares fit of log(y) = log(c) + p log(x).
inline PowerLawFit fit_power_law(std::vector<double> const& x,
                                 std::vector<double> const& y)
{
    detail::require(x.size() == y.size() && x.size() >= 2,
                    "power-law fit needs >= 2 matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    auto const n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        detail::require(x[i] > 0 && y[i] > 0, "power-law fit needs positive data");
        double const lx = std::log(x[i]);
        double const ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double const slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double const intercept = (sy - slope * sx) / n;
    return {slope, std::exp(intercept)};
}

struct Table1Row
{
    Strategy strategy;
    double mass_min_eV;  // validity range of the row
    double mass_max_eV;
    PowerLawFit fit;     // over a 4-decade grid inside the range
    std::vector<std::optional<double>> limits;  // per requested mass, m
};

struct Table1
{
    std::vector<double> masses_eV;
    double rho_GeV_cm3;
    std::vector<Table1Row> rows;
};

namespace detail
{
inline std::vector<double> decade_grid(double lo, double hi, int per_decade)
{
    std::vector<double> grid;
    double const decades = std::log10(hi / lo);
    int const steps = static_cast<int>(std::lround(decades * per_decade));
    for (int i = 0; i <= steps; ++i)
    {
        grid.push_back(lo * std::pow(10.0, static_cast<double>(i) / per_decade));
    }
    return grid;
}
}  // namespace detail

/*!
 * Limits of every strategy over a mass grid, one row per strategy and
 * N_sc branch, with the power-law exponent fitted in each row's range.
 */
inline Table1 table1(std::vector<double> const& masses_eV,
                     double rho_GeV_cm3 = defaults::rho_GeV_cm3,
                     SensitivityScenario base = {})
{
    detail::require(!masses_eV.empty(), "mass grid is empty");
    base.rho_GeV_cm3 = rho_GeV_cm3;

    struct Spec
    {
        Strategy strategy;
        double lo, hi;
    };
    // Offset-type rows hold at any light mass; fitted over 4 decades from 1 eV
    std::vector<Spec> const specs{
        {Strategy::OffsetM0, 0, INFINITY},
        {Strategy::ZeemanFreeRbCs, 0, INFINITY},
        {Strategy::RabiVsRamsey, branch_mass_eV, INFINITY},
        {Strategy::RabiVsRamsey, 0, branch_mass_eV},
    };

    auto limit_at = [&](Strategy strategy, double m) {
        auto s = base;
        s.strategy = strategy;
        s.m_chi_eV = m;
        return sensitivity_limit(s).value;
    };

    Table1 table{masses_eV, rho_GeV_cm3, {}};
    for (auto const& spec : specs)
    {
        double const fit_lo = spec.lo > 0                 ? spec.lo
                              : std::isfinite(spec.hi) ? spec.hi / 1e4
                                                       : 1.0;
        auto const grid = detail::decade_grid(fit_lo, fit_lo * 1e4, 2);
        std::vector<double> values;
        for (double m : grid)
        {
            values.push_back(limit_at(spec.strategy, m));
        }

        Table1Row row{spec.strategy, spec.lo, spec.hi, fit_power_law(grid, values), {}};
        for (double m : masses_eV)
        {
            detail::require(m > 0, "masses must be positive");
            bool const inside = m >= spec.lo && m <= spec.hi;
            row.limits.push_back(inside ? std::optional(limit_at(spec.strategy, m))
                                        : std::nullopt);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace dmclock
