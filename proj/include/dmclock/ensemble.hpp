#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "dmclock/constants.hpp"
#include "dmclock/error.hpp"
#include "dmclock/rng.hpp"

namespace dmclock
{

//---------------------------------------------------------------------------//
// Defaults (galactic dark matter, microkelvin clock atoms)
//---------------------------------------------------------------------------//
namespace defaults
{
inline constexpr double rho_GeV_cm3 = 0.4;
inline constexpr double v = 1e-3 * constants::c;  // m/s
inline constexpr double d_a = 1e-8;               // m
inline constexpr double T = 1.0;                  // s
inline constexpr double r_A = 1e-12;              // m, short-range limit
//! d_chi = d_chi_at_1eV / (m_chi / eV)
inline constexpr double d_chi_at_1eV = 1e-4;      // m
}  // namespace defaults

enum class AtomTemperature
{
    microkelvin,
};

struct PacketWidths
{
    double d_a;    // m
    double d_chi;  // m
    double d_eff() const { return std::max(d_a, d_chi); }
};

/*!
 * Minimum wave-packet sizes set by the uncertainty principle: cold atoms
 * at ~1e-8 m, scatterers with a 1e-3 c velocity spread at
 * 1e-4 m / (m_chi/eV).
 */
inline PacketWidths packet_widths(double m_chi_eV,
                                  AtomTemperature = AtomTemperature::microkelvin,
                                  double d_a = defaults::d_a)
{
    detail::require(m_chi_eV > 0, "scatterer mass must be positive");
    detail::require(d_a > 0, "atom packet width must be positive");
    return {d_a, defaults::d_chi_at_1eV / m_chi_eV};
}

//---------------------------------------------------------------------------//
/*!
 * Scatterers seen by the clock atoms.
 *
 * The relative wave function is as wide as the larger of the two single
 * particle packets, so d_eff = max(d_a, d_chi).
 */
struct ScattererPopulation
{
    double n;         // number density, 1/m^3
    double m_chi_eV;  // scatterer mass, eV
    double v;         // relative speed, m/s
    double r_A;       // interaction range, m
    double d_a;       // atom packet width, m
    double d_chi;     // scatterer packet width, m
    double m_a = constants::cs133_mass;  // kg

    //! Population from a mass density; packet widths from packet_widths().
    static ScattererPopulation
    from_density(double rho_GeV_cm3,
                 double m_chi_eV,
                 double v = defaults::v,
                 double r_A = defaults::r_A,
                 double m_a = constants::cs133_mass)
    {
        detail::require(rho_GeV_cm3 > 0, "density must be positive");
        detail::require(m_chi_eV > 0, "scatterer mass must be positive");
        auto const widths = packet_widths(m_chi_eV);
        ScattererPopulation pop{
            rho_GeV_cm3 * constants::GeV_cm3_to_eV_m3 / m_chi_eV,
            m_chi_eV, v, r_A, widths.d_a, widths.d_chi, m_a};
        pop.validate();
        return pop;
    }

    void validate() const
    {
        detail::require(n > 0 && std::isfinite(n), "number density must be positive");
        detail::require(m_chi_eV > 0, "scatterer mass must be positive");
        detail::require(v > 0, "relative speed must be positive");
        detail::require(r_A > 0 && d_a > 0 && d_chi > 0,
                        "lengths must be positive");
        detail::require(m_a > 0, "atom mass must be positive");
    }

    double d_eff() const { return std::max(d_a, d_chi); }
    double m_chi_kg() const { return m_chi_eV * constants::eV_mass; }
    //! Exact reduced mass; tends to m_chi for m_chi << m_a.
    double mu() const
    {
        double const m = m_chi_kg();
        return m * m_a / (m + m_a);
    }
    //! Relative-motion wavenumber mu v / hbar.
    double k() const { return mu() * v / constants::hbar; }
};

//---------------------------------------------------------------------------//
// Event count
//---------------------------------------------------------------------------//
struct EventCount
{
    double expected;     // full expression
    double wide_range;   // r_A >> d: n v T pi r_A^2
    double short_range;  // r_A << d: 2 pi n d^2 v T
};

/*!
 * Expected number of scatterer traversals during T:
 *   N_sc = n v T pi r_A^2 / (1 - exp(-r_A^2 / 2 d^2)).
 */
inline EventCount n_sc(ScattererPopulation const& pop, double T)
{
    pop.validate();
    detail::require(T > 0, "interrogation time must be positive");
    double const d = pop.d_eff();
    double const flux = pop.n * pop.v * T;
    double const area = constants::pi * pop.r_A * pop.r_A;
    double const inside = -std::expm1(-pop.r_A * pop.r_A / (2 * d * d));
    return {flux * area / inside, flux * area, 2 * constants::pi * flux * d * d};
}

//---------------------------------------------------------------------------//
// Ensemble shifts
//---------------------------------------------------------------------------//
//! Above this N_sc k|f| the scattered waves can no longer be superposed.
inline constexpr double superposition_limit = 0.1;

struct EnsembleOptions
{
    double T = defaults::T;
    //! Accept N_sc k|f| >= 0.1 (rescattering then ignored).
    bool allow_multiple_scattering = false;
};

namespace detail
{
inline void check_superposition(ScattererPopulation const& pop,
                                double re_df,
                                EnsembleOptions const& opts)
{
    double const load = n_sc(pop, opts.T).expected * pop.k() * std::abs(re_df);
    if (load >= superposition_limit && !opts.allow_multiple_scattering)
    {
        throw InvalidInput("N_sc k|f| >= 0.1: rescattering not negligible "
                           "(set allow_multiple_scattering to override)");
    }
}
}  // namespace detail

/*!
 * Total Ramsey shift of N_sc events with a common Re[f1 - f2]:
 *   delta_max = 2 pi n hbar Re[f1 - f2] / mu,
 * independent of T and v.
 */
inline double ensemble_ramsey_shift(ScattererPopulation const& pop,
                                    double re_df,
                                    EnsembleOptions const& opts = {})
{
    pop.validate();
    detail::require(std::isfinite(re_df), "re_df must be finite");
    detail::check_superposition(pop, re_df, opts);
    return 2 * constants::pi * pop.n * constants::hbar * re_df / pop.mu();
}

//---------------------------------------------------------------------------//
/*!
 * Time distribution dN/dt of collisions over [0, T].
 *
 * Tabulated rates are samples on a uniform grid spanning [0, T] (events/s);
 * their trapezoidal integral must equal N_sc.
 */
class CollisionTimeDistribution
{
  public:
    enum class Kind
    {
        uniform,
        tabulated
    };

    static CollisionTimeDistribution uniform() { return {Kind::uniform, {}}; }

    static CollisionTimeDistribution tabulated(std::vector<double> rates)
    {
        detail::require(rates.size() >= 2, "tabulated distribution needs >= 2 samples");
        for (double r : rates)
        {
            detail::require(r >= 0 && std::isfinite(r),
                            "collision rates must be non-negative");
        }
        return {Kind::tabulated, std::move(rates)};
    }

    //! Tabulated distribution with the given shape, scaled to total n_events.
    static CollisionTimeDistribution
    tabulated_shape(std::vector<double> shape, double T, double n_events)
    {
        auto dist = tabulated(std::move(shape));
        double const total = dist.integral(T);
        detail::require(total > 0, "collision-rate shape integrates to zero");
        for (double& r : dist.rates_)
        {
            r *= n_events / total;
        }
        return dist;
    }

    Kind kind() const { return kind_; }
    std::vector<double> const& rates() const { return rates_; }

    //! Trapezoidal integral of rate(t) * weight(t) over [0, T].
    template<class W>
    double integral(double T, W const& weight) const
    {
        double const h = T / static_cast<double>(rates_.size() - 1);
        double sum = 0;
        for (std::size_t i = 0; i < rates_.size(); ++i)
        {
            double const t = h * static_cast<double>(i);
            double const w = (i == 0 || i + 1 == rates_.size()) ? 0.5 : 1.0;
            sum += w * rates_[i] * weight(t);
        }
        return sum * h;
    }

    double integral(double T) const
    {
        return integral(T, [](double) { return 1.0; });
    }

  private:
    CollisionTimeDistribution(Kind kind, std::vector<double> rates)
        : kind_(kind), rates_(std::move(rates))
    {
    }

    Kind kind_;
    std::vector<double> rates_;
};

/*!
 * Rabi shift summed over collisions distributed in time (Omega T = pi):
 *   delta_max = pi^2 n hbar Re[f1 - f2] / (mu N_sc)
 *               * \int_0^T dt (dN/dt) sin(Omega t).
 */
inline double ensemble_rabi_shift(ScattererPopulation const& pop,
                                  double re_df,
                                  CollisionTimeDistribution const& dist,
                                  double omega,
                                  double T,
                                  bool allow_multiple_scattering = false)
{
    pop.validate();
    detail::require(T > 0 && omega > 0, "need T > 0 and Omega > 0");
    detail::require(std::abs(omega * T - constants::pi) <= 1e-6,
                    "ensemble Rabi shift needs Omega T = pi");
    detail::check_superposition(pop, re_df, {T, allow_multiple_scattering});

    double const prefactor
        = constants::pi * constants::pi * pop.n * constants::hbar * re_df / pop.mu();
    if (dist.kind() == CollisionTimeDistribution::Kind::uniform)
    {
        // (1/T) \int_0^T sin(Omega t) dt, per event
        double const mean_sin = (1 - std::cos(omega * T)) / (omega * T);
        return prefactor * mean_sin;
    }

    double const events = n_sc(pop, T).expected;
    double const total = dist.integral(T);
    if (std::abs(total - events) > 1e-9 * events)
    {
        throw InvalidInput("tabulated collision rates do not integrate to N_sc");
    }
    double const weighted
        = dist.integral(T, [omega](double t) { return std::sin(omega * t); });
    return prefactor * weighted / events;
}

//---------------------------------------------------------------------------//
// Fluctuations of the Rabi shift
//---------------------------------------------------------------------------//
//! sqrt(pi^2/8 - 1): RMS spread of (pi/2) sin(Omega t_c) for uniform t_c.
inline double rabi_spread_factor()
{
    return std::sqrt(constants::pi * constants::pi / 8 - 1);
}

//! Standard deviation of the single-event Rabi shift, uniform t_c (rad/s).
inline double rabi_sigma_analytic(ScattererPopulation const& pop, double re_df)
{
    pop.validate();
    return std::abs(2 * constants::pi * pop.n * constants::hbar * re_df / pop.mu())
           * rabi_spread_factor();
}

struct MonteCarloStats
{
    double mean;
    double sigma;
    double standard_error;        // of the mean
    double sigma_standard_error;  // of sigma, from the fourth central moment
    std::uint64_t trials;
    std::uint64_t seed;
    std::string rng;
};

namespace detail
{
struct MomentSums
{
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    std::uint64_t count = 0;
};

inline constexpr std::uint64_t mc_chunk_size = 1u << 16;
}  // namespace detail

/*!
 * Sample t_c ~ Uniform[0, T] and accumulate statistics of the single-event
 * Rabi shift (2 pi n hbar / mu) Re[f1 - f2] (pi/2) sin(Omega t_c).
 *
 * Trials are split into fixed chunks, each with its own seed-derived
 * sub-stream, and merged in chunk order: results are bit-identical for a
 * given seed whatever the thread count.
 */
inline MonteCarloStats rabi_sigma_montecarlo(ScattererPopulation const& pop,
                                             double re_df,
                                             std::uint64_t trials,
                                             std::uint64_t seed,
                                             unsigned threads = 0)
{
    pop.validate();
    detail::require(trials >= 100, "Monte Carlo needs at least 100 trials");

    std::uint64_t const chunks
        = (trials + detail::mc_chunk_size - 1) / detail::mc_chunk_size;
    std::vector<detail::MomentSums> partial(chunks);

    auto run_chunk = [&](std::uint64_t c) {
        auto engine = substream_engine(seed, c);
        std::uint64_t const begin = c * detail::mc_chunk_size;
        std::uint64_t const end = std::min(trials, begin + detail::mc_chunk_size);
        detail::MomentSums m;
        for (std::uint64_t i = begin; i < end; ++i)
        {
            // Omega t_c = pi u with u uniform on [0, 1)
            double const y
                = (constants::pi / 2) * std::sin(constants::pi * uniform01(engine));
            double const y2 = y * y;
            m.s1 += y;
            m.s2 += y2;
            m.s3 += y2 * y;
            m.s4 += y2 * y2;
        }
        m.count = end - begin;
        partial[c] = m;
    };

    if (threads == 0)
    {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t c = next++; c < chunks; c = next++)
        {
            run_chunk(c);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
    {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool)
    {
        th.join();
    }

    detail::MomentSums total;
    for (auto const& m : partial)
    {
        total.s1 += m.s1;
        total.s2 += m.s2;
        total.s3 += m.s3;
        total.s4 += m.s4;
        total.count += m.count;
    }

    auto const n = static_cast<double>(total.count);
    double const mean = total.s1 / n;
    double const var_pop = total.s2 / n - mean * mean;
    double const var = var_pop * n / (n - 1);
    double const m4 = total.s4 / n - 4 * mean * total.s3 / n
                      + 6 * mean * mean * total.s2 / n - 3 * std::pow(mean, 4);

    double const scale
        = 2 * constants::pi * pop.n * constants::hbar * re_df / pop.mu();
    double const sd = std::sqrt(var);
    MonteCarloStats out;
    out.mean = scale * mean;
    out.sigma = std::abs(scale) * sd;
    out.standard_error = std::abs(scale) * sd / std::sqrt(n);
    out.sigma_standard_error
        = std::abs(scale) * std::sqrt(std::max(0.0, m4 - var_pop * var_pop) / (4 * var_pop * n));
    out.trials = total.count;
    out.seed = seed;
    out.rng = rng_name;
    return out;
}

//! Single-event sigma averaged over N_a atoms and N_sc events.
inline double averaged_sigma(double sigma_single, double N_a, double N_sc)
{
    detail::require(N_a >= 1, "need at least one atom");
    detail::require(N_sc > 0, "event count must be positive");
    return sigma_single / std::sqrt(N_a * N_sc);
}

}  // namespace dmclock
