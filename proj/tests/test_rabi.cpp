#include <array>
#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "dmclock/rabi.hpp"
#include "dmclock/ramsey.hpp"
#include "generators.hpp"

using namespace dmclock;
using dmclock::test::Gen;
using dmclock::test::rel_diff;

namespace
{
constexpr double pi = constants::pi;
using cd = std::complex<double>;
WavePacket const clock_packet = WavePacket::from_wavenumber(1e10, 1e-8);

//---------------------------------------------------------------------------//
// Exact two-level propagation in the (c2, c1) basis with
// H = [[delta/2, Omega/2], [Omega/2, -delta/2]], plus an instantaneous
// relative phase kick on |2>. Independent of the first-order formulas.
//---------------------------------------------------------------------------//
struct State
{
    cd c2, c1;
};

State evolve(State s, double omega, double delta, double t)
{
    double const wr = std::hypot(omega, delta);
    if (wr == 0 || t == 0)
    {
        return s;
    }
    double const c = std::cos(wr * t / 2);
    double const sn = std::sin(wr * t / 2);
    double const nz = delta / wr;
    double const nx = omega / wr;
    cd const i(0, 1);
    return {(c - i * sn * nz) * s.c2 - i * sn * nx * s.c1,
            -i * sn * nx * s.c2 + (c + i * sn * nz) * s.c1};
}

State kick(State s, double phase)
{
    return {s.c2 * std::polar(1.0, phase), s.c1};
}

//! Collision phase on |2> relative to |1>.
double kick_phase(double re_df, WavePacket const& p)
{
    return re_df / (p.k * p.d * p.d);
}
}  // namespace

TEST(KickModel, ReproducesRamseyFringe)
{
    // pi/2 pulses short against T; the kick fixes the sign convention
    Gen gen(31);
    for (int i = 0; i < 100; ++i)
    {
        double const T = 1;
        double const delta = gen.uniform(-3, 3);
        double const x = gen.uniform(-1e-4, 1e-4);
        double const re_df = x * 1e10 * 1e-16;
        double const big = 1e7;
        State s{0, 1};
        s = evolve(s, big, 0, pi / (2 * big));
        s = evolve(s, 0, delta, T / 3);
        s = kick(s, kick_phase(re_df, clock_packet));
        s = evolve(s, 0, delta, 2 * T / 3);
        s = evolve(s, big, 0, pi / (2 * big));
        double const exact = std::norm(s.c2);
        // Free evolution accumulates phi = delta T
        double const model = ramsey_p2_simplified(delta * T, re_df, clock_packet);
        EXPECT_NEAR(exact, model, 1e-8) << "case " << i;
    }
}

TEST(RabiAmplitudes, MatchExactPropagator)
{
    Gen gen(32);
    for (int i = 0; i < 200; ++i)
    {
        double const T = gen.log_uniform(0.01, 10);
        RabiConfig cfg{gen.log_uniform(0.1, 10) / T, T, gen.uniform(-5, 5) / T, 0};
        double const at = gen.uniform(0, T);
        auto [c2, c1] = rabi_state_amplitudes(cfg, at);
        auto s = evolve({0, 1}, cfg.omega, cfg.delta, at);
        // Common phase convention differs by the interaction frame only
        EXPECT_NEAR(std::norm(c2), std::norm(s.c2), 1e-13);
        EXPECT_NEAR(std::norm(c1), std::norm(s.c1), 1e-13);
        EXPECT_NEAR(std::norm(c1) + std::norm(c2), 1.0, 1e-13);
    }
}

TEST(RabiAmplitudes, Examples)
{
    auto cfg = RabiConfig::pi_pulse(1.0, 0.0, 0.5);
    auto [c2, c1] = rabi_state_amplitudes(cfg, 0.0);
    EXPECT_EQ(c2, cd(0, 0));
    EXPECT_EQ(c1, cd(1, 0));
    auto end = rabi_state_amplitudes(cfg, 1.0);
    EXPECT_NEAR(std::norm(end.first), 1.0, 1e-15);

    double const omega = 2.0;
    RabiConfig detuned{omega, pi / std::hypot(omega, omega), omega, 0};
    auto d = rabi_state_amplitudes(detuned, detuned.T);
    EXPECT_NEAR(std::norm(d.first), 0.5, 1e-15);
}

TEST(RabiConfig, Validation)
{
    EXPECT_THROW((RabiConfig{0, 1, 0, 0}.validate()), InvalidInput);
    EXPECT_THROW((RabiConfig{1, 1, 0, 2}.validate()), InvalidInput);
    EXPECT_THROW(rabi_state_amplitudes(RabiConfig::pi_pulse(1, 0, 0), 1.5), InvalidInput);
    EXPECT_TRUE(RabiConfig::pi_pulse(2, 0, 0).is_pi_pulse());
}

TEST(RabiP2, ScatteringTermVanishes)
{
    AmplitudeModel const f = ForwardAmplitude{{2e-12, 1e-12}};
    auto cfg = RabiConfig::pi_pulse(1.0, 0.3, 0.4);
    auto p = rabi_p2(cfg, f, f, clock_packet);
    EXPECT_EQ(p.correction, 0.0);

    AmplitudeModel const g = ForwardAmplitude{{-1e-12, 0}};
    double const classical
        = std::pow(cfg.sin_theta() * std::sin(cfg.omega_r() * cfg.T / 2), 2);
    for (double t_c : {0.0, 1.0})
    {
        auto at_edge = rabi_p2(RabiConfig::pi_pulse(1.0, 0.3, t_c), f, g, clock_packet);
        EXPECT_NEAR(at_edge.value, classical, 1e-15);
    }
    auto resonant = rabi_p2(RabiConfig::pi_pulse(1.0, 0.0, 0.4), f, g, clock_packet);
    EXPECT_NEAR(resonant.correction, 0.0, 1e-20);
    EXPECT_NEAR(resonant.value, 1.0, 1e-15);
}

TEST(RabiP2Property, MatchesKickModelToFirstOrder)
{
    Gen gen(33);
    for (int i = 0; i < 500; ++i)
    {
        double const T = gen.log_uniform(0.1, 10);
        RabiConfig cfg{gen.uniform(0.5, 1.5) * pi / T, T, gen.uniform(-2, 2) / T,
                       gen.uniform(0, T)};
        auto packet = gen.packet();
        double const x = gen.uniform(-1e-5, 1e-5);
        double const re_df = x * packet.k * packet.d * packet.d;

        State s = evolve({0, 1}, cfg.omega, cfg.delta, cfg.t_c);
        s = kick(s, kick_phase(re_df, packet));
        s = evolve(s, cfg.omega, cfg.delta, cfg.T - cfg.t_c);

        double const p2 = rabi_p2(cfg, re_df, packet);
        EXPECT_NEAR(p2, std::norm(s.c2), 4 * x * x + 1e-14) << "case " << i;
    }
}

TEST(RabiP2Property, DeficitComplementsClassical)
{
    Gen gen(36);
    for (int i = 0; i < 500; ++i)
    {
        RabiConfig cfg{gen.uniform(0.5, 5), 1.0, gen.uniform(-3, 3), gen.uniform(0, 1)};
        auto t = detail::rabi_terms(cfg, 1e10, 1e-8);
        EXPECT_NEAR(t.classical + t.deficit, 1.0, 1e-15);
    }
}

TEST(RabiP2Expanded, Examples)
{
    EXPECT_DOUBLE_EQ(rabi_p2_expanded(RabiConfig::pi_pulse(1, 0, 0.3), 1e-14, clock_packet).value,
                     1.0);
    auto parabola = rabi_p2_expanded(RabiConfig::pi_pulse(1, 0.05 * pi, 0.3), 0, clock_packet);
    EXPECT_NEAR(parabola.value, 1 - 2.5e-3, 1e-15);
    // t_c = T/2: correction = re_df (delta/Omega) / (k d^2)
    double const re_df = 1e-16;
    auto mid = rabi_p2_expanded(RabiConfig::pi_pulse(1, 0.05 * pi, 0.5), re_df, clock_packet);
    EXPECT_NEAR(mid.correction, re_df * 0.05 / (1e10 * 1e-16), 1e-20);
    EXPECT_TRUE(mid.warnings.empty());
    EXPECT_FALSE(rabi_p2_expanded(RabiConfig::pi_pulse(1, 0.2 * pi, 0.5), 0, clock_packet)
                     .warnings.empty());
    EXPECT_THROW(rabi_p2_expanded(RabiConfig{1, 1, 0, 0.5}, 0, clock_packet), InvalidInput);
    // Removable singularity at the pulse edges
    EXPECT_EQ(rabi_p2_expanded(RabiConfig::pi_pulse(1, 0.01, 1.0), re_df, clock_packet)
                  .correction,
              0.0);
}

TEST(RabiP2ExpandedProperty, AgreesWithFullNearResonance)
{
    Gen gen(34);
    for (int i = 0; i < 300; ++i)
    {
        double const T = 1;
        double const y = gen.uniform(-1e-3, 1e-3);
        auto cfg = RabiConfig::pi_pulse(T, y * pi / T, gen.uniform(0, T));
        double const x = gen.uniform(-1e-6, 1e-6);
        double const re_df = x * 1e10 * 1e-16;
        double const full = rabi_p2(cfg, re_df, clock_packet);
        double const expanded = rabi_p2_expanded(cfg, re_df, clock_packet).value;
        // Classical part differs at O(y^4), scattering part at O(x y^2)
        EXPECT_NEAR(full, expanded, 10 * std::pow(y, 4) + 10 * std::abs(x) * y * y + 1e-15);
    }
}

TEST(RabiShift, Examples)
{
    double const T = 0.5;
    EXPECT_EQ(rabi_shift(0.0, 1e-14, clock_packet, T), 0.0);
    EXPECT_EQ(rabi_shift(T, 1e-14, clock_packet, T), 0.0);
    EXPECT_NEAR(rabi_shift(T / 2, 1e-14, clock_packet, T), pi / 2 * 2e-8, 1e-22);
    EXPECT_EQ(rabi_shift(0.0, 0.0, clock_packet, T), 0.0);
}

TEST(RabiShiftProperty, SymmetricAboutMidpoint)
{
    Gen gen(35);
    for (int i = 0; i < 500; ++i)
    {
        // Dyadic grid so that T - t_c is exact
        double const T = std::ldexp(1.0, static_cast<int>(gen.index(8)) - 4);
        double const t_c = T * static_cast<double>(gen.index(1025)) / 1024;
        double const re_df = gen.uniform(-1e-14, 1e-14);
        EXPECT_EQ(rabi_shift(t_c, re_df, clock_packet, T),
                  rabi_shift(T - t_c, re_df, clock_packet, T));
    }
}

TEST(RabiShiftNumeric, Examples)
{
    double const T = 1;
    double const omega = pi / T;
    EXPECT_LE(std::abs(rabi_shift_numeric(T / 2, 0.0, clock_packet, T)), 1e-15 * omega);
    double const re_df = 1e-4 * 1e10 * 1e-16;
    double const numeric = rabi_shift_numeric(T / 2, re_df, clock_packet, T);
    EXPECT_LE(rel_diff(numeric, rabi_shift(T / 2, re_df, clock_packet, T)), 1e-2);
}

TEST(RabiShiftNumeric, ReproducesSineProfile)
{
    double const T = 1;
    double const re_df = 1e-4 * 1e10 * 1e-16;
    double const unit = re_df / (1e10 * 1e-16 * T);
    for (int i = 1; i < 20; ++i)
    {
        double const t_c = T * i / 20.0;
        double const numeric = rabi_shift_numeric(t_c, re_df, clock_packet, T);
        EXPECT_LE(rel_diff(numeric / unit, pi / 2 * std::sin(pi * t_c / T)), 1e-2)
            << "t_c/T " << t_c;
    }
}

TEST(Fig1, Profile)
{
    auto rows = fig1_curve(101, 1.0);
    ASSERT_EQ(rows.size(), 101u);
    EXPECT_EQ(rows[0].rabi, 0.0);
    EXPECT_EQ(rows[100].rabi, 0.0);
    EXPECT_EQ(rows[50].t_over_T, 0.5);
    EXPECT_DOUBLE_EQ(rows[50].rabi, pi / 2);
    for (auto const& r : rows)
    {
        EXPECT_EQ(r.ramsey, 1.0);
    }

    auto dense = fig1_curve(100001, 1.0);
    double sum = 0;
    for (std::size_t i = 0; i < dense.size(); ++i)
    {
        double const w = (i == 0 || i + 1 == dense.size()) ? 0.5 : 1.0;
        sum += w * dense[i].rabi;
    }
    EXPECT_NEAR(sum / (dense.size() - 1), 1.0, 1e-6);
}
