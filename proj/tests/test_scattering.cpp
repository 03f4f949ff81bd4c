#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "dmclock/interference.hpp"
#include "dmclock/scattering.hpp"
#include "generators.hpp"

using namespace dmclock;
using dmclock::test::Gen;
using dmclock::test::rel_diff;

namespace
{
constexpr double pi = constants::pi;
}

//---------------------------------------------------------------------------//
// Amplitude
//---------------------------------------------------------------------------//
TEST(Amplitude, UnitarityLimit)
{
    auto f = partial_wave_amplitude(PartialWaveSet{pi / 2}, 1.0, 0.0);
    EXPECT_NEAR(f.real(), 0.0, 1e-16);
    EXPECT_NEAR(f.imag(), 1.0, 1e-15);
}

TEST(Amplitude, NoInteraction)
{
    for (double theta : {0.0, 1.0, pi})
    {
        EXPECT_EQ(partial_wave_amplitude(PartialWaveSet{0, 0, 0}, 3.0, theta),
                  ComplexAmplitude(0, 0));
    }
}

TEST(Amplitude, TwoWaveReference)
{
    auto f = partial_wave_amplitude(PartialWaveSet{0.1, 0.05}, 2.0, pi / 3);
    EXPECT_NEAR(f.real(), 0.087104863941325861, 1e-15);
    EXPECT_NEAR(f.imag(), 0.0068567935604299299, 1e-15);
}

TEST(Amplitude, Validation)
{
    EXPECT_THROW(PartialWaveSet(std::vector<double>{}), InvalidInput);
    EXPECT_THROW(PartialWaveSet(std::vector<double>(66, 0.1)), InvalidInput);
    EXPECT_THROW(PartialWaveSet{NAN}, InvalidInput);
    EXPECT_THROW(partial_wave_amplitude(PartialWaveSet{0.1}, 1.0, 4.0), InvalidInput);
    EXPECT_NO_THROW(PartialWaveSet(std::vector<double>(65, 0.1)));
}

TEST(Amplitude, LegendreMatchesClosedForms)
{
    double const x = 0.37;
    auto p = legendre_all(4, x);
    EXPECT_DOUBLE_EQ(p[0], 1.0);
    EXPECT_DOUBLE_EQ(p[1], x);
    EXPECT_NEAR(p[2], (3 * x * x - 1) / 2, 4e-16);
    EXPECT_NEAR(p[3], (5 * x * x * x - 3 * x) / 2, 4e-16);
    EXPECT_NEAR(p[4], (35 * std::pow(x, 4) - 30 * x * x + 3) / 8, 1e-15);
}

TEST(Amplitude, TabulatedInterpolates)
{
    TabulatedAmplitude tab({-1.0, 0.0, 1.0}, {{0, 0}, {1, 1}, {3, 1}});
    EXPECT_EQ(tab(1.0), ComplexAmplitude(3, 1));
    EXPECT_EQ(tab(0.5), ComplexAmplitude(2, 1));
    EXPECT_THROW(TabulatedAmplitude({-1.0, 0.5}, {{0, 0}, {1, 0}}), InvalidInput);
    EXPECT_THROW(TabulatedAmplitude({-1.0, 0.0, 0.0, 1.0}, {{}, {}, {}, {}}), InvalidInput);
}

//---------------------------------------------------------------------------//
// F12
//---------------------------------------------------------------------------//
TEST(Overlap, SWaveReference)
{
    auto F = forward_overlap_F12_closed(PartialWaveSet{0.3}, PartialWaveSet{0.3}, 1.0);
    EXPECT_NEAR(F.real(), 1.0974486980870666, 1e-14);
    EXPECT_EQ(F.imag(), 0.0);
    // Equals the optical-theorem cross section for f1 = f2
    auto f0 = partial_wave_amplitude_cos(PartialWaveSet{0.3}, 1.0, 1.0);
    EXPECT_NEAR(F.real(), 4 * pi * f0.imag(), 1e-14);
}

TEST(Overlap, MixedSetsReference)
{
    PartialWaveSet const a{0.2, 0.1};
    PartialWaveSet const b{-0.1, 0.3, 0.05};
    auto closed = forward_overlap_F12_closed(a, b, 3.0);
    auto quad = forward_overlap_F12_quadrature(PartialWaveAmplitude{a, 3.0},
                                               PartialWaveAmplitude{b, 3.0});
    EXPECT_NEAR(closed.real(), 0.094661229544674444, 1e-15);
    EXPECT_NEAR(closed.imag(), -0.032735674296321414, 1e-15);
    EXPECT_LT(std::abs(quad.value - closed), 1e-14);
}

TEST(Overlap, ZeroAmplitudes)
{
    AmplitudeModel const zero = PartialWaveAmplitude{PartialWaveSet{0.0}, 2.0};
    EXPECT_EQ(forward_overlap_F12(zero, zero), std::complex<double>(0, 0));
}

TEST(Overlap, ForwardOnlyModelIsRejected)
{
    AmplitudeModel const fwd = ForwardAmplitude{{0, 1}};
    AmplitudeModel const pw = PartialWaveAmplitude{PartialWaveSet{0.1}, 1.0};
    EXPECT_THROW(forward_overlap_F12(fwd, pw), InvalidInput);
}

TEST(Overlap, TabulatedMatchesPiecewiseLinearIntegral)
{
    // f1 = 1 + x, f2 = 1: \int (1 + x) dx over [-1, 1] = 2
    AmplitudeModel const f1 = TabulatedAmplitude({-1.0, 1.0}, {{0, 0}, {2, 0}});
    AmplitudeModel const f2 = TabulatedAmplitude({-1.0, 0.2, 1.0}, {{1, 0}, {1, 0}, {1, 0}});
    EXPECT_NEAR(forward_overlap_F12(f1, f2).real(), 2 * pi * 2, 1e-12);
}

TEST(OverlapProperty, HermitianAndRealOnDiagonal)
{
    Gen gen(11);
    for (int i = 0; i < 300; ++i)
    {
        double const k = gen.log_uniform(1e-3, 1e3);
        AmplitudeModel const a = PartialWaveAmplitude{gen.phases(8, 1.5), k};
        AmplitudeModel const b = PartialWaveAmplitude{gen.phases(8, 1.5), k};
        auto ab = forward_overlap_F12(a, b);
        auto ba = forward_overlap_F12(b, a);
        EXPECT_LE(std::abs(ab - std::conj(ba)), 1e-13 * std::abs(ab));
        EXPECT_EQ(forward_overlap_F12(a, a).imag(), 0.0);
    }
}

TEST(OverlapProperty, ClosedFormMatchesQuadrature)
{
    Gen gen(12);
    for (int i = 0; i < 100; ++i)
    {
        double const k = gen.log_uniform(1e-2, 1e2);
        PartialWaveAmplitude const a{gen.phases(8, 0.3), k};
        PartialWaveAmplitude const b{gen.phases(8, 0.3), k};
        auto closed = forward_overlap_F12_closed(a.phases, b.phases, k);
        auto quad = forward_overlap_F12_quadrature(a, b).value;
        EXPECT_LE(std::abs(closed - quad), 1e-12 * std::abs(closed)) << "case " << i;
    }
}

//---------------------------------------------------------------------------//
// Optical theorem
//---------------------------------------------------------------------------//
TEST(OpticalTheorem, UnitarityLimit)
{
    auto ot = optical_theorem_check(PartialWaveSet{pi / 2}, 1.0);
    EXPECT_NEAR(ot.sigma_integrated, 4 * pi, 1e-13);
    EXPECT_NEAR(ot.sigma_forward, 4 * pi, 1e-13);
}

TEST(OpticalTheorem, Reference)
{
    auto ot = optical_theorem_check(PartialWaveSet{0.2, 0.1}, 3.0);
    EXPECT_NEAR(ot.sigma_integrated, 0.096858284259287716, 1e-15);
    EXPECT_LE(rel_diff(ot.sigma_integrated, ot.sigma_forward), 1e-12);
    auto zero = optical_theorem_check(PartialWaveSet{0, 0}, 3.0);
    EXPECT_EQ(zero.sigma_forward, 0.0);
    EXPECT_NEAR(zero.sigma_integrated, 0.0, 1e-300);
}

TEST(OpticalTheoremProperty, RandomRealPhaseSets)
{
    Gen gen(13);
    for (int i = 0; i < 300; ++i)
    {
        auto phases = gen.phases(8, pi);
        double const k = gen.log_uniform(1e-3, 1e3);
        auto ot = optical_theorem_check(phases, k);
        EXPECT_LE(rel_diff(ot.sigma_integrated, ot.sigma_forward), 1e-12) << "case " << i;
    }
}

//---------------------------------------------------------------------------//
// Interference integral
//---------------------------------------------------------------------------//
// Large-separation form of the shadow fraction in units of the optical
// theorem value, s-wave, v t = 4 d (see tests/oracle/reference_values.py).
TEST(Interference, MatchesLargeSeparationForm)
{
    struct Case
    {
        double kd, delta, ratio;
    };
    for (auto c : {Case{20, 0.05, -0.98841726439779312}, Case{50, 0.05, 0.2003398786323799},
                   Case{50, 1.0, 0.97272}})
    {
        auto res = interference_integral_oracle(WavePacket::from_wavenumber(c.kd, 1.0),
                                                PartialWaveSet{c.delta});
        EXPECT_NEAR(res.shadow_fraction / res.optical_theorem, c.ratio, 3e-4)
            << "kd " << c.kd << " delta " << c.delta;
    }
}

TEST(Interference, ZeroAndSign)
{
    auto packet = WavePacket::from_wavenumber(30, 1.0);
    auto none = interference_integral_oracle(packet, PartialWaveSet{0.0});
    EXPECT_EQ(none.shadow_fraction, 0.0);
    // Strong forward scattering removes probability from the incident wave
    auto strong = interference_integral_oracle(packet, PartialWaveSet{1.0});
    EXPECT_LT(strong.optical_theorem, 0.0);
    EXPECT_LT(strong.shadow_fraction, 0.0);
}

TEST(Interference, Warnings)
{
    auto low = interference_integral_oracle(WavePacket::from_wavenumber(10, 1.0),
                                            PartialWaveSet{0.3});
    EXPECT_FALSE(low.warnings.empty());
    auto p_wave = interference_integral_oracle(WavePacket::from_wavenumber(25, 1.0),
                                               PartialWaveSet{0.01, 0.3});
    EXPECT_FALSE(p_wave.warnings.empty());
}

//---------------------------------------------------------------------------//
// Kinematic regime
//---------------------------------------------------------------------------//
TEST(Regime, HeavyThermalScattererIsForwardOnly)
{
    auto r = classify_regime({2.207e-25, 3.35e-27, 1e3, 1e-3});
    EXPECT_EQ(r.regime, Regime::ForwardOnly);
    EXPECT_FALSE(r.theta_unbounded);
    EXPECT_LT(r.theta_bound, 1e-3);
}

TEST(Regime, KeVScattererAgainstCs)
{
    // Largest kick 2 m v / m_a = 4.85e-3 m/s: detected at any angle only
    // once the detection window admits it.
    auto narrow = classify_regime({2.207e-25, 1.783e-33, 3e5, 1e-3});
    EXPECT_NEAR(narrow.max_kick, 4.847e-3, 1e-6);
    EXPECT_NE(narrow.regime, Regime::ForwardOnly);
    auto wide = classify_regime({2.207e-25, 1.783e-33, 3e5, 1e-2});
    EXPECT_EQ(wide.regime, Regime::FullDetection);
    EXPECT_TRUE(wide.theta_unbounded);
}

TEST(Regime, VanishingMassLimit)
{
    for (double m : {1e-34, 1e-36, 1e-40})
    {
        auto r = classify_regime({2.207e-25, m, 3e5, 1e-3});
        EXPECT_EQ(r.regime, Regime::FullDetection);
        EXPECT_LT(r.max_kick, 1e-3);
    }
    EXPECT_LT(classify_regime({2.207e-25, 1e-40, 3e5, 1e-3}).max_kick, 1e-9);
}

TEST(RegimeProperty, BoundMatchesTangentFormula)
{
    Gen gen(14);
    for (int i = 0; i < 500; ++i)
    {
        KinematicsInput const kin{2.2e-25, gen.log_uniform(1e-36, 1e-24),
                                  gen.log_uniform(1, 1e6), gen.log_uniform(1e-5, 1e-1)};
        auto r = classify_regime(kin);
        double const R = r.kick_ratio;
        EXPECT_EQ(r.theta_unbounded, R > 2);
        EXPECT_EQ(r.regime == Regime::FullDetection, r.max_kick <= kin.dv_a_max);
        if (!r.theta_unbounded && std::abs(1 - R * R / 2) > 1e-3)
        {
            double const t = R * std::sqrt(1 - R * R / 4) / (1 - R * R / 2);
            EXPECT_NEAR(std::tan(r.theta_bound), t, 1e-9 * std::max(1.0, std::abs(t)));
        }
    }
}
