#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmclock/cli/config.hpp"
#include "dmclock/cli/output.hpp"
#include "dmclock/ensemble.hpp"
#include "dmclock/interference.hpp"
#include "dmclock/rabi.hpp"
#include "dmclock/ramsey.hpp"
#include "dmclock/rng.hpp"
#include "dmclock/scattering.hpp"
#include "dmclock/sensitivity.hpp"

namespace dmclock::cli
{

enum ExitCode : int
{
    exit_ok = 0,
    exit_config = 2,
    exit_numeric = 3,
};

enum class Format
{
    automatic,
    csv,
    json
};

struct Options
{
    std::string config_path;
    std::string out = "stdout";
    std::optional<std::uint64_t> seed;
    Format format = Format::automatic;
    bool slow = false;
};

//! Everything a command needs besides its own arguments.
struct Context
{
    RunConfig cfg;
    Options opts;
    std::ostream& out;
    std::ostream& err;
    std::string command;

    Envelope envelope() const
    {
        Envelope env;
        env.metadata["tool"] = std::string(tool_name) + " " + tool_version;
        env.metadata["command"] = command;
        if (opts.seed)
        {
            env.metadata["seed"] = *opts.seed;
        }
        env.metadata["rng"] = rng_name;
        env.metadata["config"] = cfg.echo();
        return env;
    }

    void warn(std::vector<std::string> const& warnings) const
    {
        for (auto const& w : warnings)
        {
            err << "warning: " << w << '\n';
        }
    }

    Format format_or(Format fallback) const
    {
        return opts.format == Format::automatic ? fallback : opts.format;
    }

    void emit(Envelope const& env, Table const& table, Format fallback) const
    {
        if (format_or(fallback) == Format::csv)
        {
            env.write_csv(out, table);
        }
        else
        {
            env.write_json(out, Envelope::table_json(table));
        }
    }

    void emit(Envelope const& env, nlohmann::json const& payload) const
    {
        if (opts.format == Format::csv)
        {
            throw ConfigError("command '" + command + "' only supports --format json");
        }
        env.write_json(out, payload);
    }
};

inline nlohmann::json num(double x) { return round9(x); }

inline WavePacket config_packet(RunConfig const& cfg)
{
    return WavePacket::from_wavenumber(cfg.number("k_per_m"), cfg.number("d_m"));
}

//---------------------------------------------------------------------------//
// fringe
//---------------------------------------------------------------------------//
inline int cmd_fringe(Context const& ctx, std::string const& kind)
{
    auto const& cfg = ctx.cfg;
    auto const packet = config_packet(cfg);
    auto const steps = static_cast<std::size_t>(cfg.number("sweep_steps"));
    double const re_df = cfg.number("re_df_m");
    auto lerp = [&](double a, double b, std::size_t i) {
        return a + (b - a) * static_cast<double>(i) / static_cast<double>(steps - 1);
    };

    Table table;
    std::vector<std::string> warnings;
    if (kind == "ramsey")
    {
        table.columns = {"phi_rad", "P2", "P1"};
        for (std::size_t i = 0; i < steps; ++i)
        {
            double const phi
                = lerp(cfg.number("phi_start_rad"), cfg.number("phi_stop_rad"), i);
            table.rows.push_back({phi, ramsey_p2_simplified(phi, re_df, packet),
                                  ramsey_p1_simplified(phi, re_df, packet)});
        }
        if (packet.k * std::abs(re_df) >= first_order_kf_limit)
        {
            warnings.push_back("k|f| >= 0.1: outside first-order regime");
        }
    }
    else
    {
        double const T = cfg.number("T_s");
        double const omega = cfg.number("omega_rad_s");
        table.columns = {"delta_rad_s", "P2"};
        AmplitudeModel const f1 = ForwardAmplitude{{re_df, 0}};
        AmplitudeModel const f2 = ForwardAmplitude{{0, 0}};
        for (std::size_t i = 0; i < steps; ++i)
        {
            double const delta = omega
                                 * lerp(cfg.number("detuning_start_over_omega"),
                                        cfg.number("detuning_stop_over_omega"), i);
            RabiConfig const rc{omega, T, delta, cfg.number("t_c_s")};
            auto p = rabi_p2(rc, f1, f2, packet);
            for (auto& w : p.warnings)
            {
                if (std::find(warnings.begin(), warnings.end(), w) == warnings.end())
                {
                    warnings.push_back(w);
                }
            }
            table.rows.push_back({delta, p.value});
        }
    }
    ctx.warn(warnings);
    ctx.emit(ctx.envelope(), table, Format::csv);
    return exit_ok;
}

//---------------------------------------------------------------------------//
// shift
//---------------------------------------------------------------------------//
inline int cmd_shift(Context const& ctx, std::string const& kind)
{
    auto const& cfg = ctx.cfg;
    double const re_df = cfg.number("re_df_m");
    double const T = cfg.number("T_s");
    double analytic = 0;
    double numeric = 0;
    std::string method;
    std::vector<std::string> warnings;

    if (kind == "ramsey")
    {
        auto const packet = config_packet(cfg);
        analytic = ramsey_shift(re_df, packet, T);
        numeric = ramsey_shift_numeric(re_df, packet, T);
        method = "argmax of leading-order Ramsey P2 over detuning";
        warnings = shift_warnings(analytic, T);
    }
    else if (kind == "rabi")
    {
        auto const packet = config_packet(cfg);
        double const t_c = cfg.number("t_c_s");
        analytic = rabi_shift(t_c, re_df, packet, T);
        numeric = rabi_shift_numeric(t_c, re_df, packet, T);
        method = "argmax of first-order Rabi P2 over detuning, |delta| <= 0.3 Omega";
        warnings = shift_warnings(analytic, T);
    }
    else
    {
        auto const pop = population(cfg);
        EnsembleOptions const eopts{T, cfg.flag("allow_multiple_scattering")};
        auto const events = n_sc(pop, T).short_range;
        WavePacket const packet{pop.k(), pop.d_eff(), pop.v, pop.mu()};
        if (kind == "ensemble-ramsey")
        {
            analytic = ensemble_ramsey_shift(pop, re_df, eopts);
            numeric = events * ramsey_shift(re_df, packet, T);
            method = "N_sc (r_A << d) times single-event Ramsey shift";
        }
        else
        {
            double const omega = constants::pi / T;
            analytic = ensemble_rabi_shift(pop, re_df, CollisionTimeDistribution::uniform(),
                                           omega, T, eopts.allow_multiple_scattering);
            // N_sc times the trapezoidal t_c-average of the single-event shift
            std::size_t const n = 2001;
            double sum = 0;
            for (std::size_t i = 0; i < n; ++i)
            {
                double const t_c = T * static_cast<double>(i) / (n - 1);
                double const w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
                sum += w * rabi_shift(t_c, re_df, packet, T);
            }
            numeric = events * sum / (n - 1);
            method = "N_sc (r_A << d) times t_c-averaged single-event Rabi shift";
        }
    }

    double const deviation
        = analytic == 0 ? std::abs(numeric) : std::abs(numeric - analytic) / std::abs(analytic);
    nlohmann::json payload = {
        {"kind", kind},
        {"delta_max_rad_s", num(analytic)},
        {"numeric_check",
         {{"delta_max_rad_s", num(numeric)},
          {"relative_deviation", num(deviation)},
          {"method", method}}},
        {"warnings", warnings},
    };
    ctx.warn(warnings);
    ctx.emit(ctx.envelope(), payload);
    return exit_ok;
}

//---------------------------------------------------------------------------//
// fig1, nsc, table1, mc, regime
//---------------------------------------------------------------------------//
inline int cmd_fig1(Context const& ctx)
{
    auto const samples = static_cast<std::size_t>(ctx.cfg.number("fig1_samples"));
    Table table;
    table.columns = {"t_c_over_T", "rabi_shift_units", "ramsey_shift_units"};
    for (auto const& row : fig1_curve(samples, ctx.cfg.number("T_s")))
    {
        table.rows.push_back({row.t_over_T, row.rabi, row.ramsey});
    }
    auto env = ctx.envelope();
    env.metadata["units"] = "Re[f1-f2]/(k d^2 T)";
    ctx.emit(env, table, Format::csv);
    return exit_ok;
}

inline std::string order_of_magnitude(double x)
{
    if (!(x > 0)) return "0";
    return "1e" + std::to_string(static_cast<long>(std::lround(std::log10(x))));
}

inline int cmd_nsc(Context const& ctx)
{
    auto const pop = population(ctx.cfg);
    double const T = ctx.cfg.number("T_s");
    auto const count = n_sc(pop, T);
    bool const short_range = pop.r_A < pop.d_eff();
    nlohmann::json payload = {
        {"n_sc", num(count.expected)},
        {"order_of_magnitude", order_of_magnitude(count.expected)},
        {"formula", "n v T pi r_A^2 / (1 - exp(-r_A^2 / (2 d_eff^2)))"},
        {"wide_range_limit", num(count.wide_range)},
        {"short_range_limit", num(count.short_range)},
        {"applicable_limit", short_range ? "short_range" : "wide_range"},
        {"n_per_m3", num(pop.n)},
        {"d_eff_m", num(pop.d_eff())},
        {"d_a_m", num(pop.d_a)},
        {"d_chi_m", num(pop.d_chi)},
    };
    ctx.emit(ctx.envelope(), payload);
    return exit_ok;
}

inline SensitivityScenario config_scenario(RunConfig const& cfg)
{
    SensitivityScenario s;
    s.delta_delta = cfg.number("delta_delta_rad_s");
    s.sigma_a = cfg.number("sigma_a_rad_s");
    s.N_a = cfg.number("N_a");
    s.K = cfg.number("K");
    s.rho_GeV_cm3 = cfg.number("rho_GeV_cm3");
    s.m_chi_eV = cfg.number("m_chi_eV");
    s.T = cfg.number("T_s");
    s.exact_reduced_mass = cfg.flag("exact_reduced_mass");
    s.m_a = cfg.number("m_a_kg");
    return s;
}

inline std::string mass_range_label(double lo, double hi)
{
    if (lo <= 0 && !std::isfinite(hi)) return "all";
    if (lo <= 0) return "<=" + format_number(hi);
    return ">=" + format_number(lo);
}

inline int cmd_table1(Context const& ctx)
{
    auto const masses = ctx.cfg.list("masses_eV");
    auto const table = table1(masses, ctx.cfg.number("rho_GeV_cm3"), config_scenario(ctx.cfg));

    Table out;
    out.label_columns = {"strategy", "mass_range_eV"};
    out.columns = {"exponent", "coefficient_m"};
    for (double m : masses)
    {
        out.columns.push_back("limit_m_at_" + format_number(m) + "_eV");
    }
    for (auto const& row : table.rows)
    {
        out.labels.push_back({to_string(row.strategy),
                              mass_range_label(row.mass_min_eV, row.mass_max_eV)});
        std::vector<std::optional<double>> cells{row.fit.exponent, row.fit.coefficient};
        cells.insert(cells.end(), row.limits.begin(), row.limits.end());
        out.rows.push_back(std::move(cells));
    }
    auto env = ctx.envelope();
    env.metadata["quantity"] = "minimum detectable Re[f1(0)-f2(0)] (m)";
    ctx.emit(env, out, Format::csv);
    return exit_ok;
}

inline int cmd_mc(Context const& ctx)
{
    if (!ctx.opts.seed)
    {
        throw ConfigError("mc requires --seed");
    }
    auto const pop = population(ctx.cfg);
    double const re_df = ctx.cfg.number("re_df_m");
    auto const trials = static_cast<std::uint64_t>(ctx.cfg.number("mc_trials"));
    auto const stats = rabi_sigma_montecarlo(pop, re_df, trials, *ctx.opts.seed);
    double const mean_ref = ensemble_ramsey_shift(
        pop, re_df, {ctx.cfg.number("T_s"), true});
    double const sigma_ref = rabi_sigma_analytic(pop, re_df);

    auto env = ctx.envelope();
    env.metadata["rng"] = stats.rng;
    nlohmann::json payload = {
        {"trials", stats.trials},
        {"mean_rad_s", num(stats.mean)},
        {"sigma_rad_s", num(stats.sigma)},
        {"standard_error_rad_s", num(stats.standard_error)},
        {"sigma_standard_error_rad_s", num(stats.sigma_standard_error)},
        {"analytic_mean_rad_s", num(mean_ref)},
        {"analytic_sigma_rad_s", num(sigma_ref)},
    };
    ctx.emit(env, payload);
    return exit_ok;
}

inline int cmd_regime(Context const& ctx)
{
    KinematicsInput const kin{ctx.cfg.number("m_a_kg"),
                              ctx.cfg.number("m_chi_eV") * constants::eV_mass,
                              ctx.cfg.number("v_m_s"),
                              ctx.cfg.number("dv_a_max_m_s")};
    auto const report = classify_regime(kin);
    nlohmann::json payload = {
        {"regime", to_string(report.regime)},
        {"theta_bound_rad",
         report.theta_unbounded ? nlohmann::json("any") : num(report.theta_bound)},
        {"kick_ratio", num(report.kick_ratio)},
        {"max_atom_kick_m_s", num(report.max_kick)},
    };
    ctx.emit(ctx.envelope(), payload);
    return exit_ok;
}

//---------------------------------------------------------------------------//
// check
//---------------------------------------------------------------------------//
namespace detail
{
inline PartialWaveSet random_phase_set(std::mt19937_64& engine,
                                       std::size_t max_lmax,
                                       double max_abs_phase)
{
    auto const n = 1 + static_cast<std::size_t>(uniform01(engine) * (max_lmax + 1));
    std::vector<double> phases(n);
    for (auto& p : phases)
    {
        p = max_abs_phase * (2 * uniform01(engine) - 1);
    }
    return PartialWaveSet(std::move(phases));
}

inline double rel_dev(double a, double b)
{
    double const scale = std::max(std::abs(a), std::abs(b));
    return scale == 0 ? 0 : std::abs(a - b) / scale;
}
}  // namespace detail

inline int cmd_check(Context const& ctx)
{
    std::uint64_t const seed = ctx.opts.seed.value_or(1);
    auto const cases = static_cast<std::size_t>(ctx.cfg.number("check_cases"));
    auto engine = substream_engine(seed, 0);
    double const tol = 1e-12;

    double optical = 0, equivalence = 0, hermitian = 0;
    for (std::size_t i = 0; i < cases; ++i)
    {
        double const k = std::pow(10.0, 4 * uniform01(engine) - 2);
        auto const a = detail::random_phase_set(engine, 8, 0.3);
        auto const b = detail::random_phase_set(engine, 8, 0.3);

        auto const ot = optical_theorem_check(a, k);
        optical = std::max(optical, detail::rel_dev(ot.sigma_integrated, ot.sigma_forward));

        auto const packet = WavePacket::from_wavenumber(k, 30 / k);
        double const phi = constants::pi * (2 * uniform01(engine) - 1);
        AmplitudeModel const fa = PartialWaveAmplitude{a, k};
        AmplitudeModel const fb = PartialWaveAmplitude{b, k};
        equivalence = std::max(
            equivalence,
            detail::rel_dev(ramsey_p2_partial_wave(phi, a, b, packet),
                            ramsey_p2_full(phi, fa, fb, packet).value));

        auto const ab = forward_overlap_F12(fa, fb);
        auto const ba = forward_overlap_F12(fb, fa);
        hermitian = std::max(hermitian, std::abs(ab - std::conj(ba)) / std::max(std::abs(ab), 1e-300));
    }

    bool pass = optical <= tol && equivalence <= tol && hermitian <= tol;
    nlohmann::json payload = {
        {"cases", cases},
        {"tolerance", tol},
        {"optical_theorem_max_rel_dev", num(optical)},
        {"partial_wave_equivalence_max_rel_dev", num(equivalence)},
        {"f12_hermiticity_max_rel_dev", num(hermitian)},
    };

    if (ctx.opts.slow)
    {
        nlohmann::json rows = nlohmann::json::array();
        for (double kd : {20.0, 50.0, 100.0})
        {
            auto const packet = WavePacket::from_wavenumber(kd, 1.0);
            auto const res = interference_integral_oracle(packet, PartialWaveSet{0.05});
            double const dev = detail::rel_dev(res.shadow_fraction, res.optical_theorem);
            pass = pass && dev <= 0.03;
            rows.push_back({{"kd", kd},
                            {"shadow_fraction", num(res.shadow_fraction)},
                            {"optical_theorem", num(res.optical_theorem)},
                            {"relative_deviation", num(dev)},
                            {"warnings", res.warnings}});
        }
        payload["interference_integral"] = rows;
    }
    payload["pass"] = pass;
    ctx.emit(ctx.envelope(), payload);
    return pass ? exit_ok : exit_numeric;
}

//---------------------------------------------------------------------------//
/*!
 * Parse arguments and run one subcommand.
 *
 * Returns 0 on success, 2 on configuration errors and 3 on numerical
 * failures. Output goes to `out` unless --out names a file.
 */
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Scattering shifts of atomic clocks by light particles", tool_name};
    app.require_subcommand(1);

    Options opts;
    std::string format = "auto";
    app.add_option("--config", opts.config_path, "Flat JSON configuration file");
    app.add_option("--out", opts.out, "Output path or 'stdout'");
    app.add_option("--seed", opts.seed, "Random seed (u64)");
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"auto", "csv", "json"}));
    app.add_flag("--slow", opts.slow, "Include the interference-integral oracle");

    std::string kind;
    auto* fringe = app.add_subcommand("fringe", "Detection probability versus phase or detuning");
    fringe->add_option("kind", kind, "ramsey | rabi")
        ->required()
        ->check(CLI::IsMember({"ramsey", "rabi"}));
    auto* shift = app.add_subcommand("shift", "Central-fringe frequency shift");
    shift->add_option("kind", kind, "ramsey | rabi | ensemble-ramsey | ensemble-rabi")
        ->required()
        ->check(CLI::IsMember({"ramsey", "rabi", "ensemble-ramsey", "ensemble-rabi"}));
    auto* fig1 = app.add_subcommand("fig1", "Shift versus collision time, Rabi and Ramsey");
    auto* nsc = app.add_subcommand("nsc", "Expected scattering events per interrogation");
    auto* tbl = app.add_subcommand("table1", "Sensitivity of each detection strategy");
    auto* mc = app.add_subcommand("mc", "Monte Carlo statistics of the Rabi shift");
    auto* regime = app.add_subcommand("regime", "Kinematic detection regime");
    auto* check = app.add_subcommand("check", "Optical theorem and partial-wave identities");
    app.fallthrough();

    std::reverse(args.begin(), args.end());
    try
    {
        app.parse(args);
    }
    catch (CLI::CallForHelp const&)
    {
        out << app.help();
        return exit_ok;
    }
    catch (CLI::ParseError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }

    opts.format = format == "csv"    ? Format::csv
                  : format == "json" ? Format::json
                                     : Format::automatic;

    try
    {
        RunConfig cfg = opts.config_path.empty() ? RunConfig{}
                                                 : RunConfig::from_file(opts.config_path);
        std::ofstream file;
        std::ostream* sink = &out;
        if (opts.out != "stdout")
        {
            file.open(opts.out, std::ios::binary);
            if (!file)
            {
                throw ConfigError("cannot open output '" + opts.out + "'");
            }
            sink = &file;
        }
        std::string const name = app.get_subcommands().front()->get_name();
        Context ctx{cfg, opts, *sink, err, name};
        if (fringe->parsed()) return cmd_fringe(ctx, kind);
        if (shift->parsed()) return cmd_shift(ctx, kind);
        if (fig1->parsed()) return cmd_fig1(ctx);
        if (nsc->parsed()) return cmd_nsc(ctx);
        if (tbl->parsed()) return cmd_table1(ctx);
        if (mc->parsed()) return cmd_mc(ctx);
        if (regime->parsed()) return cmd_regime(ctx);
        if (check->parsed()) return cmd_check(ctx);
        return exit_config;
    }
    catch (NumericError const& e)
    {
        err << "numeric error: " << e.what()
            << " (achieved tolerance " << e.achieved_tolerance() << ")\n";
        return exit_numeric;
    }
    catch (InvalidInput const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }
}

}  // namespace dmclock::cli
