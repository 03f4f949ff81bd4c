#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmclock/constants.hpp"
#include "dmclock/ensemble.hpp"
#include "dmclock/error.hpp"

namespace dmclock::cli
{

//! Malformed or out-of-range configuration; maps to exit code 2.
class ConfigError : public InvalidInput
{
  public:
    using InvalidInput::InvalidInput;
};

enum class KeyKind
{
    number,
    flag,
    number_list,
    text
};

struct KeySpec
{
    char const* name;
    KeyKind kind;
    nlohmann::json fallback;  // null: derived from other keys
    std::function<bool(nlohmann::json const&)> valid;
    char const* requirement;
};

namespace detail
{
inline bool positive(nlohmann::json const& v) { return v.get<double>() > 0; }
inline bool non_negative(nlohmann::json const& v) { return v.get<double>() >= 0; }
inline bool finite(nlohmann::json const& v) { return std::isfinite(v.get<double>()); }
inline bool at_least_one(nlohmann::json const& v) { return v.get<double>() >= 1; }
inline bool any(nlohmann::json const&) { return true; }
inline bool integral_at_least(nlohmann::json const& v, double lo)
{
    double const x = v.get<double>();
    return x >= lo && std::floor(x) == x;
}
inline bool positive_list(nlohmann::json const& v)
{
    if (v.empty()) return false;
    for (auto const& x : v)
    {
        if (!(x.get<double>() > 0)) return false;
    }
    return true;
}
}  // namespace detail

//! Every accepted configuration key; units are part of the name.
inline std::vector<KeySpec> const& key_specs()
{
    using nlohmann::json;
    namespace d = detail;
    static std::vector<KeySpec> const specs{
        // Wave packet
        {"k_per_m", KeyKind::number, 1e10, d::positive, "> 0"},
        {"d_m", KeyKind::number, 1e-8, d::positive, "> 0"},
        // Interrogation
        {"T_s", KeyKind::number, 1.0, d::positive, "> 0"},
        {"omega_rad_s", KeyKind::number, json(), d::positive, "> 0"},
        {"delta_rad_s", KeyKind::number, 0.0, d::finite, "finite"},
        {"t_c_s", KeyKind::number, json(), d::non_negative, ">= 0 and <= T_s"},
        {"re_df_m", KeyKind::number, 0.0, d::finite, "finite"},
        // Fringe sweeps
        {"phi_start_rad", KeyKind::number, -constants::pi, d::finite, "finite"},
        {"phi_stop_rad", KeyKind::number, constants::pi, d::finite, "finite"},
        {"detuning_start_over_omega", KeyKind::number, -0.3, d::finite, "finite"},
        {"detuning_stop_over_omega", KeyKind::number, 0.3, d::finite, "finite"},
        {"sweep_steps", KeyKind::number, 101,
         [](json const& v) { return d::integral_at_least(v, 2); }, "integer >= 2"},
        // Scatterer population
        {"m_chi_eV", KeyKind::number, 1.0, d::positive, "> 0"},
        {"rho_GeV_cm3", KeyKind::number, defaults::rho_GeV_cm3, d::positive, "> 0"},
        {"v_m_s", KeyKind::number, defaults::v, d::positive, "> 0"},
        {"r_A_m", KeyKind::number, defaults::r_A, d::positive, "> 0"},
        {"d_a_m", KeyKind::number, defaults::d_a, d::positive, "> 0"},
        {"d_chi_m", KeyKind::number, json(), d::positive, "> 0"},
        {"m_a_kg", KeyKind::number, constants::cs133_mass, d::positive, "> 0"},
        {"collision_distribution", KeyKind::text, "uniform",
         [](json const& v) { return v.get<std::string>() == "uniform"; },
         "\"uniform\""},
        {"allow_multiple_scattering", KeyKind::flag, false, d::any, "boolean"},
        // Kinematic regime
        {"dv_a_max_m_s", KeyKind::number, 1e-3, d::positive, "> 0"},
        // Sensitivity
        {"delta_delta_rad_s", KeyKind::number, 1e-5, d::positive, "> 0"},
        {"sigma_a_rad_s", KeyKind::number, 1e-3, d::positive, "> 0"},
        {"N_a", KeyKind::number, 5e6, d::at_least_one, ">= 1"},
        {"K", KeyKind::number, 2.0, d::finite, "finite"},
        {"exact_reduced_mass", KeyKind::flag, false, d::any, "boolean"},
        {"masses_eV", KeyKind::number_list, json::array({1.0, 1e2, 1e4, 1e6}),
         d::positive_list, "non-empty list of values > 0"},
        // Figure, Monte Carlo, checks
        {"fig1_samples", KeyKind::number, 101,
         [](json const& v) { return d::integral_at_least(v, 2); }, "integer >= 2"},
        {"mc_trials", KeyKind::number, 1000000,
         [](json const& v) { return d::integral_at_least(v, 100); }, "integer >= 100"},
        {"check_cases", KeyKind::number, 200,
         [](json const& v) { return d::integral_at_least(v, 1); }, "integer >= 1"},
    };
    return specs;
}

//---------------------------------------------------------------------------//
/*!
 * Fully resolved run configuration.
 *
 * Built from a flat JSON object; absent keys take defaults, derived keys
 * (omega_rad_s = pi/T_s, t_c_s = T_s/2, d_chi_m = 1e-4 m / (m_chi/eV))
 * follow from the others. The echo re-parses to an equal configuration.
 */
class RunConfig
{
  public:
    RunConfig() : RunConfig(nlohmann::json::object()) {}

    explicit RunConfig(nlohmann::json const& doc)
    {
        if (!doc.is_object())
        {
            throw ConfigError("config: top level must be a JSON object");
        }
        for (auto const& [key, value] : doc.items())
        {
            auto const* spec = find(key);
            if (!spec)
            {
                throw ConfigError("config: unknown key '" + key + "'");
            }
            check_type(*spec, value);
            values_[key] = value;
        }
        for (auto const& spec : key_specs())
        {
            if (!values_.count(spec.name) && !spec.fallback.is_null())
            {
                values_[spec.name] = spec.fallback;
            }
        }
        if (!values_.count("omega_rad_s"))
        {
            values_["omega_rad_s"] = constants::pi / number("T_s");
        }
        if (!values_.count("t_c_s"))
        {
            values_["t_c_s"] = number("T_s") / 2;
        }
        if (!values_.count("d_chi_m"))
        {
            values_["d_chi_m"] = defaults::d_chi_at_1eV / number("m_chi_eV");
        }
        for (auto const& spec : key_specs())
        {
            if (!spec.valid(values_.at(spec.name)))
            {
                throw ConfigError(std::string("config: key '") + spec.name
                                  + "' must be " + spec.requirement);
            }
        }
        if (number("t_c_s") > number("T_s"))
        {
            throw ConfigError("config: key 't_c_s' must be >= 0 and <= T_s");
        }
    }

    static RunConfig from_text(std::string const& text)
    {
        nlohmann::json doc;
        try
        {
            doc = nlohmann::json::parse(text);
        }
        catch (nlohmann::json::parse_error const& e)
        {
            throw ConfigError(std::string("config: malformed JSON: ") + e.what());
        }
        return RunConfig(doc);
    }

    static RunConfig from_file(std::string const& path)
    {
        std::ifstream in(path);
        if (!in)
        {
            throw ConfigError("config: cannot open '" + path + "'");
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        return from_text(buffer.str());
    }

    double number(std::string const& key) const
    {
        return values_.at(key).get<double>();
    }
    bool flag(std::string const& key) const { return values_.at(key).get<bool>(); }
    std::string text(std::string const& key) const
    {
        return values_.at(key).get<std::string>();
    }
    std::vector<double> list(std::string const& key) const
    {
        return values_.at(key).get<std::vector<double>>();
    }

    //! Resolved configuration as a JSON object (keys sorted).
    nlohmann::json echo() const
    {
        nlohmann::json out = nlohmann::json::object();
        for (auto const& [key, value] : values_)
        {
            out[key] = value;
        }
        return out;
    }

    bool operator==(RunConfig const& other) const { return values_ == other.values_; }

  private:
    static KeySpec const* find(std::string const& key)
    {
        for (auto const& spec : key_specs())
        {
            if (key == spec.name) return &spec;
        }
        return nullptr;
    }

    static void check_type(KeySpec const& spec, nlohmann::json const& value)
    {
        bool ok = false;
        switch (spec.kind)
        {
            case KeyKind::number: ok = value.is_number(); break;
            case KeyKind::flag: ok = value.is_boolean(); break;
            case KeyKind::text: ok = value.is_string(); break;
            case KeyKind::number_list:
                ok = value.is_array();
                for (auto const& x : value)
                {
                    ok = ok && x.is_number();
                }
                break;
        }
        if (!ok)
        {
            throw ConfigError(std::string("config: key '") + spec.name
                              + "' has the wrong type");
        }
    }

    std::map<std::string, nlohmann::json> values_;
};

//! Population described by the configuration.
inline ScattererPopulation population(RunConfig const& cfg)
{
    double const m = cfg.number("m_chi_eV");
    ScattererPopulation pop{
        cfg.number("rho_GeV_cm3") * constants::GeV_cm3_to_eV_m3 / m,
        m,
        cfg.number("v_m_s"),
        cfg.number("r_A_m"),
        cfg.number("d_a_m"),
        cfg.number("d_chi_m"),
        cfg.number("m_a_kg")};
    pop.validate();
    return pop;
}

}  // namespace dmclock::cli
