#pragma once

#include <numbers>
#include <string>
#include <string_view>

#include "dmclock/error.hpp"

namespace dmclock
{

//---------------------------------------------------------------------------//
// Physical constants (SI, CODATA 2018; c, eV and h are exact)
//---------------------------------------------------------------------------//
namespace constants
{
inline constexpr double pi = std::numbers::pi;
inline constexpr double c = 299792458.0;              // m/s
inline constexpr double eV = 1.602176634e-19;         // J
inline constexpr double h = 6.62607015e-34;           // J s
inline constexpr double hbar = h / (2 * pi);          // J s
inline constexpr double eV_mass = eV / (c * c);       // kg
inline constexpr double GeV_cm3_to_eV_m3 = 1e9 * 1e6;  // (GeV/cm^3) -> (eV/m^3)

inline constexpr double cs133_mass = 2.20694650e-25;  // kg
}  // namespace constants

//! Read-only view of the constants used by every module.
struct ConstantsRegistry
{
    double hbar = constants::hbar;
    double c = constants::c;
    double eV = constants::eV;
    double eV_mass = constants::eV_mass;
    double GeV_cm3_to_eV_m3 = constants::GeV_cm3_to_eV_m3;
};

inline constexpr ConstantsRegistry registry{};

//---------------------------------------------------------------------------//
// Unit conversion
//---------------------------------------------------------------------------//
enum class Unit
{
    eV,
    kg,
    J,
    GeV_per_cm3,
    eV_per_m3,
    kg_per_m3,
};

inline Unit parse_unit(std::string_view name)
{
    if (name == "eV") return Unit::eV;
    if (name == "kg") return Unit::kg;
    if (name == "J") return Unit::J;
    if (name == "GeV/cm3" || name == "GeV/cm^3") return Unit::GeV_per_cm3;
    if (name == "eV/m3" || name == "eV/m^3") return Unit::eV_per_m3;
    if (name == "kg/m3" || name == "kg/m^3") return Unit::kg_per_m3;
    throw InvalidInput("unknown unit '" + std::string(name) + "'");
}

namespace detail
{
enum class Dimension
{
    energy,
    energy_density
};

struct UnitInfo
{
    Dimension dim;
    double to_base;  // multiply to get J (energy) or J/m^3 (density)
};

inline UnitInfo unit_info(Unit u)
{
    using constants::c;
    switch (u)
    {
        case Unit::eV: return {Dimension::energy, constants::eV};
        case Unit::kg: return {Dimension::energy, c * c};
        case Unit::J: return {Dimension::energy, 1.0};
        case Unit::GeV_per_cm3:
            return {Dimension::energy_density,
                    constants::GeV_cm3_to_eV_m3 * constants::eV};
        case Unit::eV_per_m3: return {Dimension::energy_density, constants::eV};
        case Unit::kg_per_m3: return {Dimension::energy_density, c * c};
    }
    throw InvalidInput("unknown unit");
}
}  // namespace detail

/*!
 * Convert between mass/energy units (eV, kg, J) or between density units
 * (GeV/cm^3, eV/m^3, kg/m^3). Masses and energies are related by E = mc^2.
 */
inline double convert(double value, Unit from, Unit to)
{
    auto const a = detail::unit_info(from);
    auto const b = detail::unit_info(to);
    if (a.dim != b.dim)
    {
        throw InvalidInput("unsupported unit conversion pair");
    }
    if (from == to)
    {
        return value;
    }
    return value * a.to_base / b.to_base;
}

}  // namespace dmclock
