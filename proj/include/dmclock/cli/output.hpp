#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace dmclock::cli
{

inline constexpr char const tool_name[] = "dmclock";
inline constexpr char const tool_version[] = "1.0.0";

//! Fixed 9-significant-digit rendering used by every output.
inline std::string format_number(double x)
{
    if (x == 0)
    {
        return "0";  // also folds -0
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

//! x rounded to the 9 significant digits it is printed with.
inline double round9(double x)
{
    return std::strtod(format_number(x).c_str(), nullptr);
}

//! Tabular payload, rendered as CSV or as a JSON {columns, rows} object.
struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;
    //! Optional leading text column (e.g. strategy names).
    std::vector<std::vector<std::string>> labels;
    std::vector<std::string> label_columns;
};

/*!
 * Metadata + payload. Metadata precedes the payload: as '#' comment lines
 * for CSV, as a "metadata" member for JSON.
 */
struct Envelope
{
    nlohmann::json metadata = nlohmann::json::object();

    void write_csv(std::ostream& os, Table const& table) const
    {
        for (auto const& [key, value] : metadata.items())
        {
            os << "# " << key << ": "
               << (value.is_string() ? value.get<std::string>() : value.dump())
               << '\n';
        }
        bool first = true;
        auto sep = [&] {
            if (!first) os << ',';
            first = false;
        };
        for (auto const& c : table.label_columns)
        {
            sep();
            os << c;
        }
        for (auto const& c : table.columns)
        {
            sep();
            os << c;
        }
        os << '\n';
        for (std::size_t r = 0; r < table.rows.size(); ++r)
        {
            first = true;
            if (r < table.labels.size())
            {
                for (auto const& l : table.labels[r])
                {
                    sep();
                    os << l;
                }
            }
            for (auto const& v : table.rows[r])
            {
                sep();
                if (v)
                {
                    os << format_number(*v);
                }
            }
            os << '\n';
        }
    }

    static nlohmann::json table_json(Table const& table)
    {
        nlohmann::json cols = nlohmann::json::array();
        for (auto const& c : table.label_columns) cols.push_back(c);
        for (auto const& c : table.columns) cols.push_back(c);
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t r = 0; r < table.rows.size(); ++r)
        {
            nlohmann::json row = nlohmann::json::array();
            if (r < table.labels.size())
            {
                for (auto const& l : table.labels[r]) row.push_back(l);
            }
            for (auto const& v : table.rows[r])
            {
                row.push_back(v ? nlohmann::json(round9(*v)) : nlohmann::json());
            }
            rows.push_back(std::move(row));
        }
        return {{"columns", cols}, {"rows", rows}};
    }

    void write_json(std::ostream& os, nlohmann::json const& payload) const
    {
        nlohmann::json doc = {{"metadata", metadata}, {"payload", payload}};
        os << doc.dump(2) << '\n';
    }
};

}  // namespace dmclock::cli
