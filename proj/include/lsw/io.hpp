#pragma once

// CSV output shared by the ensemble exports and the command-line tool.
// Numbers are written with 17 significant digits so that values round-trip.

#include "lsw/ensemble.hpp"

#include <charconv>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace lsw::io
{

inline std::string format_double(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    if (res.ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf, res.ptr);
}

/// Writes "# <comment>" (if non-empty) followed by the header row.
inline void write_csv_header(std::ostream& os, std::string_view comment, const std::vector<std::string>& columns)
{
    if (!comment.empty()) {
        os << "# " << comment << '\n';
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        os << (i ? "," : "") << columns[i];
    }
    os << '\n';
}

inline void write_csv_row(std::ostream& os, const std::vector<double>& row)
{
    for (std::size_t i = 0; i < row.size(); ++i) {
        os << (i ? "," : "") << format_double(row[i]);
    }
    os << '\n';
}

/// id,radius
inline void write_snapshot_csv(std::ostream& os, const Snapshot& snap, std::string_view comment = {})
{
    write_csv_header(os, comment, {"id", "radius"});
    for (const auto& [id, r] : snap.radii) {
        os << id << ',' << format_double(r) << '\n';
    }
}

/// t,n,rc_estimate,total_r3,lost_volume
inline void write_series_csv(std::ostream& os, const std::vector<SeriesPoint>& series, std::string_view comment = {})
{
    write_csv_header(os, comment, {"t", "n", "rc_estimate", "total_r3", "lost_volume"});
    for (const SeriesPoint& p : series) {
        os << format_double(p.t) << ',' << p.n << ',' << format_double(p.rc_estimate) << ','
           << format_double(p.total_r3) << ',' << format_double(p.lost_volume) << '\n';
    }
}

} // namespace lsw::io
