#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ridesim {

struct CsvRow {
    std::size_t line = 0; // 1-based line number in the source
    std::vector<std::string> fields;
};

struct CsvDocument {
    std::vector<std::string> header;
    std::vector<CsvRow> rows;

    [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
};

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

/// Reads a header plus records. Blank lines and lines starting with '#' are skipped.
CsvDocument read_csv(std::istream& in);
CsvDocument read_csv_file(const std::string& path);

std::string csv_escape(std::string_view field);

std::string format_fixed(double value, int decimals);

/// Millimeters rendered as meters with exactly three decimals.
std::string format_mm_as_m(std::int64_t mm);

/// Milliseconds rendered as seconds with exactly three decimals.
std::string format_ms_as_s(std::int64_t ms);

/// Strict numeric parsing; std::nullopt on trailing garbage or empty input.
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);

/// Inverse of format_mm_as_m / format_ms_as_s without floating-point rounding.
std::optional<std::int64_t> parse_milli(std::string_view text);

} // namespace ridesim
