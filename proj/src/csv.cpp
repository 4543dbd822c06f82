#include "ridesim/csv.hpp"

#include "ridesim/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>

namespace ridesim {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace

std::optional<std::size_t> CsvDocument::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back(trim(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.emplace_back(trim(cur));
    return out;
}

CsvDocument read_csv(std::istream& in)
{
    CsvDocument doc;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        if (!have_header) {
            doc.header = split_csv_line(t);
            have_header = true;
            continue;
        }
        doc.rows.push_back({lineno, split_csv_line(t)});
    }
    return doc;
}

CsvDocument read_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path);
    }
    return read_csv(in);
}

std::string csv_escape(std::string_view field)
{
    if (field.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string format_fixed(double value, int decimals)
{
    if (value == 0.0) {
        value = 0.0; // no "-0.000"
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s = buf;
    if (s.size() > 1 && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

std::string format_mm_as_m(std::int64_t mm)
{
    const bool neg = mm < 0;
    const std::uint64_t a = neg ? static_cast<std::uint64_t>(-mm) : static_cast<std::uint64_t>(mm);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%llu.%03llu", neg ? "-" : "", static_cast<unsigned long long>(a / 1000),
                  static_cast<unsigned long long>(a % 1000));
    return buf;
}

std::string format_ms_as_s(std::int64_t ms)
{
    return format_mm_as_m(ms);
}

std::optional<double> parse_double(std::string_view text)
{
    text = trim(text);
    if (text.empty()) {
        return std::nullopt;
    }
    std::string tmp(text);
    char* end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size()) {
        return std::nullopt;
    }
    return v;
}

std::optional<std::int64_t> parse_int(std::string_view text)
{
    text = trim(text);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return v;
}

std::optional<std::int64_t> parse_milli(std::string_view text)
{
    text = trim(text);
    bool neg = false;
    if (!text.empty() && text.front() == '-') {
        neg = true;
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    const auto whole_part = text.substr(0, dot);
    std::string frac = dot == std::string_view::npos ? std::string{} : std::string(text.substr(dot + 1));
    if (whole_part.empty() || frac.size() > 3) {
        return std::nullopt;
    }
    while (frac.size() < 3) {
        frac.push_back('0');
    }
    const auto whole = parse_int(whole_part);
    const auto fr = parse_int(frac);
    if (!whole || !fr || *whole < 0 || *fr < 0) {
        return std::nullopt;
    }
    const std::int64_t v = *whole * 1000 + *fr;
    return neg ? -v : v;
}

} // namespace ridesim
