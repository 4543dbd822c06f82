#include "ridesim/timeutil.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>

namespace ridesim {

namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out)
{
    if (pos + len > text.size()) {
        return false;
    }
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            return false;
        }
    }
    const auto* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, out);
    return ec == std::errc{} && ptr == first + len;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

constexpr std::array<std::string_view, 7> kWeekdayNames = {
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"};

} // namespace

std::int64_t day_number_from_civil(int year, unsigned month, unsigned day)
{
    using namespace std::chrono;
    const sys_days d = std::chrono::year{year} / std::chrono::month{month} / std::chrono::day{day};
    return d.time_since_epoch().count();
}

std::optional<Timestamp> parse_timestamp(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (text.size() < 20 || !read_int(text, 0, 4, y) || text[4] != '-' || !read_int(text, 5, 2, mo) ||
        text[7] != '-' || !read_int(text, 8, 2, d) || (text[10] != 'T' && text[10] != ' ') ||
        !read_int(text, 11, 2, h) || text[13] != ':' || !read_int(text, 14, 2, mi) || text[16] != ':' ||
        !read_int(text, 17, 2, s)) {
        return std::nullopt;
    }
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        if (pos == start) {
            return std::nullopt;
        }
    }
    if (pos >= text.size()) {
        return std::nullopt;
    }
    int offset = 0;
    if (text[pos] == 'Z') {
        if (pos + 1 != text.size()) {
            return std::nullopt;
        }
    } else if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '-' ? -1 : 1;
        int oh = 0, om = 0;
        if (!read_int(text, pos + 1, 2, oh)) {
            return std::nullopt;
        }
        std::size_t mpos = pos + 3;
        if (mpos < text.size() && text[mpos] == ':') {
            ++mpos;
        }
        if (!read_int(text, mpos, 2, om) || mpos + 2 != text.size() || oh > 18 || om > 59) {
            return std::nullopt;
        }
        offset = sign * (oh * 3600 + om * 60);
    } else {
        return std::nullopt;
    }
    if (mo < 1 || mo > 12 || h > 23 || mi > 59 || s > 60) {
        return std::nullopt;
    }
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                             std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
    const std::int64_t local = days * kSecondsPerDay + h * 3600 + mi * 60 + s;
    return Timestamp{local - offset, offset};
}

std::string format_date(std::int64_t day_number)
{
    using namespace std::chrono;
    const year_month_day ymd{sys_days{days{day_number}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::optional<std::int64_t> parse_date(std::string_view text)
{
    int y = 0, mo = 0, d = 0;
    if (text.size() != 10 || !read_int(text, 0, 4, y) || text[4] != '-' || !read_int(text, 5, 2, mo) ||
        text[7] != '-' || !read_int(text, 8, 2, d)) {
        return std::nullopt;
    }
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                             std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return sys_days{ymd}.time_since_epoch().count();
}

std::string format_timestamp(Timestamp ts)
{
    const std::int64_t local = ts.unix_s + ts.utc_offset_s;
    const std::int64_t day = floor_div(local, kSecondsPerDay);
    const std::int64_t sod = local - day * kSecondsPerDay;
    const int off = ts.utc_offset_s;
    const int aoff = off < 0 ? -off : off;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d%c%02d:%02d", format_date(day).c_str(),
                  static_cast<int>(sod / 3600), static_cast<int>((sod / 60) % 60), static_cast<int>(sod % 60),
                  off < 0 ? '-' : '+', aoff / 3600, (aoff / 60) % 60);
    return buf;
}

std::int64_t local_day_number(Timestamp ts)
{
    return floor_div(ts.unix_s + ts.utc_offset_s, kSecondsPerDay);
}

std::int64_t local_seconds_of_day(Timestamp ts)
{
    const std::int64_t local = ts.unix_s + ts.utc_offset_s;
    return local - floor_div(local, kSecondsPerDay) * kSecondsPerDay;
}

Weekday weekday_of_day_number(std::int64_t day_number)
{
    // 1970-01-01 was a Thursday.
    const std::int64_t idx = ((day_number + 3) % 7 + 7) % 7;
    return static_cast<Weekday>(idx);
}

Weekday local_weekday(Timestamp ts)
{
    return weekday_of_day_number(local_day_number(ts));
}

std::optional<Weekday> parse_weekday(std::string_view name)
{
    std::string lower;
    for (char c : name) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    for (std::size_t i = 0; i < kWeekdayNames.size(); ++i) {
        if (lower == kWeekdayNames[i] || lower == kWeekdayNames[i].substr(0, 3)) {
            return static_cast<Weekday>(i);
        }
    }
    return std::nullopt;
}

std::string_view weekday_name(Weekday day)
{
    return kWeekdayNames[static_cast<std::size_t>(day)];
}

double seconds_of_day(SimTime t, std::int32_t utc_offset_s)
{
    const std::int64_t local_ms = t + static_cast<std::int64_t>(utc_offset_s) * 1000;
    const std::int64_t day_ms = kSecondsPerDay * 1000;
    const std::int64_t r = local_ms - floor_div(local_ms, day_ms) * day_ms;
    return static_cast<double>(r) / 1000.0;
}

} // namespace ridesim
