#include "colink/date.hpp"
#include "colink/error.hpp"

#include <charconv>
#include <cstdio>

namespace colink {

namespace {

bool parse_field(std::string_view text, int& out)
{
    if (text.empty())
        return false;
    for (char c : text)
        if (c < '0' || c > '9')
            return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

} // namespace

Date parse_date(std::string_view text)
{
    int y = 0, m = 0, d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-'
        || !parse_field(text.substr(0, 4), y) || !parse_field(text.substr(5, 2), m)
        || !parse_field(text.substr(8, 2), d))
        throw Error(Errc::invalid_record, "invalid date '" + std::string(text) + "', expected YYYY-MM-DD");

    Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
              std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok())
        throw Error(Errc::invalid_record, "no such calendar date '" + std::string(text) + "'");
    return date;
}

std::string format_date(Date date)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

Date today()
{
    return Date{std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now())};
}

} // namespace colink
