#include "colink/domain.hpp"
#include "colink/csv.hpp"
#include "colink/error.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <vector>

namespace colink {

namespace {

constexpr std::string_view whitespace = " \t\r\n\f\v";

std::string_view trim(std::string_view s)
{
    auto b = s.find_first_not_of(whitespace);
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(whitespace);
    return s.substr(b, e - b + 1);
}

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

char ascii_lower(char c)
{
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool valid_scheme(std::string_view s)
{
    if (s.empty() || !is_alpha(s[0]))
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return is_alpha(c) || is_digit(c) || c == '+' || c == '-' || c == '.';
    });
}

bool all_digits(std::string_view s)
{
    return std::all_of(s.begin(), s.end(), is_digit);
}

std::vector<std::string_view> split_labels(std::string_view host)
{
    std::vector<std::string_view> labels;
    std::size_t start = 0;
    for (;;) {
        auto dot = host.find('.', start);
        labels.push_back(host.substr(start, dot - start));
        if (dot == std::string_view::npos)
            break;
        start = dot + 1;
    }
    return labels;
}

[[noreturn]] void no_host(std::string_view raw, std::string_view why)
{
    throw Error(Errc::no_host, "no host in '" + std::string(raw) + "': " + std::string(why));
}

std::vector<char32_t> decode_utf8(std::string_view s)
{
    std::vector<char32_t> out;
    for (std::size_t i = 0; i < s.size();) {
        auto b = static_cast<unsigned char>(s[i]);
        int extra = 0;
        char32_t cp = 0;
        if (b < 0x80) {
            cp = b;
        } else if ((b & 0xE0) == 0xC0) {
            cp = b & 0x1F;
            extra = 1;
        } else if ((b & 0xF0) == 0xE0) {
            cp = b & 0x0F;
            extra = 2;
        } else if ((b & 0xF8) == 0xF0) {
            cp = b & 0x07;
            extra = 3;
        } else {
            throw Error(Errc::no_host, "malformed UTF-8 in host label");
        }
        if (extra > 0 && i + static_cast<std::size_t>(extra) >= s.size())
            throw Error(Errc::no_host, "truncated UTF-8 sequence in host label");
        for (int k = 1; k <= extra; ++k) {
            auto c = static_cast<unsigned char>(s[i + k]);
            if ((c & 0xC0) != 0x80)
                throw Error(Errc::no_host, "malformed UTF-8 in host label");
            cp = (cp << 6) | (c & 0x3F);
        }
        static constexpr char32_t min_for_len[] = {0, 0x80, 0x800, 0x10000};
        if (cp < min_for_len[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
            throw Error(Errc::no_host, "invalid code point in host label");
        out.push_back(cp);
        i += static_cast<std::size_t>(extra) + 1;
    }
    return out;
}

} // namespace

// --- SuffixRuleSet -------------------------------------------------------

void SuffixRuleSet::add(std::string_view rule)
{
    if (rule.empty())
        throw Error(Errc::invalid_config, "empty suffix rule");
    for (char c : rule)
        if (!(is_digit(c) || (c >= 'a' && c <= 'z') || c == '-' || c == '.' || c == '_'))
            throw Error(Errc::invalid_config, "suffix rule '" + std::string(rule)
                                                  + "' must be lowercase letters, digits, '-' or '.'");
    auto labels = split_labels(rule);
    if (std::any_of(labels.begin(), labels.end(), [](auto l) { return l.empty(); }))
        throw Error(Errc::invalid_config, "suffix rule '" + std::string(rule) + "' has an empty label");
    max_labels_ = std::max(max_labels_, labels.size());
    rules_.emplace(rule);
}

bool SuffixRuleSet::contains(std::string_view suffix) const
{
    return rules_.find(suffix) != rules_.end();
}

SuffixRuleSet load_suffix_rules(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::file_not_found, "cannot open suffix rule file " + path.string());
    SuffixRuleSet rules;
    rules.source_label = path.string();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        try {
            rules.add(view);
        } catch (const Error& e) {
            throw Error(Errc::invalid_config, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rules;
}

// --- punycode ------------------------------------------------------------

std::string punycode_encode(std::string_view utf8_label)
{
    constexpr std::uint32_t base = 36, tmin = 1, tmax = 26, skew = 38, damp = 700;
    constexpr std::uint32_t initial_bias = 72, initial_n = 0x80;

    auto input = decode_utf8(utf8_label);

    auto adapt = [](std::uint32_t delta, std::uint32_t numpoints, bool first) {
        delta = first ? delta / damp : delta / 2;
        delta += delta / numpoints;
        std::uint32_t k = 0;
        while (delta > ((base - tmin) * tmax) / 2) {
            delta /= base - tmin;
            k += base;
        }
        return k + (base - tmin + 1) * delta / (delta + skew);
    };
    auto digit = [](std::uint32_t d) {
        return static_cast<char>(d < 26 ? 'a' + d : '0' + (d - 26));
    };

    std::string out;
    for (char32_t cp : input)
        if (cp < 0x80)
            out += ascii_lower(static_cast<char>(cp));
    const auto basic = static_cast<std::uint32_t>(out.size());
    std::uint32_t handled = basic;
    if (basic > 0)
        out += '-';

    std::uint32_t n = initial_n, delta = 0, bias = initial_bias;
    const auto total = static_cast<std::uint32_t>(input.size());
    while (handled < total) {
        std::uint32_t m = UINT32_MAX;
        for (char32_t cp : input)
            if (cp >= n && cp < m)
                m = cp;
        if ((m - n) > (UINT32_MAX - delta) / (handled + 1))
            throw Error(Errc::no_host, "punycode overflow");
        delta += (m - n) * (handled + 1);
        n = m;
        for (char32_t cp : input) {
            if (cp < n)
                ++delta;
            if (cp == n) {
                std::uint32_t q = delta;
                for (std::uint32_t k = base;; k += base) {
                    std::uint32_t t = k <= bias ? tmin : (k >= bias + tmax ? tmax : k - bias);
                    if (q < t)
                        break;
                    out += digit(t + (q - t) % (base - t));
                    q = (q - t) / (base - t);
                }
                out += digit(q);
                bias = adapt(delta, handled + 1, handled == basic);
                delta = 0;
                ++handled;
            }
        }
        ++delta;
        ++n;
    }
    return out;
}

// --- normalize_host / split_domain ----------------------------------------

std::string normalize_host(std::string_view raw)
{
    const std::string_view input = trim(raw);
    if (input.empty())
        throw Error(Errc::empty_input, "empty URL or hostname");

    std::string_view rest = input;
    if (auto sep = input.find("://"); sep != std::string_view::npos && valid_scheme(input.substr(0, sep))) {
        rest = input.substr(sep + 3);
    } else if (input.rfind("//", 0) == 0) {
        rest = input.substr(2);
    } else if (auto colon = input.find(':'); colon != std::string_view::npos) {
        // Either "host:port[/...]" or an opaque URI such as "mailto:x".
        auto after = input.substr(colon + 1);
        auto port = after.substr(0, after.find_first_of("/?#"));
        if (valid_scheme(input.substr(0, colon)) && !all_digits(port))
            no_host(input, "URI has no authority component");
    }

    std::string_view authority = rest.substr(0, rest.find_first_of("/?#\\"));
    if (auto at = authority.rfind('@'); at != std::string_view::npos)
        authority = authority.substr(at + 1);
    if (!authority.empty() && authority.front() == '[')
        no_host(input, "IP literal");
    if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
        if (!all_digits(authority.substr(colon + 1)))
            no_host(input, "invalid port");
        authority = authority.substr(0, colon);
    }
    if (!authority.empty() && authority.back() == '.')
        authority.remove_suffix(1);
    if (authority.empty())
        no_host(input, "empty host");

    std::string host;
    for (auto label : split_labels(authority)) {
        if (label.empty())
            no_host(input, "empty label");
        if (!host.empty())
            host += '.';
        bool ascii = std::all_of(label.begin(), label.end(),
                                 [](char c) { return static_cast<unsigned char>(c) < 0x80; });
        std::string encoded;
        if (ascii) {
            for (char c : label) {
                char l = ascii_lower(c);
                if (!(is_digit(l) || (l >= 'a' && l <= 'z') || l == '-' || l == '_'))
                    no_host(input, "invalid character in host");
                encoded += l;
            }
        } else {
            encoded = "xn--" + punycode_encode(label);
        }
        if (encoded.size() > 63)
            no_host(input, "label longer than 63 octets");
        host += encoded;
    }
    if (host.size() > 253)
        no_host(input, "host longer than 253 octets");

    auto labels = split_labels(host);
    if (all_digits(labels.back()))
        no_host(input, "numeric top-level label (IP address)");
    return host;
}

ParsedDomain split_domain(std::string_view host, const SuffixRuleSet& rules)
{
    auto labels = split_labels(host);
    if (host.empty() || std::any_of(labels.begin(), labels.end(), [](auto l) { return l.empty(); }))
        throw Error(Errc::no_host, "malformed host '" + std::string(host) + "'");
    if (labels.size() < 2)
        throw Error(Errc::too_few_labels, "host '" + std::string(host) + "' has a single label");
    if (rules.contains(host))
        throw Error(Errc::suffix_only, "host '" + std::string(host) + "' is itself a public suffix");

    // Offsets of the start of each trailing label sequence.
    std::vector<std::size_t> starts;
    starts.reserve(labels.size());
    std::size_t pos = 0;
    for (auto l : labels) {
        starts.push_back(pos);
        pos += l.size() + 1;
    }

    std::size_t suffix_labels = 1;
    const std::size_t longest = std::min(rules.max_labels(), labels.size() - 1);
    for (std::size_t k = longest; k >= 2; --k) {
        if (rules.contains(host.substr(starts[labels.size() - k]))) {
            suffix_labels = k;
            break;
        }
    }

    const std::size_t sld = labels.size() - suffix_labels - 1;
    ParsedDomain out;
    out.host = std::string(host);
    out.public_suffix = std::string(host.substr(starts[sld + 1]));
    out.second_level = std::string(labels[sld]);
    out.root_domain = std::string(host.substr(starts[sld]));
    return out;
}

// --- country TLD table ----------------------------------------------------

void CountryTldTable::add(std::string_view tld, std::string_view country_code)
{
    if (tld.empty() || std::any_of(tld.begin(), tld.end(), [](char c) { return c >= 'A' && c <= 'Z'; }))
        throw Error(Errc::invalid_config, "TLD '" + std::string(tld) + "' must be non-empty lowercase");
    if (country_code.size() != 2 || !std::all_of(country_code.begin(), country_code.end(),
                                                 [](char c) { return c >= 'A' && c <= 'Z'; }))
        throw Error(Errc::invalid_config, "country code '" + std::string(country_code)
                                              + "' must be two uppercase letters");
    map_[std::string(tld)] = std::string(country_code);
}

std::optional<std::string> CountryTldTable::lookup(std::string_view tld) const
{
    if (auto it = map_.find(tld); it != map_.end())
        return it->second;
    return std::nullopt;
}

CountryTldTable load_country_tld_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::file_not_found, "cannot open country-TLD table " + path.string());
    csv::Reader reader(in);
    CountryTldTable table;
    bool header = false;
    while (auto row = reader.next()) {
        if (row->size() == 1 && trim((*row)[0]).empty())
            continue;
        if (!header) {
            if (!(*row)[0].empty() && (*row)[0][0] == '#')
                continue;
            if (*row != csv::Row{"tld", "country_code"})
                throw Error(Errc::schema_mismatch, path.string() + ": expected header 'tld,country_code'");
            header = true;
            continue;
        }
        if (row->size() != 2)
            throw Error(Errc::invalid_config, path.string() + ":" + std::to_string(reader.line())
                                                  + ": expected 2 fields");
        table.add(trim((*row)[0]), trim((*row)[1]));
    }
    if (!header)
        throw Error(Errc::schema_mismatch, path.string() + ": missing header 'tld,country_code'");
    return table;
}

std::optional<std::string> country_of_tld(std::string_view public_suffix, const CountryTldTable& table)
{
    if (auto hit = table.lookup(public_suffix))
        return hit;
    auto dot = public_suffix.rfind('.');
    if (dot == std::string_view::npos)
        return std::nullopt;
    return table.lookup(public_suffix.substr(dot + 1));
}

} // namespace colink
