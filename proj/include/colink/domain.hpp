#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace colink {

// Set of multi-label public suffixes ("co.uk", "ac.at"). Every single-label
// suffix is implicitly a rule, so an empty set is valid and reduces
// split_domain to "last label is the TLD".
class SuffixRuleSet {
public:
    SuffixRuleSet() = default;

    // Throws Error(invalid_config) when the rule is not a lowercase,
    // dot-separated sequence of non-empty labels.
    void add(std::string_view rule);

    bool contains(std::string_view suffix) const;

    const std::set<std::string, std::less<>>& rules() const noexcept { return rules_; }

    // Largest label count among explicit rules (1 when there are none).
    std::size_t max_labels() const noexcept { return max_labels_; }

    std::string source_label;

private:
    std::set<std::string, std::less<>> rules_;
    std::size_t max_labels_ = 1;
};

// One suffix per line; '#' starts a comment; blank lines ignored.
SuffixRuleSet load_suffix_rules(const std::filesystem::path& path);

struct ParsedDomain {
    std::string host;
    std::string root_domain;
    std::string public_suffix;
    std::string second_level;

    friend bool operator==(const ParsedDomain&, const ParsedDomain&) = default;
};

// Reduces a URL or bare hostname to a lowercase ASCII hostname: scheme,
// userinfo, port, path, query and fragment are dropped, the trailing root
// dot is removed and non-ASCII labels are punycode-encoded.
//
// Throws Error(empty_input) for blank input and Error(no_host) when no
// domain name can be extracted (opaque URIs such as "mailto:", IP literals,
// malformed labels).
std::string normalize_host(std::string_view raw);

// Longest-suffix split of a normalized host. Throws Error(too_few_labels)
// for single-label hosts and Error(suffix_only) when the host is itself a
// listed suffix.
ParsedDomain split_domain(std::string_view host, const SuffixRuleSet& rules);

// RFC 3492 encoding of a single label given as UTF-8; the "xn--" prefix is
// not added. Throws Error(no_host) on malformed UTF-8.
std::string punycode_encode(std::string_view utf8_label);

class CountryTldTable {
public:
    CountryTldTable() = default;

    // Throws Error(invalid_config) on malformed entries.
    void add(std::string_view tld, std::string_view country_code);

    std::optional<std::string> lookup(std::string_view tld) const;

    std::size_t size() const noexcept { return map_.size(); }

private:
    std::map<std::string, std::string, std::less<>> map_;
};

// CSV with header `tld,country_code`. Lines starting with '#' before the
// header are skipped.
CountryTldTable load_country_tld_table(const std::filesystem::path& path);

// Country of a public suffix. The full suffix is looked up first, then its
// last label, so "co.uk" resolves through "uk". Generic TLDs yield nullopt.
std::optional<std::string> country_of_tld(std::string_view public_suffix, const CountryTldTable& table);

} // namespace colink
