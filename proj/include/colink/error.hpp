#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace colink {

enum class Errc {
    empty_input,
    no_host,
    suffix_only,
    too_few_labels,
    file_not_found,
    schema_mismatch,
    invalid_record,
    auth_failure,
    rate_limited,
    transport_error,
    io_error,
    duplicate_portfolio_domain,
    length_mismatch,
    degenerate_input,
    empty_network,
    invalid_label,
    invalid_config,
};

std::string_view errc_name(Errc code) noexcept;

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace colink
