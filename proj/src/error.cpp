#include "colink/error.hpp"
#include "colink/log.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace colink {

std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::empty_input: return "EmptyInput";
    case Errc::no_host: return "NoHost";
    case Errc::suffix_only: return "SuffixOnly";
    case Errc::too_few_labels: return "TooFewLabels";
    case Errc::file_not_found: return "FileNotFound";
    case Errc::schema_mismatch: return "SchemaMismatch";
    case Errc::invalid_record: return "InvalidRecord";
    case Errc::auth_failure: return "AuthFailure";
    case Errc::rate_limited: return "RateLimited";
    case Errc::transport_error: return "TransportError";
    case Errc::io_error: return "IoError";
    case Errc::duplicate_portfolio_domain: return "DuplicatePortfolioDomain";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::degenerate_input: return "DegenerateInput";
    case Errc::empty_network: return "EmptyNetwork";
    case Errc::invalid_label: return "InvalidLabel";
    case Errc::invalid_config: return "InvalidConfig";
    }
    return "Unknown";
}

namespace {

std::mutex handler_mutex;

WarningHandler& current_handler()
{
    static WarningHandler handler = [](std::string_view msg) {
        std::cerr << "warning: " << msg << '\n';
    };
    return handler;
}

} // namespace

WarningHandler set_warning_handler(WarningHandler handler)
{
    std::lock_guard lock(handler_mutex);
    return std::exchange(current_handler(), std::move(handler));
}

void warn(std::string_view message)
{
    std::lock_guard lock(handler_mutex);
    if (auto& handler = current_handler())
        handler(message);
}

} // namespace colink
