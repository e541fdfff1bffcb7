#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace colink::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: quoted fields may hold commas, doubled quotes and line
// breaks. CRLF and LF are both accepted; a UTF-8 BOM on the first line is
// skipped.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Returns std::nullopt at end of input. Throws Error(invalid_record) on an
    // unterminated quoted field.
    std::optional<Row> next();

    // 1-based physical line on which the last returned row started.
    std::size_t line() const noexcept { return row_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
    std::size_t row_line_ = 0;
    bool first_ = true;
};

// Quotes only when the field contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const Row& row);

std::string join(const Row& row);

} // namespace colink::csv
