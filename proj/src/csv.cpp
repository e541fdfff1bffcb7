#include "colink/csv.hpp"
#include "colink/error.hpp"

namespace colink::csv {

std::optional<Row> Reader::next()
{
    std::string line;
    if (!std::getline(in_, line))
        return std::nullopt;
    ++line_;
    row_line_ = line_;
    if (first_) {
        first_ = false;
        if (line.rfind("\xEF\xBB\xBF", 0) == 0)
            line.erase(0, 3);
    }

    Row row;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    for (;;) {
        if (i == line.size()) {
            if (!quoted)
                break;
            // Quoted field continues on the next physical line.
            std::string more;
            if (!std::getline(in_, more))
                throw Error(Errc::invalid_record,
                            "unterminated quoted field starting on line " + std::to_string(row_line_));
            ++line_;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            field += '\n';
            line = std::move(more);
            i = 0;
            continue;
        }
        char c = line[i++];
        if (quoted) {
            if (c == '"') {
                if (i < line.size() && line[i] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\r' && i == line.size()) {
            // trailing CR of a CRLF line ending
        } else {
            field += c;
        }
    }
    row.push_back(std::move(field));
    return row;
}

std::string escape(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join(const Row& row)
{
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i)
            out += ',';
        out += escape(row[i]);
    }
    return out;
}

void write_row(std::ostream& out, const Row& row)
{
    out << join(row) << '\n';
}

} // namespace colink::csv
