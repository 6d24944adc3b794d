#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "xling/error.hpp"

namespace xling::csv {

// Minimal RFC 4180 reader: quoted fields may contain the delimiter, doubled
// quotes and line breaks. The delimiter is fixed per stream.
class Reader {
public:
    Reader(std::istream& in, char delimiter, std::size_t lines_consumed = 0)
        : in_(in), delim_(delimiter), line_no_(lines_consumed) {}

    // Returns the next record, or nullopt at end of stream. Blank lines are skipped.
    std::optional<std::vector<std::string>> next() {
        std::string line;
        while (true) {
            if (!std::getline(in_, line)) return std::nullopt;
            ++line_no_;
            strip_cr(line);
            if (!line.empty()) break;
        }
        record_start_ = line_no_;

        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        bool was_quoted = false;
        std::size_t i = 0;
        while (true) {
            if (i == line.size()) {
                if (!quoted) {
                    fields.push_back(std::move(field));
                    return fields;
                }
                // Quoted field spans a line break.
                if (!std::getline(in_, line))
                    throw DataError("unterminated quoted field", record_start_);
                ++line_no_;
                strip_cr(line);
                field += '\n';
                i = 0;
                continue;
            }
            char c = line[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field += '"';
                        i += 2;
                        continue;
                    }
                    quoted = false;
                    ++i;
                    if (i < line.size() && line[i] != delim_)
                        throw DataError("characters after closing quote", record_start_);
                    continue;
                }
                field += c;
                ++i;
                continue;
            }
            if (c == delim_) {
                fields.push_back(std::move(field));
                field.clear();
                was_quoted = false;
                ++i;
                continue;
            }
            if (c == '"' && field.empty() && !was_quoted) {
                quoted = was_quoted = true;
                ++i;
                continue;
            }
            field += c;
            ++i;
        }
    }

    // Physical line on which the last returned record started (1-based).
    std::size_t record_line() const noexcept { return record_start_; }

private:
    static void strip_cr(std::string& s) {
        if (!s.empty() && s.back() == '\r') s.pop_back();
    }

    std::istream& in_;
    char delim_;
    std::size_t line_no_;
    std::size_t record_start_ = 0;
};

inline bool needs_quotes(std::string_view field, char delimiter) {
    for (char c : field)
        if (c == delimiter || c == '"' || c == '\n' || c == '\r') return true;
    return false;
}

inline void write_field(std::ostream& out, std::string_view field, char delimiter) {
    if (!needs_quotes(field, delimiter)) {
        out << field;
        return;
    }
    out << '"';
    for (char c : field) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << delimiter;
        write_field(out, fields[i], delimiter);
    }
    out << '\n';
}

} // namespace xling::csv
