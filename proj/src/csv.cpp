#include "treegaze/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "treegaze/error.hpp"

namespace treegaze::csv {

namespace {

std::string_view trim_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

std::string_view trim_spaces(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::vector<std::string> split_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
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
        } else if (c == '"' && trim_spaces(cur).empty()) {
            cur.clear();
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            out.push_back(was_quoted ? cur : std::string(trim_spaces(cur)));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", line_no);
    out.push_back(was_quoted ? cur : std::string(trim_spaces(cur)));
    return out;
}

Reader::Reader(std::istream& in) : in_(in) {}

bool Reader::read_header() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        auto view = trim_cr(line);
        if (line_ == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (trim_spaces(view).empty()) continue;
        header_ = split_line(view, line_);
        return true;
    }
    return false;
}

std::optional<std::size_t> Reader::find_column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name) return i;
    return std::nullopt;
}

std::size_t Reader::require_column(std::string_view name) const {
    if (auto i = find_column(name)) return *i;
    throw ParseError("missing column '" + std::string(name) + "'", line_ == 0 ? 1 : line_);
}

std::optional<Row> Reader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        const auto view = trim_cr(line);
        if (trim_spaces(view).empty()) continue;
        Row row{line_, split_line(view, line_)};
        if (row.fields.size() != header_.size())
            throw ParseError("expected " + std::to_string(header_.size()) + " fields, found " +
                                 std::to_string(row.fields.size()),
                             line_);
        return row;
    }
    return std::nullopt;
}

double to_double(const std::string& field, std::string_view column, std::size_t line_no) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (field.empty() || ec != std::errc() || ptr != last)
        throw ParseError("non-numeric value '" + field + "' in column '" + std::string(column) + "'",
                         line_no);
    return v;
}

long long to_integer(const std::string& field, std::string_view column, std::size_t line_no) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
        throw ParseError("non-integer value '" + field + "' in column '" + std::string(column) + "'",
                         line_no);
    return v;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace treegaze::csv
