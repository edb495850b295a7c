#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace treegaze::csv {

// Minimal RFC-4180 reader: comma separated, optional double quotes, LF or CRLF.
// Embedded newlines inside quoted fields are not supported.
struct Row {
    std::size_t line = 0;  // 1-based line number in the source
    std::vector<std::string> fields;
};

class Reader {
public:
    explicit Reader(std::istream& in);

    /// Reads the header line and remembers column positions. Returns false on empty input.
    bool read_header();
    const std::vector<std::string>& header() const noexcept { return header_; }

    /// Position of `name` in the header; throws ParseError naming the column if absent.
    std::size_t require_column(std::string_view name) const;
    std::optional<std::size_t> find_column(std::string_view name) const;

    /// Next non-empty data row, or nullopt at end of input.
    std::optional<Row> next();

private:
    std::istream& in_;
    std::vector<std::string> header_;
    std::size_t line_ = 0;
};

std::vector<std::string> split_line(std::string_view line, std::size_t line_no);

/// Strict numeric conversion of a whole field; throws ParseError mentioning `column`.
double to_double(const std::string& field, std::string_view column, std::size_t line_no);
long long to_integer(const std::string& field, std::string_view column, std::size_t line_no);

/// Quotes a field if it contains a comma, quote or newline.
std::string escape(std::string_view field);

/// Round-trip decimal formatting for report files.
std::string format_double(double v);

}  // namespace treegaze::csv
