#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace revnet::csv {

struct Row {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
/// newlines. Blank lines are skipped.
std::vector<Row> parse(std::string_view content);

/// Quotes a field only when it needs it.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

}  // namespace revnet::csv
