#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace v2xcal::csv {

struct Row {
  std::size_t line;  // 1-based line number in the document
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;
};

// Parses a comma separated document with an optional quoted-field syntax.
// Blank lines are skipped. An empty document yields a table with no header.
Table read(std::string_view document);

// Resolves header names (case-insensitive, trimmed) to column indices.
class Columns {
 public:
  explicit Columns(const std::vector<std::string>& header);

  // First column whose name matches one of `names`.
  std::optional<std::size_t> find(std::initializer_list<std::string_view> names) const;
  // Same as find() but throws a document-level ParseError naming `names[0]`.
  std::size_t require(std::initializer_list<std::string_view> names) const;

 private:
  std::vector<std::string> normalized_;
};

std::string escape(std::string_view field);

// Appends one line; fields are escaped as needed.
void append_row(std::string& out, const std::vector<std::string>& fields);

}  // namespace v2xcal::csv
