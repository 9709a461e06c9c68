#include "v2xcal/csv.hpp"

#include <boost/tokenizer.hpp>

#include "v2xcal/error.hpp"
#include "v2xcal/text.hpp"

namespace v2xcal::csv {

Table read(std::string_view document) {
  Table table;
  const boost::escaped_list_separator<char> separator('\\', ',', '"');
  std::size_t line_no = 0;
  bool have_header = false;
  for (const auto& raw : split(document, '\n')) {
    ++line_no;
    const std::string line(trim(raw));
    if (line.empty()) continue;
    std::vector<std::string> fields;
    try {
      boost::tokenizer<boost::escaped_list_separator<char>> tokens(line, separator);
      for (const auto& token : tokens) fields.emplace_back(trim(token));
    } catch (const boost::escaped_list_error& e) {
      throw ParseError(line_no, "", std::string("malformed CSV: ") + e.what());
    }
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
    } else {
      table.rows.push_back({line_no, std::move(fields)});
    }
  }
  return table;
}

Columns::Columns(const std::vector<std::string>& header) {
  normalized_.reserve(header.size());
  for (const auto& name : header) normalized_.push_back(to_lower(trim(name)));
}

std::optional<std::size_t> Columns::find(std::initializer_list<std::string_view> names) const {
  for (std::string_view name : names) {
    for (std::size_t i = 0; i < normalized_.size(); ++i) {
      if (normalized_[i] == name) return i;
    }
  }
  return std::nullopt;
}

std::size_t Columns::require(std::initializer_list<std::string_view> names) const {
  if (auto idx = find(names)) return *idx;
  throw ParseError(0, std::string(*names.begin()),
                   "missing mandatory column '" + std::string(*names.begin()) + "'");
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\\\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

void append_row(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  out += '\n';
}

}  // namespace v2xcal::csv
