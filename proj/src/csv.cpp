#include "deepcore/csv.hpp"

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace deepcore {

namespace {

std::string_view trimmed(std::string_view field) {
  const auto from = field.find_first_not_of(" \t\r");
  if (from == std::string_view::npos) return {};
  const auto to = field.find_last_not_of(" \t\r");
  return field.substr(from, to - from + 1);
}

std::vector<std::string_view> splitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trimmed(line.substr(start)));
      return fields;
    }
    fields.push_back(trimmed(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool parseNumber(std::string_view field, double& value) {
  if (field.empty()) return false;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [end, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && end == last;
}

bool skippable(const std::string& line) {
  const std::string_view body = trimmed(line);
  return body.empty() || body.front() == '#';
}

}  // namespace

Matrix readCsvMatrix(std::istream& in, const std::string& sourceName) {
  std::vector<std::vector<double>> rows;
  std::size_t columns = 0;
  std::string line;
  std::size_t lineNumber = 0;
  bool sawFirstLine = false;

  while (std::getline(in, line)) {
    ++lineNumber;
    if (skippable(line)) continue;

    const std::vector<std::string_view> fields = splitFields(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (const std::string_view field : fields) {
      double value = 0.0;
      if (!parseNumber(field, value)) {
        numeric = false;
        break;
      }
      row.push_back(value);
    }

    if (!numeric) {
      if (!sawFirstLine) {
        // A non-numeric first line is a header.
        sawFirstLine = true;
        continue;
      }
      throw ParseError(sourceName + ":" + std::to_string(lineNumber) +
                       ": field is not a number");
    }
    sawFirstLine = true;

    if (columns == 0) {
      columns = row.size();
    } else if (row.size() != columns) {
      throw ParseError(sourceName + ":" + std::to_string(lineNumber) +
                       ": expected " + std::to_string(columns) +
                       " fields, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) {
    throw ParseError(sourceName + ": no data rows");
  }

  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(columns));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < columns; ++j) {
      out(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return out;
}

Matrix readCsvMatrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path + ": cannot open file");
  }
  return readCsvMatrix(in, path);
}

Vector parseVector(const std::string& text) {
  const std::vector<std::string_view> fields = splitFields(text);
  Vector out(static_cast<Index>(fields.size()));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    double value = 0.0;
    if (!parseNumber(fields[i], value)) {
      throw ParseError("coordinate list \"" + text +
                       "\": field " + std::to_string(i + 1) +
                       " is not a number");
    }
    out[static_cast<Index>(i)] = value;
  }
  return out;
}

}  // namespace deepcore
