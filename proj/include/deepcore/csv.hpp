// Reading numeric matrices and vectors from comma-separated text.
#ifndef DEEPCORE_CSV_HPP
#define DEEPCORE_CSV_HPP

#include <iosfwd>
#include <string>

#include "deepcore/types.hpp"

namespace deepcore {

// Reads a comma-separated numeric matrix, one row per line.
//  - Blank lines and lines starting with '#' are skipped.
//  - If the first remaining line has a field that does not parse as a
//    number, that line is treated as a header and dropped.
//  - Every data row must have the same number of fields.
// Parsing is locale-independent (digits with '.' decimal point). Throws
// ParseError on malformed or empty input. `sourceName` appears in error
// messages.
Matrix readCsvMatrix(std::istream& in, const std::string& sourceName);

// Opens `path` and delegates to the stream overload.
Matrix readCsvMatrix(const std::string& path);

// Parses a single comma-separated coordinate list such as "1.5,-2,0.25".
// Throws ParseError on malformed or empty input.
Vector parseVector(const std::string& text);

}  // namespace deepcore

#endif  // DEEPCORE_CSV_HPP
