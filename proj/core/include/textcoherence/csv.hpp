#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace textcoherence::csv {

// One physical record from an RFC-4180 stream. `line` is the 1-based line on
// which the record starts (records may span lines inside quoted fields).
struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
  std::optional<std::string> error;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Returns false at end of input.
  bool next(Record& record);

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

// Quotes a field only when it contains a delimiter, quote or line break.
std::string escape(std::string_view field);

}  // namespace textcoherence::csv
