#include "textcoherence/csv.hpp"

namespace textcoherence::csv {

bool Reader::next(Record& record) {
  record.fields.clear();
  record.error.reset();
  record.line = line_;

  int c = in_.get();
  if (c == std::char_traits<char>::eof()) return false;

  std::string field;
  bool quoted = false;      // inside a quoted section
  bool was_quoted = false;  // current field started with a quote
  bool after_quote = false; // closing quote seen, expecting delimiter/EOL

  const auto end_field = [&] {
    record.fields.push_back(std::move(field));
    field.clear();
    was_quoted = false;
    after_quote = false;
  };

  for (;; c = in_.get()) {
    if (c == std::char_traits<char>::eof()) {
      if (quoted) record.error = "unterminated quoted field";
      end_field();
      return true;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == ',') {
      end_field();
      continue;
    }
    if (ch == '\r' && in_.peek() == '\n') continue;
    if (ch == '\n') {
      ++line_;
      end_field();
      return true;
    }
    if (after_quote) {
      if (!record.error) record.error = "unexpected character after closing quote";
      field.push_back(ch);
      continue;
    }
    if (ch == '"') {
      if (field.empty() && !was_quoted) {
        quoted = true;
        was_quoted = true;
      } else {
        if (!record.error) record.error = "bare quote inside unquoted field";
        field.push_back(ch);
      }
      continue;
    }
    field.push_back(ch);
  }
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace textcoherence::csv
