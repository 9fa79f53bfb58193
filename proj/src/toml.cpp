// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

// A reader for the TOML subset used by manifests and run configs: [table]
// headers, bare or quoted keys, strings, integers, floats, booleans and
// (possibly multi-line) arrays of those. Inline tables and dates are rejected.

#include <cctype>
#include <charconv>
#include <string>

#include "calprompt/errors.hpp"
#include "calprompt/io.hpp"

namespace calprompt {

namespace {

class TomlCursor {
 public:
  TomlCursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_ws() {
    for (;;) {
      while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                     text_[pos_] == '\r' || text_[pos_] == '\n')) {
        if (text_[pos_] == '\n') ++line_;
        ++pos_;
      }
      if (pos_ < text_.size() && text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        continue;
      }
      return;
    }
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  std::size_t line() const { return line_; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError("toml: " + what, line_); }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string key() {
    if (peek() == '"') return basic_string();
    std::size_t b = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
            text_[pos_] == '-')) {
      ++pos_;
    }
    if (b == pos_) fail("expected a key");
    return std::string(text_.substr(b, pos_ - b));
  }

  std::string basic_string() {
    expect('"');
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\n') fail("newline in string");
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("dangling escape");
        char e = text_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out += c;
      }
    }
    expect('"');
    return out;
  }

  std::string literal_string() {
    expect('\'');
    std::size_t b = pos_;
    while (pos_ < text_.size() && text_[pos_] != '\'') {
      if (text_[pos_] == '\n') fail("newline in string");
      ++pos_;
    }
    std::string out(text_.substr(b, pos_ - b));
    expect('\'');
    return out;
  }

  Json value() {
    skip_ws();
    const char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (c == '{') fail("inline tables are not supported");
    std::size_t b = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
           text_[pos_] != '\n' && text_[pos_] != '#' && text_[pos_] != ' ' &&
           text_[pos_] != '\t' && text_[pos_] != '\r') {
      ++pos_;
    }
    std::string token(text_.substr(b, pos_ - b));
    if (token == "true") return true;
    if (token == "false") return false;
    std::string digits;
    for (char ch : token) {
      if (ch != '_') digits += ch;
    }
    if (digits.empty()) fail("expected a value");
    const bool is_float = digits.find_first_of(".eE") != std::string::npos ||
                          digits == "inf" || digits == "+inf" || digits == "-inf" ||
                          digits == "nan";
    if (!is_float) {
      std::int64_t iv = 0;
      const char* first = digits.data() + (digits.front() == '+' ? 1 : 0);
      auto [ptr, ec] = std::from_chars(first, digits.data() + digits.size(), iv);
      if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        fail("bad value '" + token + "'");
      }
      return iv;
    }
    double dv = 0.0;
    const char* first = digits.data() + (digits.front() == '+' ? 1 : 0);
    auto [ptr, ec] = std::from_chars(first, digits.data() + digits.size(), dv);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
      fail("bad value '" + token + "'");
    }
    return dv;
  }

  Json array() {
    expect('[');
    Json arr = Json::array();
    for (;;) {
      skip_ws();
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      arr.push_back(value());
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      skip_ws();
      expect(']');
      return arr;
    }
  }

  void end_of_line() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) {
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '#') {
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] != '\n') fail("trailing characters after value");
  }

  void advance() { ++pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

}  // namespace

Json parse_toml(std::string_view text) {
  Json root = Json::object();
  Json* table = &root;
  TomlCursor cur(text, 1);
  for (;;) {
    cur.skip_ws();
    if (cur.at_end()) break;
    if (cur.peek() == '[') {
      cur.advance();
      table = &root;
      for (;;) {
        cur.skip_ws();
        std::string k = cur.key();
        Json& next = (*table)[k];
        if (next.is_null()) next = Json::object();
        if (!next.is_object()) cur.fail("table '" + k + "' redefines a value");
        table = &next;
        cur.skip_ws();
        if (cur.peek() == '.') {
          cur.advance();
          continue;
        }
        break;
      }
      cur.expect(']');
      cur.end_of_line();
      continue;
    }
    std::string k = cur.key();
    cur.skip_ws();
    cur.expect('=');
    if (table->contains(k)) cur.fail("duplicate key '" + k + "'");
    (*table)[k] = cur.value();
    cur.end_of_line();
  }
  return root;
}

}  // namespace calprompt
