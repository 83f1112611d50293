#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace halfline {

/// Deterministic JSON emitter: caller-fixed field order, floats printed
/// with %.17g so identical inputs serialize byte-identically.
class JsonWriter {
 public:
  std::string take() { return std::move(out_); }

  JsonWriter& begin_object() { return open('{'); }
  JsonWriter& end_object() { return close('}'); }
  JsonWriter& begin_array() { return open('['); }
  JsonWriter& end_array() { return close(']'); }

  JsonWriter& key(const std::string& k) {
    comma();
    out_ += '"';
    out_ += k;
    out_ += "\":";
    pending_value_ = true;
    return *this;
  }

  JsonWriter& value(double x) {
    comma();
    out_ += format_double(x);
    return *this;
  }
  JsonWriter& value(int x) { return value_raw(std::to_string(x)); }
  JsonWriter& value(long x) { return value_raw(std::to_string(x)); }
  JsonWriter& value(bool b) { return value_raw(b ? "true" : "false"); }
  JsonWriter& value(const std::string& s) {
    comma();
    out_ += '"';
    for (char c : s) {
      if (c == '"' || c == '\\') out_ += '\\';
      out_ += c;
    }
    out_ += '"';
    return *this;
  }
  JsonWriter& value(const char* s) { return value(std::string(s)); }

  static std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }

 private:
  JsonWriter& value_raw(const std::string& s) {
    comma();
    out_ += s;
    return *this;
  }
  JsonWriter& open(char c) {
    comma();
    out_ += c;
    fresh_ = true;
    return *this;
  }
  JsonWriter& close(char c) {
    out_ += c;
    fresh_ = false;
    return *this;
  }
  void comma() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[')
      out_ += ',';
    fresh_ = false;
  }

  std::string out_;
  bool fresh_ = true;
  bool pending_value_ = false;
};

inline std::string csv_row(const std::vector<double>& cols) {
  std::string row;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) row += ',';
    row += JsonWriter::format_double(cols[i]);
  }
  row += '\n';
  return row;
}

}  // namespace halfline
