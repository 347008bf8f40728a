#pragma once

#include <istream>
#include <stdexcept>
#include <string>

namespace bgap::detail {

// Line reader for the '#'-commented text formats.
class DataLines {
 public:
  explicit DataLines(std::istream& in) : in_(in) { advance(); }

  bool has_more() const { return has_pending_; }
  int line_number() const { return line_number_; }

  std::string next(const char* what) {
    if (!has_pending_) {
      throw std::runtime_error(std::string("unexpected end of input, expected ") + what);
    }
    std::string out = std::move(pending_);
    current_line_ = pending_line_;
    advance();
    line_number_ = current_line_;
    return out;
  }

 private:
  void advance() {
    has_pending_ = false;
    std::string raw;
    while (std::getline(in_, raw)) {
      ++read_lines_;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
      if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
      pending_ = std::move(raw);
      pending_line_ = read_lines_;
      has_pending_ = true;
      return;
    }
  }

  std::istream& in_;
  std::string pending_;
  bool has_pending_ = false;
  int read_lines_ = 0;
  int pending_line_ = 0;
  int current_line_ = 0;
  int line_number_ = 0;
};

}  // namespace bgap::detail
