#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stormtrace {

enum class errc {
  malformed_url,
  redirect_cycle,
  malformed_record,
  missing_field,
  bad_timestamp,
  empty_corpus,
  empty_window,
  topic_out_of_range,
  not_referenced,
  invalid_argument,
  io_error,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::malformed_url: return "MalformedUrl";
    case errc::redirect_cycle: return "RedirectCycle";
    case errc::malformed_record: return "MalformedRecord";
    case errc::missing_field: return "MissingField";
    case errc::bad_timestamp: return "BadTimestamp";
    case errc::empty_corpus: return "EmptyCorpus";
    case errc::empty_window: return "EmptyWindow";
    case errc::topic_out_of_range: return "TopicOutOfRange";
    case errc::not_referenced: return "NotReferenced";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::io_error: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library. `line()` is the 1-based input line
/// for errors raised while reading line-oriented files, 0 otherwise.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what, std::size_t line = 0)
      : std::runtime_error(compose(code, what, line)), code_(code), line_(line) {}

  errc code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

  /// Re-raise with a line number attached, keeping the code.
  error at_line(std::size_t line) const {
    return error(code_, detail_of(what()), line);
  }

 private:
  static std::string compose(errc code, const std::string& what, std::size_t line) {
    std::string out(to_string(code));
    if (line != 0) out += " at line " + std::to_string(line);
    out += ": ";
    out += what;
    return out;
  }

  static std::string detail_of(const char* full) {
    std::string s(full);
    auto pos = s.find(": ");
    return pos == std::string::npos ? s : s.substr(pos + 2);
  }

  errc code_;
  std::size_t line_;
};

}  // namespace stormtrace
