#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

namespace stormtrace {

/// Six decimals, never "-0.000000".
inline std::string format_fixed(double v) {
  if (std::fabs(v) < 5e-7) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

namespace detail {

inline void write_json_value(std::ostream& out, const nlohmann::json& j, int depth) {
  auto indent = [&](int d) { out << std::string(static_cast<std::size_t>(d) * 2, ' '); };
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out << ",\n";
        first = false;
        indent(depth + 1);
        out << nlohmann::json(key).dump() << ": ";
        write_json_value(out, value, depth + 1);
      }
      out << '\n';
      indent(depth);
      out << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      bool first = true;
      for (const auto& value : j) {
        if (!first) out << ",\n";
        first = false;
        indent(depth + 1);
        write_json_value(out, value, depth + 1);
      }
      out << '\n';
      indent(depth);
      out << ']';
      return;
    }
    case nlohmann::json::value_t::number_float:
      out << format_fixed(j.get<double>());
      return;
    default:
      out << j.dump();
      return;
  }
}

}  // namespace detail

/// Pretty-printed JSON with sorted object keys and every real written with
/// six decimals, so equal values always serialize to equal bytes.
inline void write_json(std::ostream& out, const nlohmann::json& j) {
  detail::write_json_value(out, j, 0);
  out << '\n';
}

}  // namespace stormtrace
