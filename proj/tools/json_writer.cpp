#include "json_writer.hpp"

#include <cmath>
#include <cstdio>

namespace forest::cli {

namespace {

void write(const nlohmann::ordered_json& j, std::string& out) {
  using value_t = nlohmann::ordered_json::value_t;
  switch (j.type()) {
    case value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::ordered_json(key).dump();
        out += ':';
        write(value, out);
      }
      out += '}';
      break;
    }
    case value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        write(j[i], out);
      }
      out += ']';
      break;
    }
    case value_t::number_float:
      out += format_number(j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

void flatten(const nlohmann::ordered_json& j, const std::string& key, std::string& out) {
  using value_t = nlohmann::ordered_json::value_t;
  const auto join = [&](const std::string& tail) { return key.empty() ? tail : key + '.' + tail; };
  switch (j.type()) {
    case value_t::object:
      for (const auto& [k, value] : j.items()) flatten(value, join(k), out);
      break;
    case value_t::array:
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], join(std::to_string(i)), out);
      break;
    case value_t::string:
      out += csv_field(key) + ',' + csv_field(j.get<std::string>()) + '\n';
      break;
    case value_t::number_float:
      out += csv_field(key) + ',' + format_number(j.get<double>()) + '\n';
      break;
    default:
      out += csv_field(key) + ',' + j.dump() + '\n';
  }
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string write_json(const nlohmann::ordered_json& doc) {
  std::string out;
  write(doc, out);
  return out;
}

std::string write_csv(const nlohmann::ordered_json& doc, const std::string& prefix) {
  std::string out;
  flatten(doc, prefix, out);
  return out;
}

}  // namespace forest::cli
