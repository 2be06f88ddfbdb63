#include "output.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace aptscatter::cli {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

void Metadata::add(std::string key, std::string value) {
  nlohmann::ordered_json j = value;
  entries_.push_back({std::move(key), std::move(value), std::move(j)});
}

void Metadata::add(std::string key, double value) {
  entries_.push_back({std::move(key), fmt_double(value), json_number(value)});
}

void Metadata::add(std::string key, int value) {
  entries_.push_back({std::move(key), std::to_string(value), value});
}

void Metadata::add(std::string key, bool value) {
  entries_.push_back({std::move(key), value ? "true" : "false", value});
}

void Metadata::write_csv(std::ostream& os) const {
  for (const auto& e : entries_) write_csv_comment(os, e.key, e.text);
}

nlohmann::ordered_json Metadata::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& e : entries_) j[e.key] = e.value;
  return j;
}

void write_csv_comment(std::ostream& os, const std::string& key, const std::string& value) {
  os << "# " << key << ": " << value << '\n';
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

nlohmann::ordered_json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace aptscatter::cli
