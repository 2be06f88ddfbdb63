#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace aptscatter::cli {

/// 17 significant digits, "nan"/"inf" spelled out.
std::string fmt_double(double v);

/// Ordered key/value metadata shared by the CSV comment header and the JSON
/// "metadata" object.
class Metadata {
 public:
  void add(std::string key, std::string value);
  void add(std::string key, double value);
  void add(std::string key, int value);
  void add(std::string key, bool value);

  void write_csv(std::ostream& os) const;
  nlohmann::ordered_json to_json() const;

 private:
  struct Entry {
    std::string key;
    std::string text;
    nlohmann::ordered_json value;
  };
  std::vector<Entry> entries_;
};

/// Writes "# key: value" lines.
void write_csv_comment(std::ostream& os, const std::string& key, const std::string& value);

/// Writes a comma-separated row.
void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

/// JSON number, or null for non-finite values.
nlohmann::ordered_json json_number(double v);

}  // namespace aptscatter::cli
