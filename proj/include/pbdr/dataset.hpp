#pragma once

#include <map>
#include <optional>
#include <string>

namespace pbdr {

/// One flat input row: numeric fields by name plus an optional class label.
struct DatasetRecord {
  std::string id;
  std::map<std::string, double> fields;
  std::optional<std::string> label;

  bool operator==(const DatasetRecord&) const = default;
};

}  // namespace pbdr
