#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "betaframe/serialize.hpp"

namespace betaframe::cli {

using OrderedJson = nlohmann::ordered_json;

inline std::string cell_text(const OrderedJson& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline std::string rows_to_csv(const std::vector<std::string>& columns,
                               const std::vector<OrderedJson>& rows) {
  std::string out = csv_join(columns);
  for (const OrderedJson& row : rows) {
    std::vector<std::string> cells;
    cells.reserve(columns.size());
    for (const std::string& c : columns) cells.push_back(cell_text(row.at(c)));
    out += csv_join(cells);
  }
  return out;
}

inline std::string rows_to_json(const std::vector<OrderedJson>& rows) {
  OrderedJson array = OrderedJson::array();
  for (const OrderedJson& row : rows) array.push_back(row);
  return array.dump(2) + "\n";
}

inline void write_table(const std::string& format, const std::string& path,
                        const std::vector<std::string>& columns,
                        const std::vector<OrderedJson>& rows) {
  if (format == "json")
    write_text_file(path, rows_to_json(rows));
  else
    write_text_file(path, rows_to_csv(columns, rows));
}

}  // namespace betaframe::cli
