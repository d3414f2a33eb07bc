// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ringqed
{

// Numeric table with named columns. Units go in the column names
// (e.g. "cl_um", "t_res"); NaN marks a missing value.
struct Table
{
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  int column(const std::string &name) const;  // throws NotFound
  std::vector<double> column_values(const std::string &name) const;
};

void write_csv(const Table &table, const std::string &path);
Table read_csv(const std::string &path);

// {"name", "columns", "rows"}; NaN becomes null.
nlohmann::json table_to_json(const Table &table);
Table table_from_json(const nlohmann::json &j);

}  // namespace ringqed
