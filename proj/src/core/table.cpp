// SPDX-License-Identifier: Apache-2.0

#include "table.hpp"

#include <cmath>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "errors.hpp"

namespace ringqed
{

void Table::add_row(std::vector<double> row)
{
  if (row.size() != columns.size())
    throw Error(ErrorCode::Internal, "row width does not match table '" + name + "'");
  rows.push_back(std::move(row));
}

int Table::column(const std::string &col) const
{
  for (size_t k = 0; k < columns.size(); ++k)
    if (columns[k] == col)
      return static_cast<int>(k);
  throw NotFoundError("table '" + name + "' has no column '" + col + "'", 0.0);
}

std::vector<double> Table::column_values(const std::string &col) const
{
  const int c = column(col);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto &r : rows)
    out.push_back(r[c]);
  return out;
}

void write_csv(const Table &table, const std::string &path)
{
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  for (size_t k = 0; k < table.columns.size(); ++k)
    out << (k ? "," : "") << table.columns[k];
  out << '\n';
  for (const auto &r : table.rows)
  {
    for (size_t k = 0; k < r.size(); ++k)
    {
      if (k)
        out << ',';
      if (std::isnan(r[k]))
        out << "nan";
      else
        out << fmt::format("{}", r[k]);
    }
    out << '\n';
  }
  if (!out)
    throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

Table read_csv(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  Table t;
  t.name = std::filesystem::path(path).stem().string();
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("empty CSV file '" + path + "'", 1);
  std::stringstream header(line);
  for (std::string col; std::getline(header, col, ',');)
    t.columns.push_back(col);
  int line_no = 1;
  while (std::getline(in, line))
  {
    ++line_no;
    if (line.empty())
      continue;
    std::vector<double> row;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');)
    {
      if (cell == "nan")
      {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      double v = 0.0;
      const char *end = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
      if (ec != std::errc() || ptr != end)
        throw ConfigError("non-numeric CSV cell '" + cell + "' in " + path, line_no);
      row.push_back(v);
    }
    if (row.size() != t.columns.size())
      throw ConfigError("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                            std::to_string(t.columns.size()),
                        line_no);
    t.rows.push_back(std::move(row));
  }
  return t;
}

nlohmann::json table_to_json(const Table &table)
{
  nlohmann::json j;
  j["name"] = table.name;
  j["columns"] = table.columns;
  auto rows = nlohmann::json::array();
  for (const auto &r : table.rows)
  {
    auto jr = nlohmann::json::array();
    for (double v : r)
      jr.push_back(std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v));
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

Table table_from_json(const nlohmann::json &j)
{
  Table t;
  t.name = j.at("name").get<std::string>();
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto &jr : j.at("rows"))
  {
    std::vector<double> r;
    for (const auto &v : jr)
      r.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
    t.add_row(std::move(r));
  }
  return t;
}

}  // namespace ringqed
