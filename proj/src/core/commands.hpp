// SPDX-License-Identifier: Apache-2.0
//
// Subcommand drivers shared by the C API and the command-line tool. Each run
// produces a JSON summary plus named numeric tables; writing them to disk is
// a separate step so callers can inspect results in memory.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "table.hpp"

namespace ringqed
{

struct CommandInfo
{
  std::string name;
  std::string help;
  std::vector<std::string> params;  // accepted key names for RunOptions::params
};

const std::vector<CommandInfo> &command_list();

struct RunOptions
{
  std::optional<double> grid_pitch_nm;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;  // subcommand-specific, validated per command
};

struct Report
{
  std::string command;
  nlohmann::json summary;
  std::vector<Table> tables;

  const Table &table(const std::string &name) const;  // throws NotFound
};

Report run_command(const std::string &command, const ProjectConfig &config, const RunOptions &options);

// csv: one <table>.csv per table plus <command>_summary.json.
// json: a single <command>.json holding the summary and every table.
// Returns the paths written, in order.
std::vector<std::string> write_report(const Report &report, const std::string &dir, const std::string &format);

nlohmann::json report_to_json(const Report &report);
Report report_from_json(const nlohmann::json &j);
// Reads either layout back: a <command>.json file, or a <command>_summary.json
// whose listed table CSVs sit beside it.
Report read_report(const std::string &path);

}  // namespace ringqed
