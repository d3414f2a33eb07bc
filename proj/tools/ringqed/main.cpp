// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ringqed/ringqed.h"

namespace
{

std::string flag_for(const std::string &param)
{
  std::string s = "--" + param;
  for (auto &ch : s)
    if (ch == '_')
      ch = '-';
  return s;
}

int report_failure(rq_status status)
{
  std::fprintf(stderr, "ringqed: error [%s]: %s\n", rq_status_name(status), rq_last_error_message());
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Ring-resonator cavity-QED design toolkit: mode solving, coupler design, spectra, "
               "trap potentials and membrane stacks."};
  app.set_version_flag("--version", rq_version());
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  double grid_pitch = 0.0;
  int jobs = 1;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "project YAML file (built-in defaults when omitted)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--grid-pitch", grid_pitch, "mode-solver grid pitch in nm (overrides the config)")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::Range(1, 1024))->capture_default_str();
  app.add_option("--seed", seed, "random seed (fit bootstrap)")->capture_default_str();

  // One subcommand per library command; each parameter becomes --kebab-case.
  std::map<std::string, std::map<std::string, std::string>> params;
  std::vector<CLI::App *> subs;
  for (size_t k = 0; k < rq_command_count(); ++k)
  {
    const std::string name = rq_command_name(k);
    auto *sub = app.add_subcommand(name, rq_command_help(k));
    for (size_t p = 0; p < rq_command_param_count(k); ++p)
    {
      const std::string key = rq_command_param(k, p);
      sub->add_option_function<std::string>(
          flag_for(key), [&params, name, key](const std::string &v) { params[name][key] = v; }, key);
    }
    subs.push_back(sub);
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    return app.exit(e);
  }

  std::string command;
  for (auto *sub : subs)
    if (sub->parsed())
      command = sub->get_name();

  rq_project *project = nullptr;
  rq_status st = config_path.empty() ? rq_project_defaults(&project) : rq_project_load(config_path.c_str(), &project);
  if (st != RQ_OK)
  {
    std::fprintf(stderr, "ringqed: error [%s]: %s: %s\n", rq_status_name(st), config_path.c_str(),
                 rq_last_error_message());
    return static_cast<int>(st);
  }

  std::vector<const char *> keys, values;
  for (const auto &[k, v] : params[command])
  {
    keys.push_back(k.c_str());
    values.push_back(v.c_str());
  }
  rq_run_options opts;
  rq_run_options_init(&opts);
  opts.grid_pitch_nm = grid_pitch;
  opts.jobs = jobs;
  opts.seed = seed;
  opts.param_keys = keys.data();
  opts.param_values = values.data();
  opts.param_count = keys.size();

  rq_report *report = nullptr;
  st = rq_run(project, command.c_str(), &opts, &report);
  rq_project_free(project);
  if (st != RQ_OK)
    return report_failure(st);

  st = rq_report_write(report, out_dir.c_str(), format.c_str());
  if (st != RQ_OK)
  {
    rq_report_free(report);
    return report_failure(st);
  }
  std::printf("%s\n", rq_report_summary_json(report));
  for (size_t t = 0; t < rq_report_table_count(report); ++t)
  {
    size_t rows = 0, cols = 0;
    rq_report_table_shape(report, t, &rows, &cols);
    std::fprintf(stderr, "table %s: %zu rows x %zu columns\n", rq_report_table_name(report, t), rows, cols);
  }
  rq_report_free(report);
  return 0;
}
