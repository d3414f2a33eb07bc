// SPDX-License-Identifier: Apache-2.0

#include "ringqed/ringqed.h"

#include <cmath>
#include <limits>
#include <new>
#include <string>

#include "commands.hpp"
#include "coupler.hpp"
#include "errors.hpp"
#include "materials.hpp"
#include "membrane.hpp"
#include "resonator.hpp"
#include "spectra.hpp"
#include "trap.hpp"

struct rq_project
{
  ringqed::ProjectConfig config;
};

struct rq_report
{
  ringqed::Report report;
  std::string summary_text;
};

namespace
{

thread_local std::string last_message;
thread_local int last_line = 0;

rq_status fail(ringqed::ErrorCode code, const std::string &message, int line = 0)
{
  last_message = message;
  last_line = line;
  return static_cast<rq_status>(code);
}

// Runs body and maps any exception onto a status code.
template <typename Body>
rq_status guarded(Body &&body) noexcept
{
  last_message.clear();
  last_line = 0;
  try
  {
    body();
    return RQ_OK;
  }
  catch (const ringqed::ConfigError &e)
  {
    return fail(e.code(), e.what(), e.line());
  }
  catch (const ringqed::Error &e)
  {
    return fail(e.code(), e.what());
  }
  catch (const std::bad_alloc &)
  {
    return fail(ringqed::ErrorCode::Internal, "out of memory");
  }
  catch (const std::exception &e)
  {
    return fail(ringqed::ErrorCode::Internal, e.what());
  }
  catch (...)
  {
    return fail(ringqed::ErrorCode::Internal, "unknown exception");
  }
}

void require(bool ok, const char *what)
{
  if (!ok)
    throw ringqed::Error(ringqed::ErrorCode::InvalidArgument, what);
}

const ringqed::Table &table_at(const rq_report *r, size_t k)
{
  require(r != nullptr, "report handle is null");
  if (k >= r->report.tables.size())
    throw ringqed::Error(ringqed::ErrorCode::Range, "table index out of range");
  return r->report.tables[k];
}

rq_report *wrap(ringqed::Report report)
{
  auto *r = new rq_report{std::move(report), {}};
  r->summary_text = r->report.summary.dump();
  return r;
}

}  // namespace

extern "C" {

const char *rq_version(void) { return RINGQED_VERSION; }

const char *rq_status_name(rq_status status)
{
  return ringqed::error_code_name(static_cast<ringqed::ErrorCode>(status));
}

const char *rq_last_error_message(void) { return last_message.c_str(); }

int rq_last_error_line(void) { return last_line; }

rq_status rq_project_defaults(rq_project **out)
{
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = new rq_project{ringqed::ProjectConfig::defaults()};
  });
}

rq_status rq_project_load(const char *path, rq_project **out)
{
  return guarded([&] {
    require(out != nullptr && path != nullptr, "null argument");
    *out = new rq_project{ringqed::ProjectConfig::from_yaml_file(path)};
  });
}

rq_status rq_project_parse(const char *yaml_text, const char *base_dir, rq_project **out)
{
  return guarded([&] {
    require(out != nullptr && yaml_text != nullptr, "null argument");
    *out = new rq_project{ringqed::ProjectConfig::from_yaml_string(yaml_text, base_dir ? base_dir : ".")};
  });
}

void rq_project_free(rq_project *project) { delete project; }

size_t rq_command_count(void) { return ringqed::command_list().size(); }

const char *rq_command_name(size_t index)
{
  const auto &l = ringqed::command_list();
  return index < l.size() ? l[index].name.c_str() : nullptr;
}

const char *rq_command_help(size_t index)
{
  const auto &l = ringqed::command_list();
  return index < l.size() ? l[index].help.c_str() : nullptr;
}

size_t rq_command_param_count(size_t index)
{
  const auto &l = ringqed::command_list();
  return index < l.size() ? l[index].params.size() : 0;
}

const char *rq_command_param(size_t index, size_t param)
{
  const auto &l = ringqed::command_list();
  if (index >= l.size() || param >= l[index].params.size())
    return nullptr;
  return l[index].params[param].c_str();
}

void rq_run_options_init(rq_run_options *options)
{
  if (options)
    *options = rq_run_options{0.0, 1, 0, nullptr, nullptr, 0};
}

rq_status rq_run(const rq_project *project, const char *command, const rq_run_options *options, rq_report **out)
{
  return guarded([&] {
    require(project != nullptr && command != nullptr && out != nullptr, "null argument");
    ringqed::RunOptions opts;
    if (options)
    {
      if (options->grid_pitch_nm > 0.0)
        opts.grid_pitch_nm = options->grid_pitch_nm;
      opts.jobs = options->jobs;
      opts.seed = options->seed;
      require(options->param_count == 0 || (options->param_keys && options->param_values),
              "parameter arrays are null");
      for (size_t k = 0; k < options->param_count; ++k)
      {
        require(options->param_keys[k] && options->param_values[k], "null parameter entry");
        opts.params[options->param_keys[k]] = options->param_values[k];
      }
    }
    *out = wrap(ringqed::run_command(command, project->config, opts));
  });
}

rq_status rq_report_write(const rq_report *report, const char *dir, const char *format)
{
  return guarded([&] {
    require(report != nullptr && dir != nullptr && format != nullptr, "null argument");
    ringqed::write_report(report->report, dir, format);
  });
}

rq_status rq_report_read(const char *path, rq_report **out)
{
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = wrap(ringqed::read_report(path));
  });
}

void rq_report_free(rq_report *report) { delete report; }

const char *rq_report_command(const rq_report *report) { return report ? report->report.command.c_str() : nullptr; }

const char *rq_report_summary_json(const rq_report *report) { return report ? report->summary_text.c_str() : nullptr; }

rq_status rq_report_summary_number(const rq_report *report, const char *pointer, double *out)
{
  return guarded([&] {
    require(report != nullptr && pointer != nullptr && out != nullptr, "null argument");
    const auto &s = report->report.summary;
    nlohmann::json::json_pointer ptr;
    try
    {
      ptr = nlohmann::json::json_pointer(pointer);
    }
    catch (const nlohmann::json::exception &)
    {
      throw ringqed::Error(ringqed::ErrorCode::InvalidArgument, std::string("malformed JSON pointer '") + pointer + "'");
    }
    if (!s.contains(ptr))
      throw ringqed::NotFoundError(std::string("summary has no entry '") + pointer + "'", 0.0);
    const auto &v = s.at(ptr);
    if (v.is_null())
      *out = std::numeric_limits<double>::quiet_NaN();
    else if (v.is_boolean())
      *out = v.get<bool>() ? 1.0 : 0.0;
    else if (v.is_number())
      *out = v.get<double>();
    else
      throw ringqed::Error(ringqed::ErrorCode::InvalidArgument, std::string("summary entry '") + pointer +
                                                                   "' is not a number");
  });
}

size_t rq_report_table_count(const rq_report *report) { return report ? report->report.tables.size() : 0; }

const char *rq_report_table_name(const rq_report *report, size_t table)
{
  if (!report || table >= report->report.tables.size())
    return nullptr;
  return report->report.tables[table].name.c_str();
}

rq_status rq_report_table_shape(const rq_report *report, size_t table, size_t *rows, size_t *cols)
{
  return guarded([&] {
    require(rows != nullptr && cols != nullptr, "null argument");
    const auto &t = table_at(report, table);
    *rows = t.rows.size();
    *cols = t.columns.size();
  });
}

const char *rq_report_column_name(const rq_report *report, size_t table, size_t col)
{
  if (!report || table >= report->report.tables.size() || col >= report->report.tables[table].columns.size())
    return nullptr;
  return report->report.tables[table].columns[col].c_str();
}

rq_status rq_report_table_data(const rq_report *report, size_t table, double *buf, size_t capacity)
{
  return guarded([&] {
    require(buf != nullptr, "buffer is null");
    const auto &t = table_at(report, table);
    if (capacity < t.rows.size() * t.columns.size())
      throw ringqed::Error(ringqed::ErrorCode::Range, "buffer too small for table");
    size_t k = 0;
    for (const auto &row : t.rows)
      for (double v : row)
        buf[k++] = v;
  });
}

rq_status rq_t_res(double kappa_c, double kappa_i, double *out)
{
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = ringqed::t_res({kappa_c, kappa_i, 0.0});
  });
}

rq_status rq_invert_t_res(double t, double *under_ratio, double *over_ratio)
{
  return guarded([&] {
    require(under_ratio != nullptr && over_ratio != nullptr, "output pointer is null");
    const auto b = ringqed::invert_t_res(t);
    *under_ratio = b.under_coupled;
    *over_ratio = b.over_coupled;
  });
}

rq_status rq_empty_ring_transmission(double kappa_c, double kappa_i, double detuning_ghz, double *out)
{
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = ringqed::empty_ring_transmission({kappa_c, kappa_i, 0.0}, detuning_ghz);
  });
}

rq_status rq_atom_transmission(double g, double gamma, double kappa_c, double kappa_i, double detuning, double *out)
{
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = ringqed::atom_transmission({g, gamma, {kappa_c, kappa_i, 0.0}, detuning});
  });
}

rq_status rq_q_to_kappa(double q, double frequency_thz, double *out)
{
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = ringqed::q_to_kappa(q, frequency_thz);
  });
}

rq_status rq_kappa_to_q(double kappa, double frequency_thz, double *out)
{
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = ringqed::kappa_to_q(kappa, frequency_thz);
  });
}

rq_status rq_cooperativity(double q, double mode_volume_um3, double wavelength_nm, double *out)
{
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = ringqed::cooperativity(q, mode_volume_um3, wavelength_nm);
  });
}

rq_status rq_coupling_strength(double mode_volume_um3, double frequency_thz, double *out)
{
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = ringqed::coupling_strength(mode_volume_um3, ringqed::AtomData::cesium(), frequency_thz);
  });
}

rq_status rq_casimir_polder(double z_nm, double *out)
{
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = ringqed::casimir_polder(ringqed::AtomData::cesium(), z_nm);
  });
}

rq_status rq_polarizability(double wavelength_nm, double *out_au)
{
  return guarded([&] {
    require(out_au != nullptr, "output pointer is null");
    *out_au = ringqed::cs_ground_polarizability(ringqed::AtomData::cesium(), wavelength_nm) /
              ringqed::polarizability_au;
  });
}

rq_status rq_membrane_point(const rq_project *project, double oxide_um, double nitride_um, double wavelength_nm,
                            double *reflectance, double *first_antinode_nm)
{
  return guarded([&] {
    require(project != nullptr && reflectance != nullptr && first_antinode_nm != nullptr, "null argument");
    const auto stack = ringqed::LayerStack::membrane(project->config.db, oxide_um, nitride_um);
    const auto r = ringqed::stack_response(stack, wavelength_nm);
    *reflectance = r.reflectance;
    *first_antinode_nm = ringqed::microtrap_from_reflection(r.r, wavelength_nm, 0.5).first_antinode_nm;
  });
}

}  // extern "C"
