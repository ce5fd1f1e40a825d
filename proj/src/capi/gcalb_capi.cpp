// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "gcalb/gcalb.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "core/config.hpp"
#include "core/experiment.hpp"
#include "core/rational_filter.hpp"
#include "core/report.hpp"

struct gcalb_config
{
  gcalb::ExperimentConfig cfg;
};

struct gcalb_result
{
  gcalb::ExperimentResult result;
};

struct gcalb_filter
{
  gcalb::RationalFilter filter;
};

namespace
{

thread_local std::string last_error;

gcalb_status fail(gcalb_status s, const std::string &what)
{
  last_error = what;
  return s;
}

gcalb_status status_of(gcalb::ErrorCode code)
{
  switch (code)
  {
  case gcalb::ErrorCode::invalid_argument:
    return GCALB_INVALID_ARGUMENT;
  case gcalb::ErrorCode::not_converged:
    return GCALB_NOT_CONVERGED;
  case gcalb::ErrorCode::unsupported:
    return GCALB_UNSUPPORTED;
  case gcalb::ErrorCode::numerical:
    return GCALB_NUMERICAL_ERROR;
  case gcalb::ErrorCode::io:
    return GCALB_IO_ERROR;
  }
  return GCALB_INTERNAL_ERROR;
}

// Runs f and converts any exception into a status code.
template <class F>
gcalb_status guarded(F &&f)
{
  try
  {
    return f();
  }
  catch (const gcalb::Error &e)
  {
    return fail(status_of(e.code()), e.what());
  }
  catch (const std::bad_alloc &)
  {
    return fail(GCALB_INTERNAL_ERROR, "out of memory");
  }
  catch (const std::exception &e)
  {
    return fail(GCALB_INTERNAL_ERROR, e.what());
  }
  catch (...)
  {
    return fail(GCALB_INTERNAL_ERROR, "unknown error");
  }
}

}  // namespace

extern "C" {

const char *gcalb_version(void)
{
  return gcalb::version_string;
}

const char *gcalb_last_error(void)
{
  return last_error.c_str();
}

const char *gcalb_status_name(gcalb_status status)
{
  switch (status)
  {
  case GCALB_OK:
    return "ok";
  case GCALB_INVALID_ARGUMENT:
    return "invalid argument";
  case GCALB_NOT_CONVERGED:
    return "not converged";
  case GCALB_UNSUPPORTED:
    return "unsupported";
  case GCALB_NUMERICAL_ERROR:
    return "numerical error";
  case GCALB_IO_ERROR:
    return "i/o error";
  case GCALB_INTERNAL_ERROR:
    return "internal error";
  }
  return "unknown status";
}

gcalb_status gcalb_config_create(const char *experiment, gcalb_config **out)
{
  if (experiment == nullptr || out == nullptr)
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_config_create: null argument");
  }
  return guarded([&] {
    *out = new gcalb_config{gcalb::ExperimentConfig::defaults(gcalb::parse_experiment(experiment))};
    return GCALB_OK;
  });
}

gcalb_status gcalb_config_load(const char *path, gcalb_config **out)
{
  if (path == nullptr || out == nullptr)
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_config_load: null argument");
  }
  return guarded([&] {
    *out = new gcalb_config{gcalb::load_config_file(path)};
    return GCALB_OK;
  });
}

gcalb_status gcalb_config_set(gcalb_config *cfg, const char *key, const char *value)
{
  if (cfg == nullptr || key == nullptr || value == nullptr)
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_config_set: null argument");
  }
  return guarded([&] {
    gcalb::ExperimentConfig copy = cfg->cfg;
    gcalb::apply_override(copy, std::string(key) + "=" + value);
    copy.validate();
    cfg->cfg = std::move(copy);
    return GCALB_OK;
  });
}

gcalb_status gcalb_config_hash(const gcalb_config *cfg, char *buf, size_t len)
{
  if (cfg == nullptr || buf == nullptr || len < 17)
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_config_hash: null argument or buffer shorter than 17 bytes");
  }
  return guarded([&] {
    const std::string h = gcalb::config_hash(cfg->cfg);
    std::memcpy(buf, h.c_str(), h.size() + 1);
    return GCALB_OK;
  });
}

void gcalb_config_destroy(gcalb_config *cfg)
{
  delete cfg;
}

gcalb_status gcalb_run(const gcalb_config *cfg, gcalb_result **out)
{
  if (cfg == nullptr || out == nullptr)
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_run: null argument");
  }
  return guarded([&] {
    auto *res = new gcalb_result{gcalb::run_experiment(cfg->cfg)};
    *out = res;
    if (!res->result.converged())
    {
      std::string msg;
      for (const auto &t : res->result.scf)
      {
        if (!t.converged)
        {
          msg += (msg.empty() ? "" : "; ") + t.method + ": " + t.message;
        }
      }
      return fail(GCALB_NOT_CONVERGED, msg);
    }
    return GCALB_OK;
  });
}

gcalb_status gcalb_result_row_count(const gcalb_result *res, size_t *count)
{
  if (res == nullptr || count == nullptr)
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_result_row_count: null argument");
  }
  *count = res->result.rows.size();
  return GCALB_OK;
}

gcalb_status gcalb_result_row(const gcalb_result *res, size_t index, gcalb_row *row)
{
  if (res == nullptr || row == nullptr)
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_result_row: null argument");
  }
  if (index >= res->result.rows.size())
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_result_row: index out of range");
  }
  const gcalb::RunMetrics &m = res->result.rows[index];
  row->method = m.method.c_str();
  row->n_b = m.n_b;
  row->err = m.err;
  row->t_basis_s = m.t_basis_s;
  row->t_dg_s = m.t_dg_s;
  row->n_tot_iter = m.n_tot_iter;
  row->dofs = m.dofs;
  return GCALB_OK;
}

gcalb_status gcalb_result_scf_count(const gcalb_result *res, size_t run, size_t *count)
{
  if (res == nullptr || count == nullptr)
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_result_scf_count: null argument");
  }
  if (run >= res->result.scf.size())
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_result_scf_count: no such SCF run");
  }
  *count = res->result.scf[run].outer.size();
  return GCALB_OK;
}

gcalb_status gcalb_result_scf_outer(const gcalb_result *res, size_t run, size_t index, gcalb_scf_outer *record)
{
  if (res == nullptr || record == nullptr)
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_result_scf_outer: null argument");
  }
  if (run >= res->result.scf.size() || index >= res->result.scf[run].outer.size())
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_result_scf_outer: index out of range");
  }
  const gcalb::OuterRecord &r = res->result.scf[run].outer[index];
  record->outer = r.outer;
  record->inner_iterations = r.inner_iterations;
  record->exchange_energy = r.exchange_energy;
  record->relative_change = r.relative_change;
  return GCALB_OK;
}

gcalb_status gcalb_result_write(const gcalb_result *res, const char *path, const char *format)
{
  if (res == nullptr || path == nullptr || format == nullptr)
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_result_write: null argument");
  }
  return guarded([&] {
    gcalb::write_report(res->result, path, gcalb::parse_format(format));
    return GCALB_OK;
  });
}

void gcalb_result_destroy(gcalb_result *res)
{
  delete res;
}

gcalb_status gcalb_filter_create(double a_minus, double a, double b, double b_plus, int poles, gcalb_filter **out)
{
  if (out == nullptr)
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_filter_create: null argument");
  }
  return guarded([&] {
    gcalb::FilterSpec spec;
    spec.a_minus = a_minus;
    spec.a = a;
    spec.b = b;
    spec.b_plus = b_plus;
    spec.r = poles;
    *out = new gcalb_filter{gcalb::build_filter(spec)};
    return GCALB_OK;
  });
}

gcalb_status gcalb_filter_eval(const gcalb_filter *f, double x, double *value)
{
  if (f == nullptr || value == nullptr)
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_filter_eval: null argument");
  }
  return guarded([&] {
    *value = gcalb::evaluate_filter(f->filter, x);
    return GCALB_OK;
  });
}

gcalb_status gcalb_filter_poles(const gcalb_filter *f, size_t *count, double *constant, double *pole_re,
                                double *pole_im, double *weight_re, double *weight_im)
{
  if (f == nullptr)
  {
    return fail(GCALB_INVALID_ARGUMENT, "gcalb_filter_poles: null filter");
  }
  const auto &poles = f->filter.poles;
  const auto &weights = f->filter.weights;
  if (count != nullptr)
  {
    *count = poles.size();
  }
  if (constant != nullptr)
  {
    *constant = f->filter.constant_term;
  }
  for (std::size_t j = 0; j < poles.size(); ++j)
  {
    if (pole_re != nullptr)
    {
      pole_re[j] = poles[j].real();
    }
    if (pole_im != nullptr)
    {
      pole_im[j] = poles[j].imag();
    }
    if (weight_re != nullptr)
    {
      weight_re[j] = weights[j].real();
    }
    if (weight_im != nullptr)
    {
      weight_im[j] = weights[j].imag();
    }
  }
  return GCALB_OK;
}

void gcalb_filter_destroy(gcalb_filter *f)
{
  delete f;
}

}  // extern "C"
