// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

// Experiment runner. Exit status: 0 success, 2 numerical non-convergence,
// 1 usage or any other error.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcalb/gcalb.h"

namespace
{

int exit_code(gcalb_status s)
{
  if (s == GCALB_OK)
  {
    return 0;
  }
  if (s == GCALB_NOT_CONVERGED || s == GCALB_NUMERICAL_ERROR)
  {
    return 2;
  }
  return 1;
}

int report_failure(const char *what, gcalb_status s)
{
  std::fprintf(stderr, "gcalb: %s: %s (%s)\n", what, gcalb_last_error(), gcalb_status_name(s));
  return exit_code(s);
}

std::string join(const std::vector<std::string> &items)
{
  std::string out;
  for (const std::string &s : items)
  {
    out += (out.empty() ? "" : ",") + s;
  }
  return out;
}

void print_rows(const gcalb_result *res)
{
  std::size_t n = 0;
  gcalb_result_row_count(res, &n);
  std::printf("%-10s %5s %12s %12s %12s %10s %8s\n", "method", "n_b", "err", "t_basis_s", "t_dg_s", "n_tot_iter",
              "dofs");
  for (std::size_t i = 0; i < n; ++i)
  {
    gcalb_row r;
    gcalb_result_row(res, i, &r);
    std::printf("%-10s %5d %12.3e %12.3e %12.3e %10.1f %8zu\n", r.method, r.n_b, r.err, r.t_basis_s, r.t_dg_s,
                r.n_tot_iter, r.dofs);
  }
}

void print_scf(const gcalb_result *res, std::size_t runs)
{
  for (std::size_t run = 0; run < runs; ++run)
  {
    std::size_t n = 0;
    if (gcalb_result_scf_count(res, run, &n) != GCALB_OK)
    {
      return;
    }
    gcalb_row r;
    gcalb_result_row(res, run, &r);
    std::printf("\n%s outer iterations\n%5s %6s %16s %12s\n", r.method, "outer", "inner", "E_X", "rel change");
    for (std::size_t i = 0; i < n; ++i)
    {
      gcalb_scf_outer o;
      gcalb_result_scf_outer(res, run, i, &o);
      std::printf("%5d %6d %16.8f %12.3e\n", o.outer, o.inner_iterations, o.exchange_energy, o.relative_change);
    }
  }
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Adaptive local basis experiments: filtered random sketches, DG eigensolves and the 1D SCF model"};
  std::string config_path;
  std::string experiment;
  std::vector<std::string> methods;
  std::vector<std::string> nb;
  unsigned long long seed = 0;
  std::string out_path;
  std::string format = "csv";
  std::string cache_dir = "gcalb-cache";
  std::vector<std::string> overrides;
  bool serial = true;
  bool quiet = false;

  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--experiment", experiment, "lin1d, lin2d, lin3d, weak2d or scf1d")
      ->check(CLI::IsMember({"lin1d", "lin2d", "lin3d", "weak2d", "scf1d"}));
  app.add_option("--method", methods, "methods to run: gcalb, lcalb, opt, planewave")
      ->delimiter(',')
      ->check(CLI::IsMember({"gcalb", "lcalb", "opt", "planewave"}));
  app.add_option("--nb", nb, "basis functions per element (comma list); planewave rows use sweep.planewave")
      ->delimiter(',');
  auto *seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_option("--out", out_path, "report path");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--set", overrides, "override a configuration key, e.g. --set grid.points=140");
  app.add_option("--cache-dir", cache_dir, "directory for cached reference eigenvalues (empty disables)");
  app.add_flag("--serial,!--no-serial", serial, "run sweep entries sequentially (the only supported mode)");
  app.add_flag("-q,--quiet", quiet, "do not print the result table");
  CLI11_PARSE(app, argc, argv);

  if (!serial)
  {
    std::fprintf(stderr, "gcalb: parallel sweep execution is not supported; drop --no-serial\n");
    return 1;
  }
  if (config_path.empty() && experiment.empty())
  {
    std::fprintf(stderr, "gcalb: pass --experiment or --config\n%s", app.help().c_str());
    return 1;
  }

  gcalb_config *cfg = nullptr;
  gcalb_status s = config_path.empty() ? gcalb_config_create(experiment.c_str(), &cfg)
                                       : gcalb_config_load(config_path.c_str(), &cfg);
  if (s != GCALB_OK)
  {
    return report_failure("configuration", s);
  }
  auto set = [&](const std::string &key, const std::string &value) {
    const gcalb_status st = gcalb_config_set(cfg, key.c_str(), value.c_str());
    if (st != GCALB_OK)
    {
      std::fprintf(stderr, "gcalb: %s=%s: %s\n", key.c_str(), value.c_str(), gcalb_last_error());
    }
    return st == GCALB_OK;
  };

  bool ok = true;
  if (!config_path.empty() && !experiment.empty())
  {
    ok = set("experiment", "\"" + experiment + "\"");
  }
  ok = ok && set("cache_dir", "\"" + cache_dir + "\"");
  for (const std::string &o : overrides)
  {
    const std::size_t eq = o.find('=');
    if (eq == std::string::npos)
    {
      std::fprintf(stderr, "gcalb: --set expects key=value, got '%s'\n", o.c_str());
      ok = false;
      break;
    }
    ok = ok && set(o.substr(0, eq), o.substr(eq + 1));
  }
  if (ok && !methods.empty())
  {
    ok = set("methods", join(methods));
  }
  if (ok && !nb.empty())
  {
    ok = experiment == "scf1d" ? set("scf.n_b", nb.front()) : set("sweep.nb", join(nb));
  }
  if (ok && seed_opt->count() > 0)
  {
    ok = set("seed", std::to_string(seed));
  }
  if (!ok)
  {
    gcalb_config_destroy(cfg);
    return 1;
  }

  char hash[17];
  gcalb_config_hash(cfg, hash, sizeof hash);
  if (!quiet)
  {
    std::printf("gcalb %s, config %s\n", gcalb_version(), hash);
    std::fflush(stdout);
  }

  gcalb_result *res = nullptr;
  s = gcalb_run(cfg, &res);
  gcalb_config_destroy(cfg);
  if (res == nullptr)
  {
    return report_failure("run", s);
  }
  const gcalb_status run_status = s;
  if (run_status != GCALB_OK)
  {
    std::fprintf(stderr, "gcalb: run: %s\n", gcalb_last_error());
  }
  if (!quiet)
  {
    print_rows(res);
    std::size_t rows = 0;
    gcalb_result_row_count(res, &rows);
    print_scf(res, rows);
  }
  if (!out_path.empty())
  {
    s = gcalb_result_write(res, out_path.c_str(), format.c_str());
    if (s != GCALB_OK)
    {
      gcalb_result_destroy(res);
      return report_failure("report", s);
    }
  }
  gcalb_result_destroy(res);
  return exit_code(run_status);
}
