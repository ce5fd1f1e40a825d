// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/experiment.hpp"

namespace gcalb
{

inline constexpr const char *version_string = "0.1.0";

enum class ReportFormat
{
  csv,
  json,
};

ReportFormat parse_format(const std::string &s);

inline constexpr const char *csv_header = "method,n_b,err,t_basis_s,t_dg_s,n_tot_iter,dofs";

// Header line plus one line per row. Floating values use %.5e (six
// significant digits).
std::string format_csv(const std::vector<RunMetrics> &rows);
std::vector<RunMetrics> parse_csv(const std::string &text);

// SCF outer-iteration trace: method,outer,inner_iterations,exchange_energy,relative_change.
// Outer iteration 0 holds the exchange energy of the starting projector.
std::string format_scf_csv(const std::vector<SCFTrace> &traces);

// {"metadata": {seed, config_hash, version, experiment, config}, "rows": [...],
//  "reference_eigenvalues": [...], "warnings": [...], "scf": [...]}
nlohmann::json report_json(const ExperimentResult &result);

// Writes the report. For scf1d in CSV format the trace goes next to it as
// <stem>.scf.csv. Returns the paths written.
std::vector<std::string> write_report(const ExperimentResult &result, const std::string &path, ReportFormat format);

}  // namespace gcalb
