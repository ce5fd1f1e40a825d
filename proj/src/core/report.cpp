// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gcalb
{

namespace
{

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

void write_text(const std::string &path, const std::string &text)
{
  const std::filesystem::path p(path);
  if (p.has_parent_path())
  {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out)
  {
    throw IoError("report: cannot write " + path);
  }
  out << text;
  out.flush();
  if (!out)
  {
    throw IoError("report: write to " + path + " failed");
  }
}

nlohmann::json vector_json(const RealVector &v)
{
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

ReportFormat parse_format(const std::string &s)
{
  if (s == "csv")
  {
    return ReportFormat::csv;
  }
  if (s == "json")
  {
    return ReportFormat::json;
  }
  throw InvalidArgument("unknown report format '" + s + "' (expected csv or json)");
}

std::string format_csv(const std::vector<RunMetrics> &rows)
{
  require(!rows.empty(), "report: no rows to write");
  std::string out = std::string(csv_header) + "\n";
  for (const RunMetrics &r : rows)
  {
    out += r.method + "," + std::to_string(r.n_b) + "," + sci(r.err) + "," + sci(r.t_basis_s) + "," + sci(r.t_dg_s) +
           "," + sci(r.n_tot_iter) + "," + std::to_string(r.dofs) + "\n";
  }
  return out;
}

std::vector<RunMetrics> parse_csv(const std::string &text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != csv_header)
  {
    throw InvalidArgument("report: missing or unexpected CSV header");
  }
  std::vector<RunMetrics> rows;
  while (std::getline(in, line))
  {
    if (line.empty())
    {
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ','))
    {
      f.push_back(item);
    }
    if (f.size() != 7)
    {
      throw InvalidArgument("report: CSV row has " + std::to_string(f.size()) + " fields: " + line);
    }
    try
    {
      RunMetrics r;
      r.method = f[0];
      r.n_b = std::stoi(f[1]);
      r.err = std::stod(f[2]);
      r.t_basis_s = std::stod(f[3]);
      r.t_dg_s = std::stod(f[4]);
      r.n_tot_iter = std::stod(f[5]);
      r.dofs = std::stoull(f[6]);
      rows.push_back(r);
    }
    catch (const std::logic_error &)
    {
      throw InvalidArgument("report: malformed CSV row: " + line);
    }
  }
  return rows;
}

std::string format_scf_csv(const std::vector<SCFTrace> &traces)
{
  std::string out = "method,outer,inner_iterations,exchange_energy,relative_change\n";
  char buf[160];
  for (const SCFTrace &t : traces)
  {
    std::snprintf(buf, sizeof buf, "%s,0,0,%.9e,%.5e\n", t.method.c_str(), t.initial_exchange_energy, 0.0);
    out += buf;
    for (const OuterRecord &r : t.outer)
    {
      std::snprintf(buf, sizeof buf, "%s,%d,%d,%.9e,%.5e\n", t.method.c_str(), r.outer, r.inner_iterations,
                    r.exchange_energy, r.relative_change);
      out += buf;
    }
  }
  return out;
}

nlohmann::json report_json(const ExperimentResult &result)
{
  require(!result.rows.empty(), "report: no rows to write");
  nlohmann::json j;
  j["metadata"] = {{"seed", result.config.seed},
                   {"config_hash", config_hash(result.config)},
                   {"version", version_string},
                   {"experiment", to_string(result.config.experiment)},
                   {"config", to_json(result.config)}};
  nlohmann::json rows = nlohmann::json::array();
  for (const RunMetrics &r : result.rows)
  {
    rows.push_back({{"method", r.method},
                    {"n_b", r.n_b},
                    {"err", r.err},
                    {"t_basis_s", r.t_basis_s},
                    {"t_dg_s", r.t_dg_s},
                    {"n_tot_iter", r.n_tot_iter},
                    {"dofs", r.dofs}});
  }
  j["rows"] = rows;
  j["reference_eigenvalues"] = vector_json(result.reference_eigenvalues);
  j["warnings"] = result.warnings;
  if (!result.scf.empty())
  {
    nlohmann::json traces = nlohmann::json::array();
    for (const SCFTrace &t : result.scf)
    {
      nlohmann::json outer = nlohmann::json::array();
      for (const OuterRecord &r : t.outer)
      {
        outer.push_back({{"outer", r.outer},
                         {"inner_iterations", r.inner_iterations},
                         {"exchange_energy", r.exchange_energy},
                         {"relative_change", r.relative_change},
                         {"potential_errors", r.potential_errors}});
      }
      traces.push_back({{"method", t.method},
                        {"converged", t.converged},
                        {"message", t.message},
                        {"initial_exchange_energy", t.initial_exchange_energy},
                        {"outer", outer},
                        {"eigenvalues", vector_json(t.eigenvalues)},
                        {"density", vector_json(t.density)},
                        {"seconds", t.seconds}});
    }
    j["scf"] = traces;
  }
  return j;
}

std::vector<std::string> write_report(const ExperimentResult &result, const std::string &path, ReportFormat format)
{
  std::vector<std::string> written;
  if (format == ReportFormat::json)
  {
    write_text(path, report_json(result).dump(2) + "\n");
    written.push_back(path);
    return written;
  }
  write_text(path, format_csv(result.rows));
  written.push_back(path);
  if (!result.scf.empty())
  {
    std::filesystem::path trace(path);
    trace.replace_extension(".scf.csv");
    write_text(trace.string(), format_scf_csv(result.scf));
    written.push_back(trace.string());
  }
  return written;
}

}  // namespace gcalb
