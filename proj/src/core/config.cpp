// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace gcalb
{

namespace
{

using Setter = std::function<void(ExperimentConfig &, const nlohmann::json &)>;

int as_int(const nlohmann::json &v, const std::string &key)
{
  if (v.is_number_integer() || v.is_number_unsigned())
  {
    return v.get<int>();
  }
  if (v.is_number_float() && v.get<double>() == double(int(v.get<double>())))
  {
    return int(v.get<double>());
  }
  throw InvalidArgument("config: " + key + " expects an integer");
}

double as_double(const nlohmann::json &v, const std::string &key)
{
  if (!v.is_number())
  {
    throw InvalidArgument("config: " + key + " expects a number");
  }
  return v.get<double>();
}

std::string as_string(const nlohmann::json &v, const std::string &key)
{
  if (!v.is_string())
  {
    throw InvalidArgument("config: " + key + " expects a string");
  }
  return v.get<std::string>();
}

std::vector<std::string> split_commas(const std::string &s)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    if (!item.empty())
    {
      out.push_back(item);
    }
  }
  return out;
}

std::vector<int> as_int_list(const nlohmann::json &v, const std::string &key)
{
  std::vector<int> out;
  if (v.is_array())
  {
    for (const auto &x : v)
    {
      out.push_back(as_int(x, key));
    }
  }
  else if (v.is_string())
  {
    for (const std::string &s : split_commas(v.get<std::string>()))
    {
      try
      {
        std::size_t pos = 0;
        out.push_back(std::stoi(s, &pos));
        if (pos != s.size())
        {
          throw std::invalid_argument(s);
        }
      }
      catch (const std::logic_error &)
      {
        throw InvalidArgument("config: " + key + " expects integers, got '" + s + "'");
      }
    }
  }
  else
  {
    out.push_back(as_int(v, key));
  }
  return out;
}

const std::map<std::string, Setter> &setters()
{
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto integer = [&t](const std::string &key, int ExperimentConfig::*field) {
      t[key] = [key, field](ExperimentConfig &c, const nlohmann::json &v) { c.*field = as_int(v, key); };
    };
    auto real = [&t](const std::string &key, double ExperimentConfig::*field) {
      t[key] = [key, field](ExperimentConfig &c, const nlohmann::json &v) { c.*field = as_double(v, key); };
    };
    auto scf_int = [&t](const std::string &key, int HFModelSpec::*field) {
      t["scf." + key] = [key, field](ExperimentConfig &c, const nlohmann::json &v) {
        c.scf.*field = as_int(v, "scf." + key);
      };
    };
    auto scf_real = [&t](const std::string &key, double HFModelSpec::*field) {
      t["scf." + key] = [key, field](ExperimentConfig &c, const nlohmann::json &v) {
        c.scf.*field = as_double(v, "scf." + key);
      };
    };

    t["experiment"] = [](ExperimentConfig &c, const nlohmann::json &v) {
      c.experiment = parse_experiment(as_string(v, "experiment"));
    };
    t["methods"] = [](ExperimentConfig &c, const nlohmann::json &v) {
      std::vector<std::string> names;
      if (v.is_array())
      {
        for (const auto &x : v)
        {
          names.push_back(as_string(x, "methods"));
        }
      }
      else
      {
        names = split_commas(as_string(v, "methods"));
      }
      c.methods.clear();
      for (const std::string &s : names)
      {
        c.methods.push_back(parse_method(s));
      }
    };
    t["seed"] = [](ExperimentConfig &c, const nlohmann::json &v) {
      if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)))
      {
        throw InvalidArgument("config: seed expects a non-negative integer");
      }
      c.seed = v.get<std::uint64_t>();
    };
    t["cache_dir"] = [](ExperimentConfig &c, const nlohmann::json &v) { c.cache_dir = as_string(v, "cache_dir"); };
    integer("n", &ExperimentConfig::n);
    integer("rep", &ExperimentConfig::rep);
    integer("grid.dim", &ExperimentConfig::dim);
    real("grid.length", &ExperimentConfig::length);
    integer("grid.points", &ExperimentConfig::grid_points);
    integer("grid.elements", &ExperimentConfig::elements);
    integer("grid.lgl_points", &ExperimentConfig::lgl_points);
    integer("reference.points", &ExperimentConfig::reference_points);
    real("wells.depth", &ExperimentConfig::well_depth);
    real("wells.sigma", &ExperimentConfig::well_sigma);
    t["sweep.nb"] = [](ExperimentConfig &c, const nlohmann::json &v) { c.nb_sweep = as_int_list(v, "sweep.nb"); };
    t["sweep.planewave"] = [](ExperimentConfig &c, const nlohmann::json &v) {
      c.planewave_sweep = as_int_list(v, "sweep.planewave");
    };
    real("filter.b_plus_offset", &ExperimentConfig::b_plus_offset);
    integer("filter.poles", &ExperimentConfig::poles);
    integer("filter.oversampling", &ExperimentConfig::oversampling);
    real("dg.penalty_safety", &ExperimentConfig::penalty_safety);
    t["gmres.restart"] = [](ExperimentConfig &c, const nlohmann::json &v) {
      c.gmres.restart = as_int(v, "gmres.restart");
    };
    t["gmres.tol"] = [](ExperimentConfig &c, const nlohmann::json &v) { c.gmres.tol = as_double(v, "gmres.tol"); };
    t["gmres.max_restarts"] = [](ExperimentConfig &c, const nlohmann::json &v) {
      c.gmres.max_restarts = as_int(v, "gmres.max_restarts");
    };

    scf_real("length", &HFModelSpec::length);
    scf_int("nuclei", &HFModelSpec::nuclei);
    scf_real("sigma", &HFModelSpec::sigma);
    scf_real("charge", &HFModelSpec::charge);
    scf_real("mu", &HFModelSpec::mu);
    scf_real("eps0", &HFModelSpec::eps0);
    scf_real("alpha_x", &HFModelSpec::alpha_x);
    scf_int("occupied", &HFModelSpec::occupied);
    t["scf.kernel"] = [](ExperimentConfig &c, const nlohmann::json &v) {
      const std::string s = as_string(v, "scf.kernel");
      if (s == "periodic")
      {
        c.scf.kernel = KernelMode::periodic;
      }
      else if (s == "free_space")
      {
        c.scf.kernel = KernelMode::free_space;
      }
      else
      {
        throw InvalidArgument("config: scf.kernel expects periodic or free_space");
      }
    };
    scf_int("grid_points", &HFModelSpec::grid_points);
    scf_int("elements", &HFModelSpec::elements);
    scf_int("n_b", &HFModelSpec::n_b);
    scf_int("oversampling", &HFModelSpec::oversampling);
    scf_int("lgl_points", &HFModelSpec::lgl_points);
    scf_real("fermi_b", &HFModelSpec::fermi_b);
    scf_real("b_plus", &HFModelSpec::b_plus);
    scf_int("poles", &HFModelSpec::poles);
    scf_real("eig_tol", &HFModelSpec::eig_tol);
    scf_real("inner_tol", &HFModelSpec::inner_tol);
    scf_int("inner_max", &HFModelSpec::inner_max);
    scf_real("outer_tol", &HFModelSpec::outer_tol);
    scf_int("outer_max", &HFModelSpec::outer_max);
    scf_real("mix_beta", &HFModelSpec::mix_beta);
    scf_int("mix_depth", &HFModelSpec::mix_depth);
    return t;
  }();
  return table;
}

void flatten(const nlohmann::json &j, const std::string &prefix, std::vector<std::pair<std::string, nlohmann::json>> &out)
{
  for (auto it = j.begin(); it != j.end(); ++it)
  {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object())
    {
      flatten(*it, key, out);
    }
    else
    {
      out.emplace_back(key, *it);
    }
  }
}

}  // namespace

std::vector<std::string> config_keys()
{
  std::vector<std::string> keys;
  for (const auto &kv : setters())
  {
    keys.push_back(kv.first);
  }
  return keys;
}

void apply_setting(ExperimentConfig &cfg, const std::string &key, const nlohmann::json &value)
{
  const auto it = setters().find(key);
  if (it == setters().end())
  {
    throw InvalidArgument("config: unknown key '" + key + "'");
  }
  if (key == "experiment")
  {
    // switching experiments resets everything to that experiment's defaults
    const Experiment e = parse_experiment(as_string(value, key));
    if (e != cfg.experiment)
    {
      const std::string cache = cfg.cache_dir;
      cfg = ExperimentConfig::defaults(e);
      cfg.cache_dir = cache;
    }
    return;
  }
  it->second(cfg, value);
  if (key == "scf.n_b" && cfg.experiment == Experiment::scf1d)
  {
    cfg.nb_sweep = {cfg.scf.n_b};
  }
}

ExperimentConfig config_from_json(const nlohmann::json &j)
{
  if (!j.is_object())
  {
    throw InvalidArgument("config: top level must be an object");
  }
  std::vector<std::pair<std::string, nlohmann::json>> items;
  flatten(j, "", items);
  Experiment e = Experiment::lin1d;
  for (const auto &[key, value] : items)
  {
    if (key == "experiment")
    {
      e = parse_experiment(as_string(value, key));
    }
  }
  ExperimentConfig cfg = ExperimentConfig::defaults(e);
  for (const auto &[key, value] : items)
  {
    if (key != "experiment")
    {
      apply_setting(cfg, key, value);
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw IoError("config: cannot open " + path);
  }
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse(in);
  }
  catch (const nlohmann::json::parse_error &e)
  {
    throw InvalidArgument("config: " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void apply_override(ExperimentConfig &cfg, const std::string &assignment)
{
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
  {
    throw InvalidArgument("config: override '" + assignment + "' is not of the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded())
  {
    value = text;
  }
  apply_setting(cfg, key, value);
}

}  // namespace gcalb
