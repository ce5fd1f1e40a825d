// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/experiment.hpp"

namespace gcalb
{

// Configuration files are JSON objects. Nested objects are addressed by dotted
// key paths, so {"grid": {"points": 140}} and {"grid.points": 140} are the same
// setting. "experiment" selects the defaults every other key overrides.
//
//   experiment            lin1d | lin2d | lin3d | weak2d | scf1d
//   methods               array or comma list of gcalb, lcalb, opt, planewave
//   seed, n, rep, cache_dir
//   grid.{dim,length,points,elements,lgl_points}
//   reference.points
//   wells.{depth,sigma}
//   sweep.{nb,planewave}  arrays or comma lists
//   filter.{b_plus_offset,poles,oversampling}
//   dg.penalty_safety
//   gmres.{restart,tol,max_restarts}
//   scf.{length,nuclei,sigma,charge,mu,eps0,alpha_x,occupied,kernel,grid_points,
//        elements,n_b,oversampling,lgl_points,fermi_b,b_plus,poles,eig_tol,
//        inner_tol,inner_max,outer_tol,outer_max,mix_beta,mix_depth}
// The result is validated.
ExperimentConfig config_from_json(const nlohmann::json &j);
ExperimentConfig load_config_file(const std::string &path);

// Sets one dotted key. Values arriving as strings from the command line are
// parsed as JSON first and taken verbatim when that fails.
void apply_setting(ExperimentConfig &cfg, const std::string &key, const nlohmann::json &value);

// "key=value"
void apply_override(ExperimentConfig &cfg, const std::string &assignment);

std::vector<std::string> config_keys();

}  // namespace gcalb
