// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/common.hpp"
#include "core/krylov.hpp"
#include "core/operator.hpp"
#include "core/scf.hpp"

namespace gcalb
{

enum class Experiment
{
  lin1d,
  lin2d,
  lin3d,
  weak2d,
  scf1d,
};

enum class Method
{
  gcalb,
  lcalb,
  opt,
  planewave,
};

std::string to_string(Experiment e);
std::string to_string(Method m);
Experiment parse_experiment(const std::string &s);
Method parse_method(const std::string &s);

struct ExperimentConfig
{
  Experiment experiment = Experiment::lin1d;
  std::vector<Method> methods{Method::gcalb};

  // Linear problems. The box is (0, length * rep)^dim; grid, element and
  // reference counts below are per repeat of the base cell.
  int dim = 1;
  double length = 2.0 * pi;
  int grid_points = 140;
  int elements = 7;
  int lgl_points = 40;
  int reference_points = 500;
  int rep = 1;
  int n = 16;  // per repeat of the base cell in each dimension: total n * rep^dim
  double well_depth = -10.0;
  double well_sigma = 0.2;
  std::vector<int> nb_sweep{6, 8, 10, 12, 14};
  std::vector<int> planewave_sweep;  // points per dimension for the planewave rows
  double b_plus_offset = 1.0;
  int poles = 16;
  int oversampling = 5;
  double penalty_safety = 2.0;
  SolverConfig gmres;
  std::uint64_t seed = 2024;

  // Directory for cached reference eigenvalues; empty disables the cache.
  std::string cache_dir;

  HFModelSpec scf;

  // Reference settings for each experiment, reduced where the acceptance
  // runs use desk-scale grids.
  static ExperimentConfig defaults(Experiment e);

  int total_states() const;
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig &cfg);

// FNV-1a 64-bit hash of the canonical (sorted-key, compact) JSON dump.
std::string config_hash(const ExperimentConfig &cfg);
std::uint64_t fnv1a(const std::string &text);

struct RunMetrics
{
  std::string method;
  int n_b = 0;  // points per dimension for planewave rows
  double err = 0.0;
  double t_basis_s = 0.0;
  double t_dg_s = 0.0;
  double n_tot_iter = 0.0;  // GMRES iterations per right-hand side, summed over poles
  std::size_t dofs = 0;
};

struct SCFTrace
{
  std::string method;
  bool converged = false;
  std::string message;
  double initial_exchange_energy = 0.0;
  std::vector<OuterRecord> outer;
  RealVector eigenvalues;
  RealVector density;
  double seconds = 0.0;
};

struct ExperimentResult
{
  ExperimentConfig config;
  std::vector<RunMetrics> rows;
  std::vector<SCFTrace> scf;
  RealVector reference_eigenvalues;
  std::vector<std::string> warnings;

  bool converged() const;
};

ExperimentResult run_experiment(const ExperimentConfig &cfg);

// Gaussian wells of the linear examples: four wells per base cell, repeated
// rep times along each dimension.
GaussianWellSpec linear_wells(const ExperimentConfig &cfg);

// Lowest eigenvalues of the planewave discretization with the given points
// per dimension, read from the cache when present.
RealVector reference_eigenvalues(const ExperimentConfig &cfg, int points_per_dim);

}  // namespace gcalb
