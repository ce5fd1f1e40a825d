// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "core/common.hpp"

namespace gcalb
{

struct SolverConfig
{
  int restart = 30;
  double tol = 1e-12;
  int max_restarts = 200;
};

struct SolveReport
{
  int iterations = 0;
  double final_relative_residual = 0.0;
  bool converged = false;
  // Residual norm estimates after every Arnoldi step, relative to |b|.
  std::vector<double> residual_history;
};

using ComplexOperator = std::function<ComplexVector(const ComplexVector &)>;

class GmresError : public ConvergenceError
{
public:
  GmresError(const std::string &what, ComplexVector best, SolveReport report)
      : ConvergenceError(what), best_(std::move(best)), report_(std::move(report))
  {
  }
  const ComplexVector &best_iterate() const { return best_; }
  const SolveReport &report() const { return report_; }

private:
  ComplexVector best_;
  SolveReport report_;
};

// Right-preconditioned restarted GMRES for A x = b. An empty preconditioner
// means the identity. Throws GmresError after max_restarts cycles.
ComplexVector gmres(const ComplexOperator &apply_a, const ComplexVector &b, const ComplexOperator &precond,
                    const SolverConfig &cfg, SolveReport &report);

}  // namespace gcalb
