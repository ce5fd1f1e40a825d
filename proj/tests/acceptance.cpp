// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner. Prints one line per criterion:
//   criterion <N> PASS|FAIL <details>
// and exits nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "core/basis.hpp"
#include "core/dg.hpp"
#include "core/eig.hpp"
#include "core/experiment.hpp"
#include "core/krylov.hpp"
#include "core/operator.hpp"
#include "core/random.hpp"
#include "core/rational_filter.hpp"
#include "support.hpp"

using namespace gcalb;

namespace
{

struct Outcome
{
  bool pass = true;
  std::string details;

  void check(bool ok, const std::string &what)
  {
    pass = pass && ok;
    details += (details.empty() ? "" : "; ") + what + (ok ? "" : " [fail]");
  }
};

std::string fmt(const char *f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v)
{
  return fmt("%.3e", v);
}

class Stopwatch
{
public:
  double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string g_cache_dir;

ExperimentConfig config_for(Experiment e)
{
  ExperimentConfig cfg = ExperimentConfig::defaults(e);
  cfg.cache_dir = g_cache_dir;
  return cfg;
}

const RunMetrics *find_row(const ExperimentResult &r, const std::string &method, int n_b)
{
  for (const RunMetrics &m : r.rows)
  {
    if (m.method == method && m.n_b == n_b)
    {
      return &m;
    }
  }
  return nullptr;
}

double err_of(const ExperimentResult &r, const std::string &method, int n_b)
{
  const RunMetrics *m = find_row(r, method, n_b);
  return m ? m->err : std::numeric_limits<double>::quiet_NaN();
}

Outcome criterion_filter()
{
  Outcome o;
  const Stopwatch clock;
  FilterSpec spec;
  spec.a = -1.0;
  spec.b = 1.0;
  spec.b_plus = 1.1;
  spec.r = 16;
  const RationalFilter f = build_filter(spec);

  // [a, b], the upper gap edge out to ten widths, and the far field. With
  // a_- = -inf the lower gap is (-inf, a) and carries no accuracy target.
  const int n = 200000;
  const double w = spec.b - spec.a;
  double inside = 0.0;
  double above = 0.0;
  for (int i = 0; i <= n; ++i)
  {
    inside = std::max(inside, std::abs(evaluate_filter(f, spec.a + w * i / n) - 1.0));
    above = std::max(above, std::abs(evaluate_filter(f, spec.b_plus + 10.0 * w * i / n)));
  }
  for (double x = 1.0; x <= 1e15; x *= 1.5)
  {
    above = std::max(above, std::abs(evaluate_filter(f, spec.b_plus + 10.0 * w + x)));
  }
  const double seconds = clock.seconds();
  o.check(inside <= 1e-10, "max err on [a,b] " + sci(inside));
  o.check(above <= 1e-10, "max err on [b+,inf) " + sci(above));
  o.check(seconds < 1.0, "runtime " + fmt("%.2f", seconds) + " s");
  o.details += "; ell " + fmt("%.6f", f.mobius.ell) + "; f(a-1) " + sci(evaluate_filter(f, spec.a - 1.0));
  return o;
}

Outcome criterion_lin1d()
{
  Outcome o;
  ExperimentConfig cfg = config_for(Experiment::lin1d);
  cfg.methods = {Method::gcalb};
  cfg.nb_sweep = {6, 8, 10, 12};
  const Stopwatch clock;
  const ExperimentResult r = run_experiment(cfg);
  const double seconds = clock.seconds();

  const double target[4] = {1.41e-4, 2.27e-8, 1.65e-11, 7.64e-14};
  const double floor = 1e-13;
  double prev = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (int i = 0; i < 4; ++i)
  {
    const int nb = cfg.nb_sweep[std::size_t(i)];
    const double e = err_of(r, "gcalb", nb);
    const double lo = std::max(target[i], floor) / 100.0;
    const double hi = std::max(target[i], floor) * 100.0;
    const double clamped = std::max(e, floor);
    o.check(clamped >= lo && clamped <= hi, "n_b " + std::to_string(nb) + " err " + sci(e));
    if (prev > floor && !(clamped < prev))
    {
      decreasing = false;
    }
    prev = clamped;
  }
  o.check(decreasing, "strictly decreasing to the floor");
  for (const RunMetrics &m : r.rows)
  {
    o.check(m.n_tot_iter >= 100.0 && m.n_tot_iter <= 250.0,
            "n_tot_iter(" + std::to_string(m.n_b) + ") " + fmt("%.1f", m.n_tot_iter));
  }
  o.check(seconds < 30.0, "runtime " + fmt("%.1f", seconds) + " s");
  return o;
}

Outcome criterion_ordering()
{
  Outcome o;
  ExperimentConfig cfg = config_for(Experiment::lin1d);
  cfg.methods = {Method::gcalb, Method::lcalb, Method::opt};
  cfg.nb_sweep = {6, 8, 10};
  const ExperimentResult r = run_experiment(cfg);
  for (int nb : cfg.nb_sweep)
  {
    const double gc = err_of(r, "gcalb", nb);
    const double lc = err_of(r, "lcalb", nb);
    const double opt = err_of(r, "opt", nb);
    o.check(opt <= 10.0 * gc && gc <= 10.0 * lc,
            "n_b " + std::to_string(nb) + " opt " + sci(opt) + " gc " + sci(gc) + " lc " + sci(lc));
  }
  return o;
}

Outcome criterion_lin2d()
{
  Outcome o;
  ExperimentConfig cfg = config_for(Experiment::lin2d);
  cfg.nb_sweep = {14, 22};
  const Stopwatch clock;
  const ExperimentResult r = run_experiment(cfg);
  const double seconds = clock.seconds();
  const double gc14 = err_of(r, "gcalb", 14);
  const double gc22 = err_of(r, "gcalb", 22);
  const double lc22 = err_of(r, "lcalb", 22);
  o.check(gc14 <= 1e-3, "gc n_b 14 err " + sci(gc14));
  o.check(std::max(gc22, 1e-13) <= 1e-9, "gc n_b 22 err " + sci(gc22));
  o.check(lc22 >= 1e-6 && lc22 <= 1e-3, "lc n_b 22 err " + sci(lc22));
  o.check(seconds < 900.0, "runtime " + fmt("%.1f", seconds) + " s");
  return o;
}

Outcome criterion_weak2d()
{
  Outcome o;
  const Stopwatch clock;
  double errs[2] = {};
  for (int rep : {1, 2})
  {
    ExperimentConfig cfg = config_for(Experiment::weak2d);
    cfg.rep = rep;
    const ExperimentResult r = run_experiment(cfg);
    errs[rep - 1] = err_of(r, "gcalb", 20);
    o.check(errs[rep - 1] <= 1e-5, "rep " + std::to_string(rep) + " err " + sci(errs[rep - 1]));
  }
  const double ratio = errs[1] / std::max(errs[0], 1e-300);
  o.check(ratio <= 100.0, "ratio " + sci(ratio));
  const double seconds = clock.seconds();
  o.check(seconds < 1800.0, "runtime " + fmt("%.1f", seconds) + " s");
  return o;
}

// Criteria 6 and 7 share one 3D sweep.
struct Lin3dRuns
{
  ExperimentResult main;
  ExperimentResult local;
  double seconds = 0.0;
};

const Lin3dRuns &lin3d_runs()
{
  static const Lin3dRuns runs = [] {
    Lin3dRuns out;
    const Stopwatch clock;
    ExperimentConfig cfg = config_for(Experiment::lin3d);
    cfg.nb_sweep = {6, 8, 10, 12, 14, 16, 18, 20};
    out.main = run_experiment(cfg);
    ExperimentConfig lc = config_for(Experiment::lin3d);
    lc.methods = {Method::lcalb};
    lc.nb_sweep = {20};
    out.local = run_experiment(lc);
    out.seconds = clock.seconds();
    return out;
  }();
  return runs;
}

Outcome criterion_lin3d()
{
  Outcome o;
  const Lin3dRuns &runs = lin3d_runs();
  const double e6 = err_of(runs.main, "gcalb", 6);
  const double e20 = err_of(runs.main, "gcalb", 20);
  const double lc20 = err_of(runs.local, "lcalb", 20);
  const double orders = std::log10(e6 / std::max(e20, 1e-300));
  o.check(orders >= 6.0, "gc n_b 6 " + sci(e6) + " -> n_b 20 " + sci(e20) + " (" + fmt("%.1f", orders) + " orders)");
  o.check(e20 <= lc20, "gc " + sci(e20) + " <= lc " + sci(lc20) + " at n_b 20");
  o.details += "; runtime " + fmt("%.1f", runs.seconds) + " s";
  return o;
}

Outcome criterion_dofs()
{
  Outcome o;
  const Lin3dRuns &runs = lin3d_runs();
  const double tol = 2e-2;
  std::size_t gc = 0;
  std::size_t pw = 0;
  for (const RunMetrics &m : runs.main.rows)
  {
    if (m.err > tol)
    {
      continue;
    }
    std::size_t &slot = m.method == "gcalb" ? gc : pw;
    if (slot == 0 || m.dofs < slot)
    {
      slot = m.dofs;
    }
  }
  o.check(gc > 0, "gc dofs " + std::to_string(gc));
  o.check(pw > 0, "planewave dofs " + std::to_string(pw));
  o.check(gc > 0 && pw > 0 && 3 * gc <= pw, "ratio " + fmt("%.3f", pw > 0 ? double(gc) / double(pw) : 0.0));
  return o;
}

Outcome criterion_scf()
{
  Outcome o;
  ExperimentConfig cfg = config_for(Experiment::scf1d);
  const Stopwatch clock;
  const ExperimentResult r = run_experiment(cfg);
  const double seconds = clock.seconds();
  for (const SCFTrace &t : r.scf)
  {
    const std::string tag = t.method + " ";
    const double ex = t.outer.empty() ? std::numeric_limits<double>::quiet_NaN() : t.outer.back().exchange_energy;
    const int outer = int(t.outer.size());
    const int first_inner = t.outer.empty() ? -1 : t.outer.front().inner_iterations;
    const double change = t.outer.empty() ? std::numeric_limits<double>::quiet_NaN() : t.outer.back().relative_change;
    const int lo = t.method == "gcalb" ? 7 : 5;
    const int hi = t.method == "gcalb" ? 13 : 11;
    o.check(t.converged, tag + "converged" + (t.message.empty() ? "" : " (" + t.message + ")"));
    o.check(std::abs(ex + 2.8560) <= 2e-3, tag + "E_X " + fmt("%.6f", ex));
    o.check(outer <= 15, tag + "outer " + std::to_string(outer));
    o.check(first_inner >= lo && first_inner <= hi, tag + "first inner " + std::to_string(first_inner));
    o.check(change <= 1e-5, tag + "final change " + sci(change));
  }
  o.check(r.scf.size() == 2, "solvers " + std::to_string(r.scf.size()));
  o.check(seconds < 600.0, "runtime " + fmt("%.1f", seconds) + " s");
  return o;
}

ComplexMatrix random_complex(int m, std::uint64_t seed)
{
  return gaussian_matrix(m, m, seed).cast<cplx>() + cplx(0.0, 1.0) * gaussian_matrix(m, m, seed + 1).cast<cplx>();
}

Outcome criterion_properties()
{
  Outcome o;
  const Hamiltonian h = test::wells_1d(140);
  const Hamiltonian nl = Hamiltonian::make(h.grid, 1.0, h.potential, test::random_exchange(h.grid, 5));

  {
    double worst = 0.0;
    for (const Hamiltonian *op : {&h, &nl})
    {
      const RealMatrix u = gaussian_matrix(140, 8, 1);
      const RealMatrix v = gaussian_matrix(140, 8, 2);
      const RealMatrix hu = op->apply(u);
      const RealMatrix hv = op->apply(v);
      worst = std::max(worst, (u.transpose() * hv - hu.transpose() * v).cwiseAbs().maxCoeff() / hu.norm());
      const RealMatrix lin = op->apply(RealMatrix(2.0 * u - 3.0 * v));
      worst = std::max(worst, (lin - 2.0 * hu + 3.0 * hv).cwiseAbs().maxCoeff() / hu.norm());
    }
    o.check(worst < 1e-12, "hamiltonian symmetry/linearity " + sci(worst));
  }
  {
    const Hamiltonian lap = Hamiltonian::make(h.grid, 1.0, RealVector::Constant(140, 1.0));
    const ComplexMatrix v = gaussian_matrix(140, 3, 9).cast<cplx>();
    const double e = (lap.apply(apply_shifted_laplacian_inverse(h.grid, 1.0, -1.0, v)) - v).cwiseAbs().maxCoeff();
    o.check(e < 1e-11, "preconditioner round trip " + sci(e));
  }
  {
    double worst = 0.0;
    bool within = true;
    for (int m = 1; m <= 16; ++m)
    {
      const ComplexMatrix a = ComplexMatrix::Identity(m, m) * (2.0 * std::sqrt(double(m))) + 0.5 * random_complex(m, 10 * m);
      const ComplexVector b = gaussian_matrix(m, 1, 500 + m).col(0).cast<cplx>();
      SolverConfig cfg;
      cfg.restart = m;
      cfg.tol = 1e-10;
      SolveReport rep;
      const ComplexVector x =
          gmres([&](const ComplexVector &y) { return ComplexVector(a * y); }, b, {}, cfg, rep);
      within = within && rep.iterations <= m;
      worst = std::max(worst, (a * x - b).norm() / b.norm());
    }
    o.check(within && worst <= 1e-10, "gmres m <= 16 residual " + sci(worst));
  }
  {
    const int n = 50;
    auto orth = [n](std::uint64_t seed) {
      return RealMatrix(gaussian_matrix(n, 3, seed).householderQr().householderQ() * RealMatrix::Identity(n, 3));
    };
    const RealMatrix u = orth(1);
    const RealMatrix a = u * Eigen::Vector3d(5.0, 1.0, 0.01).asDiagonal() * orth(2).transpose();
    const RangeFinderResult r =
        randomized_range_finder([&](const RealMatrix &x) { return RealMatrix(a * x); }, n, 3, 5, 9);
    const double outside = (r.vectors - u * (u.transpose() * r.vectors)).norm();
    o.check(r.rank == 3 && outside < 1e-10, "rank-3 capture " + sci(outside));
  }
  const auto mesh = test::mesh_1d(h.grid, 7, 40);
  const EigResult ref = lobpcg(h, 16);
  {
    double worst = 0.0;
    for (const DGBasis &b : {basis_from_samples(mesh, gaussian_matrix(140, 12, 1), 10),
                             build_opt_basis(ref.eigenvectors, mesh, 8), build_lcalb(h, mesh, 6)})
    {
      for (const LocalBasis &l : b.locals)
      {
        worst = std::max(worst, weighted_gram_error(*mesh, l));
      }
    }
    o.check(worst < 1e-12, "weighted gram " + sci(worst));
  }
  {
    const DGBasis basis = basis_from_samples(mesh, gaussian_matrix(140, 14, 3), 8);
    const DGMatrix a = assemble_dg(h, basis, estimate_penalties(basis, h.kinetic));
    const double asym = (a.matrix - a.matrix.transpose()).cwiseAbs().maxCoeff() / a.matrix.cwiseAbs().maxCoeff();
    double far = 0.0;
    for (std::size_t p = 0; p < 7; ++p)
    {
      for (std::size_t q = 0; q < 7; ++q)
      {
        if (std::min((p + 7 - q) % 7, (q + 7 - p) % 7) > 1)
        {
          far = std::max(far, a.matrix.block(Eigen::Index(a.offsets[p]), Eigen::Index(a.offsets[q]), a.counts[p],
                                             a.counts[q])
                                  .cwiseAbs()
                                  .maxCoeff());
        }
      }
    }
    o.check(asym < 1e-10 && far == 0.0, "dg symmetry " + sci(asym) + " non-neighbour blocks " + sci(far));
  }
  {
    const DGBasis basis = build_opt_basis(ref.eigenvectors, mesh, 16);
    const DGEigenSolution sol = solve_dg_eig(assemble_dg(h, basis, estimate_penalties(basis, h.kinetic)), 16);
    const double e = (sol.eigenvalues - ref.eigenvalues).cwiseAbs().maxCoeff();
    o.check(e < 1e-9, "dg consistency " + sci(e));
    const double n = reconstruct_density(sol, basis, 16).sum() * h.grid.cell_volume();
    o.check(std::abs(n - 16.0) < 1e-6, "density integral " + fmt("%.10f", n));
  }
  {
    const UniformGrid g = test::grid_1d(60);
    const Hamiltonian free = Hamiltonian::make(g, 1.0, RealVector::Zero(60));
    RealMatrix pw(60, 9);
    for (int c = 0; c < 9; ++c)
    {
      const int k = (c + 1) / 2;
      for (int i = 0; i < 60; ++i)
      {
        const double x = k * g.coordinate(0, i);
        pw(i, c) = c == 0 ? 1.0 : (c % 2 == 1 ? std::cos(x) : std::sin(x));
      }
      pw.col(c).normalize();
    }
    const DGBasis basis = build_opt_basis(pw, test::mesh_1d(g, 5, 30), 9);
    const DGEigenSolution sol = solve_dg_eig(assemble_dg(free, basis, estimate_penalties(basis, 1.0)), 9);
    const double expect[9] = {0, 1, 1, 4, 4, 9, 9, 16, 16};
    double worst = 0.0;
    for (int i = 0; i < 9; ++i)
    {
      worst = std::max(worst, std::abs(sol.eigenvalues[i] - expect[i]));
    }
    o.check(worst < 1e-9, "free particle spectrum " + sci(worst));
  }
  {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i)
    {
      const double a = -10.0 + 2.0 * u(gen);
      const double b = a + u(gen);
      const double b_plus = b + u(gen);
      const double a_minus = i % 2 == 0 ? -std::numeric_limits<double>::infinity() : a - u(gen);
      worst = std::max(worst, mobius_residual(solve_mobius(a_minus, a, b, b_plus), a_minus, a, b, b_plus));
    }
    o.check(worst < 1e-10, "mobius residual " + sci(worst));
  }
  return o;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"gcalb acceptance criteria"};
  std::vector<int> selected;
  app.add_option("criteria", selected, "criteria to run (default: all)")->check(CLI::Range(1, 9));
  app.add_option("--cache-dir", g_cache_dir, "reference eigenvalue cache");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
  {
    selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  }

  const std::map<int, std::function<Outcome()>> criteria = {
      {1, criterion_filter}, {2, criterion_lin1d}, {3, criterion_ordering},
      {4, criterion_lin2d},  {5, criterion_weak2d}, {6, criterion_lin3d},
      {7, criterion_dofs},   {8, criterion_scf},    {9, criterion_properties},
  };

  int failures = 0;
  for (int id : selected)
  {
    Outcome o;
    try
    {
      o = criteria.at(id)();
    }
    catch (const std::exception &e)
    {
      o.pass = false;
      o.details = std::string("error: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %d %s %s\n", id, o.pass ? "PASS" : "FAIL", o.details.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
