// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include "core/basis.hpp"
#include "core/dg.hpp"
#include "core/eig.hpp"
#include "core/rational_filter.hpp"

namespace gcalb
{

namespace
{

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int ipow(int base, int e)
{
  int out = 1;
  for (int i = 0; i < e; ++i)
  {
    out *= base;
  }
  return out;
}

// Well centers are permutations of these coordinates; row i of kPerm picks the
// coordinate of well i along each axis.
constexpr double kCoords[4] = {1.0367, 2.4504, 3.8642, 5.2779};
constexpr int kPerm[4][3] = {{0, 1, 2}, {1, 3, 0}, {2, 0, 3}, {3, 2, 1}};

UniformGrid linear_grid(const ExperimentConfig &cfg, int points_per_rep)
{
  return UniformGrid::cube(cfg.dim, cfg.length * cfg.rep, points_per_rep * cfg.rep);
}

Error with_context(const Error &e, const std::string &context)
{
  return Error(e.code(), context + ": " + e.what());
}

}  // namespace

std::string to_string(Experiment e)
{
  switch (e)
  {
  case Experiment::lin1d:
    return "lin1d";
  case Experiment::lin2d:
    return "lin2d";
  case Experiment::lin3d:
    return "lin3d";
  case Experiment::weak2d:
    return "weak2d";
  case Experiment::scf1d:
    return "scf1d";
  }
  return "unknown";
}

std::string to_string(Method m)
{
  switch (m)
  {
  case Method::gcalb:
    return "gcalb";
  case Method::lcalb:
    return "lcalb";
  case Method::opt:
    return "opt";
  case Method::planewave:
    return "planewave";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string &s)
{
  for (Experiment e : {Experiment::lin1d, Experiment::lin2d, Experiment::lin3d, Experiment::weak2d, Experiment::scf1d})
  {
    if (to_string(e) == s)
    {
      return e;
    }
  }
  throw InvalidArgument("unknown experiment '" + s + "' (expected lin1d, lin2d, lin3d, weak2d or scf1d)");
}

Method parse_method(const std::string &s)
{
  for (Method m : {Method::gcalb, Method::lcalb, Method::opt, Method::planewave})
  {
    if (to_string(m) == s)
    {
      return m;
    }
  }
  throw InvalidArgument("unknown method '" + s + "' (expected gcalb, lcalb, opt or planewave)");
}

ExperimentConfig ExperimentConfig::defaults(Experiment e)
{
  ExperimentConfig c;
  c.experiment = e;
  switch (e)
  {
  case Experiment::lin1d:
    c.methods = {Method::gcalb, Method::lcalb, Method::opt};
    break;
  case Experiment::lin2d:
    c.dim = 2;
    c.reference_points = 300;
    c.b_plus_offset = 0.1;
    c.nb_sweep = {8, 10, 12, 14, 16, 18, 20, 22};
    c.methods = {Method::gcalb, Method::lcalb};
    break;
  case Experiment::lin3d:
    // 40^3 grid and 72^3 reference instead of 60^3 and 100^3
    c.dim = 3;
    c.grid_points = 40;
    c.elements = 4;
    c.lgl_points = 30;
    c.reference_points = 72;
    c.b_plus_offset = 0.01;
    c.nb_sweep = {6, 8, 10, 12, 14, 16, 18, 20, 22, 24};
    c.planewave_sweep = {12, 16, 20, 26};
    c.methods = {Method::gcalb, Method::planewave};
    break;
  case Experiment::weak2d:
    c.dim = 2;
    c.reference_points = 300;
    c.b_plus_offset = 0.1;
    c.nb_sweep = {20};
    c.methods = {Method::gcalb};
    break;
  case Experiment::scf1d:
    c.methods = {Method::gcalb, Method::planewave};
    c.nb_sweep = {c.scf.n_b};
    c.seed = c.scf.seed;
    break;
  }
  return c;
}

int ExperimentConfig::total_states() const
{
  return experiment == Experiment::scf1d ? scf.occupied : n * ipow(rep, dim);
}

void ExperimentConfig::validate() const
{
  require(!methods.empty(), "config: no methods selected");
  require(dim >= 1 && dim <= 3, "config: dim must be 1, 2 or 3");
  require(rep >= 1, "config: rep must be positive");
  require(n >= 1, "config: n must be positive");
  require(length > 0.0, "config: length must be positive");
  require(b_plus_offset > 0.0, "config: b_plus offset must be positive");
  require(poles >= 1 && oversampling >= 0, "config: invalid filter settings");
  for (int v : nb_sweep)
  {
    require(v > 0, "config: sweep values must be positive");
  }
  for (int v : planewave_sweep)
  {
    require(v > 0, "config: sweep values must be positive");
  }
  if (experiment == Experiment::scf1d)
  {
    for (Method m : methods)
    {
      if (m != Method::gcalb && m != Method::planewave)
      {
        throw UnsupportedError("config: scf1d supports the gcalb and planewave methods only");
      }
    }
    return;
  }
  require(grid_points > 0 && elements > 0 && lgl_points > 1 && reference_points > 0,
          "config: grid, element, LGL and reference counts must be positive");
  require(grid_points % elements == 0, "config: grid points per dimension must be divisible by the element count");
  for (Method m : methods)
  {
    if (m == Method::planewave)
    {
      require(!planewave_sweep.empty(), "config: planewave method needs sweep.planewave");
    }
    else
    {
      require(!nb_sweep.empty(), "config: empty n_b sweep");
    }
  }
  if (experiment == Experiment::weak2d)
  {
    require(dim == 2, "config: weak2d is two-dimensional");
  }
}

nlohmann::json to_json(const ExperimentConfig &c)
{
  nlohmann::json j;
  j["experiment"] = to_string(c.experiment);
  std::vector<std::string> methods;
  for (Method m : c.methods)
  {
    methods.push_back(to_string(m));
  }
  j["methods"] = methods;
  j["seed"] = c.seed;
  if (c.experiment == Experiment::scf1d)
  {
    const HFModelSpec &s = c.scf;
    j["scf"] = {
        {"length", s.length},
        {"nuclei", s.nuclei},
        {"sigma", s.sigma},
        {"charge", s.charge},
        {"mu", s.mu},
        {"eps0", s.eps0},
        {"alpha_x", s.alpha_x},
        {"occupied", s.occupied},
        {"kernel", s.kernel == KernelMode::periodic ? "periodic" : "free_space"},
        {"grid_points", s.grid_points},
        {"elements", s.elements},
        {"n_b", s.n_b},
        {"oversampling", s.oversampling},
        {"lgl_points", s.lgl_points},
        {"fermi_b", s.fermi_b},
        {"b_plus", s.b_plus},
        {"poles", s.poles},
        {"eig_tol", s.eig_tol},
        {"inner_tol", s.inner_tol},
        {"inner_max", s.inner_max},
        {"outer_tol", s.outer_tol},
        {"outer_max", s.outer_max},
        {"mix_beta", s.mix_beta},
        {"mix_depth", s.mix_depth},
    };
  }
  else
  {
    j["grid"] = {{"dim", c.dim},
                 {"length", c.length},
                 {"points", c.grid_points},
                 {"elements", c.elements},
                 {"lgl_points", c.lgl_points}};
    j["reference"] = {{"points", c.reference_points}};
    j["n"] = c.n;
    j["rep"] = c.rep;
    j["wells"] = {{"depth", c.well_depth}, {"sigma", c.well_sigma}};
    j["sweep"] = {{"nb", c.nb_sweep}, {"planewave", c.planewave_sweep}};
    j["filter"] = {{"b_plus_offset", c.b_plus_offset}, {"poles", c.poles}, {"oversampling", c.oversampling}};
    j["dg"] = {{"penalty_safety", c.penalty_safety}};
  }
  j["gmres"] = {{"restart", c.gmres.restart}, {"tol", c.gmres.tol}, {"max_restarts", c.gmres.max_restarts}};
  return j;
}

std::uint64_t fnv1a(const std::string &text)
{
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text)
  {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const ExperimentConfig &cfg)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_json(cfg).dump())));
  return buf;
}

bool ExperimentResult::converged() const
{
  for (const SCFTrace &t : scf)
  {
    if (!t.converged)
    {
      return false;
    }
  }
  return true;
}

GaussianWellSpec linear_wells(const ExperimentConfig &cfg)
{
  GaussianWellSpec w;
  const int r1 = cfg.rep;
  const int r2 = cfg.dim >= 2 ? cfg.rep : 1;
  const int r3 = cfg.dim >= 3 ? cfg.rep : 1;
  for (int k = 0; k < r3; ++k)
  {
    for (int j = 0; j < r2; ++j)
    {
      for (int i = 0; i < r1; ++i)
      {
        const double shift[3] = {i * cfg.length, j * cfg.length, k * cfg.length};
        for (int q = 0; q < 4; ++q)
        {
          Point3 c{0.0, 0.0, 0.0};
          for (int d = 0; d < cfg.dim; ++d)
          {
            c[std::size_t(d)] = kCoords[kPerm[q][d]] + shift[d];
          }
          w.centers.push_back(c);
          w.depths.push_back(cfg.well_depth);
          w.sigmas.push_back(cfg.well_sigma);
        }
      }
    }
  }
  return w;
}

RealVector reference_eigenvalues(const ExperimentConfig &cfg, int points_per_dim)
{
  const int n = cfg.total_states();
  nlohmann::json key = {{"dim", cfg.dim},
                        {"length", cfg.length},
                        {"rep", cfg.rep},
                        {"points", points_per_dim},
                        {"n", n},
                        {"depth", cfg.well_depth},
                        {"sigma", cfg.well_sigma}};
  std::filesystem::path file;
  if (!cfg.cache_dir.empty())
  {
    char name[40];
    std::snprintf(name, sizeof name, "ref-%016llx.json", static_cast<unsigned long long>(fnv1a(key.dump())));
    file = std::filesystem::path(cfg.cache_dir) / name;
    std::ifstream in(file);
    if (in)
    {
      try
      {
        const nlohmann::json j = nlohmann::json::parse(in);
        if (j.at("key") == key)
        {
          const std::vector<double> v = j.at("eigenvalues").get<std::vector<double>>();
          if (int(v.size()) == n)
          {
            return Eigen::Map<const RealVector>(v.data(), Eigen::Index(v.size()));
          }
        }
      }
      catch (const nlohmann::json::exception &)
      {
        // unreadable cache entries are recomputed and overwritten
      }
    }
  }

  const UniformGrid grid = linear_grid(cfg, points_per_dim);
  require(grid.size() > std::size_t(2 * n), "reference: grid too small for the requested states");
  const Hamiltonian h = Hamiltonian::make(grid, 1.0, build_gaussian_potential(linear_wells(cfg), grid));
  RealVector values;
  if (grid.size() <= 1024)
  {
    values = dense_reference_eig(h).eigenvalues.head(n);
  }
  else
  {
    LobpcgConfig lc;
    lc.seed = cfg.seed;
    values = lobpcg(h, n, lc).eigenvalues;
  }

  if (!file.empty())
  {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    std::ofstream out(file);
    if (!out)
    {
      throw IoError("reference cache: cannot write " + file.string());
    }
    nlohmann::json j;
    j["key"] = key;
    j["eigenvalues"] = std::vector<double>(values.data(), values.data() + values.size());
    out << j.dump(1) << '\n';
  }
  return values;
}

namespace
{

void run_linear(const ExperimentConfig &cfg, ExperimentResult &result)
{
  using clock = std::chrono::steady_clock;
  const int n = cfg.total_states();
  const RealVector ref = reference_eigenvalues(cfg, cfg.reference_points);
  result.reference_eigenvalues = ref;

  const UniformGrid grid = linear_grid(cfg, cfg.grid_points);
  const GaussianWellSpec wells = linear_wells(cfg);
  const Hamiltonian h = Hamiltonian::make(grid, 1.0, build_gaussian_potential(wells, grid));
  std::vector<int> el(std::size_t(cfg.dim), cfg.elements * cfg.rep);
  const auto mesh = std::make_shared<ElementMesh>(grid, Partition::make(grid, el), cfg.lgl_points);

  auto dg_row = [&](const std::string &method, int nb, const DGBasis &basis, double t_basis, double iters) {
    for (const std::string &w : basis.warnings)
    {
      result.warnings.push_back(method + " n_b=" + std::to_string(nb) + ": " + w);
    }
    const auto t0 = clock::now();
    const DGMatrix a = assemble_dg(h, basis, estimate_penalties(basis, 1.0, cfg.penalty_safety));
    const DGEigenSolution sol = solve_dg_eig(a, n);
    RunMetrics m;
    m.method = method;
    m.n_b = nb;
    m.err = relative_eigenvalue_error(sol.eigenvalues, ref);
    m.t_basis_s = t_basis;
    m.t_dg_s = seconds_since(t0);
    m.n_tot_iter = iters;
    m.dofs = a.size();
    result.rows.push_back(m);
  };

  for (Method method : cfg.methods)
  {
    const std::string name = to_string(method);
    try
    {
      if (method == Method::gcalb)
      {
        int nb_max = 0;
        for (int nb : cfg.nb_sweep)
        {
          nb_max = std::max(nb_max, nb);
        }
        FilterSpec fs;
        fs.a = ref[0];
        fs.b = ref[n - 1];
        fs.b_plus = fs.b + cfg.b_plus_offset;
        fs.r = cfg.poles;
        const auto t0 = clock::now();
        const RationalFilter filter = build_filter(fs);
        // Sketch columns are generated one at a time from per-column seeds and
        // orthonormalized in order, so the leading n_b + c columns of the
        // largest sketch equal the sketch of a smaller run bitwise.
        const RandomSketch sketch = random_orthonormal(grid.size(), std::size_t(nb_max + cfg.oversampling), cfg.seed);
        FilterApplyStats stats;
        const RealMatrix w = apply_filter(filter, h, sketch.columns, cfg.gmres, &stats);
        const double t_filter = seconds_since(t0);
        for (int nb : cfg.nb_sweep)
        {
          const auto t1 = clock::now();
          const DGBasis basis = basis_from_samples(mesh, w.leftCols(nb + cfg.oversampling), nb);
          dg_row(name, nb, basis, t_filter + seconds_since(t1), stats.iterations_per_rhs);
        }
      }
      else if (method == Method::lcalb)
      {
        for (int nb : cfg.nb_sweep)
        {
          const auto t0 = clock::now();
          const DGBasis basis = build_lcalb(h, mesh, nb);
          dg_row(name, nb, basis, seconds_since(t0), 0.0);
        }
      }
      else if (method == Method::opt)
      {
        const auto t0 = clock::now();
        LobpcgConfig lc;
        lc.seed = cfg.seed;
        const EigResult exact = lobpcg(h, n, lc);
        const double t_eig = seconds_since(t0);
        for (int nb : cfg.nb_sweep)
        {
          const auto t1 = clock::now();
          const DGBasis basis = build_opt_basis(exact.eigenvectors, mesh, nb);
          dg_row(name, nb, basis, t_eig + seconds_since(t1), 0.0);
        }
      }
      else
      {
        for (int p : cfg.planewave_sweep)
        {
          const auto t0 = clock::now();
          const RealVector values = reference_eigenvalues(cfg, p);
          RunMetrics m;
          m.method = name;
          m.n_b = p;
          m.err = relative_eigenvalue_error(values, ref);
          m.t_dg_s = seconds_since(t0);
          m.dofs = std::size_t(ipow(p * cfg.rep, cfg.dim));
          result.rows.push_back(m);
        }
      }
    }
    catch (const Error &e)
    {
      throw with_context(e, to_string(cfg.experiment) + " " + name);
    }
  }
}

void run_scf(const ExperimentConfig &cfg, ExperimentResult &result)
{
  HFModelSpec spec = cfg.scf;
  spec.seed = cfg.seed;
  spec.gmres = cfg.gmres;
  const HFModel model(spec);
  for (Method method : cfg.methods)
  {
    const InnerSolver solver = method == Method::gcalb ? InnerSolver::gcalb : InnerSolver::planewave;
    SCFTrace trace;
    trace.method = to_string(method);
    const auto t0 = std::chrono::steady_clock::now();
    SCFResult r;
    try
    {
      r = model.outer_scf(solver);
      trace.converged = true;
    }
    catch (const SCFConvergenceError &e)
    {
      r = e.partial();
      trace.message = e.what();
    }
    catch (const Error &e)
    {
      throw with_context(e, "scf1d " + trace.method);
    }
    trace.seconds = seconds_since(t0);
    trace.initial_exchange_energy = r.initial_exchange_energy;
    trace.outer = r.outer;
    trace.eigenvalues = r.state.eigenvalues;
    trace.density = r.state.density;

    RunMetrics m;
    m.method = trace.method;
    m.n_b = method == Method::gcalb ? spec.n_b : spec.grid_points;
    m.err = r.outer.empty() ? 0.0 : r.outer.back().relative_change;
    m.t_basis_s = trace.seconds;
    m.n_tot_iter = r.state.filter_iterations_per_rhs;
    m.dofs = method == Method::gcalb ? std::size_t(spec.n_b * spec.elements) : std::size_t(spec.grid_points);
    result.rows.push_back(m);
    result.scf.push_back(std::move(trace));
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig &cfg)
{
  cfg.validate();
  ExperimentResult result;
  result.config = cfg;
  if (cfg.experiment == Experiment::scf1d)
  {
    run_scf(cfg, result);
  }
  else
  {
    run_linear(cfg, result);
  }
  return result;
}

}  // namespace gcalb
