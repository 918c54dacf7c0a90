#pragma once

// Alternating dual minimisation of the relaxed two-phase energy
//
//   TV(u) + 1/(2 theta) |u - v|^2 + sum lambda f v + alpha psi(v)
//
// restricted to the RD pixels of a Partition. FG/BG pixels keep u = v = 1 / 0
// and rho = 0 for the whole solve. With every pixel restricted (q = 1) the
// iterates coincide with solve_plain().

#include <functional>

#include "rdseg/grid.hpp"
#include "rdseg/partition.hpp"

namespace rdseg {

// Norm of the per-iteration change in u and v used by the stopping test.
//   kRms: Euclidean / sqrt(N)   kL2: Euclidean   kMax: largest |change|
enum class StopNorm { kRms, kL2, kMax };

struct SolverParams {
  double lambda = 1.0;
  double theta = 0.1;
  double tau = 0.125;
  double delta = 1e-2;
  double epsilon = 0.5;
  int max_outer = 5000;
  int inner_steps = 1;
  double alpha = 1.0;  // reported only; the v clamp enforces the constraint
  StopNorm norm = StopNorm::kL2;

  /// Throws InvalidInput on any out-of-range field.
  void validate() const;
};

struct SolverState {
  ScalarField u;
  ScalarField v;
  VectorField2d rho;
  int outer_iter = 0;
};

struct SolveReport {
  int outer_iterations = 0;
  double final_residual = 0.0;
  double wall_time = 0.0;  // seconds
  bool converged = false;
  double energy = 0.0;  // relaxed_energy(u, f, lambda)
};

struct SolveResult {
  SolverState state;
  SolveReport report;
  Partition partition;
};

/// Called after every outer iteration with the current state.
using IterationObserver = std::function<void(const SolverState&)>;

/// max{0, 2|v - 1/2| - 1}
double psi(double v);

/// One fixed-point step for rho on the restricted domain.
VectorField2d rho_step(const VectorField2d& rho, const ScalarField& v, const SolverParams& params,
                       const Partition& part);

/// u = v - theta div rho on RD, pinned elsewhere.
ScalarField update_u(const ScalarField& v, const VectorField2d& rho, const SolverParams& params,
                     const Partition& part);

/// v = clamp(u - theta lambda f, 0, 1) on RD, pinned elsewhere.
ScalarField update_v(const ScalarField& u, const ScalarField& f, const SolverParams& params,
                     const Partition& part);

SolveResult solve(const ScalarField& f, const SolverParams& params, double q,
                  const IterationObserver& observer = {});

SolveResult solve(const ScalarField& f, const SolverParams& params, const Partition& part,
                  const IterationObserver& observer = {});

/// Reference whole-grid solver without any partition bookkeeping.
SolveResult solve_plain(const ScalarField& f, const SolverParams& params,
                        const IterationObserver& observer = {});

/// TV(u) + lambda sum f u.
double relaxed_energy(const ScalarField& u, const ScalarField& f, double lambda);

/// Full split functional including the coupling and penalty terms.
double split_energy(const ScalarField& u, const ScalarField& v, const ScalarField& f,
                    const SolverParams& params);

}  // namespace rdseg
