#include "rdseg/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

namespace rdseg {

using Eigen::Index;

void SolverParams::validate() const {
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  if (!(theta > 0.0)) throw InvalidInput("theta must be positive");
  if (!(tau > 0.0 && tau <= 0.125)) throw InvalidInput("tau must lie in (0, 1/8]");
  if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("epsilon must lie in (0, 1)");
  if (max_outer < 1) throw InvalidInput("max_outer must be at least 1");
  if (inner_steps < 1) throw InvalidInput("inner_steps must be at least 1");
  if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
}

double psi(double v) { return std::max(0.0, 2.0 * std::abs(v - 0.5) - 1.0); }

namespace {

// RD runs at least this long are swept as contiguous spans; shorter runs and
// isolated pixels go through flat index lists so that scattered RD costs
// per pixel and not per row segment.
constexpr Index kMinRun = 8;
// Gaps up to this size are bridged when sweeping the auxiliary field.
constexpr Index kMergeGap = 4;

struct Span {
  Index row;
  Index begin;
  Index end;  // exclusive
};

template <typename OnRun>
void for_each_run(const Field<bool>& mask, OnRun&& on_run) {
  const Index w = mask.cols();
  for (Index i = 0; i < mask.rows(); ++i) {
    Index j = 0;
    while (j < w) {
      if (!mask(i, j)) {
        ++j;
        continue;
      }
      const Index b = j;
      while (j < w && mask(i, j)) ++j;
      on_run(i, b, j);
    }
  }
}

std::vector<Span> merged_spans(const Field<bool>& mask, Index gap) {
  std::vector<Span> spans;
  for_each_run(mask, [&](Index i, Index b, Index e) {
    if (!spans.empty() && spans.back().row == i && b - spans.back().end <= gap)
      spans.back().end = e;
    else
      spans.push_back({i, b, e});
  });
  return spans;
}

// RD split into long row runs and scattered pixels, plus the spans where the
// auxiliary field w = div rho - v / theta must be known to take its forward
// gradient on RD (RD itself and RD shifted one row down / one column right).
class RestrictedDomain {
public:
  explicit RestrictedDomain(const Partition& part) : h_(part.rows()), w_(part.cols()) {
    const Field<bool> rd = part.labels == kRestricted;
    for_each_run(rd, [&](Index i, Index b, Index e) {
      if (e - b >= kMinRun) {
        runs_.push_back({i, b, e});
        return;
      }
      for (Index j = b; j < e; ++j) {
        const bool inner = i > 0 && i < h_ - 1 && j > 0 && j < w_ - 1;
        (inner ? inner_ : edge_).push_back(i * w_ + j);
      }
    });
    Field<bool> need = rd;
    if (h_ > 1) need.bottomRows(h_ - 1) = need.bottomRows(h_ - 1) || rd.topRows(h_ - 1);
    if (w_ > 1) need.rightCols(w_ - 1) = need.rightCols(w_ - 1) || rd.leftCols(w_ - 1);
    stencil_ = merged_spans(need, kMergeGap);
  }

  Index rows() const { return h_; }
  Index cols() const { return w_; }
  bool empty() const { return runs_.empty() && inner_.empty() && edge_.empty(); }
  const std::vector<Span>& runs() const { return runs_; }
  /// Scattered RD pixels away from the grid border.
  const std::vector<Index>& inner() const { return inner_; }
  /// Scattered RD pixels on the grid border.
  const std::vector<Index>& edge() const { return edge_; }
  const std::vector<Span>& stencil() const { return stencil_; }

private:
  Index h_;
  Index w_;
  std::vector<Span> runs_;
  std::vector<Index> inner_;
  std::vector<Index> edge_;
  std::vector<Span> stencil_;
};

// Calls emit(k, div) for every pixel k of row i in [b, e). Arithmetic
// matches divergence_into() term for term.
template <typename Emit>
inline void divergence_run(const double* p1, const double* p2, Index h, Index w, Index i, Index b,
                           Index e, Emit&& emit) {
  const Index row = i * w;
  const double* r1 = p1 + row;
  const double* r1u = i > 0 ? r1 - w : r1;
  const double* r2 = p2 + row;

  auto second = [&](auto first_term) {
    if (w == 1) {
      for (Index j = b; j < e; ++j) emit(row + j, first_term(j));
      return;
    }
    Index j = b;
    if (j == 0 && j < e) {
      emit(row, first_term(0) + r2[0]);
      ++j;
    }
    const Index stop = std::min(e, w - 1);
    for (; j < stop; ++j) emit(row + j, first_term(j) + (r2[j] - r2[j - 1]));
    if (e == w && j == w - 1) emit(row + j, first_term(j) + -r2[j - 1]);
  };

  if (h == 1)
    second([](Index) { return 0.0; });
  else if (i == 0)
    second([r1](Index j) { return r1[j]; });
  else if (i == h - 1)
    second([r1u](Index j) { return -r1u[j]; });
  else
    second([r1, r1u](Index j) { return r1[j] - r1u[j]; });
}

// Divergence at a single pixel, same arithmetic as divergence_run().
inline double divergence_at(const double* p1, const double* p2, Index h, Index w, Index k) {
  const Index i = k / w, j = k % w;
  double t = 0.0;
  if (h > 1) t = i == 0 ? p1[k] : i == h - 1 ? -p1[k - w] : p1[k] - p1[k - w];
  if (w == 1) return t;
  if (j == 0) return t + p2[k];
  if (j == w - 1) return t + -p2[k - 1];
  return t + (p2[k] - p2[k - 1]);
}

inline double divergence_inner(const double* p1, const double* p2, Index w, Index k) {
  return (p1[k] - p1[k - w]) + (p2[k] - p2[k - 1]);
}

struct Workspace {
  explicit Workspace(Index h, Index w) : aux(ScalarField::Zero(h, w)) {}
  ScalarField aux;  // div rho - v / theta on the stencil spans
};

struct RhoUpdate {
  double* p1;
  double* p2;
  double tau;

  void operator()(Index k, double g1, double g2) const {
    const double n = std::sqrt(g1 * g1 + g2 * g2);
    const double den = 1.0 + tau * n;
    p1[k] = (p1[k] + tau * g1) / den;
    p2[k] = (p2[k] + tau * g2) / den;
  }
};

void rho_update_run(const Span& s, Index h, Index w, const double* aux, const RhoUpdate& update) {
  const Index row = s.row * w;
  const Index stop = std::min(s.end, w - 1);
  Index j = s.begin;
  if (s.row < h - 1) {
    for (; j < stop; ++j) {
      const Index k = row + j;
      update(k, aux[k + w] - aux[k], aux[k + 1] - aux[k]);
    }
    if (j == w - 1 && j < s.end) update(row + j, aux[row + j + w] - aux[row + j], 0.0);
  } else {
    for (; j < stop; ++j) {
      const Index k = row + j;
      update(k, 0.0, aux[k + 1] - aux[k]);
    }
    if (j == w - 1 && j < s.end) update(row + j, 0.0, 0.0);
  }
}

void rho_step_inplace(const RestrictedDomain& dom, VectorField2d& rho, const ScalarField& v,
                      const SolverParams& params, Workspace& ws) {
  const Index h = dom.rows(), w = dom.cols();
  const double theta = params.theta;
  const double* vd = v.data();
  double* aux = ws.aux.data();
  double* p1 = rho.comp1.data();
  double* p2 = rho.comp2.data();

  for (const Span& s : dom.stencil())
    divergence_run(p1, p2, h, w, s.row, s.begin, s.end,
                   [&](Index k, double d) { aux[k] = d - vd[k] / theta; });

  const RhoUpdate update{p1, p2, params.tau};
  for (const Span& s : dom.runs()) rho_update_run(s, h, w, aux, update);
  for (const Index k : dom.inner()) update(k, aux[k + w] - aux[k], aux[k + 1] - aux[k]);
  for (const Index k : dom.edge()) {
    const Index i = k / w, j = k % w;
    update(k, i < h - 1 ? aux[k + w] - aux[k] : 0.0, j < w - 1 ? aux[k + 1] - aux[k] : 0.0);
  }
}

struct Change {
  double sum_sq = 0.0;
  double max_abs = 0.0;

  void add(double d) {
    sum_sq += d * d;
    max_abs = std::max(max_abs, std::abs(d));
  }
  double norm(StopNorm kind, Index n) const {
    switch (kind) {
      case StopNorm::kMax: return max_abs;
      case StopNorm::kL2: return std::sqrt(sum_sq);
      case StopNorm::kRms: break;
    }
    return std::sqrt(sum_sq / static_cast<double>(n));
  }
};

Change update_u_inplace(const RestrictedDomain& dom, ScalarField& u, const ScalarField& v,
                        const VectorField2d& rho, const SolverParams& params) {
  const Index h = dom.rows(), w = dom.cols();
  const double theta = params.theta;
  const double* vd = v.data();
  const double* p1 = rho.comp1.data();
  const double* p2 = rho.comp2.data();
  double* ud = u.data();
  Change c;
  auto set = [&](Index k, double d) {
    const double next = vd[k] - theta * d;
    c.add(next - ud[k]);
    ud[k] = next;
  };
  for (const Span& s : dom.runs()) divergence_run(p1, p2, h, w, s.row, s.begin, s.end, set);
  for (const Index k : dom.inner()) set(k, divergence_inner(p1, p2, w, k));
  for (const Index k : dom.edge()) set(k, divergence_at(p1, p2, h, w, k));
  return c;
}

Change update_v_inplace(const RestrictedDomain& dom, ScalarField& v, const ScalarField& u,
                        const ScalarField& f, const SolverParams& params) {
  const Index w = dom.cols();
  const double tl = params.theta * params.lambda;
  const double* ud = u.data();
  const double* fd = f.data();
  double* vd = v.data();
  Change c;
  auto set = [&](Index k) {
    const double next = std::min(std::max(ud[k] - tl * fd[k], 0.0), 1.0);
    c.add(next - vd[k]);
    vd[k] = next;
  };
  for (const Span& s : dom.runs())
    for (Index k = s.row * w + s.begin, end = s.row * w + s.end; k < end; ++k) set(k);
  for (const Index k : dom.inner()) set(k);
  for (const Index k : dom.edge()) set(k);
  return c;
}

void require_same_grid(const Partition& part, Index h, Index w, const char* what) {
  if (part.rows() != h || part.cols() != w)
    throw InvalidInput(std::string(what) + ": partition and field dimensions differ");
}

template <typename Derived>
void require_same_grid(const Eigen::DenseBase<Derived>& a, Index h, Index w, const char* what) {
  if (a.rows() != h || a.cols() != w)
    throw InvalidInput(std::string(what) + ": field dimensions differ");
}

// Values fixed by the partition: 1 on FG, 0 on BG.
void apply_pinning(const Partition& part, ScalarField& x) {
  const auto* lab = part.labels.data();
  for (Index k = 0; k < x.size(); ++k) {
    if (lab[k] == kForeground) x.data()[k] = 1.0;
    else if (lab[k] == kBackground) x.data()[k] = 0.0;
  }
}

void zero_outside(const Partition& part, VectorField2d& p) {
  const auto* lab = part.labels.data();
  for (Index k = 0; k < p.comp1.size(); ++k) {
    if (lab[k] != kRestricted) {
      p.comp1.data()[k] = 0.0;
      p.comp2.data()[k] = 0.0;
    }
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolveResult solve_on(const ScalarField& f, const SolverParams& params, Partition part,
                     const IterationObserver& observer,
                     std::chrono::steady_clock::time_point t0) {
  const Index h = f.rows(), w = f.cols();
  const RestrictedDomain dom(part);

  SolveResult out;
  SolverState& st = out.state;
  st.u = initial_indicator(f);
  apply_pinning(part, st.u);
  st.v = st.u;
  st.rho = VectorField2d(h, w);
  st.outer_iter = 0;

  SolveReport& rep = out.report;
  if (dom.empty()) {
    rep.converged = true;
  } else {
    Workspace ws(h, w);
    while (st.outer_iter < params.max_outer) {
      for (int s = 0; s < params.inner_steps; ++s) rho_step_inplace(dom, st.rho, st.v, params, ws);
      const Change du = update_u_inplace(dom, st.u, st.v, st.rho, params);
      const Change dv = update_v_inplace(dom, st.v, st.u, f, params);
      ++st.outer_iter;
      rep.final_residual = std::max(du.norm(params.norm, f.size()), dv.norm(params.norm, f.size()));
      if (observer) observer(st);
      if (rep.final_residual <= params.delta) {
        rep.converged = true;
        break;
      }
    }
  }
  rep.outer_iterations = st.outer_iter;
  rep.wall_time = seconds_since(t0);
  rep.energy = relaxed_energy(st.u, f, params.lambda);
  out.partition = std::move(part);
  return out;
}

}  // namespace

VectorField2d rho_step(const VectorField2d& rho, const ScalarField& v, const SolverParams& params,
                       const Partition& part) {
  params.validate();
  detail::require_consistent(rho, "rho_step");
  require_same_grid(part, rho.rows(), rho.cols(), "rho_step");
  require_same_grid(v, rho.rows(), rho.cols(), "rho_step");
  const RestrictedDomain dom(part);
  VectorField2d next = rho;
  zero_outside(part, next);
  Workspace ws(rho.rows(), rho.cols());
  rho_step_inplace(dom, next, v, params, ws);
  return next;
}

ScalarField update_u(const ScalarField& v, const VectorField2d& rho, const SolverParams& params,
                     const Partition& part) {
  params.validate();
  detail::require_consistent(rho, "update_u");
  require_same_grid(part, v.rows(), v.cols(), "update_u");
  require_same_grid(rho.comp1, v.rows(), v.cols(), "update_u");
  const RestrictedDomain dom(part);
  ScalarField u = ScalarField::Zero(v.rows(), v.cols());
  apply_pinning(part, u);
  update_u_inplace(dom, u, v, rho, params);
  return u;
}

ScalarField update_v(const ScalarField& u, const ScalarField& f, const SolverParams& params,
                     const Partition& part) {
  params.validate();
  require_same_grid(part, u.rows(), u.cols(), "update_v");
  require_same_grid(f, u.rows(), u.cols(), "update_v");
  const RestrictedDomain dom(part);
  ScalarField v = ScalarField::Zero(u.rows(), u.cols());
  apply_pinning(part, v);
  update_v_inplace(dom, v, u, f, params);
  return v;
}

SolveResult solve(const ScalarField& f, const SolverParams& params, double q,
                  const IterationObserver& observer) {
  params.validate();
  const auto t0 = std::chrono::steady_clock::now();
  Partition part = partition(f, q);
  return solve_on(f, params, std::move(part), observer, t0);
}

SolveResult solve(const ScalarField& f, const SolverParams& params, const Partition& part,
                  const IterationObserver& observer) {
  params.validate();
  detail::require_nonempty(f, "solve");
  require_same_grid(part, f.rows(), f.cols(), "solve");
  if (!f.allFinite()) throw InvalidInput("solve: fitting term is not finite");
  return solve_on(f, params, part, observer, std::chrono::steady_clock::now());
}

SolveResult solve_plain(const ScalarField& f, const SolverParams& params,
                        const IterationObserver& observer) {
  params.validate();
  detail::require_nonempty(f, "solve_plain");
  if (!f.allFinite()) throw InvalidInput("solve_plain: fitting term is not finite");
  const auto t0 = std::chrono::steady_clock::now();
  const Index h = f.rows(), w = f.cols();
  const double theta = params.theta, tau = params.tau;
  const double tl = params.theta * params.lambda;

  SolveResult out;
  SolverState& st = out.state;
  st.u = initial_indicator(f);
  st.v = st.u;
  st.rho = VectorField2d(h, w);

  ScalarField div(h, w), aux(h, w), norm(h, w), next(h, w);
  VectorField2d g(h, w);

  auto change = [&](const ScalarField& a, const ScalarField& b) {
    Change c;
    for (Index k = 0; k < a.size(); ++k) c.add(a.data()[k] - b.data()[k]);
    return c.norm(params.norm, a.size());
  };

  SolveReport& rep = out.report;
  while (st.outer_iter < params.max_outer) {
    for (int s = 0; s < params.inner_steps; ++s) {
      divergence_into(st.rho, div);
      aux = div - st.v / theta;
      gradient_into(aux, g);
      norm = (g.comp1.square() + g.comp2.square()).sqrt();
      st.rho.comp1 = (st.rho.comp1 + tau * g.comp1) / (1.0 + tau * norm);
      st.rho.comp2 = (st.rho.comp2 + tau * g.comp2) / (1.0 + tau * norm);
    }
    divergence_into(st.rho, div);
    next = st.v - theta * div;
    const double du = change(next, st.u);
    st.u.swap(next);
    next = (st.u - tl * f).max(0.0).min(1.0);
    const double dv = change(next, st.v);
    st.v.swap(next);
    ++st.outer_iter;
    rep.final_residual = std::max(du, dv);
    if (observer) observer(st);
    if (rep.final_residual <= params.delta) {
      rep.converged = true;
      break;
    }
  }
  rep.outer_iterations = st.outer_iter;
  rep.wall_time = seconds_since(t0);
  rep.energy = relaxed_energy(st.u, f, params.lambda);
  out.partition = full_partition(h, w);
  return out;
}

double relaxed_energy(const ScalarField& u, const ScalarField& f, double lambda) {
  require_same_grid(f, u.rows(), u.cols(), "relaxed_energy");
  return total_variation(u) + lambda * (f * u).sum();
}

double split_energy(const ScalarField& u, const ScalarField& v, const ScalarField& f,
                    const SolverParams& params) {
  require_same_grid(f, u.rows(), u.cols(), "split_energy");
  require_same_grid(v, u.rows(), u.cols(), "split_energy");
  const double penalty = v.unaryExpr([](double x) { return psi(x); }).sum();
  return total_variation(u) + (u - v).square().sum() / (2.0 * params.theta) +
         params.lambda * (f * v).sum() + params.alpha * penalty;
}

}  // namespace rdseg
