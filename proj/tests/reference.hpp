#pragma once

// Straightforward per-pixel versions of the operators and of one outer
// iteration of the unrestricted solver. Shares no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rdseg/grid.hpp"

namespace ref {

using rdseg::ScalarField;
using rdseg::VectorField2d;

inline ScalarField random_field(Eigen::Index h, Eigen::Index w, std::mt19937_64& rng,
                                double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  ScalarField out(h, w);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j) out(i, j) = d(rng);
  return out;
}

inline VectorField2d random_vector_field(Eigen::Index h, Eigen::Index w, std::mt19937_64& rng) {
  return VectorField2d(random_field(h, w, rng), random_field(h, w, rng));
}

inline VectorField2d grad(const ScalarField& u) {
  const auto h = u.rows(), w = u.cols();
  VectorField2d g(h, w);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j) {
      g.comp1(i, j) = i + 1 < h ? u(i + 1, j) - u(i, j) : 0.0;
      g.comp2(i, j) = j + 1 < w ? u(i, j + 1) - u(i, j) : 0.0;
    }
  return g;
}

inline double div_at(const VectorField2d& p, Eigen::Index i, Eigen::Index j) {
  const auto h = p.rows(), w = p.cols();
  double a = 0.0;
  if (h > 1) {
    if (i == 0) a = p.comp1(i, j);
    else if (i == h - 1) a = -p.comp1(i - 1, j);
    else a = p.comp1(i, j) - p.comp1(i - 1, j);
  }
  if (w == 1) return a;
  if (j == 0) return a + p.comp2(i, j);
  if (j == w - 1) return a + -p.comp2(i, j - 1);
  return a + (p.comp2(i, j) - p.comp2(i, j - 1));
}

inline ScalarField div(const VectorField2d& p) {
  ScalarField d(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j) d(i, j) = div_at(p, i, j);
  return d;
}

struct State {
  ScalarField u, v;
  VectorField2d rho;
};

inline State initial_state(const ScalarField& f) {
  State s{ScalarField(f.rows(), f.cols()), ScalarField(f.rows(), f.cols()),
          VectorField2d(f.rows(), f.cols())};
  for (Eigen::Index k = 0; k < f.size(); ++k) s.u(k) = f(k) <= 0.0 ? 1.0 : 0.0;
  s.v = s.u;
  return s;
}

inline State initial_state(const ScalarField& f, const rdseg::Field<std::uint8_t>& labels) {
  State s = initial_state(f);
  for (Eigen::Index k = 0; k < f.size(); ++k)
    if (labels(k) != 2) s.u(k) = s.v(k) = labels(k) == 1 ? 1.0 : 0.0;
  return s;
}

/// One rho step, one u update and one v update on the whole grid.
inline void outer_iteration(State& s, const ScalarField& f, double lambda, double theta,
                            double tau) {
  const auto h = f.rows(), w = f.cols();
  ScalarField aux(h, w);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j) aux(i, j) = div_at(s.rho, i, j) - s.v(i, j) / theta;
  const VectorField2d g = grad(aux);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j) {
      const double g1 = g.comp1(i, j), g2 = g.comp2(i, j);
      const double den = 1.0 + tau * std::sqrt(g1 * g1 + g2 * g2);
      s.rho.comp1(i, j) = (s.rho.comp1(i, j) + tau * g1) / den;
      s.rho.comp2(i, j) = (s.rho.comp2(i, j) + tau * g2) / den;
    }
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j) s.u(i, j) = s.v(i, j) - theta * div_at(s.rho, i, j);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j)
      s.v(i, j) = std::min(std::max(s.u(i, j) - theta * lambda * f(i, j), 0.0), 1.0);
}

/// Same iteration with pinned pixels: label 1 keeps u = v = 1, label 0 keeps
/// u = v = 0, rho stays zero off label 2.
inline void restricted_iteration(State& s, const ScalarField& f, const rdseg::Field<std::uint8_t>& labels,
                                 double lambda, double theta, double tau) {
  const auto h = f.rows(), w = f.cols();
  ScalarField aux(h, w);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j) aux(i, j) = div_at(s.rho, i, j) - s.v(i, j) / theta;
  const VectorField2d g = grad(aux);
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    if (labels(k) != 2) {
      s.rho.comp1(k) = s.rho.comp2(k) = 0.0;
      continue;
    }
    const double g1 = g.comp1(k), g2 = g.comp2(k);
    const double den = 1.0 + tau * std::sqrt(g1 * g1 + g2 * g2);
    s.rho.comp1(k) = (s.rho.comp1(k) + tau * g1) / den;
    s.rho.comp2(k) = (s.rho.comp2(k) + tau * g2) / den;
  }
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j) {
      const auto l = labels(i, j);
      s.u(i, j) = l == 2 ? s.v(i, j) - theta * div_at(s.rho, i, j) : l == 1 ? 1.0 : 0.0;
    }
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    const auto l = labels(k);
    s.v(k) = l == 2 ? std::min(std::max(s.u(k) - theta * lambda * f(k), 0.0), 1.0)
                    : l == 1 ? 1.0 : 0.0;
  }
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  return (a - b).abs().maxCoeff();
}

}  // namespace ref
