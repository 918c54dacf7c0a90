#pragma once

// Discrete differential operators on a regular pixel grid.
//
// Fields are row-major Eigen arrays indexed (row i, column j). The gradient
// uses forward differences with a zero component on the last row/column and
// the divergence uses backward differences with the matching boundary rows,
// so that divergence is exactly the negative adjoint of gradient:
//
//   <grad u, p> + <u, div p> = 0.

#include <string>
#include <utility>

#include <Eigen/Core>

#include "rdseg/error.hpp"

namespace rdseg {

template <typename Scalar>
using Field = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ScalarField = Field<double>;

template <typename Scalar>
struct VectorField {
  Field<Scalar> comp1;  // along rows (i)
  Field<Scalar> comp2;  // along columns (j)

  VectorField() = default;
  VectorField(Eigen::Index height, Eigen::Index width)
      : comp1(Field<Scalar>::Zero(height, width)),
        comp2(Field<Scalar>::Zero(height, width)) {}
  VectorField(Field<Scalar> c1, Field<Scalar> c2)
      : comp1(std::move(c1)), comp2(std::move(c2)) {
    if (comp1.rows() != comp2.rows() || comp1.cols() != comp2.cols())
      throw InvalidInput("VectorField: component dimensions differ");
  }

  Eigen::Index rows() const { return comp1.rows(); }
  Eigen::Index cols() const { return comp1.cols(); }

  void setZero() {
    comp1.setZero();
    comp2.setZero();
  }
};

using VectorField2d = VectorField<double>;

namespace detail {

template <typename Derived>
void require_nonempty(const Eigen::DenseBase<Derived>& u, const char* what) {
  if (u.rows() < 1 || u.cols() < 1)
    throw InvalidInput(std::string(what) + ": field has a zero dimension");
}

template <typename Scalar>
void require_consistent(const VectorField<Scalar>& p, const char* what) {
  if (p.comp1.rows() != p.comp2.rows() || p.comp1.cols() != p.comp2.cols())
    throw InvalidInput(std::string(what) + ": component dimensions differ");
  require_nonempty(p.comp1, what);
}

}  // namespace detail

/// Forward-difference gradient written into a preallocated field.
template <typename Derived, typename Scalar>
void gradient_into(const Eigen::DenseBase<Derived>& u, VectorField<Scalar>& g) {
  detail::require_nonempty(u, "gradient");
  const Eigen::Index h = u.rows(), w = u.cols();
  g.comp1.resize(h, w);
  g.comp2.resize(h, w);
  g.comp1.bottomRows(1).setZero();
  if (h > 1)
    g.comp1.topRows(h - 1) = u.derived().bottomRows(h - 1) - u.derived().topRows(h - 1);
  g.comp2.rightCols(1).setZero();
  if (w > 1)
    g.comp2.leftCols(w - 1) = u.derived().rightCols(w - 1) - u.derived().leftCols(w - 1);
}

template <typename Derived>
VectorField<typename Derived::Scalar> gradient(const Eigen::DenseBase<Derived>& u) {
  VectorField<typename Derived::Scalar> g;
  gradient_into(u, g);
  return g;
}

/// Backward-difference divergence, the negative adjoint of gradient().
template <typename Scalar>
void divergence_into(const VectorField<Scalar>& p, Field<Scalar>& d) {
  detail::require_consistent(p, "divergence");
  const Eigen::Index h = p.rows(), w = p.cols();
  d.resize(h, w);
  if (h > 1) {
    d.row(0) = p.comp1.row(0);
    d.middleRows(1, h - 2) = p.comp1.middleRows(1, h - 2) - p.comp1.topRows(h - 2);
    d.row(h - 1) = -p.comp1.row(h - 2);
  } else {
    d.setZero();
  }
  if (w > 1) {
    d.col(0) += p.comp2.col(0);
    d.middleCols(1, w - 2) += p.comp2.middleCols(1, w - 2) - p.comp2.leftCols(w - 2);
    d.col(w - 1) += -p.comp2.col(w - 2);
  }
}

template <typename Scalar>
Field<Scalar> divergence(const VectorField<Scalar>& p) {
  Field<Scalar> d;
  divergence_into(p, d);
  return d;
}

template <typename Scalar>
Field<Scalar> pointwise_norm(const VectorField<Scalar>& p) {
  detail::require_consistent(p, "pointwise_norm");
  return (p.comp1.square() + p.comp2.square()).sqrt();
}

/// Isotropic total variation: sum of |grad u| over all pixels.
template <typename Derived>
typename Derived::Scalar total_variation(const Eigen::DenseBase<Derived>& u) {
  return pointwise_norm(gradient(u)).sum();
}

template <typename Scalar>
Scalar inner(const VectorField<Scalar>& a, const VectorField<Scalar>& b) {
  return (a.comp1 * b.comp1).sum() + (a.comp2 * b.comp2).sum();
}

}  // namespace rdseg
