// Linear maps between model spaces, as plain matrices tagged with model ids,
// plus the builtin constructors the config language exposes: differentiation
// and multiplication on trig models, diagonal and literal-matrix maps on
// sequence models, and the identity/zero/scale/sum/compose algebra.

#pragma once

#include "gmv/model.hpp"

#include <string>

namespace gmv {

struct GradedOperator {
  std::string id;
  std::string source_model;
  std::string target_model;
  Mat matrix;  // target_dim x source_dim

  Vec apply(const Vec& x) const { return matrix * x; }
  GradedVector apply(const ModelSpace& src, const ModelSpace& dst,
                     const GradedVector& v) const;
};

// d/dt on a trig model (source = target); exact in the basis.
GradedOperator make_derivative(const ModelSpace& trig, std::string id = "d/dt");

// f -> g*f between trig models.  g is given by its own trig coefficient
// vector (length 2*Mg + 1, constant/cos/sin interleaved like the models');
// requires dst bandwidth >= src bandwidth + Mg so no product mode is lost.
GradedOperator make_multiplication(const ModelSpace& src, const ModelSpace& dst,
                                   const Vec& g_coeffs, std::string id = "mult");

// diag(d) on a model (source = target).
GradedOperator make_diagonal(const ModelSpace& m, const Vec& diag,
                             std::string id = "diag");

GradedOperator make_matrix(const ModelSpace& src, const ModelSpace& dst, Mat m,
                           std::string id = "matrix");
GradedOperator make_identity(const ModelSpace& m, std::string id = "identity");
GradedOperator make_zero(const ModelSpace& src, const ModelSpace& dst,
                         std::string id = "zero");

GradedOperator scale_operator(const GradedOperator& a, double lambda);
GradedOperator sum_operators(const GradedOperator& a, const GradedOperator& b);
// compose(b, a) = b after a; a's target model must be b's source model.
GradedOperator compose_operators(const GradedOperator& b, const GradedOperator& a);

}  // namespace gmv
