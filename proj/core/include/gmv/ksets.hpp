#pragma once

// Operator sublevel families K_{i,j} = { A : ||A||_{i,j} < a(i,j) } and their
// ascending unions K_j over the source level i.  When the bound map satisfies
// a(i+1,j) >= a(i,j)/2 the family ascends (the level-shift inequality halves
// the norm while the bound loses at most a half), so each union is a convex
// set and membership can be decided by a minimal-witness search.
//
// The separation witness scales a nonzero operator until it escapes one of
// these unions: along a fixed direction u the ratio mu_j(N*A*u)/mu_i(u) grows
// linearly in N, so some dyadic N pushes a certified lower bound of the
// operator norm above every a(i,j) at once.

#include "gmv/model.hpp"
#include "gmv/op_norm.hpp"
#include "gmv/operator.hpp"

#include <cstddef>
#include <string>

namespace gmv {

enum class AMapForm : std::uint8_t { power, geometric, custom };

// Bound map a(i, j) for source level i >= 1 and target level j.
struct KSetSpec {
  AMapForm form = AMapForm::power;  // power: a(i,j) = i^{-j}
  double scale = 1.0;               // geometric: a(i,j) = scale * base^{-i}
  double base = 2.0;
  Mat custom;  // custom: a(i,j) = custom(i, j), rows = source levels

  double a(std::size_t i, std::size_t j) const;

  // a(i+1, j) >= a(i, j)/2 for all levels present; the convexity of the
  // union is only asserted under this condition.
  bool ascending_ok(std::size_t levels) const;
};

struct KjMembership {
  bool member = false;
  bool non_member_certified = false;  // lower bound beats a(i,j) at every i
  std::size_t witness = 0;            // minimal i with upper < a(i,j); 0 = none
  std::size_t level = 0;              // the target level j
  Vec uppers;                         // per-i certified upper bounds, i = 1..N
  Vec lowers;                         // per-i certified lower bounds
  Vec bounds;                         // per-i values a(i, j)
  std::string note;
};

// Minimal-witness membership of A in K_j at truncation.  Ties break to the
// smallest witness by construction of the upward search.
KjMembership kj_membership(const ModelSpace& src, const ModelSpace& dst,
                           const GradedOperator& A, std::size_t j,
                           const KSetSpec& spec = {},
                           const OpNormParams& params = {});

struct HausdorffWitness {
  std::size_t level = 0;            // j
  double n_scale = 0.0;             // N with N*A outside K_j
  Vec direction;                    // the test vector realizing the escape
  bool separation_certified = false;
  std::string note;
};

// Finds (j, N) with kj_membership(N*A, j) false, certified through exact
// evaluations along one direction.  Throws std::invalid_argument for the
// zero operator, which no scaling can separate from itself.
HausdorffWitness hausdorff_witness(const ModelSpace& src, const ModelSpace& dst,
                                   const GradedOperator& A,
                                   const KSetSpec& spec = {},
                                   const OpNormParams& params = {});

}  // namespace gmv
