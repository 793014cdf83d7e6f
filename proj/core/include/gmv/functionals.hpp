#pragma once

// Linear functionals constructed against the grading: dominated extensions
// (a functional pinned at one vector and kept under a scaled tower seminorm),
// functionals unbounded on metric balls, and the evaluation-discontinuity
// ladder that combines both with metric bump functions.
//
// Domination is decided exactly for max-form towers: the set of functionals
// dominated by beta * mu_L is beta times the convex hull of the tower's
// (+/-) evaluation rows, so pinning f(w) = c becomes a one-constraint linear
// program minimizing the hull mass.  The minimal mass is |c| / mu_L(w) —
// the classical extension bound — and feasibility is exactly |c| <= beta*mu_L(w).

#include "gmv/model.hpp"
#include "gmv/operator.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace gmv {

// p(x) = scale * mu_level(x), the dominating sublinear functional.
struct DualBound {
  std::size_t level = 0;
  double scale = 1.0;
};

struct ExtensionReport {
  bool feasible = false;
  Vec functional;            // lambda; the functional is x -> lambda . x
  double needed = 0.0;       // minimal dominating scale: |c| / mu_L(w)
  double bound = 0.0;        // the requested scale
  double value_at_w = 0.0;   // lambda . w, equals c when feasible
  double max_violation = 0.0;// max of f(x) - p(x) over all checks
  std::size_t checks = 0;
  std::string note;
};

// Functional with f(w) = c and f <= p pointwise, when one exists at this
// truncation; otherwise an explicit infeasibility report.  Requires the
// tower levels 0..p.level to be max-form (all built-in models are).
ExtensionReport dominated_extension(const ModelSpace& model, const Vec& w,
                                    double c, const DualBound& p,
                                    std::uint64_t seed = 0x65787431ull,
                                    std::size_t samples = 10000);

struct UnboundedLadder {
  Vec functional;              // lambda of the full sum
  std::vector<Vec> witnesses;  // v_n inside the eps-ball
  Vec witness_dists;           // d(v_n, 0) < eps
  Vec values;                  // f(v_n) = 2^n
  Vec stage_norms;             // top-level norm bound of each partial sum
  std::string note;
};

// A functional whose values on the eps-ball are unbounded: disjoint
// coordinate terms score 2^n on ball members v_n, while every partial sum
// stays continuous (finite top-level norm).  Throws when the model has
// fewer coordinates than requested terms.
UnboundedLadder unbounded_functional(const ModelSpace& model, double eps,
                                     std::size_t n_terms = 3);

struct GadgetRung {
  std::size_t index = 0;  // rung number n (spaced by 4)
  Vec w;                  // the point w_n
  double dist = 0.0;      // d(w_n, 0) <= 2^{-n}
  double value = 0.0;     // E(w_n) > n
  double psi_at_w = 0.0;  // bump value at its own center: exactly 1
  Vec functional;         // f_n with f_n(w_n) = n + 1
};

struct GadgetReport {
  std::vector<GadgetRung> rungs;
  bool supports_disjoint = false;
  double min_gap = 0.0;   // min over pairs of d(w_i,w_j) - (r_i + r_j)
  double far_value = 0.0; // E at a point away from every bump: 0
  std::string note;
};

// E(x) = sum_n psi_n(x) f_n(x) with metric-ramp bumps psi_n supported on
// balls around the w_n.  E(w_n) = n + 1 > n while d(w_n, 0) <= 2^{-n}: the
// ladder realizes a map discontinuous at 0 along a null sequence.
class EvalGadget {
 public:
  explicit EvalGadget(const ModelSpace& model, std::size_t rung_count = 5);

  double eval(const Vec& x) const;
  double bump(std::size_t i, const Vec& x) const;         // psi at rung i
  double bump_radius(std::size_t i) const;                // support radius
  const GadgetReport& report() const { return report_; }
  const std::vector<GadgetRung>& rungs() const { return rungs_; }

 private:
  const ModelSpace* model_;
  std::vector<GadgetRung> rungs_;
  GadgetReport report_;
};

GadgetReport eval_discontinuity_gadget(const ModelSpace& model,
                                       std::size_t rung_count = 5);

}  // namespace gmv
