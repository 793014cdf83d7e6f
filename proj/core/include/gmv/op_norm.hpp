// Graded operator norms, two variants:
//
//  * hamilton:  sup { ||A v||_n : ||v||_m <= 1 }  with the monotonized tower
//    semantics on both sides.  The target side decomposes exactly
//    (sup of a max is the max of sups), so each raw target level is handled
//    against the source constraint separately:
//      - diagonal weighted-max source + max-form target: exact row-sum norm;
//      - Euclidean source or target: exact via (generalized) singular values
//        after restricting to the constraint's row space, with a kernel check
//        (source kernel not annihilated -> the norm is exactly +infinity);
//      - stacked max-form source + max-form target: structural block matching
//        first (a target block that is a scalar multiple of a source block
//        certifies that scalar as the bound -- this is what makes pure
//        differentiation land exactly on 1), else a least-squares
//        representation bound in row-space coordinates;
//      - mixed towers: the constraint set is an intersection, so the minimum
//        of the single-level bounds is a certified upper bound.
//    Non-exact paths report a bracket: certified upper + sampled lower.
//
//  * dyadic:  ||A||_{m,n} = gauge at target level n of A(sampled c(m)), the
//    finite-truncation definition of the hull-gauge norm.  Sample sets nest
//    (samples(m) contains 2 * samples(m+1) exactly), gauges scale exactly by
//    powers of two, and level tables are monotonized upward, so both dyadic
//    scaling laws
//        ||A||_{m,n+1} >= 2 ||A||_{m,n}   and   ||A||_{i+1,j} <= ||A||_{i,j}/2
//    hold exactly on both bracket ends of computed values.  Decisions that
//    need subadditivity (membership, trb metrics, convexity checks) must use
//    the lower end, which is a genuine seminorm of the matrix; the star upper
//    end is reported alongside.

#pragma once

#include "gmv/gauge.hpp"
#include "gmv/operator.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gmv {

enum class OpNormVariant : std::uint8_t { hamilton, dyadic };

struct OpNormParams {
  std::uint64_t seed = 0x676d7631ull;
  std::size_t dirs_per_level = 0;  // 0 = default budget 2*D*(lev+4) per level
  std::size_t lower_samples = 256; // random directions for sampled lower bounds
};

struct OpNormResult {
  GaugeValue value;
  std::size_t source_level = 0;
  std::size_t target_level = 0;
  OpNormVariant variant = OpNormVariant::hamilton;
  std::string method;
};

// --- hamilton variant -------------------------------------------------------

OpNormResult hamilton_norm(const ModelSpace& src, const ModelSpace& dst,
                           const GradedOperator& A, std::size_t m, std::size_t n,
                           const OpNormParams& params = {});

// All pairs (m = n + r, n) for n = b..top in one pass, sharing the sampled
// direction table across levels.  top is the largest n with n + r a valid
// source level and n a valid target level.
std::vector<OpNormResult> hamilton_norm_ladder(const ModelSpace& src,
                                               const ModelSpace& dst,
                                               const GradedOperator& A, std::size_t r,
                                               std::size_t b,
                                               const OpNormParams& params = {});

// --- dyadic variant ---------------------------------------------------------

class DyadicNormEngine {
 public:
  // Models must outlive the engine.  max_source_level bounds the m range.
  DyadicNormEngine(const ModelSpace& src, const ModelSpace& dst,
                   std::size_t max_source_level, OpNormParams params = {});

  struct NormTable {
    Mat lower;  // (max_m+1) x (max_n+1)
    Mat upper;
  };
  // Both ends for every pair m <= max_m, n <= max_n, dyadic laws enforced.
  NormTable norm_table(const GradedOperator& A, std::size_t max_m,
                       std::size_t max_n) const;

  OpNormResult norm(const GradedOperator& A, std::size_t m, std::size_t n) const;

  // Lower (convex, subadditive-in-A) end only; skips all ray bisections.
  // extra_directions inject additional certified ball points (scaled to the
  // per-level boundary along their rays) into the sampled source sets.
  double box_lower_norm(const GradedOperator& A, std::size_t m, std::size_t n,
                        const std::vector<Vec>& extra_directions = {}) const;

  // box_lower_norm at every pair (M + r, M) for M = b .. top in one pass over
  // the sample blocks (the workhorse of the graded operator metric).
  Vec box_lower_ladder(const GradedOperator& A, std::size_t r, std::size_t b,
                       std::size_t top) const;

  const BallSampler& sampler() const { return sampler_; }
  const ModelSpace& source() const { return *src_; }
  const ModelSpace& target() const { return *dst_; }
  const DyadicGauge& target_gauge() const { return gauge_; }
  const OpNormParams& params() const { return params_; }
  std::size_t max_source_level() const { return sampler_.max_level(); }

 private:
  const ModelSpace* src_;
  const ModelSpace* dst_;
  OpNormParams params_;
  BallSampler sampler_;
  DyadicGauge gauge_;
  DyadicGauge source_gauge_;
};

OpNormResult op_norm(const ModelSpace& src, const ModelSpace& dst,
                     const GradedOperator& A, std::size_t m, std::size_t n,
                     OpNormVariant variant, const OpNormParams& params = {});

}  // namespace gmv
