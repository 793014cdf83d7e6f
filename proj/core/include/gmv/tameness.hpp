// Tameness certification for graded operators.
//
// A certificate of order r and base b records verified upper bounds
//     ||A v||_n <= K_n ||v||_{n+r}        for n = b .. truncation
// (hamilton variant), or the same ladder for the sampled dyadic hull norms
// (dyadic variant).  Certificates carry the models' checksums and every seed
// involved, so they can be re-checked later against freshly sampled lower
// bounds -- the recheck can only probe the bounds from below, never "confirm"
// them outright, and says so.
//
// Algebra on certificates:
//   * normalize_basis: trade base for order, (r, b) -> (r + b, 0).  The
//     hamilton bounds transport as K'_n = K_{max(n,b)}; the dyadic bounds
//     pick up the exact factor 2^{-b} from the doubling laws.
//   * compose_certified: bounds for B after A multiply level-wise,
//     K^{BA}_n = K^B_n * K^A_{n + r_B}, with order r_A + r_B.  This is a
//     theorem for the hamilton ladders; for sampled dyadic ladders it holds
//     for the underlying hull quantities and the result is marked as such.
//
// trb_metric is the graded distance between two certified operators of a
// common order/base: sum_M w_M phi(N_M(A - B)) over target levels M, where
// N_M is the *lower* (box) end of the sampled dyadic norm at (M + r, M).
// Over a fixed sample set that end is a seminorm of the matrix, so this is a
// genuine (pseudo)metric -- the triangle inequality holds exactly.
//
// eval_modulus probes joint continuity of (E, v) |-> E v at (0, 0): it draws
// operators of trb-size ~ delta and vectors of metric size ~ 2^{-n-r}, and
// counts violations of d(E v, 0) <= 2^{-n} at delta = 2^{-n} phi(1) / 2.
//
// nontameness_scan builds a family of operators indexed by a size parameter,
// collects certified *lower* bounds on the base-level norms, and fits the
// growth; a clearly positive log-log slope on strictly increasing lower
// bounds is evidence that no uniform ladder exists.

#pragma once

#include "gmv/op_norm.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gmv {

struct TamenessCertificate {
  std::string operator_id;
  std::string source_model, target_model;
  std::uint64_t source_checksum = 0, target_checksum = 0;
  std::size_t source_levels = 0, target_levels = 0;

  std::size_t order = 0;  // r
  std::size_t base = 0;   // b
  OpNormVariant variant = OpNormVariant::hamilton;
  std::vector<double> bounds;        // K_n for n = base .. truncation
  std::vector<double> lower_hints;   // sampled lower ends, same indexing
  std::vector<std::string> methods;  // per-level bound provenance
  std::string backend;               // "exact_euclidean" if every level bound
                                     // is exact, "sampled" otherwise
  std::size_t truncation = 0;        // largest certified target level
  std::uint64_t seed = 0;
  bool valid = false;  // all bounds finite
  std::string note;

  double bound_at(std::size_t n) const;  // K_n, n in [base, truncation]
};

TamenessCertificate certify_tame(const ModelSpace& src, const ModelSpace& dst,
                                 const GradedOperator& A, std::size_t r,
                                 std::size_t b,
                                 OpNormVariant variant = OpNormVariant::hamilton,
                                 const OpNormParams& params = {});

// Fresh-seed probe of an existing certificate: new sampled lower bounds must
// stay below every recorded K_n (up to tol), and the models must match the
// recorded checksums.
struct RecheckReport {
  bool checksums_match = false;
  bool bounds_respected = false;
  double worst_excess = 0.0;  // max over levels of (fresh lower - K_n)
  std::size_t levels_checked = 0;
  bool ok() const { return checksums_match && bounds_respected; }
};
RecheckReport recheck_certificate(const ModelSpace& src, const ModelSpace& dst,
                                  const GradedOperator& A,
                                  const TamenessCertificate& cert,
                                  std::uint64_t fresh_seed, double tol = 1e-9);

TamenessCertificate normalize_basis(const TamenessCertificate& cert);

TamenessCertificate compose_certified(const TamenessCertificate& first,
                                      const TamenessCertificate& second);

// Graded operator distance over the engine's fixed sample set; requires both
// certificates valid with order <= r and base <= b.
double trb_metric(const DyadicNormEngine& engine, const GradedOperator& A,
                  const TamenessCertificate& cert_a, const GradedOperator& B,
                  const TamenessCertificate& cert_b, std::size_t r, std::size_t b);

struct ModulusReport {
  std::size_t level = 0;   // n
  std::size_t order = 0;   // r
  double delta = 0.0;      // operator-size budget 2^{-n} phi(1) / 2
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max over trials of d(Ev, 0) / 2^{-n}
  std::uint64_t seed = 0;
  bool ok() const { return violations == 0; }
};
ModulusReport eval_modulus(const ModelSpace& model, std::size_t n, std::size_t r,
                           std::size_t trials, std::uint64_t seed,
                           std::size_t sampler_dirs_per_level = 8);

// Family scan: builder(N) yields a model and an operator on it; the scan
// records certified lower bounds on ||A_N||_{r -> 0} and fits their log-log
// growth against N.
struct DivergenceEvidence {
  std::vector<std::size_t> sizes;
  std::vector<double> lower_bounds;
  double slope = 0.0;  // least-squares slope of log(bound) vs log(size)
  bool strictly_increasing = false;
  std::string verdict;  // "diverging_fit" | "bounded_fit"
  std::uint64_t seed = 0;
};
DivergenceEvidence nontameness_scan(
    const std::function<std::pair<ModelSpace, GradedOperator>(std::size_t)>& builder,
    const std::vector<std::size_t>& sizes, std::size_t r,
    const OpNormParams& params = {});

// Nonlinear probe: per-level growth constants of a (possibly nonlinear) map
// under two normalizations.  additive_one divides by 1 + gauge(a - u);
// homogeneous divides by gauge(a - u) alone, which diverges whenever the map
// is not Lipschitz-at-0 along the sampled rays.  No verdict is attached; the
// constants are the data.
struct NonlinearProbeReport {
  enum class Mode : std::uint8_t { additive_one, homogeneous };
  Mode mode = Mode::additive_one;
  std::vector<double> constants;  // C_n per target level
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};
NonlinearProbeReport nonlinear_tameness_probe(
    const ModelSpace& model, const std::function<Vec(const Vec&)>& f,
    std::size_t r, NonlinearProbeReport::Mode mode, std::size_t samples,
    std::uint64_t seed);

}  // namespace gmv
