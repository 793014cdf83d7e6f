// Palette families: finite generating samples of bodies together with the
// membership semantics that make the closure axioms checkable at truncation.
//
// A palette is an axiom system over a collection of sets:
//   1. images of members under each probe operator are level-bounded;
//   2. unions of members are members;
//   3. positive scalings of members are members;
//   4. closed convex hulls of a member with one extra point are members;
//   5. the union of all members spans the space (density surrogate).
//
// A PaletteFamily carries finitely many generator bodies, closure flags, a
// scaling discipline and a membership rule.  The rule is what "members" means
// at truncation:
//   * bounded_caps:     every seminorm cap of the set is finite (the bounded
//                       families: simplicial, compact, s-bounded variants);
//   * diameter_capped:  certified metric diameter <= s (the B_s family);
//   * tame_caps:        caps grow at most like D * alpha^n for a dyadic D;
//   * listed_only:      exactly the listed generators — no closure at all
//                       (foil families used to exercise failure reporting).
//
// The axiom checker never claims more than the oracles certify: every pass is
// backed by a finite-cap/diameter/rank certificate and every failure names
// the offending pair, probe, or level.  Scaling quantification is explicit:
// scale-invariant families check a dyadic sample of all lambda > 0, while
// diameter-capped families check contractive lambda <= 1 only (the larger
// range would be false for them) — the per-axiom detail strings record which
// range was exercised.

#pragma once

#include "gmv/bodies.hpp"
#include "gmv/op_norm.hpp"
#include "gmv/operator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gmv {

enum class ScalingMode : std::uint8_t { none, contractive, all };
const char* scaling_mode_name(ScalingMode m);

enum class MembershipRule : std::uint8_t {
  bounded_caps,
  diameter_capped,
  tame_caps,
  listed_only,
};
const char* membership_rule_name(MembershipRule r);

struct ClosureFlags {
  bool unions = true;
  bool scalings = true;
  bool hulls = true;
};

struct PaletteFamily {
  std::string name;  // builtin tag or free-form label
  std::string model_id;
  std::vector<ConvexBody> generators;
  ClosureFlags flags;
  ScalingMode scaling = ScalingMode::all;
  MembershipRule rule = MembershipRule::bounded_caps;
  double diameter_cap = 0.0;  // rule == diameter_capped
  double alpha = 2.0;         // rule == tame_caps
  std::string note;
};

struct PaletteParams {
  double s = 1.0;           // diameter cap for B_s
  double alpha = 2.0;       // growth base for T_alpha
  std::size_t ladder = 6;   // how many dyadic generator scales to install
};

// Builtin names: FC, F, CC, C, PC, S, B, B_s, T_alpha ("T_2" etc. accepted).
PaletteFamily builtin_palette(const std::string& name, const ModelSpace& model,
                              const PaletteParams& params = {});

// A probe operator for axiom 1, mapping the family's model into `target`.
struct PaletteProbe {
  std::string label;
  const ModelSpace* target = nullptr;
  GradedOperator op;
};

struct PaletteCheckParams {
  OpNormParams norm;              // backend for image-cap estimates
  std::size_t hull_points = 12;   // budget of hull probe points per generator
  double rank_tol = 1e-10;        // axiom-5 span rank tolerance
  std::vector<Vec> extra_hull_points;  // additional axiom-4 probe points
};

struct AxiomReport {
  int axiom = 0;
  bool passed = false;
  std::string detail;                 // what was checked, which lambda range
  std::vector<std::string> failures;  // offending pair / probe / level
};

struct PaletteCheckReport {
  std::string palette;
  std::vector<AxiomReport> axioms;  // entries 1..5 in order
  bool all_passed() const;
  const AxiomReport& axiom(int k) const;  // k in 1..5
};

PaletteCheckReport check_axioms(const PaletteFamily& family,
                                const ModelSpace& model,
                                const std::vector<PaletteProbe>& probes,
                                const PaletteCheckParams& params = {});

// Membership of a single body under the family's rule (the same oracle the
// axiom checker uses on composites).  yes/no are certified; undecided means
// the one-sided bounds did not separate.
BodyCheck palette_membership(const PaletteFamily& family, const ModelSpace& model,
                             const ConvexBody& body);

// Strongness: for each dyadic ball B_{2^{-n}}, n = 0..N, search generators
// scaled by admissible powers of two for a member with certified sup-distance
// to zero at most 2^{-n}.
struct StrongnessWitness {
  std::size_t level = 0;      // n
  std::size_t generator = 0;  // index into family.generators
  double lambda = 1.0;
  double reach = 0.0;  // certified sup of d(.,0) over the scaled body
};

struct StrongnessReport {
  bool strong = false;
  std::vector<StrongnessWitness> witnesses;  // one per satisfied level
  std::size_t first_failure = 0;             // valid when !strong
  bool failure_certified = false;  // a carrier pair proves no fit could exist
  std::string note;
};

StrongnessReport is_strong(const PaletteFamily& family, const ModelSpace& model,
                           std::size_t scaling_depth = 40);

// Does A map the body P into the open body O?  Certified where the oracles
// allow: polytope P reduces to vertices; gauge-body P pushes its cap profile
// through A's level bounds; ball P falls back to certified member samples
// (confidence = fraction of budget that landed strictly inside).
struct MapsIntoReport {
  TriState state = TriState::undecided;
  bool certified = false;
  double margin = 0.0;
  double confidence = 0.0;  // sampled paths only
  std::string note;
};

MapsIntoReport maps_into(const ModelSpace& src, const ModelSpace& dst,
                         const GradedOperator& A, const ConvexBody& P,
                         const ConvexBody& O, const OpNormParams& params = {});

// Finite point set S: is sup of the level-n gauge over S below D * alpha^n at
// every level?  `tame` follows the certified upper gauges (the defining
// check); `certified_not` is set when a lower gauge already exceeds a bound.
struct TameSetReport {
  bool tame = false;
  bool certified_not = false;
  std::size_t witness_level = 0;
  Vec uppers;  // per level: sup over S of the upper gauge
  Vec lowers;  // per level: sup over S of the lower gauge
};

TameSetReport is_tame_set(const ModelSpace& model, const Mat& points,
                          double alpha, double D);

// Arzela-Ascoli box {v : mu_i(v) < a_i for all i}, represented from outside
// by the certified lower gauge (the returned body contains the true box).
// The report carries the level caps and a diameter bound; `all_finite` is the
// truncation surrogate for "closed + bounded, hence compact".
struct AaBoxReport {
  ConvexBody body;
  Vec caps;
  double diameter_upper = 0.0;
  bool all_finite = false;
  std::string note;
};

AaBoxReport aa_box(const ModelSpace& model, const Vec& a);

// Point membership in the true box {v : mu_i(v) < a_i}: certified via upper
// gauges (yes when every upper gauge is strictly below its bound).
BodyCheck aa_box_contains(const ModelSpace& model, const Vec& a, const Vec& v);

// Minimal chain index whose element absorbs every generator of the family
// under some dyadic scaling lambda <= 2^lambda_cap_log2.  The chain must be
// ascending (certified inclusions), otherwise the call throws.
struct AbsorptionReport {
  bool found = false;
  std::size_t index = 0;  // 1-based chain position
  double lambda = 0.0;    // scaling that absorbed the hardest generator
  std::string failure;    // describes the unabsorbed generator when !found
};

AbsorptionReport absorption_index(const ModelSpace& model,
                                  const std::vector<ConvexBody>& chain,
                                  const PaletteFamily& family,
                                  int lambda_cap_log2 = 40);

}  // namespace gmv
