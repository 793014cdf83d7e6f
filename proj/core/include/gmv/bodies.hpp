// Convex bodies over a graded model space, with certified set oracles.
//
// Four kinds of body:
//   * v_polytope:     convex hull of an explicit vertex list;
//   * metric_ball:    {scale * (center + u) : d(u, 0) <= radius} — circled and
//                     star-shaped but NOT convex in general, so balls are
//                     never used as convex envelopes; every estimate about
//                     them goes through subadditive bounds;
//   * gauge_sublevel: {v : mu_n(v) <= bound}, one dyadic-gauge level, always
//                     convex (the gauge is a Minkowski functional of a convex
//                     hull);
//   * gauge_box:      {v : L_i(v) <= a_i for every level i} where L_i is the
//                     certified lower gauge — a subadditive positively
//                     homogeneous functional, so the box is convex and
//                     membership is exactly decidable.
//
// BodyCalc bundles the model, its metric and its gauge once and provides the
// oracles every consumer (palette checks, absorption, Arzela-Ascoli boxes)
// builds on:
//   level_cap      certified upper bound for sup of a seminorm over the body
//   to_zero_sup    certified upper bound for sup of d(., 0) over the body
//   diameter_upper certified upper bound for the metric diameter
//   carrier_points concrete points certified to lie in the body
//   contains_point / contained_in   certified tri-state set predicates
//
// Everything is an upper/lower *bound* with an explicit direction; a result
// of `undecided` means the available one-sided bounds do not separate.

#pragma once

#include "gmv/gauge.hpp"
#include "gmv/model.hpp"

#include <string>
#include <vector>

namespace gmv {

enum class BodyKind : std::uint8_t {
  v_polytope,
  metric_ball,
  gauge_sublevel,
  gauge_box,
};

const char* body_kind_name(BodyKind k);

class ConvexBody {
 public:
  // Vertex columns; at least one vertex, finite entries.
  static ConvexBody polytope(const ModelSpace& model, Mat vertices);
  // {scale * (center + u) : d(u,0) <= radius)}, radius > 0, scale > 0.
  static ConvexBody ball(const ModelSpace& model, Vec center, double radius,
                         double scale = 1.0);
  // {v : mu_level(v) <= bound}, bound > 0.
  static ConvexBody sublevel(const ModelSpace& model, std::size_t level,
                             double bound);
  // {v : L_i(v) <= bounds[i] for all i}; bounds positive (+inf = unconstrained).
  static ConvexBody box(const ModelSpace& model, Vec level_bounds);

  BodyKind kind() const { return kind_; }
  const std::string& model_id() const { return model_id_; }
  std::size_t dim() const { return dim_; }

  const Mat& vertices() const;      // v_polytope
  const Vec& center() const;        // metric_ball
  double radius() const;            // metric_ball
  double ball_scale() const;        // metric_ball
  std::size_t level() const;        // gauge_sublevel
  double bound() const;             // gauge_sublevel
  const Vec& level_bounds() const;  // gauge_box

  // The set {lambda * v : v in body}.  Exact representation for every kind:
  // polytopes scale vertices, gauge bodies scale bounds (their functionals
  // are positively homogeneous), balls fold lambda into the scale factor.
  ConvexBody scaled(double lambda) const;

  // One-line human description, e.g. "ball(r=0.25)" or "box[0.5,1,2]".
  std::string describe() const;

 private:
  ConvexBody() = default;

  BodyKind kind_ = BodyKind::v_polytope;
  std::string model_id_;
  std::size_t dim_ = 0;

  Mat vertices_;       // v_polytope
  Vec center_;         // metric_ball
  double radius_ = 0;  // metric_ball
  double scale_ = 1;   // metric_ball
  std::size_t level_ = 0;  // gauge_sublevel
  double bound_ = 0;       // gauge_sublevel
  Vec level_bounds_;       // gauge_box
};

enum class TriState : std::uint8_t { yes, no, undecided };
const char* tri_state_name(TriState t);

struct BodyCheck {
  TriState state = TriState::undecided;
  double margin = 0.0;  // slack of the deciding inequality, when one decided
  std::string note;     // which oracle decided (or why none could)
};

class BodyCalc {
 public:
  explicit BodyCalc(const ModelSpace& model);

  const ModelSpace& model() const { return *model_; }
  const DyadicGauge& gauge() const { return gauge_; }

  // Certified upper bound for sup{ ||v||_n : v in body }; +inf when the body
  // is unconstrained at that depth (fat balls, shallow gauge bodies).
  double level_cap(const ConvexBody& body, std::size_t n) const;
  Vec cap_profile(const ConvexBody& body) const;  // level_cap at every level

  // Certified upper bound for sup{ d(v, 0) : v in body }.
  double to_zero_sup(const ConvexBody& body) const;

  // Certified upper bound for sup{ d(u, v) : u, v in body }.
  double diameter_upper(const ConvexBody& body) const;

  // Points certified to lie in the body (columns).  Polytopes return their
  // vertices; balls return the center plus scaled axis points found by exact
  // metric evaluation; gauge bodies return axis points placed by the exact
  // homogeneity of their defining functionals.  Always nonempty.
  Mat carrier_points(const ConvexBody& body) const;

  BodyCheck contains_point(const ConvexBody& body, const Vec& p) const;

  // Certified inclusion inner \subseteq outer.  Decides the combinations the
  // library needs (polytope into anything, gauge bodies into gauge bodies
  // and balls, centered balls into balls/boxes/sublevels); anything else is
  // reported undecided rather than guessed.
  BodyCheck contained_in(const ConvexBody& inner, const ConvexBody& outer) const;

  // Sum of the grading weights from level n to the top (monotone towers);
  // used by the tail bound on metric-ball seminorm caps.
  double tail_weight(std::size_t n) const;

  // Largest t with phi(t) <= y (phi^{-1} capped at the shape function's sup);
  // +inf when y reaches the sup.
  double phi_inverse_or_inf(double y) const;

 private:
  const ModelSpace* model_ = nullptr;
  DyadicGauge gauge_;

  void require_same_model(const ConvexBody& body) const;
  double ball_cap(double radius, std::size_t n) const;  // centered, scale 1

  // Per-kind cap before the cross-level comparability pass in cap_profile.
  double raw_level_cap(const ConvexBody& body, std::size_t n) const;
};

}  // namespace gmv
