#include "gmv/bodies.hpp"

#include "gmv/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gmv {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + " must be finite");
}
}  // namespace

const char* body_kind_name(BodyKind k) {
  switch (k) {
    case BodyKind::v_polytope: return "v_polytope";
    case BodyKind::metric_ball: return "metric_ball";
    case BodyKind::gauge_sublevel: return "gauge_sublevel";
    case BodyKind::gauge_box: return "gauge_box";
  }
  return "?";
}

const char* tri_state_name(TriState t) {
  switch (t) {
    case TriState::yes: return "yes";
    case TriState::no: return "no";
    case TriState::undecided: return "undecided";
  }
  return "?";
}

ConvexBody ConvexBody::polytope(const ModelSpace& model, Mat vertices) {
  if (vertices.cols() == 0) throw std::invalid_argument("polytope needs at least one vertex");
  if (vertices.rows() != static_cast<Eigen::Index>(model.dim()))
    throw std::invalid_argument("polytope vertex dimension does not match the model");
  require_finite(vertices, "polytope vertices");
  ConvexBody b;
  b.kind_ = BodyKind::v_polytope;
  b.model_id_ = model.id;
  b.dim_ = model.dim();
  b.vertices_ = std::move(vertices);
  return b;
}

ConvexBody ConvexBody::ball(const ModelSpace& model, Vec center, double radius,
                            double scale) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("ball radius must be positive and finite");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("ball scale must be positive and finite");
  if (center.size() != static_cast<Eigen::Index>(model.dim()))
    throw std::invalid_argument("ball center dimension does not match the model");
  require_finite(center, "ball center");
  ConvexBody b;
  b.kind_ = BodyKind::metric_ball;
  b.model_id_ = model.id;
  b.dim_ = model.dim();
  b.center_ = std::move(center);
  b.radius_ = radius;
  b.scale_ = scale;
  return b;
}

ConvexBody ConvexBody::sublevel(const ModelSpace& model, std::size_t level,
                                double bound) {
  if (level >= model.levels()) throw std::out_of_range("sublevel grading level out of range");
  if (!(bound > 0.0) || !std::isfinite(bound))
    throw std::invalid_argument("sublevel bound must be positive and finite");
  ConvexBody b;
  b.kind_ = BodyKind::gauge_sublevel;
  b.model_id_ = model.id;
  b.dim_ = model.dim();
  b.level_ = level;
  b.bound_ = bound;
  return b;
}

ConvexBody ConvexBody::box(const ModelSpace& model, Vec level_bounds) {
  if (level_bounds.size() != static_cast<Eigen::Index>(model.levels()))
    throw std::invalid_argument("gauge box needs one bound per grading level");
  for (Eigen::Index i = 0; i < level_bounds.size(); ++i)
    if (!(level_bounds[i] > 0.0) || std::isnan(level_bounds[i]))
      throw std::invalid_argument("gauge box bounds must be positive (+inf allowed)");
  ConvexBody b;
  b.kind_ = BodyKind::gauge_box;
  b.model_id_ = model.id;
  b.dim_ = model.dim();
  b.level_bounds_ = std::move(level_bounds);
  return b;
}

const Mat& ConvexBody::vertices() const {
  if (kind_ != BodyKind::v_polytope) throw std::logic_error("not a polytope");
  return vertices_;
}
const Vec& ConvexBody::center() const {
  if (kind_ != BodyKind::metric_ball) throw std::logic_error("not a ball");
  return center_;
}
double ConvexBody::radius() const {
  if (kind_ != BodyKind::metric_ball) throw std::logic_error("not a ball");
  return radius_;
}
double ConvexBody::ball_scale() const {
  if (kind_ != BodyKind::metric_ball) throw std::logic_error("not a ball");
  return scale_;
}
std::size_t ConvexBody::level() const {
  if (kind_ != BodyKind::gauge_sublevel) throw std::logic_error("not a gauge sublevel");
  return level_;
}
double ConvexBody::bound() const {
  if (kind_ != BodyKind::gauge_sublevel) throw std::logic_error("not a gauge sublevel");
  return bound_;
}
const Vec& ConvexBody::level_bounds() const {
  if (kind_ != BodyKind::gauge_box) throw std::logic_error("not a gauge box");
  return level_bounds_;
}

ConvexBody ConvexBody::scaled(double lambda) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("scaling factor must be positive and finite");
  ConvexBody out = *this;
  switch (kind_) {
    case BodyKind::v_polytope:
      out.vertices_ = vertices_ * lambda;
      break;
    case BodyKind::metric_ball:
      out.scale_ = scale_ * lambda;
      break;
    case BodyKind::gauge_sublevel:
      out.bound_ = bound_ * lambda;
      break;
    case BodyKind::gauge_box:
      out.level_bounds_ = level_bounds_ * lambda;
      break;
  }
  return out;
}

std::string ConvexBody::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case BodyKind::v_polytope:
      os << "polytope(" << vertices_.cols() << " vertices)";
      break;
    case BodyKind::metric_ball:
      os << "ball(r=" << radius_;
      if (scale_ != 1.0) os << ", scale=" << scale_;
      if (center_.size() > 0 && center_.cwiseAbs().maxCoeff() > 0.0) os << ", off-center";
      os << ")";
      break;
    case BodyKind::gauge_sublevel:
      os << "sublevel(level=" << level_ << ", bound=" << bound_ << ")";
      break;
    case BodyKind::gauge_box: {
      os << "box[";
      for (Eigen::Index i = 0; i < level_bounds_.size(); ++i)
        os << (i ? "," : "") << level_bounds_[i];
      os << "]";
      break;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

BodyCalc::BodyCalc(const ModelSpace& model) : model_(&model), gauge_(model) {}

void BodyCalc::require_same_model(const ConvexBody& body) const {
  if (body.model_id() != model_->id)
    throw std::invalid_argument("body belongs to model '" + body.model_id() +
                                "', calculator to '" + model_->id + "'");
}

double BodyCalc::tail_weight(std::size_t n) const {
  const auto& w = model_->metric().config().weights;
  if (n >= w.size()) throw std::out_of_range("grading level out of range");
  if (!model_->family().monotonized()) return w[n];
  double s = 0.0;
  for (std::size_t k = n; k < w.size(); ++k) s += w[k];
  return s;
}

double BodyCalc::phi_inverse_or_inf(double y) const {
  const ShapeFn& phi = model_->metric().config().phi;
  if (!(y < phi.sup())) return kInf;
  return phi.inverse(y);
}

// sup ||v||_n over a centered unit-scale metric ball of the given radius.
// The monotone tower gives  d(v) >= W_n * phi(||v||_n)  with W_n the tail
// weight, hence the cap phi^{-1}(radius / W_n); it saturates to +inf once the
// radius reaches the tail mass.
double BodyCalc::ball_cap(double radius, std::size_t n) const {
  const double w = tail_weight(n);
  if (!(w > 0.0)) return kInf;
  return phi_inverse_or_inf(radius / w);
}

double BodyCalc::raw_level_cap(const ConvexBody& body, std::size_t n) const {
  require_same_model(body);
  const auto& fam = model_->family();
  switch (body.kind()) {
    case BodyKind::v_polytope: {
      double best = 0.0;
      for (Eigen::Index c = 0; c < body.vertices().cols(); ++c)
        best = std::max(best, fam.eval(n, body.vertices().col(c)));
      return best;
    }
    case BodyKind::metric_ball: {
      const double inner = ball_cap(body.radius(), n);
      if (!(inner < kInf)) return kInf;
      return body.ball_scale() * (fam.eval(n, body.center()) + inner);
    }
    case BodyKind::gauge_sublevel: {
      // {mu_L <= b} = b * conv(metric ball of radius 2^{-L}); convex hulls do
      // not enlarge seminorm suprema.
      const double inner = ball_cap(std::ldexp(1.0, -static_cast<int>(body.level())), n);
      return inner < kInf ? body.bound() * inner : kInf;
    }
    case BodyKind::gauge_box: {
      double best = kInf;
      const Vec& a = body.level_bounds();
      for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (!(a[i] < kInf)) continue;
        const double r = gauge_.box_radius(static_cast<std::size_t>(i), n);
        if (r < kInf) best = std::min(best, a[i] * r);
      }
      return best;
    }
  }
  return kInf;
}

Vec BodyCalc::cap_profile(const ConvexBody& body) const {
  Vec caps(static_cast<Eigen::Index>(model_->levels()));
  for (std::size_t n = 0; n < model_->levels(); ++n)
    caps[static_cast<Eigen::Index>(n)] = raw_level_cap(body, n);
  // Cross-level comparability: ||v||_n <= C(m, n) ||v||_m holds on the whole
  // space, so a finite cap at a lower level lifts to levels the direct
  // computation cannot reach (the top level of a dyadic-gauge box, say, has
  // no gauge constraint above it).  An ascending pass suffices because each
  // tightened entry is itself available to the levels after it.
  for (Eigen::Index n = 1; n < caps.size(); ++n) {
    for (Eigen::Index m = 0; m < n; ++m) {
      if (!(caps[m] < kInf)) continue;
      const double c = model_->family().cross_level_bound(
          static_cast<std::size_t>(m), static_cast<std::size_t>(n));
      if (c < kInf) caps[n] = std::min(caps[n], c * caps[m]);
    }
  }
  return caps;
}

double BodyCalc::level_cap(const ConvexBody& body, std::size_t n) const {
  if (n >= model_->levels()) throw std::out_of_range("grading level out of range");
  return cap_profile(body)[static_cast<Eigen::Index>(n)];
}

namespace {
// d(v,0) <= sum_n w_n phi(cap_n) for any v whose seminorm profile is bounded
// by caps; phi saturates at its sup for infinite caps, so the sum is always
// finite.
double metric_sup_from_caps(const FrechetMetric& metric, const Vec& caps) {
  if (metric.mode() == FrechetMetric::Mode::sqrt_scalar)
    return caps[0] < kInf ? std::sqrt(caps[0]) : kInf;
  const auto& cfg = metric.config();
  double s = 0.0;
  for (Eigen::Index n = 0; n < caps.size(); ++n) {
    const double t = caps[n] < kInf ? cfg.phi(caps[n]) : cfg.phi.sup();
    s += cfg.weights[static_cast<std::size_t>(n)] * std::min(t, cfg.phi.sup());
  }
  return s;
}
}  // namespace

double BodyCalc::to_zero_sup(const ConvexBody& body) const {
  require_same_model(body);
  const FrechetMetric& metric = model_->metric();
  double best = metric_sup_from_caps(metric, cap_profile(body));
  if (body.kind() == BodyKind::metric_ball) {
    // d(s(c+u)) <= d(sc) + d(su), and a contractive scale cannot grow the
    // second term beyond the radius.
    if (body.ball_scale() <= 1.0) {
      const double center_term = metric.to_zero(body.ball_scale() * body.center());
      best = std::min(best, center_term + body.radius());
    }
  }
  return best;
}

double BodyCalc::diameter_upper(const ConvexBody& body) const {
  require_same_model(body);
  const FrechetMetric& metric = model_->metric();
  double best = 2.0 * to_zero_sup(body);
  // Differences of convex combinations of vertices stay inside the per-level
  // pairwise vertex maxima.
  if (body.kind() == BodyKind::v_polytope) {
    const Mat& v = body.vertices();
    Vec pair_caps(static_cast<Eigen::Index>(model_->levels()));
    for (std::size_t n = 0; n < model_->levels(); ++n) {
      double m = 0.0;
      for (Eigen::Index i = 0; i < v.cols(); ++i)
        for (Eigen::Index j = i + 1; j < v.cols(); ++j)
          m = std::max(m, model_->family().eval(n, v.col(i) - v.col(j)));
      pair_caps[static_cast<Eigen::Index>(n)] = m;
    }
    best = std::min(best, metric_sup_from_caps(metric, pair_caps));
  } else {
    // Differences have profiles bounded by twice the caps.
    Vec caps = cap_profile(body);
    for (Eigen::Index n = 0; n < caps.size(); ++n)
      caps[n] = caps[n] < kInf ? 2.0 * caps[n] : kInf;
    best = std::min(best, metric_sup_from_caps(metric, caps));
  }
  return best;
}

Mat BodyCalc::carrier_points(const ConvexBody& body) const {
  require_same_model(body);
  const auto D = static_cast<Eigen::Index>(model_->dim());
  std::vector<Vec> pts;
  switch (body.kind()) {
    case BodyKind::v_polytope: {
      return body.vertices();
    }
    case BodyKind::metric_ball: {
      const FrechetMetric& metric = model_->metric();
      pts.push_back(body.ball_scale() * body.center());
      for (Eigen::Index i = 0; i < D; ++i) {
        Vec e = Vec::Zero(D);
        e[i] = 1.0;
        for (int k = 6; k >= -120; --k) {
          const double t = std::ldexp(1.0, k);
          if (metric.to_zero(t * e) <= body.radius()) {
            pts.push_back(body.ball_scale() * (body.center() + t * e));
            break;
          }
        }
      }
      break;
    }
    case BodyKind::gauge_sublevel: {
      pts.push_back(Vec::Zero(D));
      for (Eigen::Index i = 0; i < D; ++i) {
        Vec e = Vec::Zero(D);
        e[i] = 1.0;
        const double s = gauge_.star_upper(body.level(), e);
        if (s == 0.0) {
          pts.push_back(e);  // invisible to the gauge: scale 1 is certified
        } else if (s < kInf) {
          // Positive homogeneity of the certified upper gauge places the
          // point strictly inside.
          pts.push_back((body.bound() / s) * (1.0 - 1e-12) * e);
        }
      }
      break;
    }
    case BodyKind::gauge_box: {
      pts.push_back(Vec::Zero(D));
      const Vec& a = body.level_bounds();
      for (Eigen::Index i = 0; i < D; ++i) {
        Vec e = Vec::Zero(D);
        e[i] = 1.0;
        double g = 0.0;
        for (Eigen::Index l = 0; l < a.size(); ++l) {
          if (!(a[l] < kInf)) continue;
          g = std::max(g, gauge_.box_lower(static_cast<std::size_t>(l), e) / a[l]);
        }
        if (g == 0.0)
          pts.push_back(e);
        else
          pts.push_back((1.0 - 1e-12) / g * e);
      }
      break;
    }
  }
  Mat out(D, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t c = 0; c < pts.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = pts[c];
  return out;
}

BodyCheck BodyCalc::contains_point(const ConvexBody& body, const Vec& p) const {
  require_same_model(body);
  BodyCheck r;
  switch (body.kind()) {
    case BodyKind::v_polytope: {
      const bool in = in_convex_hull(body.vertices(), p);
      r.state = in ? TriState::yes : TriState::no;
      r.note = "hull feasibility program";
      return r;
    }
    case BodyKind::metric_ball: {
      const Vec u = p / body.ball_scale() - body.center();
      const double d = model_->metric().to_zero(u);
      r.state = d <= body.radius() ? TriState::yes : TriState::no;
      r.margin = std::abs(body.radius() - d);
      r.note = "exact metric evaluation";
      return r;
    }
    case BodyKind::gauge_sublevel: {
      const double hi = gauge_.star_upper(body.level(), p);
      if (hi <= body.bound()) {
        r.state = TriState::yes;
        r.margin = body.bound() - hi;
        r.note = "upper gauge below the bound";
        return r;
      }
      const double lo = gauge_.box_lower(body.level(), p);
      if (lo > body.bound()) {
        r.state = TriState::no;
        r.margin = lo - body.bound();
        r.note = "lower gauge above the bound";
        return r;
      }
      r.note = "gauge bracket straddles the bound";
      return r;
    }
    case BodyKind::gauge_box: {
      const Vec& a = body.level_bounds();
      double slack = kInf;
      for (Eigen::Index l = 0; l < a.size(); ++l) {
        if (!(a[l] < kInf)) continue;
        const double g = gauge_.box_lower(static_cast<std::size_t>(l), p);
        if (g > a[l]) {
          r.state = TriState::no;
          r.margin = g - a[l];
          r.note = "lower-gauge coordinate exceeds its bound";
          return r;
        }
        slack = std::min(slack, a[l] - g);
      }
      r.state = TriState::yes;
      r.margin = slack < kInf ? slack : 0.0;
      r.note = "exact lower-gauge box membership";
      return r;
    }
  }
  return r;
}

BodyCheck BodyCalc::contained_in(const ConvexBody& inner, const ConvexBody& outer) const {
  require_same_model(inner);
  require_same_model(outer);
  BodyCheck r;

  // Polytope inner: vertices decide against every convex outer; against balls
  // the subadditive to-zero bound certifies yes and any excluded vertex
  // certifies no.
  if (inner.kind() == BodyKind::v_polytope) {
    const Mat& v = inner.vertices();
    if (outer.kind() == BodyKind::metric_ball) {
      Mat shifted = v;
      shifted.colwise() -= (outer.ball_scale() * outer.center()).eval();
      const ConvexBody moved = ConvexBody::polytope(*model_, shifted)
                                   .scaled(1.0 / outer.ball_scale());
      const double z = to_zero_sup(moved);
      if (z <= outer.radius()) {
        r.state = TriState::yes;
        r.margin = outer.radius() - z;
        r.note = "subadditive hull bound inside the ball";
        return r;
      }
      for (Eigen::Index c = 0; c < v.cols(); ++c) {
        const BodyCheck pc = contains_point(outer, v.col(c));
        if (pc.state == TriState::no) {
          r.state = TriState::no;
          r.margin = pc.margin;
          r.note = "vertex escapes the ball";
          return r;
        }
      }
      r.note = "ball bound inconclusive on the hull";
      return r;
    }
    double slack = kInf;
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      const BodyCheck pc = contains_point(outer, v.col(c));
      if (pc.state == TriState::no) {
        r.state = TriState::no;
        r.margin = pc.margin;
        r.note = std::string("vertex outside ") + body_kind_name(outer.kind());
        return r;
      }
      if (pc.state == TriState::undecided) {
        r.note = "vertex membership bracket inconclusive";
        return r;
      }
      slack = std::min(slack, pc.margin);
    }
    r.state = TriState::yes;
    r.margin = slack < kInf ? slack : 0.0;
    r.note = "all vertices inside a convex outer body";
    return r;
  }

  // Generic yes-route: the cap profile of the inner body pushed through the
  // outer body's profile-monotone membership functional.
  const Vec caps = cap_profile(inner);
  const bool caps_finite = [&] {
    for (Eigen::Index i = 0; i < caps.size(); ++i)
      if (!(caps[i] < kInf)) return false;
    return true;
  }();
  switch (outer.kind()) {
    case BodyKind::metric_ball: {
      const bool centered =
          outer.center().size() == 0 || outer.center().cwiseAbs().maxCoeff() == 0.0;
      if (centered && caps_finite) {
        const double z =
            metric_sup_from_caps(model_->metric(), caps / outer.ball_scale());
        if (z <= outer.radius()) {
          r.state = TriState::yes;
          r.margin = outer.radius() - z;
          r.note = "cap profile inside the centered ball";
          return r;
        }
      }
      // Same-kind shortcut: centered balls nest when both parameters do.
      if (inner.kind() == BodyKind::metric_ball && centered &&
          (inner.center().size() == 0 || inner.center().cwiseAbs().maxCoeff() == 0.0) &&
          inner.ball_scale() <= outer.ball_scale() && inner.radius() <= outer.radius()) {
        r.state = TriState::yes;
        r.margin = outer.radius() - inner.radius();
        r.note = "contractive scale and smaller radius nest";
        return r;
      }
      break;
    }
    case BodyKind::gauge_box: {
      const Vec& a = outer.level_bounds();
      double slack = kInf;
      bool ok = true;
      for (Eigen::Index l = 0; l < a.size() && ok; ++l) {
        if (!(a[l] < kInf)) continue;
        const double g = gauge_.box_lower_profile(static_cast<std::size_t>(l), caps);
        if (!(g <= a[l])) ok = false;
        else slack = std::min(slack, a[l] - g);
      }
      if (ok) {
        r.state = TriState::yes;
        r.margin = slack < kInf ? slack : 0.0;
        r.note = "cap profile satisfies every box bound";
        return r;
      }
      break;
    }
    case BodyKind::gauge_sublevel: {
      if (caps_finite) {
        const double g = gauge_.star_upper_profile(outer.level(), caps);
        if (g <= outer.bound()) {
          r.state = TriState::yes;
          r.margin = outer.bound() - g;
          r.note = "cap profile under the sublevel bound";
          return r;
        }
      }
      break;
    }
    case BodyKind::v_polytope:
      break;  // no cap route into a polytope
  }

  // Generic no-route: a certified member of the inner body certified outside
  // the outer body.
  const Mat pts = carrier_points(inner);
  for (Eigen::Index c = 0; c < pts.cols(); ++c) {
    const BodyCheck pc = contains_point(outer, pts.col(c));
    if (pc.state == TriState::no) {
      r.state = TriState::no;
      r.margin = pc.margin;
      r.note = "carrier point escapes the outer body";
      return r;
    }
  }
  r.note = "one-sided bounds do not separate";
  return r;
}

}  // namespace gmv
