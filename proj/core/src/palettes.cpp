#include "gmv/palettes.hpp"

#include "gmv/linprog.hpp"
#include "gmv/rng.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gmv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// d(v,0) <= sum_n w_n phi(caps_n) for any profile dominated by caps.
double metric_cap_sum(const ModelSpace& model, const Vec& caps) {
  const FrechetMetric& metric = model.metric();
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

// A finite union (or, when hulled, closed convex hull) of bodies and points;
// the axiom checker builds these and pushes them through the family rule.
struct Composite {
  std::vector<const ConvexBody*> parts;
  std::vector<Vec> points;
  bool hulled = false;
};

struct SetBounds {
  Vec caps;           // per-level seminorm caps
  double zsup = 0.0;  // sup of d(.,0)
  double diam = 0.0;  // metric diameter upper bound
};

SetBounds composite_bounds(const BodyCalc& calc, const Composite& c) {
  const ModelSpace& model = calc.model();
  const auto L = static_cast<Eigen::Index>(model.levels());
  SetBounds b;
  b.caps = Vec::Zero(L);

  std::vector<double> part_z;
  std::vector<double> part_diam;
  for (const ConvexBody* p : c.parts) {
    const Vec caps = calc.cap_profile(*p);
    b.caps = b.caps.cwiseMax(caps);
    part_z.push_back(calc.to_zero_sup(*p));
    part_diam.push_back(calc.diameter_upper(*p));
  }
  for (const Vec& v : c.points) {
    b.caps = b.caps.cwiseMax(model.family().profile(v));
    part_z.push_back(model.metric().to_zero(v));
    part_diam.push_back(0.0);
  }

  if (c.hulled) {
    // Convex combinations: seminorms mix below the componentwise caps, and
    // phi's subadditivity turns a combination across pieces into the sum of
    // the pieces' to-zero suprema.
    double zs = 0.0;
    for (double z : part_z) zs += z;
    b.zsup = zs;
    Vec doubled = b.caps;
    for (Eigen::Index i = 0; i < doubled.size(); ++i)
      doubled[i] = doubled[i] < kInf ? 2.0 * doubled[i] : kInf;
    b.diam = std::min(2.0 * b.zsup, metric_cap_sum(model, doubled));
  } else {
    double z = 0.0;
    for (double zi : part_z) z = std::max(z, zi);
    b.zsup = z;
    double d = 0.0;
    for (double di : part_diam) d = std::max(d, di);
    for (std::size_t i = 0; i < part_z.size(); ++i)
      for (std::size_t j = i + 1; j < part_z.size(); ++j)
        d = std::max(d, part_z[i] + part_z[j]);
    Vec doubled = b.caps;
    for (Eigen::Index i = 0; i < doubled.size(); ++i)
      doubled[i] = doubled[i] < kInf ? 2.0 * doubled[i] : kInf;
    b.diam = std::min(d, metric_cap_sum(model, doubled));
  }
  return b;
}

struct RuleVerdict {
  bool ok = false;
  std::string detail;
};

RuleVerdict rule_check(const PaletteFamily& family, const SetBounds& b) {
  RuleVerdict v;
  std::ostringstream os;
  switch (family.rule) {
    case MembershipRule::bounded_caps: {
      double worst = 0.0;
      Eigen::Index bad = -1;
      for (Eigen::Index n = 0; n < b.caps.size(); ++n) {
        if (!(b.caps[n] < kInf)) { bad = n; break; }
        worst = std::max(worst, b.caps[n]);
      }
      if (bad >= 0) {
        os << "cap not certified finite at level " << bad;
        v.detail = os.str();
        return v;
      }
      v.ok = true;
      os << "caps finite, largest " << worst;
      v.detail = os.str();
      return v;
    }
    case MembershipRule::diameter_capped: {
      if (b.diam <= family.diameter_cap) {
        v.ok = true;
        os << "diameter bound " << b.diam << " <= " << family.diameter_cap;
      } else {
        os << "diameter bound " << b.diam << " exceeds " << family.diameter_cap;
      }
      v.detail = os.str();
      return v;
    }
    case MembershipRule::tame_caps: {
      double need = 0.0;
      for (Eigen::Index n = 0; n < b.caps.size(); ++n) {
        if (!(b.caps[n] < kInf)) {
          os << "cap not certified finite at level " << n;
          v.detail = os.str();
          return v;
        }
        need = std::max(need, b.caps[n] / std::pow(family.alpha, double(n)));
      }
      const double cap = std::ldexp(1.0, 40);
      if (need <= cap) {
        v.ok = true;
        const double d = std::exp2(std::ceil(std::log2(std::max(need, 1.0))));
        os << "growth constant " << d << " on base " << family.alpha;
      } else {
        os << "needs growth constant " << need << " beyond the dyadic ladder";
      }
      v.detail = os.str();
      return v;
    }
    case MembershipRule::listed_only: {
      v.detail = "family declares no closure beyond its listed bodies";
      return v;
    }
  }
  return v;
}

Mat cross_polytope(const ModelSpace& model, double delta) {
  const auto D = static_cast<Eigen::Index>(model.dim());
  Mat v(D, 2 * D);
  v.setZero();
  for (Eigen::Index i = 0; i < D; ++i) {
    v(i, 2 * i) = delta;
    v(i, 2 * i + 1) = -delta;
  }
  return v;
}

Mat corner_simplex(const ModelSpace& model, std::size_t count, double delta) {
  const auto D = static_cast<Eigen::Index>(model.dim());
  const auto k = static_cast<Eigen::Index>(std::min<std::size_t>(count, model.dim()));
  Mat v(D, k + 1);
  v.setZero();
  for (Eigen::Index i = 0; i < k; ++i) v(i, i + 1) = delta;
  return v;
}

Vec growth_bounds(const ModelSpace& model, double base, double growth) {
  Vec a(static_cast<Eigen::Index>(model.levels()));
  for (Eigen::Index i = 0; i < a.size(); ++i)
    a[i] = base * std::pow(growth, double(i));
  return a;
}

}  // namespace

const char* scaling_mode_name(ScalingMode m) {
  switch (m) {
    case ScalingMode::none: return "none";
    case ScalingMode::contractive: return "contractive";
    case ScalingMode::all: return "all";
  }
  return "?";
}

const char* membership_rule_name(MembershipRule r) {
  switch (r) {
    case MembershipRule::bounded_caps: return "bounded_caps";
    case MembershipRule::diameter_capped: return "diameter_capped";
    case MembershipRule::tame_caps: return "tame_caps";
    case MembershipRule::listed_only: return "listed_only";
  }
  return "?";
}

PaletteFamily builtin_palette(const std::string& name, const ModelSpace& model,
                              const PaletteParams& params) {
  PaletteFamily f;
  f.name = name;
  f.model_id = model.id;
  const std::size_t N = model.levels() - 1;
  const double top_weight = model.metric().config().weight(N);

  auto add_ball_ladder = [&](double r0) {
    for (std::size_t j = 0; j < params.ladder; ++j)
      f.generators.push_back(
          ConvexBody::ball(model, Vec::Zero(static_cast<Eigen::Index>(model.dim())),
                           std::ldexp(r0, -static_cast<int>(j))));
  };
  auto add_box_ladder = [&](double growth) {
    for (std::size_t j = 0; j < params.ladder; ++j)
      f.generators.push_back(
          ConvexBody::box(model, growth_bounds(model, std::ldexp(1.0, int(j)), growth)));
  };

  if (name == "FC") {
    f.rule = MembershipRule::bounded_caps;
    f.scaling = ScalingMode::all;
    f.generators.push_back(ConvexBody::polytope(model, cross_polytope(model, 1.0)));
    f.generators.push_back(ConvexBody::polytope(model, corner_simplex(model, 1, 1.0)));
    f.generators.push_back(ConvexBody::polytope(model, corner_simplex(model, 2, 1.0)));
    f.generators.push_back(ConvexBody::polytope(model, corner_simplex(model, 8, 1.0)));
    f.generators.push_back(ConvexBody::polytope(model, cross_polytope(model, 0.125)));
    f.note = "convex hulls in coordinate subspaces";
  } else if (name == "F") {
    f = builtin_palette("FC", model, params);
    f.name = "F";
    f.generators.push_back(ConvexBody::polytope(model, cross_polytope(model, 0.25)));
    f.generators.push_back(ConvexBody::polytope(model, cross_polytope(model, 4.0)));
    f.note = "finite-dimensional compact sample";
  } else if (name == "CC" || name == "C" || name == "PC") {
    f.rule = MembershipRule::bounded_caps;
    f.scaling = ScalingMode::all;
    f.generators.push_back(ConvexBody::polytope(model, cross_polytope(model, 1.0)));
    f.generators.push_back(ConvexBody::polytope(model, corner_simplex(model, 8, 1.0)));
    f.generators.push_back(ConvexBody::box(model, growth_bounds(model, 1.0, 2.0)));
    f.generators.push_back(ConvexBody::box(model, growth_bounds(model, 4.0, 2.0)));
    if (name != "CC") {
      // An off-center compact piece: a shifted corner simplex.
      Mat v = corner_simplex(model, 4, 1.0);
      v.row(0).array() += 0.5;
      f.generators.push_back(ConvexBody::polytope(model, v));
    }
    f.note = name == "PC"
                 ? "precompact coincides with compact at finite truncation"
                 : "compact convex sample";
  } else if (name == "S") {
    f.rule = MembershipRule::bounded_caps;
    f.scaling = ScalingMode::all;
    add_box_ladder(2.0);
    f.generators.push_back(ConvexBody::polytope(model, cross_polytope(model, 1.0)));
    f.note = "level-bounded sets via lower-gauge boxes";
  } else if (name == "B") {
    f.rule = MembershipRule::bounded_caps;
    f.scaling = ScalingMode::all;
    add_ball_ladder(top_weight / 2.0);
    f.generators.push_back(ConvexBody::box(model, growth_bounds(model, 1024.0, 2.0)));
    f.note =
        "metric boundedness is vacuous at truncation; representatives are "
        "cap-certified so the image checks stay decidable";
  } else if (name == "B_s") {
    f.rule = MembershipRule::diameter_capped;
    f.diameter_cap = params.s;
    f.scaling = ScalingMode::contractive;
    add_ball_ladder(std::min(params.s / 4.0, top_weight / 2.0));
    f.note = "diameter-capped family; scalings quantified over (0,1]";
  } else if (name == "T_alpha" || name == "T_2" || name == "T") {
    f.name = "T_alpha";
    f.rule = MembershipRule::tame_caps;
    f.alpha = name == "T_2" ? 2.0 : params.alpha;
    f.scaling = ScalingMode::all;
    add_box_ladder(f.alpha);
    f.generators.push_back(ConvexBody::polytope(model, cross_polytope(model, 1.0)));
    f.note = "caps dominated by a dyadic constant times alpha^level";
  } else {
    throw std::invalid_argument("unknown palette name: " + name);
  }
  return f;
}

bool PaletteCheckReport::all_passed() const {
  for (const auto& a : axioms)
    if (!a.passed) return false;
  return !axioms.empty();
}

const AxiomReport& PaletteCheckReport::axiom(int k) const {
  for (const auto& a : axioms)
    if (a.axiom == k) return a;
  throw std::out_of_range("no such axiom report");
}

BodyCheck palette_membership(const PaletteFamily& family, const ModelSpace& model,
                             const ConvexBody& body) {
  BodyCalc calc(model);
  Composite c;
  c.parts.push_back(&body);
  const RuleVerdict v = rule_check(family, composite_bounds(calc, c));
  BodyCheck r;
  r.state = v.ok ? TriState::yes : TriState::undecided;
  r.note = v.detail;

  if (!v.ok && family.rule == MembershipRule::diameter_capped) {
    // A carrier pair whose exact distance beats the cap certifies exclusion.
    const Mat pts = calc.carrier_points(body);
    for (Eigen::Index i = 0; i < pts.cols(); ++i)
      for (Eigen::Index j = i + 1; j < pts.cols(); ++j) {
        const double d = model.metric().distance(pts.col(i), pts.col(j));
        if (d > family.diameter_cap) {
          r.state = TriState::no;
          r.margin = d - family.diameter_cap;
          r.note = "carrier pair at distance " + std::to_string(d);
          return r;
        }
      }
  }
  return r;
}

namespace {

std::vector<double> scaling_samples(ScalingMode mode) {
  switch (mode) {
    case ScalingMode::none: return {};
    case ScalingMode::contractive: return {0.125, 0.5, 1.0};
    case ScalingMode::all: return {0.125, 0.5, 1.0, 2.0, 8.0};
  }
  return {};
}

}  // namespace

PaletteCheckReport check_axioms(const PaletteFamily& family,
                                const ModelSpace& model,
                                const std::vector<PaletteProbe>& probes,
                                const PaletteCheckParams& params) {
  if (family.model_id != model.id)
    throw std::invalid_argument("palette family belongs to a different model");
  BodyCalc calc(model);
  PaletteCheckReport report;
  report.palette = family.name;

  const std::size_t G = family.generators.size();

  // ---- Axiom 1: probe images are level-bounded -----------------------------
  {
    AxiomReport a;
    a.axiom = 1;
    std::ostringstream os;
    os << probes.size() << " probes x " << G << " generators; image caps via "
       << "exact vertex images or operator-level bounds";
    for (const auto& probe : probes) {
      if (probe.target == nullptr)
        throw std::invalid_argument("palette probe without a target model");
      const ModelSpace& dst = *probe.target;

      // Level-bound table up(m, n): certified upper bounds used to push
      // generator caps through the probe.
      const std::size_t sm = model.levels(), tn = dst.levels();
      Mat up(static_cast<Eigen::Index>(sm), static_cast<Eigen::Index>(tn));
      bool have_table = false;
      auto table = [&]() -> const Mat& {
        if (!have_table) {
          for (std::size_t m = 0; m < sm; ++m)
            for (std::size_t n = 0; n < tn; ++n)
              up(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
                  hamilton_norm(model, dst, probe.op, m, n, params.norm).value.upper;
          have_table = true;
        }
        return up;
      };

      for (std::size_t g = 0; g < G; ++g) {
        const ConvexBody& body = family.generators[g];
        bool ok = true;
        std::size_t bad_level = 0;
        if (body.kind() == BodyKind::v_polytope) {
          for (std::size_t n = 0; n < tn && ok; ++n) {
            double cap = 0.0;
            for (Eigen::Index c = 0; c < body.vertices().cols(); ++c)
              cap = std::max(cap, dst.family().eval(
                                      n, probe.op.matrix * body.vertices().col(c)));
            if (!(cap < kInf)) { ok = false; bad_level = n; }
          }
        } else {
          const Vec caps = calc.cap_profile(body);
          for (std::size_t n = 0; n < tn && ok; ++n) {
            double best = kInf;
            for (std::size_t m = 0; m < sm; ++m) {
              const double cm = caps[static_cast<Eigen::Index>(m)];
              const double h = table()(static_cast<Eigen::Index>(m),
                                       static_cast<Eigen::Index>(n));
              if (cm < kInf && h < kInf) best = std::min(best, h * cm);
            }
            if (!(best < kInf)) { ok = false; bad_level = n; }
          }
        }
        if (!ok) {
          std::ostringstream fail;
          fail << "probe '" << probe.label << "' on generator " << g << " ("
               << body.describe() << "): image cap not certified finite at level "
               << bad_level;
          a.failures.push_back(fail.str());
        }
      }
    }
    a.passed = a.failures.empty();
    a.detail = os.str();
    report.axioms.push_back(std::move(a));
  }

  // ---- Axiom 2: unions ------------------------------------------------------
  {
    AxiomReport a;
    a.axiom = 2;
    if (!family.flags.unions) {
      a.detail = "family declares no union closure";
      if (G >= 2)
        a.failures.push_back("pair (0, 1): union closure not claimed");
      else
        a.failures.push_back("union closure not claimed");
    } else {
      std::size_t pairs = 0;
      for (std::size_t i = 0; i < G; ++i)
        for (std::size_t j = i + 1; j < G; ++j) {
          ++pairs;
          Composite c;
          c.parts = {&family.generators[i], &family.generators[j]};
          const RuleVerdict v = rule_check(family, composite_bounds(calc, c));
          if (!v.ok) {
            std::ostringstream fail;
            fail << "pair (" << i << ", " << j << "): " << v.detail;
            a.failures.push_back(fail.str());
          }
        }
      std::ostringstream os;
      os << pairs << " generator pairs, rule " << membership_rule_name(family.rule);
      a.detail = os.str();
    }
    a.passed = a.failures.empty();
    report.axioms.push_back(std::move(a));
  }

  // ---- Axiom 3: scalings ----------------------------------------------------
  {
    AxiomReport a;
    a.axiom = 3;
    const auto lambdas = scaling_samples(family.scaling);
    if (!family.flags.scalings || lambdas.empty()) {
      a.detail = "family declares no scaling closure";
      a.failures.push_back("scaling closure not claimed");
    } else {
      for (std::size_t g = 0; g < G; ++g)
        for (double l : lambdas) {
          const ConvexBody scaled = family.generators[g].scaled(l);
          Composite c;
          c.parts = {&scaled};
          const RuleVerdict v = rule_check(family, composite_bounds(calc, c));
          if (!v.ok) {
            std::ostringstream fail;
            fail << "generator " << g << " scaled by " << l << ": " << v.detail;
            a.failures.push_back(fail.str());
          }
        }
      std::ostringstream os;
      os << "dyadic lambda samples in [" << lambdas.front() << ", " << lambdas.back()
         << "], quantification " << scaling_mode_name(family.scaling)
         << (family.scaling == ScalingMode::contractive
                 ? " (growing scalings would break the diameter cap)"
                 : " (the rule is positively homogeneous, so the samples extend)");
      a.detail = os.str();
    }
    a.passed = a.failures.empty();
    report.axioms.push_back(std::move(a));
  }

  // ---- Axiom 4: hulls with one extra point ----------------------------------
  {
    AxiomReport a;
    a.axiom = 4;
    if (!family.flags.hulls) {
      a.detail = "family declares no hull closure";
      a.failures.push_back("hull closure not claimed");
    } else {
      // Probe points: carrier points of the other generators (certified
      // members of the union of the family), plus caller-supplied points,
      // plus — for scale-invariant rules — a synthetic mixed-sign vector.
      std::vector<Vec> points = params.extra_hull_points;
      for (std::size_t g = 0; g < G && points.size() < params.hull_points; ++g) {
        const Mat pts = calc.carrier_points(family.generators[g]);
        for (Eigen::Index c = 0; c < pts.cols() && points.size() < params.hull_points;
             c += std::max<Eigen::Index>(1, pts.cols() / 3))
          points.push_back(pts.col(c));
      }
      if (family.rule != MembershipRule::diameter_capped) {
        Vec v(static_cast<Eigen::Index>(model.dim()));
        for (Eigen::Index i = 0; i < v.size(); ++i)
          v[i] = (i % 2 == 0 ? 1.0 : -1.0) / double(i + 1);
        points.push_back(v);
      }
      for (std::size_t g = 0; g < G; ++g)
        for (std::size_t p = 0; p < points.size(); ++p) {
          Composite c;
          c.parts = {&family.generators[g]};
          c.points = {points[p]};
          c.hulled = true;
          const RuleVerdict v = rule_check(family, composite_bounds(calc, c));
          if (!v.ok) {
            std::ostringstream fail;
            fail << "hull of generator " << g << " with point " << p << ": "
                 << v.detail;
            a.failures.push_back(fail.str());
          }
        }
      std::ostringstream os;
      os << points.size() << " probe points ("
         << (family.rule == MembershipRule::diameter_capped
                 ? "family carrier points only; arbitrary points would break "
                   "the diameter cap"
                 : "family carriers plus a mixed-sign vector")
         << ")";
      a.detail = os.str();
    }
    a.passed = a.failures.empty();
    report.axioms.push_back(std::move(a));
  }

  // ---- Axiom 5: spanning surrogate for density ------------------------------
  {
    AxiomReport a;
    a.axiom = 5;
    std::vector<Vec> cols;
    for (const auto& g : family.generators) {
      const Mat pts = calc.carrier_points(g);
      for (Eigen::Index c = 0; c < pts.cols(); ++c) cols.push_back(pts.col(c));
    }
    Mat all(static_cast<Eigen::Index>(model.dim()),
            static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
      all.col(static_cast<Eigen::Index>(c)) = cols[c];
    Eigen::ColPivHouseholderQR<Mat> qr(all);
    qr.setThreshold(params.rank_tol);
    const auto rank = static_cast<std::size_t>(qr.rank());
    a.passed = rank == model.dim();
    std::ostringstream os;
    os << "carrier span rank " << rank << " of " << model.dim();
    a.detail = os.str();
    if (!a.passed) a.failures.push_back(os.str());
    report.axioms.push_back(std::move(a));
  }

  return report;
}

StrongnessReport is_strong(const PaletteFamily& family, const ModelSpace& model,
                           std::size_t scaling_depth) {
  if (family.model_id != model.id)
    throw std::invalid_argument("palette family belongs to a different model");
  BodyCalc calc(model);
  StrongnessReport rep;
  const std::size_t G = family.generators.size();

  std::vector<double> lambdas{1.0};
  if (family.scaling != ScalingMode::none)
    for (std::size_t k = 1; k <= scaling_depth; ++k)
      lambdas.push_back(std::ldexp(1.0, -static_cast<int>(k)));

  rep.strong = true;
  for (std::size_t n = 0; n < model.levels(); ++n) {
    const double radius = std::ldexp(1.0, -static_cast<int>(n));
    bool found = false;
    for (std::size_t g = 0; g < G && !found; ++g)
      for (double l : lambdas) {
        const double z = calc.to_zero_sup(family.generators[g].scaled(l));
        if (z <= radius) {
          rep.witnesses.push_back({n, g, l, z});
          found = true;
          break;
        }
      }
    if (!found) {
      rep.strong = false;
      rep.first_failure = n;
      // With no admissible scalings, a carrier pair further apart than the
      // ball's diameter certifies that no generator can fit.
      if (family.scaling == ScalingMode::none) {
        bool all_certified = G > 0;
        for (std::size_t g = 0; g < G && all_certified; ++g) {
          const Mat pts = calc.carrier_points(family.generators[g]);
          double spread = 0.0;
          for (Eigen::Index i = 0; i < pts.cols(); ++i)
            for (Eigen::Index j = i + 1; j < pts.cols(); ++j)
              spread = std::max(spread,
                                model.metric().distance(pts.col(i), pts.col(j)));
          if (!(spread > 2.0 * radius)) all_certified = false;
        }
        rep.failure_certified = all_certified;
        rep.note = all_certified
                       ? "every generator carries a point pair wider than the ball"
                       : "no generator reached the ball; exclusion not certified";
      } else {
        rep.note = "no scaled generator reached the ball within the search depth";
      }
      return rep;
    }
  }
  rep.note = "every dyadic ball received a member";
  return rep;
}

namespace {

// Strict membership of a point in an open body; boundary counts as outside.
BodyCheck strict_inside(const BodyCalc& calc, const ConvexBody& body, const Vec& w) {
  BodyCheck r;
  switch (body.kind()) {
    case BodyKind::v_polytope: {
      const double g = polytope_gauge(body.vertices(), w);
      if (g < 1.0) {
        r.state = TriState::yes;
        r.margin = 1.0 - g;
        r.note = "hull gauge below one";
      } else {
        r.state = TriState::no;
        r.margin = g - 1.0;
        r.note = "hull gauge at or above one";
      }
      return r;
    }
    case BodyKind::metric_ball: {
      const Vec u = w / body.ball_scale() - body.center();
      const double d = calc.model().metric().to_zero(u);
      r.state = d < body.radius() ? TriState::yes : TriState::no;
      r.margin = std::abs(body.radius() - d);
      r.note = "exact metric evaluation";
      return r;
    }
    case BodyKind::gauge_sublevel: {
      const double hi = calc.gauge().star_upper(body.level(), w);
      if (hi < body.bound()) {
        r.state = TriState::yes;
        r.margin = body.bound() - hi;
        r.note = "upper gauge strictly below the bound";
        return r;
      }
      const double lo = calc.gauge().box_lower(body.level(), w);
      if (lo >= body.bound()) {
        r.state = TriState::no;
        r.margin = lo - body.bound();
        r.note = "lower gauge at or above the bound";
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
        const double g = calc.gauge().box_lower(static_cast<std::size_t>(l), w);
        if (g >= a[l]) {
          r.state = TriState::no;
          r.margin = g - a[l];
          r.note = "lower-gauge coordinate at or above its bound";
          return r;
        }
        slack = std::min(slack, a[l] - g);
      }
      r.state = TriState::yes;
      r.margin = slack < kInf ? slack : 0.0;
      r.note = "strict lower-gauge box membership";
      return r;
    }
  }
  return r;
}

}  // namespace

MapsIntoReport maps_into(const ModelSpace& src, const ModelSpace& dst,
                         const GradedOperator& A, const ConvexBody& P,
                         const ConvexBody& O, const OpNormParams& params) {
  if (P.model_id() != src.id || O.model_id() != dst.id)
    throw std::invalid_argument("bodies do not live on the map's models");
  BodyCalc calc_src(src), calc_dst(dst);
  MapsIntoReport rep;

  if (P.kind() == BodyKind::v_polytope) {
    double margin = kInf;
    for (Eigen::Index c = 0; c < P.vertices().cols(); ++c) {
      const BodyCheck pc = strict_inside(calc_dst, O, A.matrix * P.vertices().col(c));
      if (pc.state == TriState::no) {
        rep.state = TriState::no;
        rep.certified = true;
        rep.margin = pc.margin;
        rep.note = "vertex image escapes the open body";
        return rep;
      }
      if (pc.state == TriState::undecided) {
        rep.note = "vertex image membership bracket inconclusive";
        return rep;
      }
      margin = std::min(margin, pc.margin);
    }
    rep.state = TriState::yes;
    rep.certified = true;
    rep.margin = margin < kInf ? margin : 0.0;
    rep.confidence = 1.0;
    rep.note = "all vertex images strictly inside; convexity covers the hull";
    return rep;
  }

  if (P.kind() == BodyKind::gauge_sublevel || P.kind() == BodyKind::gauge_box) {
    // Push the cap profile of P through per-level operator bounds, then test
    // the image profile against the open body.
    const Vec caps = calc_src.cap_profile(P);
    Vec img(static_cast<Eigen::Index>(dst.levels()));
    for (std::size_t n = 0; n < dst.levels(); ++n) {
      double best = kInf;
      for (std::size_t m = 0; m < src.levels(); ++m) {
        const double cm = caps[static_cast<Eigen::Index>(m)];
        if (!(cm < kInf)) continue;
        const double h = hamilton_norm(src, dst, A, m, n, params).value.upper;
        if (h < kInf) best = std::min(best, h * cm);
      }
      img[static_cast<Eigen::Index>(n)] = best;
    }
    bool img_finite = true;
    for (Eigen::Index i = 0; i < img.size(); ++i)
      if (!(img[i] < kInf)) img_finite = false;

    if (img_finite) {
      switch (O.kind()) {
        case BodyKind::gauge_box: {
          const Vec& a = O.level_bounds();
          double slack = kInf;
          bool ok = true;
          for (Eigen::Index l = 0; l < a.size() && ok; ++l) {
            if (!(a[l] < kInf)) continue;
            const double g =
                calc_dst.gauge().box_lower_profile(static_cast<std::size_t>(l), img);
            if (g >= a[l]) ok = false;
            else slack = std::min(slack, a[l] - g);
          }
          if (ok) {
            rep.state = TriState::yes;
            rep.certified = true;
            rep.margin = slack < kInf ? slack : 0.0;
            rep.confidence = 1.0;
            rep.note = "image cap profile strictly inside the box";
            return rep;
          }
          break;
        }
        case BodyKind::gauge_sublevel: {
          const double g = calc_dst.gauge().star_upper_profile(O.level(), img);
          if (g < O.bound()) {
            rep.state = TriState::yes;
            rep.certified = true;
            rep.margin = O.bound() - g;
            rep.confidence = 1.0;
            rep.note = "image cap profile strictly under the sublevel bound";
            return rep;
          }
          break;
        }
        case BodyKind::metric_ball: {
          const bool centered =
              O.center().size() == 0 || O.center().cwiseAbs().maxCoeff() == 0.0;
          if (centered) {
            const double z = metric_cap_sum(dst, img / O.ball_scale());
            if (z < O.radius()) {
              rep.state = TriState::yes;
              rep.certified = true;
              rep.margin = O.radius() - z;
              rep.confidence = 1.0;
              rep.note = "image cap profile strictly inside the centered ball";
              return rep;
            }
          }
          break;
        }
        case BodyKind::v_polytope:
          break;
      }
    }
    // No-route via carrier images.
    const Mat pts = calc_src.carrier_points(P);
    for (Eigen::Index c = 0; c < pts.cols(); ++c) {
      const BodyCheck pc = strict_inside(calc_dst, O, A.matrix * pts.col(c));
      if (pc.state == TriState::no) {
        rep.state = TriState::no;
        rep.certified = true;
        rep.margin = pc.margin;
        rep.note = "carrier image escapes the open body";
        return rep;
      }
    }
    rep.note = "cap route inconclusive; no carrier image escaped";
    return rep;
  }

  // Metric ball: certified member samples only.
  CounterRng rng(params.seed, "maps-into");
  std::vector<Vec> members;
  const Mat pts = calc_src.carrier_points(P);
  for (Eigen::Index c = 0; c < pts.cols(); ++c) members.push_back(pts.col(c));
  const std::size_t budget = 64;
  for (std::size_t k = 0; k < budget; ++k) {
    Vec u(static_cast<Eigen::Index>(src.dim()));
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = rng.next_gaussian();
    for (int e = 4; e >= -80; --e) {
      const double t = std::ldexp(1.0, e);
      if (src.metric().to_zero(t * u) <= P.radius()) {
        members.push_back(P.ball_scale() * (P.center() + t * u));
        break;
      }
    }
  }
  std::size_t inside = 0;
  for (const Vec& p : members) {
    const BodyCheck pc = strict_inside(calc_dst, O, A.matrix * p);
    if (pc.state == TriState::no) {
      rep.state = TriState::no;
      rep.certified = true;
      rep.margin = pc.margin;
      rep.note = "sampled member image escapes the open body";
      return rep;
    }
    if (pc.state == TriState::yes) ++inside;
  }
  if (inside == members.size()) {
    rep.state = TriState::yes;
    rep.certified = false;
    rep.confidence = double(inside) / double(members.size());
    rep.note = "sampled member images all strictly inside; ball interior not "
               "exhausted";
    return rep;
  }
  rep.note = "some sampled memberships inconclusive";
  rep.confidence = double(inside) / double(members.size());
  return rep;
}

TameSetReport is_tame_set(const ModelSpace& model, const Mat& points,
                          double alpha, double D) {
  if (!(alpha > 0.0)) throw std::invalid_argument("tameness base must be positive");
  DyadicGauge gauge(model);
  TameSetReport rep;
  const auto L = static_cast<Eigen::Index>(model.levels());
  rep.uppers = Vec::Zero(L);
  rep.lowers = Vec::Zero(L);
  for (Eigen::Index c = 0; c < points.cols(); ++c) {
    for (Eigen::Index n = 0; n < L; ++n) {
      rep.uppers[n] = std::max(
          rep.uppers[n], gauge.star_upper(static_cast<std::size_t>(n), points.col(c)));
      rep.lowers[n] = std::max(
          rep.lowers[n], gauge.box_lower(static_cast<std::size_t>(n), points.col(c)));
    }
  }
  rep.tame = true;
  for (Eigen::Index n = 0; n < L; ++n) {
    const double bound = D * std::pow(alpha, double(n));
    if (!(rep.uppers[n] < bound)) {
      rep.tame = false;
      rep.witness_level = static_cast<std::size_t>(n);
      break;
    }
  }
  if (!rep.tame) {
    for (Eigen::Index n = 0; n < L; ++n) {
      const double bound = D * std::pow(alpha, double(n));
      if (rep.lowers[n] >= bound) {
        rep.certified_not = true;
        rep.witness_level = static_cast<std::size_t>(n);
        break;
      }
    }
  }
  return rep;
}

AaBoxReport aa_box(const ModelSpace& model, const Vec& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!(a[i] > 0.0)) throw std::invalid_argument("box bounds must be positive");
  AaBoxReport rep{ConvexBody::box(model, a), Vec(), 0.0, false,
                  "outer representation through the certified lower gauge; "
                  "contains the exact sublevel intersection"};
  BodyCalc calc(model);
  rep.caps = calc.cap_profile(rep.body);
  rep.diameter_upper = calc.diameter_upper(rep.body);
  rep.all_finite = true;
  for (Eigen::Index i = 0; i < rep.caps.size(); ++i)
    if (!(rep.caps[i] < kInf)) rep.all_finite = false;
  return rep;
}

BodyCheck aa_box_contains(const ModelSpace& model, const Vec& a, const Vec& v) {
  DyadicGauge gauge(model);
  BodyCheck r;
  double slack = kInf;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double hi = gauge.star_upper(static_cast<std::size_t>(i), v);
    if (hi < a[i]) {
      slack = std::min(slack, a[i] - hi);
      continue;
    }
    const double lo = gauge.box_lower(static_cast<std::size_t>(i), v);
    if (lo >= a[i]) {
      r.state = TriState::no;
      r.margin = lo - a[i];
      r.note = "lower gauge at or above the bound at level " + std::to_string(i);
      return r;
    }
    r.note = "gauge bracket straddles the bound at level " + std::to_string(i);
    return r;
  }
  r.state = TriState::yes;
  r.margin = slack < kInf ? slack : 0.0;
  r.note = "upper gauges strictly below every bound";
  return r;
}

AbsorptionReport absorption_index(const ModelSpace& model,
                                  const std::vector<ConvexBody>& chain,
                                  const PaletteFamily& family,
                                  int lambda_cap_log2) {
  if (chain.empty()) throw std::invalid_argument("empty chain");
  BodyCalc calc(model);
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    const BodyCheck c = calc.contained_in(chain[k], chain[k + 1]);
    if (c.state != TriState::yes)
      throw std::invalid_argument(
          "chain is not certified ascending at position " + std::to_string(k) +
          ": " + c.note);
  }

  AbsorptionReport rep;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    bool all = true;
    double worst_lambda = 0.0;
    std::string failure;
    for (std::size_t g = 0; g < family.generators.size() && all; ++g) {
      bool absorbed = false;
      for (int j = 0; j <= lambda_cap_log2 && !absorbed; ++j) {
        const double l = std::ldexp(1.0, j);
        if (calc.contained_in(family.generators[g], chain[i].scaled(l)).state ==
            TriState::yes) {
          absorbed = true;
          worst_lambda = std::max(worst_lambda, l);
        }
      }
      if (!absorbed) {
        all = false;
        failure = "generator " + std::to_string(g) + " (" +
                  family.generators[g].describe() + ") not absorbed by chain element " +
                  std::to_string(i + 1);
      }
    }
    if (all) {
      rep.found = true;
      rep.index = i + 1;
      rep.lambda = worst_lambda;
      return rep;
    }
    rep.failure = failure;
  }
  return rep;
}

}  // namespace gmv
