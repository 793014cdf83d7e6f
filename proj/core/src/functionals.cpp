#include "gmv/functionals.hpp"

#include "gmv/linprog.hpp"
#include "gmv/op_norm.hpp"
#include "gmv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gmv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// All evaluation rows of the tower levels 0..L: the (+/-) convex hull of
// these rows is exactly the set of functionals dominated by mu_L.
Mat tower_atoms(const ModelSpace& model, std::size_t L) {
  const SeminormFamily& fam = model.family();
  if (L >= fam.levels())
    throw std::invalid_argument("dominating level beyond the truncation");
  std::size_t rows = 0;
  for (std::size_t k = 0; k <= L; ++k) {
    const SeminormLevel& lev = fam.raw_level(k);
    if (lev.kind != SeminormLevel::Kind::max_form)
      throw std::invalid_argument(
          "domination is only decided for max-form tower levels");
    rows += lev.diagonal ? static_cast<std::size_t>(lev.dweights.size())
                         : static_cast<std::size_t>(lev.rows.rows());
  }
  Mat atoms(static_cast<Eigen::Index>(rows),
            static_cast<Eigen::Index>(model.dim()));
  Eigen::Index at = 0;
  for (std::size_t k = 0; k <= L; ++k) {
    const SeminormLevel& lev = fam.raw_level(k);
    if (lev.diagonal) {
      for (Eigen::Index i = 0; i < lev.dweights.size(); ++i) {
        atoms.row(at).setZero();
        atoms(at, i) = lev.dweights[i];
        ++at;
      }
    } else {
      atoms.middleRows(at, lev.rows.rows()) = lev.rows;
      at += lev.rows.rows();
    }
  }
  return atoms;
}

}  // namespace

ExtensionReport dominated_extension(const ModelSpace& model, const Vec& w,
                                    double c, const DualBound& p,
                                    std::uint64_t seed, std::size_t samples) {
  if (w.size() != static_cast<Eigen::Index>(model.dim()))
    throw std::invalid_argument("vector dimension does not match the model");
  if (!(p.scale > 0.0)) throw std::invalid_argument("bound scale must be positive");

  ExtensionReport rep;
  rep.bound = p.scale;

  const Mat atoms = tower_atoms(model, p.level);
  const double pw = p.scale * model.family().eval(p.level, w);
  rep.needed = pw > 0.0 ? std::abs(c) / model.family().eval(p.level, w) : (c == 0.0 ? 0.0 : kInf);

  if (c == 0.0) {
    rep.feasible = true;
    rep.functional = Vec::Zero(w.size());
    rep.value_at_w = 0.0;
    rep.note = "zero functional";
  } else if (std::abs(c) > pw) {
    rep.feasible = false;
    std::ostringstream os;
    os << "infeasible at truncation: |c| = " << std::abs(c)
       << " exceeds the dominating value " << pw
       << "; the minimal dominating scale along w is " << rep.needed;
    rep.note = os.str();
    return rep;
  } else {
    // Minimize the hull mass sum(nu+ + nu-) subject to the single pin
    // sum (nu+ - nu-) . <atom_r, w> = c; nonnegative variables.
    const Eigen::Index R = atoms.rows();
    const Vec aw = atoms * w;
    LinearProgram lp;
    lp.c = Vec::Ones(2 * R);
    lp.a_eq = Mat(1, 2 * R);
    lp.a_eq.leftCols(R) = aw.transpose();
    lp.a_eq.rightCols(R) = -aw.transpose();
    lp.b_eq = Vec::Constant(1, c);
    const LpResult sol = solve_lp(lp);
    if (!sol.ok()) {
      rep.feasible = false;
      rep.note = "pin program failed: " + std::to_string(int(sol.status));
      return rep;
    }
    // Feasibility threshold: hull mass within the requested scale.
    if (sol.objective > p.scale * (1.0 + 1e-9)) {
      rep.feasible = false;
      std::ostringstream os;
      os << "infeasible at truncation: minimal hull mass " << sol.objective
         << " exceeds the scale " << p.scale;
      rep.note = os.str();
      return rep;
    }
    rep.feasible = true;
    rep.functional =
        atoms.transpose() * (sol.x.head(R) - sol.x.tail(R));
    rep.value_at_w = rep.functional.dot(w);
    std::ostringstream os;
    os << "pin program mass " << sol.objective << " of allowed " << p.scale;
    rep.note = os.str();
  }

  // Verification: f(x) <= p(x) on random samples plus the atom directions
  // themselves (the candidates for equality).
  CounterRng rng(seed, "dominated-extension");
  double worst = -kInf;
  std::size_t checks = 0;
  auto check = [&](const Vec& x) {
    const double fx = rep.functional.dot(x);
    const double px = p.scale * model.family().eval(p.level, x);
    worst = std::max(worst, fx - px);
    ++checks;
  };
  for (Eigen::Index r = 0; r < atoms.rows(); ++r) {
    check(atoms.row(r).transpose());
    check(-atoms.row(r).transpose());
  }
  for (std::size_t s = 0; s < samples; ++s) {
    Vec x(w.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.next_gaussian();
    check(x);
  }
  rep.max_violation = worst;
  rep.checks = checks;
  return rep;
}

UnboundedLadder unbounded_functional(const ModelSpace& model, double eps,
                                     std::size_t n_terms) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("ball radius must sit in (0,1)");
  if (n_terms > model.dim()) {
    std::ostringstream os;
    os << "truncation too small to host " << n_terms
       << " disjoint-coordinate terms: the model has " << model.dim()
       << " coordinates";
    throw std::invalid_argument(os.str());
  }

  const auto D = static_cast<Eigen::Index>(model.dim());
  UnboundedLadder lad;
  lad.functional = Vec::Zero(D);
  lad.values = Vec::Zero(static_cast<Eigen::Index>(n_terms));
  lad.witness_dists = Vec::Zero(static_cast<Eigen::Index>(n_terms));
  lad.stage_norms = Vec::Zero(static_cast<Eigen::Index>(n_terms));

  const ModelSpace scalar = ModelSpace::scalar("ladder-score", 0);

  for (std::size_t n = 0; n < n_terms; ++n) {
    const auto k = static_cast<Eigen::Index>(n);
    Vec e = Vec::Zero(D);
    e[k] = 1.0;
    // Largest dyadic step with the witness strictly inside the ball.
    double t = 1.0;
    while (!(model.metric().to_zero(t * e) < eps)) {
      t /= 2.0;
      if (t < 1e-300)
        throw std::runtime_error("ball radius too small to host any witness");
    }
    const Vec v = t * e;
    lad.witnesses.push_back(v);
    lad.witness_dists[k] = model.metric().to_zero(v);
    lad.functional[k] = std::ldexp(1.0, static_cast<int>(n)) / t;
    lad.values[k] = lad.functional.dot(v);

    // Continuity of the partial sum: finite top-level operator norm.
    Mat row = lad.functional.transpose();
    const GradedOperator f =
        make_matrix(model, scalar, row, "ladder-partial-" + std::to_string(n));
    lad.stage_norms[k] =
        hamilton_norm(model, scalar, f, model.levels() - 1, 0).value.upper;
  }
  std::ostringstream os;
  os << n_terms << " disjoint-coordinate terms scoring powers of two inside "
     << "the " << eps << "-ball";
  lad.note = os.str();
  return lad;
}

EvalGadget::EvalGadget(const ModelSpace& model, std::size_t rung_count)
    : model_(&model) {
  const auto D = static_cast<Eigen::Index>(model.dim());
  std::size_t count = rung_count;
  std::string limit_note;
  if (count > model.dim()) {
    count = model.dim();
    limit_note = "; ladder length limited by the model dimension";
  }

  const std::size_t top = model.levels() - 1;
  for (std::size_t r = 0; r < count; ++r) {
    const std::size_t n = 4 * (r + 1);  // rung indices 4, 8, 12, ... spaced by 4
    GadgetRung rung;
    rung.index = n;

    Vec e = Vec::Zero(D);
    e[static_cast<Eigen::Index>(r)] = 1.0;
    // Place w_n with d(w_n, 0) inside (2^{-n-1}, 2^{-n}] by bisection.
    const double target = 0.75 * std::ldexp(1.0, -static_cast<int>(n));
    double lo = 0.0, hi = 1.0;
    while (model.metric().to_zero(hi * e) < target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (model.metric().to_zero(mid * e) < target ? lo : hi) = mid;
    }
    rung.w = hi * e;
    rung.dist = model.metric().to_zero(rung.w);

    // f_n pinned to n + 1 at w_n, dominated by a scaled top seminorm.
    const double c = double(n) + 1.0;
    const double mu = model.family().eval(top, rung.w);
    DualBound p{top, 2.0 * c / mu};
    const ExtensionReport ext = dominated_extension(model, rung.w, c, p,
                                                    0x67616467ull, 64);
    if (!ext.feasible)
      throw std::runtime_error("rung functional unexpectedly infeasible");
    rung.functional = ext.functional;
    rungs_.push_back(std::move(rung));
  }

  // Disjointness of the bump supports, by exact metric evaluations.
  double min_gap = kInf;
  bool disjoint = true;
  for (std::size_t i = 0; i < rungs_.size(); ++i)
    for (std::size_t j = i + 1; j < rungs_.size(); ++j) {
      const double d = model.metric().distance(rungs_[i].w, rungs_[j].w);
      const double gap = d - (bump_radius(i) + bump_radius(j));
      min_gap = std::min(min_gap, gap);
      if (!(gap > 0.0)) disjoint = false;
    }

  for (std::size_t i = 0; i < rungs_.size(); ++i) {
    rungs_[i].psi_at_w = bump(i, rungs_[i].w);
    rungs_[i].value = eval(rungs_[i].w);
  }

  report_.rungs = rungs_;
  report_.supports_disjoint = disjoint;
  report_.min_gap = rungs_.size() > 1 ? min_gap : kInf;
  Vec far = Vec::Ones(D) * 8.0;
  report_.far_value = eval(far);
  std::ostringstream os;
  os << rungs_.size() << " rungs spaced by 4, bump radii an eighth of the "
     << "rung scale" << limit_note;
  report_.note = os.str();
}

double EvalGadget::bump_radius(std::size_t i) const {
  return std::ldexp(1.0, -static_cast<int>(rungs_.at(i).index) - 2);
}

double EvalGadget::bump(std::size_t i, const Vec& x) const {
  const GadgetRung& r = rungs_.at(i);
  const double d = model_->metric().distance(x, r.w);
  const double r_out = bump_radius(i);
  const double r_in = r_out / 2.0;
  return std::clamp((r_out - d) / (r_out - r_in), 0.0, 1.0);
}

double EvalGadget::eval(const Vec& x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < rungs_.size(); ++i) {
    const double psi = bump(i, x);
    if (psi > 0.0) s += psi * rungs_[i].functional.dot(x);
  }
  return s;
}

GadgetReport eval_discontinuity_gadget(const ModelSpace& model,
                                       std::size_t rung_count) {
  return EvalGadget(model, rung_count).report();
}

}  // namespace gmv
