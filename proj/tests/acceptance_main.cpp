// Acceptance gate: thirteen checks, one pass/fail line each.
//
// Every numeric target here is frozen on purpose — closed forms computed by
// hand (geometric sums, dyadic weights, exact diagonal norms) or certified
// two-sided brackets.  A failure prints the offending values; nothing is
// recomputed from the library's own answer to "verify" itself.

#include "runner.hpp"

#include "gmv/functionals.hpp"
#include "gmv/ksets.hpp"
#include "gmv/model.hpp"
#include "gmv/op_norm.hpp"
#include "gmv/operator.hpp"
#include "gmv/palettes.hpp"
#include "gmv/rng.hpp"
#include "gmv/tameness.hpp"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using namespace gmv;

namespace {

constexpr double kUnitBoundTol = 1e-9;      // certified bounds allowed past 1
constexpr double kFloorTol = 1e-12;         // relative slack on exact floors
constexpr double kLawTol = 1e-9;            // certified-violation slack, norm laws
constexpr double kScalingTol = 1e-12;       // ceiling scaling law
constexpr double kDominationTol = 1e-12;    // exact-diagonal composition bounds
constexpr double kStrictnessRelTol = 0.05;  // closed-form strictness constants
constexpr double kExactNormTol = 1e-12;     // single-level classical norms
constexpr double kC1Budget = 5.0;           // seconds
constexpr double kC2Budget = 10.0;          // seconds

struct Criterion {
  std::vector<std::string> notes;
  std::size_t suppressed = 0;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (notes.size() < 8)
      notes.push_back(what);
    else
      ++suppressed;
  }
  bool ok() const { return notes.empty() && suppressed == 0; }
};

template <typename... Parts>
std::string cat(Parts&&... parts) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << std::forward<Parts>(parts));
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Mat random_matrix(CounterRng& rng, Eigen::Index rows, Eigen::Index cols) {
  Mat A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = rng.next_gaussian();
  return A;
}

// --- 1: the derivative is 1-tame with unit constants, quickly -----------------

void criterion_1(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  ModelSpace m = ModelSpace::trig("c1", 64, 8, 257);
  GradedOperator d = make_derivative(m);
  TamenessCertificate cert = certify_tame(m, m, d, 1, 0);
  const double secs = seconds_since(t0);

  c.require(cert.valid, "certificate reported invalid");
  c.require(cert.order == 1 && cert.base == 0,
            cat("order/base ", cert.order, "/", cert.base, ", wanted 1/0"));
  c.require(!cert.bounds.empty(), "no level bounds were produced");
  for (std::size_t i = 0; i < cert.bounds.size(); ++i)
    c.require(cert.bounds[i] <= 1.0 + kUnitBoundTol,
              cat("K_", cert.base + i, " = ", cert.bounds[i], " exceeds 1"));
  c.require(secs < kC1Budget,
            cat("took ", secs, " s, budget ", kC1Budget, " s"));
}

// --- 2: the un-normalized derivative family diverges linearly -----------------

void criterion_2(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::size_t> sizes{8, 16, 32, 64};
  auto builder = [](std::size_t n) {
    ModelSpace model = ModelSpace::trig("scan-" + std::to_string(n), n, 3, 4 * n + 1);
    GradedOperator op = make_derivative(model);
    return std::make_pair(std::move(model), std::move(op));
  };
  DivergenceEvidence ev = nontameness_scan(builder, sizes, 0);
  const double secs = seconds_since(t0);

  c.require(ev.verdict == "diverging_fit", cat("verdict '", ev.verdict, "'"));
  c.require(ev.strictly_increasing, "lower bounds are not strictly increasing");
  c.require(ev.lower_bounds.size() == sizes.size(), "missing ladder entries");
  for (std::size_t i = 0; i < sizes.size() && i < ev.lower_bounds.size(); ++i)
    c.require(ev.lower_bounds[i] >= double(sizes[i]) * (1.0 - kFloorTol),
              cat("K_0 lower at N=", sizes[i], " is ", ev.lower_bounds[i],
                  ", floor ", sizes[i]));
  c.require(secs < kC2Budget,
            cat("took ", secs, " s, budget ", kC2Budget, " s"));
}

// --- 3: source-halving and target-doubling norm laws --------------------------
//
// Both laws are statements about the true dyadic norm, so they are checked in
// certified-violation form against independently computed two-sided brackets:
// a violation needs the lower end of one pair to beat the scaled upper end of
// the other.  Overlapping brackets never count.

void criterion_3(Criterion& c) {
  std::vector<ModelSpace> models;
  models.push_back(ModelSpace::trig("c3-trig", 8, 3, 33));
  models.push_back(ModelSpace::sequence_power("c3-seq", 8, 3));
  models.push_back(ModelSpace::scalar("c3-scalar", 3));
  models.push_back(ModelSpace::scalar_sqrt("c3-sqrt"));

  std::size_t pairs_checked = 0;
  std::size_t violations = 0;
  for (const ModelSpace& m : models) {
    const auto L = m.levels();
    const auto D = static_cast<Eigen::Index>(m.dim());
    CounterRng rng(0x6c617773ull, "laws/" + m.id);
    const std::size_t ops = 100;
    for (std::size_t t = 0; t < ops; ++t) {
      if (L < 2) break;  // one seminorm level: both laws are vacuous
      GradedOperator A =
          make_matrix(m, m, random_matrix(rng, D, D), "op-" + std::to_string(t));
      Mat lo(L, L), hi(L, L);
      for (std::size_t mm = 0; mm < L; ++mm)
        for (std::size_t nn = 0; nn < L; ++nn) {
          OpNormResult r = op_norm(m, m, A, mm, nn, OpNormVariant::hamilton);
          lo(static_cast<Eigen::Index>(mm), static_cast<Eigen::Index>(nn)) = r.value.lower;
          hi(static_cast<Eigen::Index>(mm), static_cast<Eigen::Index>(nn)) = r.value.upper;
        }
      for (std::size_t mm = 0; mm + 1 < L; ++mm)
        for (std::size_t nn = 0; nn < L; ++nn) {
          ++pairs_checked;
          const double lhs = lo(static_cast<Eigen::Index>(mm) + 1, static_cast<Eigen::Index>(nn));
          const double rhs = 0.5 * hi(static_cast<Eigen::Index>(mm), static_cast<Eigen::Index>(nn));
          if (lhs > rhs * (1.0 + kLawTol)) {
            ++violations;
            c.require(false, cat("halving: model ", m.id, " op ", t, " (m=", mm,
                                 ",n=", nn, "): lower ", lhs, " > half upper ", rhs));
          }
        }
      for (std::size_t mm = 0; mm < L; ++mm)
        for (std::size_t nn = 0; nn + 1 < L; ++nn) {
          ++pairs_checked;
          const double lhs = hi(static_cast<Eigen::Index>(mm), static_cast<Eigen::Index>(nn) + 1);
          const double rhs = 2.0 * lo(static_cast<Eigen::Index>(mm), static_cast<Eigen::Index>(nn));
          if (lhs < rhs * (1.0 - kLawTol)) {
            ++violations;
            c.require(false, cat("doubling: model ", m.id, " op ", t, " (m=", mm,
                                 ",n=", nn, "): upper ", lhs, " < twice lower ", rhs));
          }
        }
    }
  }
  c.require(pairs_checked > 0, "no level pairs were checked");
  c.require(violations == 0, cat(violations, " certified violations"));
}

// --- 4: d(s v, 0) <= ceil(s) d(v, 0) -------------------------------------------

void criterion_4(Criterion& c) {
  std::vector<ModelSpace> models;
  models.push_back(ModelSpace::sequence_power("c4-seq", 8, 3));
  models.push_back(ModelSpace::trig("c4-trig", 8, 3, 33));
  models.push_back(ModelSpace::scalar("c4-scalar", 3));

  CounterRng rng(0x7363616cull, "ceiling");
  const std::size_t trials = 10000;
  std::size_t violations = 0;
  double worst_margin = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const ModelSpace& m = models[t % models.size()];
    Vec v(static_cast<Eigen::Index>(m.dim()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.next_gaussian();
    double s = rng.uniform(0.0, 10.0);
    if (s == 0.0) s = 5.0;  // keep s in (0, 10]
    auto res = m.metric().scalar_bound_check(v, s, kScalingTol);
    if (!res.ok) {
      ++violations;
      worst_margin = std::min(worst_margin, res.margin);
      c.require(false, cat("violated on ", m.id, " with s=", s,
                           ": lhs ", res.lhs, " rhs ", res.rhs));
    }
  }
  c.require(violations == 0,
            cat(violations, " of ", trials, " trials violated; worst margin ",
                worst_margin));
}

// --- 5: composition doubles the order; product bounds dominate direct ones ----

void criterion_5(Criterion& c) {
  // Derivative composed with itself.
  ModelSpace mt = ModelSpace::trig("c5-trig", 10, 4, 41);
  GradedOperator d = make_derivative(mt);
  TamenessCertificate cd = certify_tame(mt, mt, d, 1, 0);
  c.require(cd.valid, "derivative certificate invalid");
  TamenessCertificate comp = compose_certified(cd, cd);
  c.require(comp.order == 2, cat("composed order ", comp.order, ", wanted 2"));
  c.require(comp.valid, "composed certificate invalid");
  for (std::size_t i = 0; i < comp.bounds.size(); ++i)
    c.require(comp.bounds[i] <= (1.0 + kUnitBoundTol) * (1.0 + kUnitBoundTol),
              cat("composed K_", comp.base + i, " = ", comp.bounds[i]));
  GradedOperator dd = compose_operators(d, d);
  TamenessCertificate direct = certify_tame(mt, mt, dd, 2, 0);
  c.require(direct.valid && direct.order == 2, "direct second-order certificate invalid");

  // Fifty random certified pairs with exact diagonal norms: the composed
  // bound K2_n * K1_{n+1} must dominate the directly certified bound, by
  // submultiplicativity of the exact norms.
  ModelSpace ms = ModelSpace::sequence_power("c5-seq", 8, 4);
  CounterRng rng(0x70616972ull, "pairs");
  for (std::size_t p = 0; p < 50; ++p) {
    Vec a(8), b(8);
    for (Eigen::Index i = 0; i < 8; ++i) {
      a[i] = 0.2 + 1.8 * rng.next_double();
      b[i] = 0.2 + 1.8 * rng.next_double();
    }
    GradedOperator A = make_diagonal(ms, a, "A" + std::to_string(p));
    GradedOperator B = make_diagonal(ms, b, "B" + std::to_string(p));
    TamenessCertificate ca = certify_tame(ms, ms, A, 1, 0);
    TamenessCertificate cb = certify_tame(ms, ms, B, 1, 0);
    c.require(ca.valid && cb.valid, cat("pair ", p, ": factor certificate invalid"));
    c.require(ca.backend == "exact_euclidean" && cb.backend == "exact_euclidean",
              cat("pair ", p, ": expected exact diagonal bounds"));
    TamenessCertificate cc = compose_certified(ca, cb);
    GradedOperator BA = compose_operators(B, A);
    TamenessCertificate dc = certify_tame(ms, ms, BA, 2, 0);
    c.require(cc.order == 2 && dc.valid, cat("pair ", p, ": composition order/validity"));
    const std::size_t top = std::min(cc.truncation, dc.truncation);
    for (std::size_t n = cc.base; n <= top; ++n)
      c.require(cc.bound_at(n) >= dc.bound_at(n) * (1.0 - kDominationTol),
                cat("pair ", p, " level ", n, ": product bound ", cc.bound_at(n),
                    " below direct ", dc.bound_at(n)));
  }
}

// --- 6: oscillation witnesses respect their growth fences ---------------------

void criterion_6(Criterion& c) {
  ModelSpace m = ModelSpace::trig("c6", 16, 8, 65);
  for (double s : {1.0, 2.0, 3.0}) {
    StepWitness w = step_full_witness(m, s);
    c.require(w.seminorms.size() == 9,
              cat("s=", s, ": expected 9 seminorm levels, got ", w.seminorms.size()));
    for (Eigen::Index i = 0; i < w.seminorms.size() && i <= 8; ++i) {
      const double value = w.seminorms[i];
      const double hi = std::pow(4.0 * s, double(i));
      c.require(value < hi,
                cat("s=", s, " level ", i, ": ", value, " not below ", hi));
      if (i == 0) continue;  // both fences equal 1 there; the grid supremum
                             // of the oscillation sits just below the upper
                             // fence, so only that side carries content
      const double lo = std::pow(s, double(i));
      c.require(value > lo,
                cat("s=", s, " level ", i, ": ", value, " not above ", lo));
    }
  }
}

// --- 7: strictness constants and the square-root quotient ---------------------

void criterion_7(Criterion& c) {
  for (std::size_t top : {std::size_t{4}, std::size_t{6}, std::size_t{8}}) {
    ModelSpace m =
        ModelSpace::sequence_power("c7-" + std::to_string(top), 4, top);
    Vec e3 = Vec::Zero(4);
    e3[3] = 1.0;
    // ||e_3||_n = 4^n, so the slope at zero is sum 2^{-n} 4^n = 2^{top+1} - 1.
    auto sr = m.metric().strictness(e3, 1e-10, 1.0, 64);
    const double expect = std::exp2(double(top) + 1.0) - 1.0;
    c.require(std::abs(sr.value - expect) <= kStrictnessRelTol * expect,
              cat("top=", top, ": strictness ", sr.value, " vs closed form ",
                  expect));
    c.require(sr.value <= m.metric().strictness_upper_bound(e3) * (1.0 + 1e-12),
              cat("top=", top, ": strictness exceeds its own upper bound"));
  }

  ModelSpace q = ModelSpace::scalar_sqrt("c7-sqrt");
  Vec x(1);
  x[0] = 1e-6;
  const double quotient = q.metric().to_zero(x) / 1e-6;
  c.require(quotient >= 1e3 * (1.0 - kFloorTol),
            cat("sqrt quotient at r=1e-6 is ", quotient, ", floor 1000"));
}

// --- 8: evaluation stays inside the ball under small graded perturbations -----

void criterion_8(Criterion& c) {
  ModelSpace m = ModelSpace::trig("c8", 8, 4, 33);
  const std::size_t trials = 10000;
  for (auto [n, r] : std::vector<std::pair<std::size_t, std::size_t>>{
           {2, 1}, {3, 1}, {3, 2}}) {
    ModulusReport rep = eval_modulus(m, n, r, trials, 0x6d6f6475ull, 8);
    c.require(rep.trials == trials, cat("(", n, ",", r, "): trial count"));
    c.require(rep.delta == std::ldexp(0.25, -int(n)),
              cat("(", n, ",", r, "): delta ", rep.delta, " is not 2^-", n,
                  " phi(1)/2"));
    c.require(rep.ok(), cat("(", n, ",", r, "): ", rep.violations,
                            " violations, worst ratio ", rep.worst_ratio));
  }
}

// --- 9: the evaluation gadget ladder ------------------------------------------

void criterion_9(Criterion& c) {
  ModelSpace m = ModelSpace::sequence_power("c9", 8, 3);
  GadgetReport rep = eval_discontinuity_gadget(m, 5);
  c.require(rep.rungs.size() >= 5,
            cat("ladder has ", rep.rungs.size(), " rungs, wanted >= 5"));
  c.require(rep.supports_disjoint, "bump supports overlap");
  c.require(rep.min_gap > 0.0, cat("support gap ", rep.min_gap));
  c.require(rep.far_value == 0.0, cat("far point evaluates to ", rep.far_value));
  for (const auto& rung : rep.rungs) {
    c.require(rung.value > double(rung.index),
              cat("rung ", rung.index, ": value ", rung.value));
    c.require(rung.dist <= std::exp2(-double(rung.index)),
              cat("rung ", rung.index, ": distance ", rung.dist, " above 2^-",
                  rung.index));
  }
}

// --- 10: membership sets are convex; separation witnesses scale ---------------

void criterion_10(Criterion& c) {
  ModelSpace m = ModelSpace::sequence_power("c10", 8, 4);
  KSetSpec spec;
  spec.form = AMapForm::geometric;
  spec.scale = 1.0;
  spec.base = 2.0;
  c.require(spec.ascending_ok(m.levels()), "bound map fails the ascending property");
  OpNormParams params;

  // Diagonal members scaled so the exact norm at source level 2 sits at 90%
  // of the bound there; diagonals stay diagonal under convex combination and
  // their norms are exact, so membership is preserved by subadditivity.
  CounterRng rng(0x636f6e76ull, "members");
  const double cap = 0.9 * spec.a(2, 1);
  std::vector<Vec> members;
  for (std::size_t i = 0; i < 20; ++i) {
    Vec u(8);
    for (Eigen::Index k = 0; k < 8; ++k) u[k] = 0.2 + 0.8 * rng.next_double();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < 8; ++k)
      worst = std::max(worst, u[k] / double(k + 1));
    members.push_back(u * (cap / worst));
    KjMembership km = kj_membership(
        m, m, make_diagonal(m, members.back(), "member-" + std::to_string(i)), 1,
        spec, params);
    c.require(km.member, cat("base member ", i, " rejected: ", km.note));
  }

  std::size_t violations = 0;
  for (std::size_t t = 0; t < 1000; ++t) {
    const std::size_t terms = 2 + rng.below(3);
    Vec combo = Vec::Zero(8);
    double total = 0.0;
    for (std::size_t j = 0; j < terms; ++j) {
      const double wj = 0.05 + rng.next_double();
      combo += wj * members[rng.below(members.size())];
      total += wj;
    }
    combo /= total;
    KjMembership km = kj_membership(m, m, make_diagonal(m, combo, "combo"), 1,
                                    spec, params);
    if (!km.member) {
      ++violations;
      c.require(false, cat("convex combination ", t, " escaped: ", km.note));
    }
  }
  c.require(violations == 0, cat(violations, " of 1000 combinations escaped"));

  // Separation: the derivative scales out of the membership set; the zero map
  // is refused outright.
  ModelSpace mt = ModelSpace::trig("c10-trig", 8, 3, 33);
  GradedOperator d = make_derivative(mt);
  HausdorffWitness hw = hausdorff_witness(mt, mt, d, spec, params);
  c.require(hw.n_scale >= 1.0, cat("separation scale ", hw.n_scale));
  bool refused = false;
  try {
    hausdorff_witness(mt, mt, make_zero(mt, mt), spec, params);
  } catch (const std::invalid_argument&) {
    refused = true;
  }
  c.require(refused, "zero map was not refused");
}

// --- 11: palette families: axioms, strongness, absorption ---------------------

void criterion_11(Criterion& c) {
  ModelSpace m = ModelSpace::sequence_power("c11", 6, 2);
  std::vector<PaletteProbe> probes{{"identity", &m, make_identity(m)}};
  for (const char* name : {"FC", "F", "CC", "C", "PC", "S", "B", "B_s", "T_2"}) {
    PaletteFamily family = builtin_palette(name, m);
    PaletteCheckReport rep = check_axioms(family, m, probes);
    if (!rep.all_passed())
      for (const auto& ax : rep.axioms)
        if (!ax.passed)
          c.require(false, cat("palette ", name, " axiom ", ax.axiom, ": ",
                               ax.failures.empty() ? ax.detail : ax.failures.front()));
  }

  StrongnessReport strong = is_strong(builtin_palette("B_s", m), m);
  c.require(strong.strong, cat("ball ladder not strong: ", strong.note));

  // A single wide generator with no scalings: it reaches the unit ball but a
  // carrier pair wider than the level-one ball certifies the failure there.
  PaletteFamily foil;
  foil.name = "wide";
  foil.model_id = m.id;
  foil.scaling = ScalingMode::none;
  foil.rule = MembershipRule::listed_only;
  foil.flags = {false, false, false};
  Mat verts = Mat::Zero(6, 2);
  verts(0, 0) = 1.06;
  verts(0, 1) = -1.06;
  foil.generators.push_back(ConvexBody::polytope(m, verts));
  StrongnessReport weak = is_strong(foil, m);
  c.require(!weak.strong, "wide family passed as strong");
  c.require(weak.first_failure == 1,
            cat("first failure at level ", weak.first_failure, ", wanted 1"));
  c.require(weak.failure_certified, cat("failure not certified: ", weak.note));

  // Absorption indices match a brute-force scan with the identical oracle.
  ModelSpace mb = ModelSpace::sequence_power("c11-box", 4, 2);
  BodyCalc calc(mb);
  PaletteFamily fc = builtin_palette("FC", mb);
  for (double start : {0.125, 0.5}) {
    std::vector<ConvexBody> chain;
    for (int j = 0; j < 6; ++j)
      chain.push_back(ConvexBody::box(mb, Vec::Constant(3, start * std::exp2(j))));
    AbsorptionReport rep = absorption_index(mb, chain, fc);
    c.require(rep.found, cat("chain at ", start, ": no absorbing element found"));
    auto absorbs_all = [&](const ConvexBody& o) {
      for (const auto& g : fc.generators) {
        bool ok = false;
        for (int j = 0; j <= 40 && !ok; ++j)
          ok = calc.contained_in(g, o.scaled(std::exp2(j))).state == TriState::yes;
        if (!ok) return false;
      }
      return true;
    };
    std::size_t brute = 0;
    for (std::size_t i = 0; i < chain.size() && brute == 0; ++i)
      if (absorbs_all(chain[i])) brute = i + 1;
    c.require(brute > 0, cat("chain at ", start, ": brute force found nothing"));
    c.require(rep.index == brute, cat("chain at ", start, ": index ", rep.index,
                                      " vs brute force ", brute));
  }
}

// --- 12: single-level norms agree with the classical values -------------------

void criterion_12(Criterion& c) {
  CounterRng rng(0x636c6173ull, "mats");
  const Eigen::Index D = 7;

  ModelSpace plain = ModelSpace::sequence_power("c12-plain", 7, 0);
  for (std::size_t t = 0; t < 50; ++t) {
    Mat A = random_matrix(rng, D, D);
    GradedOperator op = make_matrix(plain, plain, A, "p" + std::to_string(t));
    OpNormResult res = op_norm(plain, plain, op, 0, 0, OpNormVariant::hamilton);
    const double classical = A.cwiseAbs().rowwise().sum().maxCoeff();
    const double slack = kExactNormTol * std::max(1.0, classical);
    c.require(std::abs(res.value.lower - classical) <= slack &&
                  std::abs(res.value.upper - classical) <= slack,
              cat("plain op ", t, ": bracket [", res.value.lower, ", ",
                  res.value.upper, "] vs max row sum ", classical));
  }

  Vec w(D);
  for (Eigen::Index i = 0; i < D; ++i) w[i] = 0.5 + 1.5 * rng.next_double();
  ModelSpace weighted = ModelSpace::sequence("c12-weighted", 7, 0, {w});
  for (std::size_t t = 0; t < 50; ++t) {
    Mat A = random_matrix(rng, D, D);
    GradedOperator op = make_matrix(weighted, weighted, A, "w" + std::to_string(t));
    OpNormResult res = op_norm(weighted, weighted, op, 0, 0, OpNormVariant::hamilton);
    double classical = 0.0;
    for (Eigen::Index i = 0; i < D; ++i) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < D; ++j)
        row += w[i] * std::abs(A(i, j)) / w[j];
      classical = std::max(classical, row);
    }
    const double slack = kExactNormTol * std::max(1.0, classical);
    c.require(std::abs(res.value.lower - classical) <= slack &&
                  std::abs(res.value.upper - classical) <= slack,
              cat("weighted op ", t, ": bracket [", res.value.lower, ", ",
                  res.value.upper, "] vs weighted row sum ", classical));
  }
}

// --- 13: reruns produce byte-identical reports ---------------------------------

void criterion_13(Criterion& c) {
  ojson doc{
      {"version", 1},
      {"seed", 424242},
      {"models",
       ojson::array({
           ojson{{"id", "seq"}, {"kind", "sequence_power"}, {"dim", 8}, {"levels", 3}},
           ojson{{"id", "trig"}, {"kind", "trig"}, {"modes", 8}, {"levels", 3}, {"grid", 33}},
       })},
      {"operators", ojson::array({ojson{{"id", "d"}, {"kind", "derivative"}, {"model", "trig"}}})},
      {"tasks",
       ojson::array({
           ojson{{"task", "build"}},
           ojson{{"task", "metric"},
                 {"model", "seq"},
                 {"op", "to_zero"},
                 {"vector", ojson::array({1, 0, 0, 0, 0, 0, 0, 0})},
                 {"expect", 0.9375},
                 {"tol", 1e-12}},
           ojson{{"task", "metric"}, {"model", "seq"}, {"op", "scaling_law"}, {"trials", 100}},
           ojson{{"task", "norm"}, {"operator", "d"}, {"m", 1}, {"n", 0}, {"expect_value", 1.0}},
           ojson{{"task", "certify"}, {"operator", "d"}, {"r", 1}, {"b", 0}, {"recheck", true}},
           ojson{{"task", "witness"}, {"name", "gadget"}, {"model", "seq"}},
           ojson{{"task", "witness"}, {"name", "hausdorff"}, {"model", "trig"}, {"operator", "d"}},
       })},
  };
  ConfigLoad load = parse_config(doc);
  for (const auto& e : load.errors) c.require(false, "config: " + e);
  if (!load.ok()) return;

  auto run_once = [&]() {
    run::Workspace ws = run::build_workspace(load.config);
    return run::run_tasks(ws, load.config);
  };
  run::RunResult r1 = run_once();
  run::RunResult r2 = run_once();
  for (const auto& o : r1.outcomes)
    c.require(o.passed, cat("task ", o.id, " failed: ", o.error));
  c.require(r1.all_passed() && r2.all_passed(), "not all tasks passed");

  const std::string j1 = run::render_report(r1, "json");
  const std::string j2 = run::render_report(r2, "json");
  c.require(j1 == j2, "JSON reports differ between reruns");
  c.require(run::render_report(r1, "csv") == run::render_report(r2, "csv"),
            "CSV reports differ between reruns");

  OutputConfig o1{"c13-a", "json"};
  OutputConfig o2{"c13-b", "json"};
  const std::string p1 = run::write_report(r1, o1);
  const std::string p2 = run::write_report(r2, o2);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  c.require(slurp(p1) == slurp(p2) && !slurp(p1).empty(),
            "report files differ between reruns");
  std::filesystem::remove_all("c13-a");
  std::filesystem::remove_all("c13-b");
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    void (*fn)(Criterion&);
  };
  const std::vector<Entry> entries{
      {"64-mode derivative certified 1-tame with unit bounds inside five seconds",
       criterion_1},
      {"derivative family floors grow linearly and the scan flags divergence inside ten seconds",
       criterion_2},
      {"source-halving and target-doubling norm laws: zero certified violations",
       criterion_3},
      {"ceiling scaling law holds on ten thousand random (vector, scale) pairs",
       criterion_4},
      {"composition doubles the order and product bounds dominate direct certificates",
       criterion_5},
      {"oscillation witnesses sit strictly inside their growth fences", criterion_6},
      {"strictness matches closed forms and the square-root quotient diverges",
       criterion_7},
      {"evaluation modulus: zero violations across three level/order settings",
       criterion_8},
      {"evaluation gadget: unbounded values along a null sequence of inputs",
       criterion_9},
      {"membership survives convex combination and separation witnesses scale",
       criterion_10},
      {"built-in palettes pass their axioms; strongness and absorption behave",
       criterion_11},
      {"single-level operator norms equal the classical values", criterion_12},
      {"identical configs and seeds reproduce reports byte for byte", criterion_13},
  };

  int passed = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Criterion c;
    try {
      entries[i].fn(c);
    } catch (const std::exception& e) {
      c.require(false, cat("threw: ", e.what()));
    }
    const bool ok = c.ok();
    passed += ok ? 1 : 0;
    std::cout << "criterion " << (i + 1 < 10 ? " " : "") << i + 1 << ": "
              << (ok ? "PASS" : "FAIL") << "  " << entries[i].label << "\n";
    for (const auto& note : c.notes) std::cout << "    - " << note << "\n";
    if (c.suppressed > 0)
      std::cout << "    - ... and " << c.suppressed << " more\n";
  }
  std::cout << passed << " of " << entries.size() << " criteria passed\n";
  return passed == static_cast<int>(entries.size()) ? 0 : 1;
}
