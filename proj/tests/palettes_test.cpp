#include "gmv/palettes.hpp"
#include "gmv/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace gmv;

namespace {
ModelSpace test_model() { return ModelSpace::sequence_power("seq", 6, 2); }

std::vector<PaletteProbe> identity_probe(const ModelSpace& m) {
  return {{"identity", &m, make_identity(m)}};
}
}  // namespace

TEST_CASE("body oracles: caps, containment, and carriers stay consistent") {
  ModelSpace m = test_model();
  BodyCalc calc(m);
  ConvexBody box = ConvexBody::box(m, Vec::Constant(3, 1.0));
  ConvexBody big_box = ConvexBody::box(m, Vec::Constant(3, 2.0));
  CHECK(calc.contained_in(box, big_box).state == TriState::yes);
  CHECK(calc.contained_in(big_box, box).state == TriState::no);
  Mat carriers = calc.carrier_points(box);
  REQUIRE(carriers.cols() > 0);
  for (Eigen::Index c = 0; c < carriers.cols(); ++c)
    CHECK(calc.contains_point(box, carriers.col(c)).state != TriState::no);
  ConvexBody ball = ConvexBody::ball(m, Vec::Zero(6), 0.25);
  CHECK(calc.to_zero_sup(ball) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(calc.diameter_upper(ball) <= 0.5 + 1e-9);
}

TEST_CASE("every builtin palette passes its axioms on a small model") {
  ModelSpace m = test_model();
  auto probes = identity_probe(m);
  for (const char* name : {"FC", "F", "CC", "C", "PC", "S", "B", "B_s", "T_2"}) {
    PaletteFamily family = builtin_palette(name, m);
    PaletteCheckReport rep = check_axioms(family, m, probes);
    INFO("palette ", name);
    for (const auto& ax : rep.axioms) {
      INFO("axiom ", ax.axiom, ": ", ax.detail,
           ax.failures.empty() ? "" : (" / " + ax.failures.front()));
      CHECK(ax.passed);
    }
    CHECK(rep.all_passed());
  }
}

TEST_CASE("the ball ladder family is strong; a wide listed family is not") {
  ModelSpace m = test_model();
  PaletteFamily bs = builtin_palette("B_s", m);
  StrongnessReport strong = is_strong(bs, m);
  INFO(strong.note);
  CHECK(strong.strong);
  CHECK(strong.witnesses.size() == m.levels());

  // A single generator whose carrier pair sits farther apart than any dyadic
  // ball below level one can accommodate, with no scalings to shrink it.
  PaletteFamily foil;
  foil.name = "wide";
  foil.model_id = m.id;
  foil.scaling = ScalingMode::none;
  foil.rule = MembershipRule::listed_only;
  foil.flags = {false, false, false};
  Mat verts(6, 2);
  verts.setZero();
  verts(0, 0) = 1.06;
  verts(0, 1) = -1.06;
  foil.generators.push_back(ConvexBody::polytope(m, verts));
  StrongnessReport weak = is_strong(foil, m);
  INFO(weak.note);
  CHECK(!weak.strong);
  CHECK(weak.first_failure == 1);
  CHECK(weak.failure_certified);
}

TEST_CASE("a family violating image bounds is caught by the first axiom") {
  ModelSpace m = test_model();
  // gauge sublevels cap only the bottom of the tower: a probe that shifts
  // weight upward escapes every finite cap at the top level.
  PaletteFamily family = builtin_palette("FC", m);
  family.generators.push_back(ConvexBody::sublevel(m, 0, 1.0));
  Vec ramp(6);
  for (int i = 0; i < 6; ++i) ramp[i] = static_cast<double>(6 - i);
  std::vector<PaletteProbe> probes{{"ramp", &m, make_diagonal(m, ramp, "ramp")}};
  PaletteCheckReport rep = check_axioms(family, m, probes);
  CHECK(!rep.axiom(1).passed);
  REQUIRE(!rep.axiom(1).failures.empty());
}

TEST_CASE("tame point sets against growth envelopes") {
  ModelSpace m = test_model();
  Mat points(6, 2);
  points.setZero();
  points(0, 0) = 0.5;
  points(1, 1) = 0.25;
  TameSetReport tame = is_tame_set(m, points, 2.0, 4.0);
  CHECK(tame.tame);
  CHECK(!tame.certified_not);
  Mat wild(6, 1);
  wild.setZero();
  wild(5, 0) = 1e9;  // level-n gauge grows like (6)^n * 1e9
  TameSetReport bad = is_tame_set(m, wild, 2.0, 1.0);
  CHECK(!bad.tame);
  CHECK(bad.certified_not);
}

TEST_CASE("level-cap boxes report finite caps and certified membership") {
  ModelSpace m = test_model();
  Vec caps(3);
  caps << 1.0, 2.0, 4.0;
  AaBoxReport rep = aa_box(m, caps);
  REQUIRE(rep.caps.size() == 3);
  // Only gauge levels strictly above a seminorm level constrain it, so the
  // top seminorm is never capped and the box cannot be finitely capped there.
  CHECK(rep.caps[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(rep.caps[1] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(!std::isfinite(rep.caps[2]));
  CHECK(!rep.all_finite);
  // The metric itself is bounded, so the diameter bound stays finite anyway.
  CHECK(std::isfinite(rep.diameter_upper));
  Vec inside = Vec::Zero(6);
  inside[0] = 0.25;
  CHECK(aa_box_contains(m, caps, inside).state == TriState::yes);
  // The level-0 lower gauge vanishes identically (every radius-1 constraint
  // is vacuous), so a certified exclusion must clear level 0 first and fail
  // at a level whose lower gauge actually sees the point.
  Vec loose(3);
  loose << 200.0, 2.0, 4.0;
  Vec outside = Vec::Zero(6);
  outside[0] = 100.0;
  CHECK(aa_box_contains(m, loose, outside).state == TriState::no);
  CHECK(aa_box_contains(m, caps, outside).state == TriState::undecided);
}

TEST_CASE("absorption index matches a brute-force scan of the chain") {
  ModelSpace m = ModelSpace::sequence_power("seq4", 4, 2);
  BodyCalc calc(m);
  std::vector<ConvexBody> chain;
  for (int j = 0; j < 6; ++j)
    chain.push_back(ConvexBody::box(m, Vec::Constant(3, 0.125 * std::exp2(j))));
  PaletteFamily family = builtin_palette("FC", m);
  AbsorptionReport rep = absorption_index(m, chain, family);
  REQUIRE(rep.found);
  // Brute force with the identical one-sided oracle: smallest chain position
  // whose element absorbs every generator under some dyadic lambda <= 2^40.
  auto absorbs_all = [&](const ConvexBody& o) {
    for (const auto& g : family.generators) {
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
  REQUIRE(brute > 0);
  CHECK(rep.index == brute);
}

TEST_CASE("absorption rejects chains that fail to ascend") {
  ModelSpace m = ModelSpace::sequence_power("seq4", 4, 2);
  std::vector<ConvexBody> not_ascending{
      ConvexBody::box(m, Vec::Constant(3, 2.0)),
      ConvexBody::box(m, Vec::Constant(3, 1.0)),
  };
  PaletteFamily family = builtin_palette("FC", m);
  CHECK_THROWS_AS(absorption_index(m, not_ascending, family), std::invalid_argument);
}

TEST_CASE("maps_into: contractions land in the target box, expansions escape") {
  ModelSpace m = test_model();
  ConvexBody small_box = ConvexBody::box(m, Vec::Constant(3, 0.5));
  ConvexBody unit_box = ConvexBody::box(m, Vec::Constant(3, 1.0));
  GradedOperator half = scale_operator(make_identity(m), 0.25);
  half.id = "quarter";
  MapsIntoReport in = maps_into(m, m, half, small_box, unit_box);
  CHECK(in.state == TriState::yes);
  GradedOperator big = scale_operator(make_identity(m), 64.0);
  big.id = "blowup";
  MapsIntoReport out = maps_into(m, m, big, unit_box, small_box);
  CHECK(out.state == TriState::no);
  CHECK(out.certified);
}
