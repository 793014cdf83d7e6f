#include "runner.hpp"

#include "gmv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gmv::run {
namespace {

// --- argument helpers --------------------------------------------------------

const ojson* find_arg(const ojson& args, const char* key) {
  if (!args.is_object()) return nullptr;
  auto it = args.find(key);
  return it == args.end() ? nullptr : &*it;
}

bool has_arg(const ojson& args, const char* key) { return find_arg(args, key) != nullptr; }

double num_arg(const ojson& args, const char* key, double fallback) {
  const ojson* v = find_arg(args, key);
  if (!v) return fallback;
  if (!v->is_number())
    throw std::invalid_argument(std::string("task argument '") + key + "' must be a number");
  return v->get<double>();
}

std::size_t size_arg(const ojson& args, const char* key, std::size_t fallback) {
  const ojson* v = find_arg(args, key);
  if (!v) return fallback;
  if (!v->is_number_integer() || v->get<long long>() < 0)
    throw std::invalid_argument(std::string("task argument '") + key +
                                "' must be a nonnegative integer");
  return static_cast<std::size_t>(v->get<long long>());
}

std::uint64_t u64_arg(const ojson& args, const char* key, std::uint64_t fallback) {
  const ojson* v = find_arg(args, key);
  if (!v) return fallback;
  if (!v->is_number_unsigned() && !v->is_number_integer())
    throw std::invalid_argument(std::string("task argument '") + key +
                                "' must be an unsigned integer");
  return v->get<std::uint64_t>();
}

bool bool_arg(const ojson& args, const char* key, bool fallback) {
  const ojson* v = find_arg(args, key);
  if (!v) return fallback;
  if (!v->is_boolean())
    throw std::invalid_argument(std::string("task argument '") + key + "' must be a boolean");
  return v->get<bool>();
}

std::string str_arg(const ojson& args, const char* key, const std::string& fallback) {
  const ojson* v = find_arg(args, key);
  if (!v) return fallback;
  if (!v->is_string())
    throw std::invalid_argument(std::string("task argument '") + key + "' must be a string");
  return v->get<std::string>();
}

std::string required_str(const ojson& args, const char* key) {
  const ojson* v = find_arg(args, key);
  if (!v || !v->is_string())
    throw std::invalid_argument(std::string("task needs a string argument '") + key + "'");
  return v->get<std::string>();
}

Vec vec_arg(const ojson& args, const char* key) {
  const ojson* v = find_arg(args, key);
  if (!v || !v->is_array() || v->empty())
    throw std::invalid_argument(std::string("task needs a numeric array argument '") + key + "'");
  Vec out(static_cast<Eigen::Index>(v->size()));
  Eigen::Index i = 0;
  for (const auto& e : *v) {
    if (!e.is_number())
      throw std::invalid_argument(std::string("task argument '") + key +
                                  "' must contain only numbers");
    out[i++] = e.get<double>();
  }
  return out;
}

std::vector<double> dvec_arg(const ojson& args, const char* key) {
  Vec v = vec_arg(args, key);
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::vector<std::size_t> sizes_arg(const ojson& args, const char* key,
                                   std::vector<std::size_t> fallback) {
  const ojson* v = find_arg(args, key);
  if (!v) return fallback;
  if (!v->is_array() || v->empty())
    throw std::invalid_argument(std::string("task argument '") + key +
                                "' must be a nonempty array of sizes");
  std::vector<std::size_t> out;
  for (const auto& e : *v) {
    if (!e.is_number_integer() || e.get<long long>() <= 0)
      throw std::invalid_argument(std::string("task argument '") + key +
                                  "' must contain positive integers");
    out.push_back(static_cast<std::size_t>(e.get<long long>()));
  }
  return out;
}

OpNormParams norm_params(const RunConfig& config, const ojson& args) {
  OpNormParams p;
  p.seed = u64_arg(args, "seed", config.seed);
  p.dirs_per_level = size_arg(args, "dirs_per_level", p.dirs_per_level);
  p.lower_samples = size_arg(args, "lower_samples", p.lower_samples);
  return p;
}

OpNormVariant variant_arg(const ojson& args) {
  std::string name = str_arg(args, "variant", "hamilton");
  if (name == "hamilton") return OpNormVariant::hamilton;
  if (name == "dyadic") return OpNormVariant::dyadic;
  throw std::invalid_argument("unknown norm variant '" + name +
                              "' (expected hamilton or dyadic)");
}

KSetSpec kset_spec_arg(const ojson& args) {
  KSetSpec spec;
  std::string form = str_arg(args, "form", "power");
  if (form == "power") {
    spec.form = AMapForm::power;
  } else if (form == "geometric") {
    spec.form = AMapForm::geometric;
  } else {
    throw std::invalid_argument("unknown bound-map form '" + form +
                                "' (expected power or geometric)");
  }
  spec.scale = num_arg(args, "scale", spec.scale);
  spec.base = num_arg(args, "base", spec.base);
  return spec;
}

bool decide(const TaskConfig& task, bool positive) {
  return task.expect_negative ? !positive : positive;
}

// --- task handlers ------------------------------------------------------------
// Each handler fills outcome.report and sets outcome.passed (already folded
// through expect_negative).  Throwing is fine: the caller records the error
// and scores the task as its negative outcome.

void handle_build(const Workspace& ws, const RunConfig&, const TaskConfig& task,
                  TaskOutcome& out) {
  ojson models = ojson::array();
  for (const auto& id : ws.model_order) models.push_back(model_summary(ws.model(id)));
  ojson operators = ojson::array();
  for (const auto& id : ws.operator_order) operators.push_back(operator_summary(ws.op(id)));
  out.report["models"] = std::move(models);
  out.report["operators"] = std::move(operators);
  out.passed = decide(task, true);
}

void handle_certify(const Workspace& ws, const RunConfig& config, const TaskConfig& task,
                    TaskOutcome& out) {
  const GradedOperator& A = ws.op(required_str(task.args, "operator"));
  const ModelSpace& src = ws.model(A.source_model);
  const ModelSpace& dst = ws.model(A.target_model);
  std::size_t r = size_arg(task.args, "r", 1);
  std::size_t b = size_arg(task.args, "b", 0);
  OpNormParams params = norm_params(config, task.args);
  TamenessCertificate cert = certify_tame(src, dst, A, r, b, variant_arg(task.args), params);
  out.report["certificate"] = to_json(cert);
  bool positive = cert.valid;
  if (has_arg(task.args, "bound_cap")) {
    double cap = num_arg(task.args, "bound_cap", 0.0);
    bool within = true;
    for (Eigen::Index i = 0; i < cert.bounds.size(); ++i)
      within = within && cert.bounds[i] <= cap + config.tolerance;
    out.report["bound_cap"] = cap;
    out.report["bounds_within_cap"] = within;
    positive = positive && within;
  }
  if (bool_arg(task.args, "recheck", false)) {
    RecheckReport rr =
        recheck_certificate(src, dst, A, cert, params.seed + 1, config.tolerance);
    out.report["recheck"] = to_json(rr);
    positive = positive && rr.ok();
  }
  out.passed = decide(task, positive);
}

void handle_scan(const Workspace&, const RunConfig& config, const TaskConfig& task,
                 TaskOutcome& out) {
  std::vector<std::size_t> sizes = sizes_arg(task.args, "sizes", {8, 16, 32, 64});
  std::size_t r = size_arg(task.args, "r", 0);
  std::size_t levels = size_arg(task.args, "levels", 3);
  std::size_t grid_factor = size_arg(task.args, "grid_factor", 4);
  if (grid_factor < 4)
    throw std::invalid_argument("scan grid_factor must be at least 4");
  std::string family = str_arg(task.args, "family", "derivative");
  if (family != "derivative")
    throw std::invalid_argument("unknown scan family '" + family + "'");
  OpNormParams params = norm_params(config, task.args);
  auto builder = [&](std::size_t n) {
    ModelSpace model = ModelSpace::trig("scan-" + std::to_string(n), n, levels,
                                        grid_factor * n + 1);
    GradedOperator op = make_derivative(model);
    return std::make_pair(std::move(model), std::move(op));
  };
  DivergenceEvidence ev = nontameness_scan(builder, sizes, r, params);
  out.report["evidence"] = to_json(ev);
  bool floor_ok = true;
  if (bool_arg(task.args, "require_floor", false)) {
    for (std::size_t i = 0; i < sizes.size(); ++i)
      floor_ok = floor_ok &&
                 ev.lower_bounds[static_cast<Eigen::Index>(i)] >=
                     static_cast<double>(sizes[i]) * (1.0 - 1e-12);
    out.report["floor_ok"] = floor_ok;
  }
  out.passed = decide(task, ev.verdict == "bounded_fit") && floor_ok;
}

void handle_norm(const Workspace& ws, const RunConfig& config, const TaskConfig& task,
                 TaskOutcome& out) {
  const GradedOperator& A = ws.op(required_str(task.args, "operator"));
  const ModelSpace& src = ws.model(A.source_model);
  const ModelSpace& dst = ws.model(A.target_model);
  std::size_t m = size_arg(task.args, "m", 0);
  std::size_t n = size_arg(task.args, "n", 0);
  OpNormResult res =
      op_norm(src, dst, A, m, n, variant_arg(task.args), norm_params(config, task.args));
  out.report["result"] = to_json(res);
  bool positive = res.value.lower <= res.value.upper + config.tolerance;
  if (has_arg(task.args, "expect_value")) {
    double expect = num_arg(task.args, "expect_value", 0.0);
    double slack = num_arg(task.args, "rel_tol", config.tolerance) *
                   std::max(1.0, std::abs(expect));
    bool contained =
        res.value.lower <= expect + slack && res.value.upper >= expect - slack;
    out.report["expect_value"] = expect;
    out.report["expect_contained"] = contained;
    positive = positive && contained;
  }
  out.passed = decide(task, positive);
}

void handle_metric(const Workspace& ws, const RunConfig& config, const TaskConfig& task,
                   TaskOutcome& out) {
  const ModelSpace& model = ws.model(required_str(task.args, "model"));
  const FrechetMetric& metric = model.metric();
  std::string op = str_arg(task.args, "op", "to_zero");
  out.report["op"] = op;
  bool positive = true;
  if (op == "distance") {
    double d = metric.distance(vec_arg(task.args, "u"), vec_arg(task.args, "v"));
    out.report["distance"] = d;
    if (has_arg(task.args, "expect")) {
      double expect = num_arg(task.args, "expect", 0.0);
      double tol = num_arg(task.args, "tol", config.tolerance);
      positive = std::abs(d - expect) <= tol;
      out.report["expect"] = expect;
    }
  } else if (op == "to_zero") {
    double d = metric.to_zero(vec_arg(task.args, "v"));
    out.report["value"] = d;
    if (has_arg(task.args, "expect")) {
      double expect = num_arg(task.args, "expect", 0.0);
      double tol = num_arg(task.args, "tol", config.tolerance);
      positive = std::abs(d - expect) <= tol;
      out.report["expect"] = expect;
    }
  } else if (op == "strictness") {
    Vec v = vec_arg(task.args, "v");
    double r_min = num_arg(task.args, "r_min", 1e-8);
    double r_max = num_arg(task.args, "r_max", 1.0);
    int grid = static_cast<int>(size_arg(task.args, "grid", 64));
    FrechetMetric::StrictnessResult sr = metric.strictness(v, r_min, r_max, grid);
    out.report["strictness"] = to_json(sr);
    if (has_arg(task.args, "expect")) {
      double expect = num_arg(task.args, "expect", 0.0);
      double rel = num_arg(task.args, "rel_tol", 0.05);
      positive = positive && std::abs(sr.value - expect) <= rel * std::abs(expect);
      out.report["expect"] = expect;
    }
    if (has_arg(task.args, "min_value")) {
      double floor = num_arg(task.args, "min_value", 0.0);
      positive = positive && sr.value >= floor;
      out.report["min_value"] = floor;
    }
  } else if (op == "scaling_law") {
    std::size_t trials = size_arg(task.args, "trials", 1000);
    double s_max = num_arg(task.args, "s_max", 10.0);
    CounterRng rng(u64_arg(task.args, "seed", config.seed), "scaling-law");
    std::size_t violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    const auto dim = static_cast<Eigen::Index>(model.dim());
    for (std::size_t t = 0; t < trials; ++t) {
      Vec v(dim);
      for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.next_gaussian();
      double s = rng.uniform(0.0, s_max);
      if (s == 0.0) s = 0.5 * s_max;
      auto res = metric.scalar_bound_check(v, s, config.tolerance);
      if (!res.ok) ++violations;
      worst = std::min(worst, res.margin);
    }
    if (trials == 0) worst = 0.0;
    out.report["trials"] = trials;
    out.report["violations"] = violations;
    out.report["worst_margin"] = worst;
    positive = violations == 0;
  } else {
    throw std::invalid_argument("unknown metric op '" + op +
                                "' (expected distance, to_zero, strictness, scaling_law)");
  }
  out.passed = decide(task, positive);
}

void handle_palette(const Workspace& ws, const RunConfig& config, const TaskConfig& task,
                    TaskOutcome& out) {
  const ModelSpace& model = ws.model(required_str(task.args, "model"));
  std::string name = str_arg(task.args, "name", "FC");
  PaletteParams pp;
  pp.s = num_arg(task.args, "s", pp.s);
  pp.alpha = num_arg(task.args, "alpha", pp.alpha);
  pp.ladder = size_arg(task.args, "ladder", pp.ladder);
  PaletteFamily family = builtin_palette(name, model, pp);

  std::vector<PaletteProbe> probes;
  if (const ojson* ids = find_arg(task.args, "probes")) {
    if (!ids->is_array())
      throw std::invalid_argument("task argument 'probes' must be an array of operator ids");
    for (const auto& e : *ids) {
      if (!e.is_string())
        throw std::invalid_argument("task argument 'probes' must contain operator id strings");
      const GradedOperator& A = ws.op(e.get<std::string>());
      probes.push_back({A.id, &ws.model(A.target_model), A});
    }
  } else {
    probes.push_back({"identity", &model, make_identity(model)});
  }

  PaletteCheckParams pcp;
  pcp.norm = norm_params(config, task.args);
  pcp.hull_points = size_arg(task.args, "hull_points", pcp.hull_points);
  PaletteCheckReport rep = check_axioms(family, model, probes, pcp);
  out.report["palette"] = name;
  out.report["axioms"] = to_json(rep);
  bool positive = rep.all_passed();
  if (bool_arg(task.args, "strongness", false) || bool_arg(task.args, "require_strong", false)) {
    StrongnessReport sr = is_strong(family, model, size_arg(task.args, "scaling_depth", 40));
    out.report["strongness"] = to_json(sr);
    if (bool_arg(task.args, "require_strong", false)) positive = positive && sr.strong;
  }
  out.passed = decide(task, positive);
}

void handle_witness(const Workspace& ws, const RunConfig& config, const TaskConfig& task,
                    TaskOutcome& out) {
  const std::string name = required_str(task.args, "name");
  out.witness = name;
  bool positive = true;

  if (name == "step_full") {
    const ModelSpace& model = ws.model(required_str(task.args, "model"));
    double s = num_arg(task.args, "s", 1.0);
    StepWitness w = step_full_witness(model, s);
    out.report["witness"] = to_json(w);
    // Growth bracket s^i < ||v||_i < (4s)^i.  At i = 0 both fences equal 1
    // and the grid sup of the oscillation sits just below it, so only the
    // upper fence carries content there; the lower fence is checked from
    // the first derivative level on.
    bool bracket = true;
    for (Eigen::Index i = 0; i < w.seminorms.size(); ++i) {
      double lo = std::pow(s, static_cast<double>(i));
      double hi = std::pow(4.0 * s, static_cast<double>(i));
      bool ok = w.seminorms[i] < hi && (i == 0 || w.seminorms[i] > lo);
      bracket = bracket && ok;
    }
    out.report["bracket_ok"] = bracket;
    positive = bracket;
  } else if (name == "sin_ratio") {
    const ModelSpace& model = ws.model(required_str(task.args, "model"));
    std::size_t n = size_arg(task.args, "N", 8);
    SinRatioResult r = sin_mode_ratio(model, n);
    out.report["ratio"] = to_json(r);
    double floor = num_arg(task.args, "min_ratio", static_cast<double>(n));
    positive = r.ratio >= floor * (1.0 - 1e-12);
  } else if (name == "jet") {
    std::vector<double> points = dvec_arg(task.args, "points");
    std::vector<double> values = dvec_arg(task.args, "values");
    int order = static_cast<int>(size_arg(task.args, "order", points.size()));
    JetParams jp;
    jp.enforce_smallness = bool_arg(task.args, "smallness", false);
    jp.smoothness = static_cast<int>(size_arg(task.args, "smoothness", 10));
    if (has_arg(task.args, "widths")) jp.widths = dvec_arg(task.args, "widths");
    JetResult jr = prescribed_jet(points, values, order, jp);
    out.report["jet"] = to_json(jr.report);
    positive = jr.report.supports_disjoint && jr.report.fd_max_rel_err <= 1e-6;
    for (const auto& c : jr.report.conditions) positive = positive && c.rel_err <= 1e-9;
    for (const auto& s : jr.report.smallness) positive = positive && s.ok;
  } else if (name == "extension") {
    const ModelSpace& model = ws.model(required_str(task.args, "model"));
    Vec w = vec_arg(task.args, "w");
    double c = num_arg(task.args, "c", 1.0);
    DualBound p;
    p.level = size_arg(task.args, "level", model.levels() - 1);
    p.scale = num_arg(task.args, "scale", 1.0);
    std::size_t samples = size_arg(task.args, "samples", 2048);
    ExtensionReport er = dominated_extension(model, w, c, p,
                                             u64_arg(task.args, "seed", 0x65787431ull), samples);
    out.report["extension"] = to_json(er);
    positive = er.feasible && er.max_violation <= config.tolerance &&
               std::abs(er.value_at_w - c) <= config.tolerance * std::max(1.0, std::abs(c));
  } else if (name == "unbounded") {
    const ModelSpace& model = ws.model(required_str(task.args, "model"));
    double eps = num_arg(task.args, "eps", 0.5);
    std::size_t terms = size_arg(task.args, "terms", 3);
    UnboundedLadder ul = unbounded_functional(model, eps, terms);
    out.report["ladder"] = to_json(ul);
    for (Eigen::Index i = 0; i < ul.witness_dists.size(); ++i)
      positive = positive && ul.witness_dists[i] < eps;
    for (Eigen::Index i = 0; i + 1 < ul.values.size(); ++i)
      positive = positive && ul.values[i] < ul.values[i + 1];
  } else if (name == "gadget") {
    const ModelSpace& model = ws.model(required_str(task.args, "model"));
    std::size_t rungs = size_arg(task.args, "rungs", 5);
    GadgetReport g = eval_discontinuity_gadget(model, rungs);
    out.report["gadget"] = to_json(g);
    positive = g.supports_disjoint && g.far_value == 0.0;
    for (const auto& r : g.rungs)
      positive = positive && r.value > static_cast<double>(r.index) &&
                 r.dist <= std::exp2(-static_cast<double>(r.index));
  } else if (name == "hausdorff") {
    const GradedOperator& A = ws.op(required_str(task.args, "operator"));
    HausdorffWitness hw =
        hausdorff_witness(ws.model(A.source_model), ws.model(A.target_model), A,
                          kset_spec_arg(task.args), norm_params(config, task.args));
    out.report["separation"] = to_json(hw);
    positive = hw.n_scale >= 1.0;
    if (bool_arg(task.args, "require_certified", false))
      positive = positive && hw.separation_certified;
  } else if (name == "modulus") {
    const ModelSpace& model = ws.model(required_str(task.args, "model"));
    std::size_t n = size_arg(task.args, "n", 3);
    std::size_t r = size_arg(task.args, "r", 1);
    std::size_t trials = size_arg(task.args, "trials", 10000);
    ModulusReport mr = eval_modulus(model, n, r, trials,
                                    u64_arg(task.args, "seed", config.seed),
                                    size_arg(task.args, "dirs_per_level", 8));
    out.report["modulus"] = to_json(mr);
    positive = mr.ok();
  } else if (name == "kj") {
    const GradedOperator& A = ws.op(required_str(task.args, "operator"));
    std::size_t j = size_arg(task.args, "j", 1);
    KjMembership km =
        kj_membership(ws.model(A.source_model), ws.model(A.target_model), A, j,
                      kset_spec_arg(task.args), norm_params(config, task.args));
    out.report["membership"] = to_json(km);
    positive = km.member == bool_arg(task.args, "expect_member", true);
  } else {
    throw std::invalid_argument(
        "unknown witness '" + name +
        "' (expected step_full, sin_ratio, jet, extension, unbounded, gadget, "
        "hausdorff, modulus, kj)");
  }
  out.passed = decide(task, positive);
}

std::string witness_name_of(const TaskConfig& task) {
  const ojson* v = find_arg(task.args, "name");
  return v && v->is_string() ? v->get<std::string>() : std::string();
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

const ModelSpace& Workspace::model(const std::string& id) const {
  auto it = models.find(id);
  if (it == models.end()) throw std::invalid_argument("unknown model '" + id + "'");
  return it->second;
}

const GradedOperator& Workspace::op(const std::string& id) const {
  auto it = operators.find(id);
  if (it == operators.end()) throw std::invalid_argument("unknown operator '" + id + "'");
  return it->second;
}

Workspace build_workspace(const RunConfig& config) {
  Workspace ws;
  for (const auto& mc : config.models) {
    ShapeFn phi = ShapeFn::from_name(mc.phi);
    ModelSpace model = [&]() {
      if (mc.kind == "trig") {
        std::size_t grid = mc.grid != 0 ? mc.grid : 4 * mc.modes + 1;
        return ModelSpace::trig(mc.id, mc.modes, mc.levels, grid, phi);
      }
      if (mc.kind == "sequence_power")
        return ModelSpace::sequence_power(mc.id, mc.dim, mc.levels, phi);
      if (mc.kind == "scalar") return ModelSpace::scalar(mc.id, mc.levels, phi);
      if (mc.kind == "scalar_sqrt") return ModelSpace::scalar_sqrt(mc.id);
      throw std::invalid_argument("unknown model kind '" + mc.kind + "'");
    }();
    ws.model_order.push_back(mc.id);
    ws.models.emplace(mc.id, std::move(model));
  }
  auto as_vec = [](const std::vector<double>& v) {
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())).eval();
  };
  for (const auto& oc : config.operators) {
    GradedOperator op = [&]() {
      if (oc.kind == "derivative") return make_derivative(ws.model(oc.model), oc.id);
      if (oc.kind == "multiplication")
        return make_multiplication(ws.model(oc.source), ws.model(oc.target),
                                   as_vec(oc.coeffs), oc.id);
      if (oc.kind == "diagonal")
        return make_diagonal(ws.model(oc.model), as_vec(oc.coeffs), oc.id);
      if (oc.kind == "matrix") {
        const ModelSpace& src = ws.model(oc.source);
        const ModelSpace& dst = ws.model(oc.target);
        Mat m(static_cast<Eigen::Index>(oc.matrix.size()),
              oc.matrix.empty() ? 0 : static_cast<Eigen::Index>(oc.matrix.front().size()));
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
          const auto& row = oc.matrix[static_cast<std::size_t>(i)];
          if (static_cast<Eigen::Index>(row.size()) != m.cols())
            throw std::invalid_argument("operator '" + oc.id + "': ragged matrix rows");
          for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = row[static_cast<std::size_t>(j)];
        }
        return make_matrix(src, dst, std::move(m), oc.id);
      }
      if (oc.kind == "identity") return make_identity(ws.model(oc.model), oc.id);
      if (oc.kind == "zero")
        return make_zero(ws.model(oc.source), ws.model(oc.target), oc.id);
      if (oc.kind == "scale") {
        GradedOperator r = scale_operator(ws.op(oc.of.at(0)), oc.lambda);
        r.id = oc.id;
        return r;
      }
      if (oc.kind == "sum") {
        GradedOperator r = sum_operators(ws.op(oc.of.at(0)), ws.op(oc.of.at(1)));
        r.id = oc.id;
        return r;
      }
      if (oc.kind == "compose") {
        // `of` lists the maps in application order: of[0] runs first.
        GradedOperator r = compose_operators(ws.op(oc.of.at(1)), ws.op(oc.of.at(0)));
        r.id = oc.id;
        return r;
      }
      throw std::invalid_argument("unknown operator kind '" + oc.kind + "'");
    }();
    ws.operator_order.push_back(oc.id);
    ws.operators.emplace(oc.id, std::move(op));
  }
  return ws;
}

bool RunResult::all_passed() const {
  for (const auto& o : outcomes)
    if (!o.passed) return false;
  return true;
}

std::size_t RunResult::passed_count() const {
  std::size_t n = 0;
  for (const auto& o : outcomes) n += o.passed ? 1 : 0;
  return n;
}

RunResult run_tasks(const Workspace& ws, const RunConfig& config, const TaskFilter& filter) {
  RunResult result;
  for (const auto& task : config.tasks) {
    if (!filter.kind.empty() && task.kind != filter.kind) continue;
    if (!filter.witness.empty() &&
        (task.kind != "witness" || witness_name_of(task) != filter.witness))
      continue;
    TaskOutcome out;
    out.id = task.id;
    out.kind = task.kind;
    out.expect_negative = task.expect_negative;
    try {
      if (task.kind == "build") {
        handle_build(ws, config, task, out);
      } else if (task.kind == "certify") {
        handle_certify(ws, config, task, out);
      } else if (task.kind == "scan") {
        handle_scan(ws, config, task, out);
      } else if (task.kind == "norm") {
        handle_norm(ws, config, task, out);
      } else if (task.kind == "metric") {
        handle_metric(ws, config, task, out);
      } else if (task.kind == "palette") {
        handle_palette(ws, config, task, out);
      } else if (task.kind == "witness") {
        handle_witness(ws, config, task, out);
      } else {
        throw std::invalid_argument("unknown task kind '" + task.kind + "'");
      }
    } catch (const std::exception& e) {
      out.error = e.what();
      out.report = ojson{{"error", out.error}};
      out.passed = task.expect_negative;
    }
    result.outcomes.push_back(std::move(out));
  }
  return result;
}

std::string render_report(const RunResult& result, const std::string& format) {
  std::ostringstream os;
  if (format == "csv") {
    os << "id,kind,witness,passed,expect_negative,error\n";
    for (const auto& o : result.outcomes) {
      os << csv_quote(o.id) << ',' << o.kind << ',' << csv_quote(o.witness) << ','
         << (o.passed ? "true" : "false") << ',' << (o.expect_negative ? "true" : "false")
         << ',' << csv_quote(o.error) << '\n';
    }
    os << "__summary__,run,," << (result.all_passed() ? "true" : "false") << ",,"
       << result.passed_count() << " of " << result.outcomes.size() << " passed\n";
    return os.str();
  }
  if (format != "json")
    throw std::invalid_argument("unknown report format '" + format +
                                "' (expected json or csv)");
  for (const auto& o : result.outcomes) {
    ojson line;
    line["id"] = o.id;
    line["kind"] = o.kind;
    if (!o.witness.empty()) line["witness"] = o.witness;
    line["passed"] = o.passed;
    line["expect_negative"] = o.expect_negative;
    if (!o.error.empty()) line["error"] = o.error;
    line["report"] = o.report;
    os << line.dump() << '\n';
  }
  ojson summary;
  summary["summary"] = ojson{{"tasks", result.outcomes.size()},
                             {"passed", result.passed_count()},
                             {"all_passed", result.all_passed()}};
  os << summary.dump() << '\n';
  return os.str();
}

std::string write_report(const RunResult& result, const OutputConfig& out) {
  std::filesystem::create_directories(out.dir);
  std::string path =
      (std::filesystem::path(out.dir) / (out.format == "csv" ? "reports.csv" : "reports.jsonl"))
          .string();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open report file '" + path + "'");
  f << render_report(result, out.format);
  return path;
}

}  // namespace gmv::run
