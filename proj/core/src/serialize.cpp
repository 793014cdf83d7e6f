#include "gmv/serialize.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace gmv {

namespace {

ojson vec_to_json(const Vec& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ojson dvec_to_json(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(x);
  return a;
}

ojson svec_to_json(const std::vector<std::string>& v) {
  ojson a = ojson::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

}  // namespace

ojson to_json(const GaugeValue& v) {
  return ojson{{"lower", v.lower},
               {"upper", v.upper},
               {"kind", v.kind == BoundKind::exact ? "exact" : "bracket"}};
}

ojson to_json(const OpNormResult& r) {
  return ojson{{"value", to_json(r.value)},
               {"source_level", r.source_level},
               {"target_level", r.target_level},
               {"variant", r.variant == OpNormVariant::hamilton ? "hamilton" : "dyadic"},
               {"method", r.method}};
}

ojson to_json(const TamenessCertificate& c) {
  return ojson{{"operator", c.operator_id},
               {"source_model", c.source_model},
               {"target_model", c.target_model},
               {"source_checksum", c.source_checksum},
               {"target_checksum", c.target_checksum},
               {"order", c.order},
               {"base", c.base},
               {"variant", c.variant == OpNormVariant::hamilton ? "hamilton" : "dyadic"},
               {"bounds", dvec_to_json(c.bounds)},
               {"lower_hints", dvec_to_json(c.lower_hints)},
               {"methods", svec_to_json(c.methods)},
               {"backend", c.backend},
               {"truncation", c.truncation},
               {"seed", c.seed},
               {"valid", c.valid},
               {"note", c.note}};
}

ojson to_json(const RecheckReport& r) {
  return ojson{{"checksums_match", r.checksums_match},
               {"bounds_respected", r.bounds_respected},
               {"worst_excess", r.worst_excess},
               {"levels_checked", r.levels_checked},
               {"ok", r.ok()}};
}

ojson to_json(const ModulusReport& r) {
  return ojson{{"level", r.level},         {"order", r.order},
               {"delta", r.delta},         {"trials", r.trials},
               {"violations", r.violations}, {"worst_ratio", r.worst_ratio},
               {"seed", r.seed},           {"ok", r.ok()}};
}

ojson to_json(const DivergenceEvidence& e) {
  ojson sizes = ojson::array();
  for (auto s : e.sizes) sizes.push_back(s);
  return ojson{{"sizes", sizes},
               {"lower_bounds", dvec_to_json(e.lower_bounds)},
               {"slope", e.slope},
               {"strictly_increasing", e.strictly_increasing},
               {"verdict", e.verdict},
               {"seed", e.seed}};
}

ojson to_json(const KjMembership& m) {
  return ojson{{"member", m.member},
               {"non_member_certified", m.non_member_certified},
               {"witness", m.witness},
               {"level", m.level},
               {"uppers", vec_to_json(m.uppers)},
               {"lowers", vec_to_json(m.lowers)},
               {"bounds", vec_to_json(m.bounds)},
               {"note", m.note}};
}

ojson to_json(const HausdorffWitness& w) {
  return ojson{{"level", w.level},
               {"n_scale", w.n_scale},
               {"direction", vec_to_json(w.direction)},
               {"separation_certified", w.separation_certified},
               {"note", w.note}};
}

ojson to_json(const BodyCheck& c) {
  return ojson{{"state", tri_state_name(c.state)},
               {"margin", c.margin},
               {"note", c.note}};
}

ojson to_json(const AxiomReport& a) {
  return ojson{{"axiom", a.axiom},
               {"passed", a.passed},
               {"detail", a.detail},
               {"failures", svec_to_json(a.failures)}};
}

ojson to_json(const PaletteCheckReport& r) {
  ojson axioms = ojson::array();
  for (const auto& a : r.axioms) axioms.push_back(to_json(a));
  return ojson{{"palette", r.palette},
               {"axioms", axioms},
               {"all_passed", r.all_passed()}};
}

ojson to_json(const StrongnessReport& r) {
  ojson w = ojson::array();
  for (const auto& x : r.witnesses)
    w.push_back(ojson{{"level", x.level},
                      {"generator", x.generator},
                      {"lambda", x.lambda},
                      {"reach", x.reach}});
  return ojson{{"strong", r.strong},
               {"witnesses", w},
               {"first_failure", r.first_failure},
               {"failure_certified", r.failure_certified},
               {"note", r.note}};
}

ojson to_json(const TameSetReport& r) {
  return ojson{{"tame", r.tame},
               {"certified_not", r.certified_not},
               {"witness_level", r.witness_level},
               {"uppers", vec_to_json(r.uppers)},
               {"lowers", vec_to_json(r.lowers)}};
}

ojson to_json(const AaBoxReport& r) {
  return ojson{{"body", r.body.describe()},
               {"caps", vec_to_json(r.caps)},
               {"diameter_upper", r.diameter_upper},
               {"all_finite", r.all_finite},
               {"note", r.note}};
}

ojson to_json(const AbsorptionReport& r) {
  return ojson{{"found", r.found},
               {"index", r.index},
               {"lambda", r.lambda},
               {"failure", r.failure}};
}

ojson to_json(const MapsIntoReport& r) {
  return ojson{{"state", tri_state_name(r.state)},
               {"certified", r.certified},
               {"margin", r.margin},
               {"confidence", r.confidence},
               {"note", r.note}};
}

ojson to_json(const JetReport& r) {
  ojson conds = ojson::array();
  for (const auto& c : r.conditions)
    conds.push_back(ojson{{"point", c.point},
                          {"order", c.order},
                          {"target", c.target},
                          {"achieved", c.achieved},
                          {"rel_err", c.rel_err}});
  ojson small = ojson::array();
  for (const auto& s : r.smallness)
    small.push_back(ojson{{"order", s.order},
                          {"k", s.k},
                          {"norm", s.norm},
                          {"bound", s.bound},
                          {"ok", s.ok}});
  return ojson{{"conditions", conds},
               {"smallness", small},
               {"fd_max_rel_err", r.fd_max_rel_err},
               {"supports_disjoint", r.supports_disjoint},
               {"note", r.note}};
}

ojson to_json(const ExtensionReport& r) {
  return ojson{{"feasible", r.feasible},
               {"functional", vec_to_json(r.functional)},
               {"needed", r.needed},
               {"bound", r.bound},
               {"value_at_w", r.value_at_w},
               {"max_violation", r.max_violation},
               {"checks", r.checks},
               {"note", r.note}};
}

ojson to_json(const UnboundedLadder& l) {
  return ojson{{"functional", vec_to_json(l.functional)},
               {"witness_dists", vec_to_json(l.witness_dists)},
               {"values", vec_to_json(l.values)},
               {"stage_norms", vec_to_json(l.stage_norms)},
               {"note", l.note}};
}

ojson to_json(const GadgetReport& g) {
  ojson rungs = ojson::array();
  for (const auto& r : g.rungs)
    rungs.push_back(ojson{{"index", r.index},
                          {"dist", r.dist},
                          {"value", r.value},
                          {"psi_at_w", r.psi_at_w}});
  return ojson{{"rungs", rungs},
               {"supports_disjoint", g.supports_disjoint},
               {"min_gap", g.min_gap},
               {"far_value", g.far_value},
               {"note", g.note}};
}

ojson to_json(const SinRatioResult& r) {
  return ojson{{"ratio", r.ratio},
               {"numerator", r.numerator},
               {"denominator", r.denominator}};
}

ojson to_json(const StepWitness& w) {
  return ojson{{"model", w.v.model_id}, {"seminorms", vec_to_json(w.seminorms)}};
}

ojson to_json(const FrechetMetric::StrictnessResult& s) {
  ojson tail = ojson::array();
  for (const auto& [r, q] : s.small_r_tail)
    tail.push_back(ojson{{"r", r}, {"ratio", q}});
  return ojson{{"value", s.value}, {"small_r_tail", tail}};
}

ojson model_summary(const ModelSpace& m) {
  const char* kind = m.kind == ModelSpace::Kind::trig
                         ? "trig"
                         : (m.kind == ModelSpace::Kind::sequence ? "sequence"
                                                                 : "scalar");
  ojson j{{"id", m.id},
          {"kind", kind},
          {"dim", m.dim()},
          {"levels", m.levels()},
          {"checksum", m.checksum()}};
  if (m.kind == ModelSpace::Kind::trig) {
    j["modes"] = m.trig_modes();
    j["grid_points"] = m.grid_points();
  }
  return j;
}

ojson operator_summary(const GradedOperator& a) {
  return ojson{{"id", a.id},
               {"source", a.source_model},
               {"target", a.target_model},
               {"rows", a.matrix.rows()},
               {"cols", a.matrix.cols()}};
}

// --- config -------------------------------------------------------------------

namespace {

template <typename T>
bool read_field(const ojson& j, const char* key, T& out, bool required,
                const std::string& where, std::vector<std::string>& errors) {
  if (!j.contains(key)) {
    if (required)
      errors.push_back(where + ": missing required field '" + key + "'");
    return false;
  }
  try {
    out = j.at(key).get<T>();
    return true;
  } catch (const std::exception&) {
    errors.push_back(where + ": field '" + key + "' has the wrong type");
    return false;
  }
}

}  // namespace

ConfigLoad parse_config(const ojson& doc) {
  ConfigLoad out;
  auto& errors = out.errors;
  auto& cfg = out.config;

  if (!doc.is_object()) {
    errors.push_back("config: document is not a JSON object");
    return out;
  }

  read_field(doc, "version", cfg.version, true, "config", errors);
  if (doc.contains("version") && cfg.version != 1)
    errors.push_back("config: unknown version " + std::to_string(cfg.version) +
                     " (this tool reads version 1)");

  cfg.seed_set = doc.contains("seed");
  if (cfg.seed_set) read_field(doc, "seed", cfg.seed, false, "config", errors);
  if (doc.contains("tolerance"))
    read_field(doc, "tolerance", cfg.tolerance, false, "config", errors);

  std::set<std::string> model_ids;
  if (doc.contains("models")) {
    if (!doc["models"].is_array()) {
      errors.push_back("config: 'models' must be an array");
    } else {
      std::size_t idx = 0;
      for (const auto& mj : doc["models"]) {
        const std::string where = "models[" + std::to_string(idx++) + "]";
        ModelConfig mc;
        read_field(mj, "id", mc.id, true, where, errors);
        read_field(mj, "kind", mc.kind, true, where, errors);
        if (mj.contains("modes")) read_field(mj, "modes", mc.modes, false, where, errors);
        if (mj.contains("levels")) read_field(mj, "levels", mc.levels, false, where, errors);
        if (mj.contains("grid")) read_field(mj, "grid", mc.grid, false, where, errors);
        if (mj.contains("dim")) read_field(mj, "dim", mc.dim, false, where, errors);
        if (mj.contains("phi")) read_field(mj, "phi", mc.phi, false, where, errors);
        static const std::set<std::string> kinds{"trig", "sequence_power",
                                                 "scalar", "scalar_sqrt"};
        if (!mc.kind.empty() && !kinds.count(mc.kind))
          errors.push_back(where + ": unknown model kind '" + mc.kind + "'");
        if (!mc.id.empty() && !model_ids.insert(mc.id).second)
          errors.push_back(where + ": duplicate model id '" + mc.id + "'");
        cfg.models.push_back(std::move(mc));
      }
    }
  }

  std::set<std::string> op_ids;
  if (doc.contains("operators")) {
    if (!doc["operators"].is_array()) {
      errors.push_back("config: 'operators' must be an array");
    } else {
      std::size_t idx = 0;
      for (const auto& oj : doc["operators"]) {
        const std::string where = "operators[" + std::to_string(idx++) + "]";
        OperatorConfig oc;
        read_field(oj, "id", oc.id, true, where, errors);
        read_field(oj, "kind", oc.kind, true, where, errors);
        static const std::set<std::string> one_model{"derivative", "diagonal",
                                                     "identity"};
        static const std::set<std::string> two_model{"multiplication", "matrix",
                                                     "zero"};
        static const std::set<std::string> derived{"scale", "sum", "compose"};
        if (one_model.count(oc.kind)) {
          read_field(oj, "model", oc.model, true, where, errors);
          if (!oc.model.empty() && !model_ids.count(oc.model))
            errors.push_back(where + ": operator '" + oc.id +
                             "' references undefined model '" + oc.model + "'");
        } else if (two_model.count(oc.kind)) {
          read_field(oj, "source", oc.source, true, where, errors);
          read_field(oj, "target", oc.target, true, where, errors);
          for (const std::string* m : {&oc.source, &oc.target})
            if (!m->empty() && !model_ids.count(*m))
              errors.push_back(where + ": operator '" + oc.id +
                               "' references undefined model '" + *m + "'");
        } else if (derived.count(oc.kind)) {
          if (oj.contains("of")) read_field(oj, "of", oc.of, false, where, errors);
          if (oc.of.empty())
            errors.push_back(where + ": '" + oc.kind +
                             "' needs an 'of' operand list");
          for (const auto& ref : oc.of)
            if (!op_ids.count(ref))
              errors.push_back(where + ": operator '" + oc.id +
                               "' references undefined operator '" + ref + "'");
          if (oj.contains("lambda"))
            read_field(oj, "lambda", oc.lambda, false, where, errors);
        } else if (!oc.kind.empty()) {
          errors.push_back(where + ": unknown operator kind '" + oc.kind + "'");
        }
        if (oj.contains("coeffs")) read_field(oj, "coeffs", oc.coeffs, false, where, errors);
        if (oj.contains("matrix")) read_field(oj, "matrix", oc.matrix, false, where, errors);
        if (!oc.id.empty() && !op_ids.insert(oc.id).second)
          errors.push_back(where + ": duplicate operator id '" + oc.id + "'");
        cfg.operators.push_back(std::move(oc));
      }
    }
  }

  if (doc.contains("tasks")) {
    if (!doc["tasks"].is_array()) {
      errors.push_back("config: 'tasks' must be an array");
    } else {
      std::size_t idx = 0;
      for (const auto& tj : doc["tasks"]) {
        const std::string where = "tasks[" + std::to_string(idx) + "]";
        TaskConfig tc;
        read_field(tj, "task", tc.kind, true, where, errors);
        tc.id = tj.value("id", tc.kind + "-" + std::to_string(idx));
        tc.expect_negative = tj.value("expect_negative", false);
        tc.args = tj;
        static const std::set<std::string> kinds{
            "build", "certify", "scan", "norm", "metric", "palette", "witness"};
        if (!tc.kind.empty() && !kinds.count(tc.kind))
          errors.push_back(where + ": unknown task '" + tc.kind + "'");
        if (tc.kind == "certify" || tc.kind == "norm") {
          const std::string op = tj.value("operator", "");
          if (op.empty())
            errors.push_back(where + ": task needs an 'operator' reference");
          else if (!op_ids.count(op))
            errors.push_back(where + ": task references undefined operator '" +
                             op + "'");
        }
        if (tc.kind == "metric" || tc.kind == "palette" ||
            tc.kind == "witness") {
          const std::string m = tj.value("model", "");
          if (m.empty())
            errors.push_back(where + ": task needs a 'model' reference");
          else if (!model_ids.count(m))
            errors.push_back(where + ": task references undefined model '" + m +
                             "'");
        }
        cfg.tasks.push_back(std::move(tc));
        ++idx;
      }
    }
  }

  if (!cfg.tasks.empty() && !cfg.seed_set)
    errors.push_back(
        "config: missing 'seed' — sampled computations require an explicit "
        "seed");

  if (doc.contains("output")) {
    const auto& oj = doc["output"];
    if (oj.contains("dir")) read_field(oj, "dir", cfg.output.dir, false, "output", errors);
    if (oj.contains("format"))
      read_field(oj, "format", cfg.output.format, false, "output", errors);
    if (cfg.output.format != "json" && cfg.output.format != "csv")
      errors.push_back("output: unknown format '" + cfg.output.format +
                       "' (json or csv)");
  }

  return out;
}

ConfigLoad load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigLoad bad;
    bad.errors.push_back("config: cannot open '" + path + "'");
    return bad;
  }
  ojson doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    ConfigLoad bad;
    bad.errors.push_back(std::string("config: JSON parse failure: ") + e.what());
    return bad;
  }
  return parse_config(doc);
}

ojson config_to_json(const RunConfig& c) {
  ojson models = ojson::array();
  for (const auto& m : c.models)
    models.push_back(ojson{{"id", m.id},
                           {"kind", m.kind},
                           {"modes", m.modes},
                           {"levels", m.levels},
                           {"grid", m.grid},
                           {"dim", m.dim},
                           {"phi", m.phi}});
  ojson ops = ojson::array();
  for (const auto& o : c.operators)
    ops.push_back(ojson{{"id", o.id}, {"kind", o.kind}});
  ojson tasks = ojson::array();
  for (const auto& t : c.tasks)
    tasks.push_back(ojson{{"id", t.id}, {"task", t.kind}});
  return ojson{{"version", c.version},
               {"seed", c.seed},
               {"tolerance", c.tolerance},
               {"models", models},
               {"operators", ops},
               {"tasks", tasks},
               {"output", ojson{{"dir", c.output.dir}, {"format", c.output.format}}}};
}

}  // namespace gmv
