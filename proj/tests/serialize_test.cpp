#include "gmv/serialize.hpp"

#include "gmv/model.hpp"
#include "gmv/operator.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

using namespace gmv;

namespace {

ojson valid_doc() {
  return ojson{
      {"version", 1},
      {"seed", 42},
      {"tolerance", 1e-9},
      {"models",
       ojson::array({
           ojson{{"id", "seq"}, {"kind", "sequence_power"}, {"dim", 6}, {"levels", 2}},
           ojson{{"id", "trig"}, {"kind", "trig"}, {"modes", 8}, {"levels", 3}},
       })},
      {"operators",
       ojson::array({
           ojson{{"id", "d"}, {"kind", "derivative"}, {"model", "trig"}},
           ojson{{"id", "half-d"},
                 {"kind", "scale"},
                 {"of", ojson::array({"d"})},
                 {"lambda", 0.5}},
       })},
      {"tasks",
       ojson::array({
           ojson{{"task", "build"}},
           ojson{{"task", "norm"}, {"operator", "d"}, {"m", 1}, {"n", 0}},
           ojson{{"task", "metric"}, {"model", "seq"}, {"op", "to_zero"}},
       })},
      {"output", ojson{{"dir", "out"}, {"format", "csv"}}},
  };
}

bool has_error_containing(const ConfigLoad& load, const std::string& needle) {
  for (const auto& e : load.errors)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("a well-formed config parses cleanly") {
  ConfigLoad load = parse_config(valid_doc());
  for (const auto& e : load.errors) INFO(e);
  REQUIRE(load.ok());
  CHECK(load.config.version == 1);
  CHECK(load.config.seed == 42);
  CHECK(load.config.seed_set);
  CHECK(load.config.tolerance == 1e-9);
  REQUIRE(load.config.models.size() == 2);
  CHECK(load.config.models[0].id == "seq");
  CHECK(load.config.models[1].kind == "trig");
  CHECK(load.config.models[1].modes == 8);
  REQUIRE(load.config.operators.size() == 2);
  CHECK(load.config.operators[1].of == std::vector<std::string>{"d"});
  CHECK(load.config.operators[1].lambda == 0.5);
  REQUIRE(load.config.tasks.size() == 3);
  // Missing ids fall back to kind-index.
  CHECK(load.config.tasks[0].id == "build-0");
  CHECK(load.config.tasks[2].id == "metric-2");
  CHECK(!load.config.tasks[0].expect_negative);
  CHECK(load.config.output.format == "csv");
  CHECK(load.config.output.dir == "out");
}

TEST_CASE("every defect is collected in one pass, not just the first") {
  ojson doc{
      {"version", 3},
      {"models",
       ojson::array({
           ojson{{"id", "m"}, {"kind", "mystery"}},
           ojson{{"id", "m"}, {"kind", "scalar"}},
       })},
      {"operators",
       ojson::array({
           // References an operator defined only later: operand lists may
           // only point backwards.
           ojson{{"id", "s"}, {"kind", "scale"}, {"of", ojson::array({"d"})}},
           ojson{{"id", "d"}, {"kind", "derivative"}, {"model", "ghost"}},
           ojson{{"id", "p"}, {"kind", "sum"}},
           ojson{{"id", "q"}, {"kind", "teleport"}, {"model", "m"}},
       })},
      {"tasks",
       ojson::array({
           ojson{{"task", "certify"}},
           ojson{{"task", "norm"}, {"operator", "nope"}},
           ojson{{"task", "metric"}, {"model", "nope"}},
           ojson{{"task", "witness"}, {"name", "gadget"}},
           ojson{{"task", "dance"}},
       })},
      {"output", ojson{{"format", "xml"}}},
  };
  ConfigLoad load = parse_config(doc);
  CHECK(!load.ok());
  CHECK(has_error_containing(load, "unknown version 3"));
  CHECK(has_error_containing(load, "unknown model kind 'mystery'"));
  CHECK(has_error_containing(load, "duplicate model id 'm'"));
  CHECK(has_error_containing(load, "references undefined operator 'd'"));
  CHECK(has_error_containing(load, "references undefined model 'ghost'"));
  CHECK(has_error_containing(load, "'sum' needs an 'of' operand list"));
  CHECK(has_error_containing(load, "unknown operator kind 'teleport'"));
  CHECK(has_error_containing(load, "needs an 'operator' reference"));
  CHECK(has_error_containing(load, "references undefined operator 'nope'"));
  CHECK(has_error_containing(load, "references undefined model 'nope'"));
  CHECK(has_error_containing(load, "needs a 'model' reference"));
  CHECK(has_error_containing(load, "unknown task 'dance'"));
  CHECK(has_error_containing(load, "missing 'seed'"));
  CHECK(has_error_containing(load, "unknown format 'xml'"));
  CHECK(load.errors.size() >= 14);
}

TEST_CASE("a task list without a seed is rejected; an empty one is fine") {
  ojson doc{{"version", 1},
            {"models", ojson::array({ojson{{"id", "s"}, {"kind", "scalar"}}})},
            {"tasks", ojson::array({ojson{{"task", "build"}}})}};
  ConfigLoad load = parse_config(doc);
  CHECK(!load.ok());
  CHECK(has_error_containing(load, "sampled computations require an explicit"));

  doc.erase("tasks");
  CHECK(parse_config(doc).ok());
}

TEST_CASE("non-object documents and unreadable files fail with one clear error") {
  ConfigLoad arr = parse_config(ojson::array({1, 2, 3}));
  CHECK(!arr.ok());
  REQUIRE(arr.errors.size() == 1);
  CHECK(has_error_containing(arr, "not a JSON object"));

  ConfigLoad missing = load_config("/no/such/dir/config.json");
  CHECK(!missing.ok());
  CHECK(has_error_containing(missing, "cannot open"));

  const std::string path = "serialize_test_broken.json";
  {
    std::ofstream out(path);
    out << "{ this is not json";
  }
  ConfigLoad broken = load_config(path);
  std::remove(path.c_str());
  CHECK(!broken.ok());
  CHECK(has_error_containing(broken, "JSON parse failure"));
}

TEST_CASE("config serialization is deterministic and faithful") {
  ConfigLoad a = parse_config(valid_doc());
  ConfigLoad b = parse_config(valid_doc());
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  const ojson ja = config_to_json(a.config);
  const ojson jb = config_to_json(b.config);
  CHECK(ja.dump() == jb.dump());
  REQUIRE(ja.contains("models"));
  CHECK(ja["models"].size() == 2);
  CHECK(ja["models"][0]["id"] == "seq");
  CHECK(ja["operators"].size() == 2);
  CHECK(ja["tasks"].size() == 3);
  CHECK(ja["seed"] == 42);
}

TEST_CASE("report serialization keeps insertion order and round-trips text") {
  ModelSpace m = ModelSpace::sequence_power("seq", 6, 2);
  ojson s = model_summary(m);
  CHECK(s["id"] == "seq");
  CHECK(s["dim"] == 6);
  CHECK(s["levels"] == 3);
  // Ordered maps dump in insertion order, so two independent summaries of
  // the same model produce byte-identical text.
  CHECK(s.dump() == model_summary(m).dump());
  CHECK(s.begin().key() == "id");

  GradedOperator id = make_identity(m);
  ojson o = operator_summary(id);
  CHECK(o["id"] == "identity");
  CHECK(o.dump() == operator_summary(id).dump());
}
