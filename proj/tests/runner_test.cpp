#include "runner.hpp"

#include "gmv/operator.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace gmv;
using namespace gmv::run;

namespace {

ConfigLoad small_config() {
  ojson doc{
      {"version", 1},
      {"seed", 7},
      {"models",
       ojson::array({
           ojson{{"id", "seq"}, {"kind", "sequence_power"}, {"dim", 6}, {"levels", 2}},
           ojson{{"id", "trig"},
                 {"kind", "trig"},
                 {"modes", 6},
                 {"levels", 3},
                 {"grid", 25}},
       })},
      {"operators",
       ojson::array({
           ojson{{"id", "d"}, {"kind", "derivative"}, {"model", "trig"}},
           ojson{{"id", "ramp"},
                 {"kind", "diagonal"},
                 {"model", "seq"},
                 {"coeffs", ojson::array({1, 2, 3, 4, 5, 6})}},
           ojson{{"id", "twice"},
                 {"kind", "scale"},
                 {"of", ojson::array({"ramp"})},
                 {"lambda", 2.0}},
           ojson{{"id", "both"},
                 {"kind", "sum"},
                 {"of", ojson::array({"ramp", "twice"})}},
           ojson{{"id", "dd"}, {"kind", "compose"}, {"of", ojson::array({"d", "d"})}},
       })},
      {"tasks",
       ojson::array({
           ojson{{"task", "build"}},
           ojson{{"task", "metric"},
                 {"id", "dist-e0"},
                 {"model", "seq"},
                 {"op", "to_zero"},
                 {"vector", ojson::array({1, 0, 0, 0, 0, 0})},
                 {"expect", 0.875},
                 {"tol", 1e-12}},
           ojson{{"task", "witness"},
                 {"id", "gadget-seq"},
                 {"name", "gadget"},
                 {"model", "seq"},
                 {"rungs", 4}},
           ojson{{"task", "witness"},
                 {"id", "ratio-trig"},
                 {"name", "sin_ratio"},
                 {"model", "trig"},
                 {"N", 3}},
       })},
  };
  return parse_config(doc);
}

}  // namespace

TEST_CASE("workspaces materialize models and operators in config order") {
  ConfigLoad load = small_config();
  for (const auto& e : load.errors) INFO(e);
  REQUIRE(load.ok());
  Workspace ws = build_workspace(load.config);

  REQUIRE(ws.model_order == std::vector<std::string>{"seq", "trig"});
  CHECK(ws.model("seq").dim() == 6);
  CHECK(ws.model("trig").grid_points() == 25);
  REQUIRE(ws.operator_order ==
          std::vector<std::string>{"d", "ramp", "twice", "both", "dd"});

  // Derived operators inherit their operands' matrices.
  const GradedOperator& ramp = ws.op("ramp");
  const GradedOperator& twice = ws.op("twice");
  const GradedOperator& both = ws.op("both");
  CHECK((twice.matrix - 2.0 * ramp.matrix).norm() == 0.0);
  CHECK((both.matrix - 3.0 * ramp.matrix).norm() == 0.0);
  CHECK(twice.id == "twice");

  // compose lists operands in application order: of[0] runs first.
  const GradedOperator& dd = ws.op("dd");
  const GradedOperator& d = ws.op("d");
  CHECK((dd.matrix - d.matrix * d.matrix).norm() == 0.0);

  CHECK_THROWS_AS(ws.model("ghost"), std::invalid_argument);
  CHECK_THROWS_AS(ws.op("ghost"), std::invalid_argument);
}

TEST_CASE("tasks run, filter by kind, and filter by witness name") {
  ConfigLoad load = small_config();
  REQUIRE(load.ok());
  Workspace ws = build_workspace(load.config);

  RunResult all = run_tasks(ws, load.config);
  REQUIRE(all.outcomes.size() == 4);
  for (const auto& o : all.outcomes) INFO(o.id, ": ", o.error);
  CHECK(all.all_passed());
  CHECK(all.passed_count() == 4);
  CHECK(all.outcomes[1].id == "dist-e0");
  CHECK(all.outcomes[1].report["value"].get<double>() ==
        doctest::Approx(0.875).epsilon(1e-12));

  RunResult only_metric = run_tasks(ws, load.config, {"metric", ""});
  REQUIRE(only_metric.outcomes.size() == 1);
  CHECK(only_metric.outcomes[0].kind == "metric");

  RunResult only_gadget = run_tasks(ws, load.config, {"witness", "gadget"});
  REQUIRE(only_gadget.outcomes.size() == 1);
  CHECK(only_gadget.outcomes[0].witness == "gadget");

  RunResult none = run_tasks(ws, load.config, {"witness", "kj"});
  CHECK(none.outcomes.empty());
  CHECK(none.all_passed());  // an empty selection has nothing to fail
}

TEST_CASE("expected-negative tasks pass when the library refuses or falsifies") {
  ojson doc{
      {"version", 1},
      {"seed", 3},
      {"models",
       ojson::array({ojson{{"id", "seq"},
                           {"kind", "sequence_power"},
                           {"dim", 4},
                           {"levels", 2}}})},
      {"operators",
       ojson::array({ojson{{"id", "zero"},
                           {"kind", "zero"},
                           {"source", "seq"},
                           {"target", "seq"}}})},
      {"tasks",
       ojson::array({
           // hausdorff_witness refuses the zero map by throwing; the thrown
           // exception is the negative outcome this task expects.
           ojson{{"task", "witness"},
                 {"id", "zero-separation"},
                 {"name", "hausdorff"},
                 {"model", "seq"},
                 {"operator", "zero"},
                 {"expect_negative", true}},
           // A wrong metric expectation is falsified, not thrown.
           ojson{{"task", "metric"},
                 {"id", "wrong-expect"},
                 {"model", "seq"},
                 {"op", "to_zero"},
                 {"vector", ojson::array({1, 0, 0, 0})},
                 {"expect", 123.0},
                 {"tol", 1e-12},
                 {"expect_negative", true}},
           // Same wrong expectation without the flip: recorded as a failure.
           ojson{{"task", "metric"},
                 {"id", "wrong-expect-honest"},
                 {"model", "seq"},
                 {"op", "to_zero"},
                 {"vector", ojson::array({1, 0, 0, 0})},
                 {"expect", 123.0},
                 {"tol", 1e-12}},
       })},
  };
  ConfigLoad load = parse_config(doc);
  REQUIRE(load.ok());
  Workspace ws = build_workspace(load.config);
  RunResult r = run_tasks(ws, load.config);
  REQUIRE(r.outcomes.size() == 3);

  CHECK(r.outcomes[0].passed);
  CHECK(!r.outcomes[0].error.empty());
  CHECK(r.outcomes[0].report.contains("error"));

  CHECK(r.outcomes[1].passed);
  CHECK(r.outcomes[1].error.empty());

  CHECK(!r.outcomes[2].passed);
  CHECK(!r.all_passed());
  CHECK(r.passed_count() == 2);
}

TEST_CASE("reports are byte-stable across fresh workspaces and runs") {
  ConfigLoad load = small_config();
  REQUIRE(load.ok());

  Workspace ws1 = build_workspace(load.config);
  Workspace ws2 = build_workspace(load.config);
  const std::string a = render_report(run_tasks(ws1, load.config), "json");
  const std::string b = render_report(run_tasks(ws2, load.config), "json");
  CHECK(a == b);
  const std::string ca = render_report(run_tasks(ws1, load.config), "csv");
  const std::string cb = render_report(run_tasks(ws2, load.config), "csv");
  CHECK(ca == cb);

  // JSON lines: one object per task plus a trailing summary object.
  std::istringstream lines(a);
  std::string line;
  std::size_t count = 0;
  std::string last;
  while (std::getline(lines, line))
    if (!line.empty()) {
      last = line;
      ++count;
    }
  CHECK(count == 5);
  const ojson summary = ojson::parse(last);
  REQUIRE(summary.contains("summary"));
  CHECK(summary["summary"]["tasks"] == 4);
  CHECK(summary["summary"]["all_passed"] == true);

  CHECK(ca.rfind("id,kind,witness,passed,expect_negative,error\n", 0) == 0);
  CHECK(ca.find("__summary__") != std::string::npos);

  CHECK_THROWS_AS(render_report(RunResult{}, "yaml"), std::invalid_argument);
}

TEST_CASE("write_report creates the directory and names the file by format") {
  ConfigLoad load = small_config();
  REQUIRE(load.ok());
  Workspace ws = build_workspace(load.config);
  RunResult r = run_tasks(ws, load.config, {"build", ""});

  OutputConfig out;
  out.dir = "runner_test_reports/nested";
  out.format = "json";
  const std::string path = write_report(r, out);
  CHECK(path == "runner_test_reports/nested/reports.jsonl");
  {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream got;
    got << in.rdbuf();
    CHECK(got.str() == render_report(r, "json"));
  }
  std::filesystem::remove_all("runner_test_reports");
}
