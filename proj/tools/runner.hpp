#pragma once

// Declarative run driver shared by the command-line tool and the tests.
//
// A RunConfig names models, operators, and tasks; the runner materializes the
// models/operators once (a Workspace), dispatches each task to the matching
// library call, and collects one TaskOutcome per task.  Outcomes render to a
// JSON-lines or CSV report with a fixed key order and no volatile fields
// (timestamps, durations, paths), so the same config and seed produce the
// same bytes on every run.  Timing belongs on stderr, never in the report.
//
// Task semantics:
//   * each handler computes a positive verdict (the thing the task asserts);
//   * expect_negative flips it, and a thrown exception counts as the negative
//     outcome — a task that is supposed to fail passes exactly when the
//     library refuses or falsifies.

#include "gmv/serialize.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace gmv::run {

struct Workspace {
  std::map<std::string, ModelSpace> models;
  std::vector<std::string> model_order;
  std::map<std::string, GradedOperator> operators;
  std::vector<std::string> operator_order;

  const ModelSpace& model(const std::string& id) const;
  const GradedOperator& op(const std::string& id) const;
};

// Materialize every model and operator in config order.  Throws
// std::invalid_argument on construction errors (bad kinds are already caught
// by parse_config; this layer surfaces payload problems such as bandwidth or
// dimension mismatches).
Workspace build_workspace(const RunConfig& config);

struct TaskOutcome {
  std::string id;
  std::string kind;
  std::string witness;  // witness tasks only: the witness name
  bool passed = false;
  bool expect_negative = false;
  std::string error;  // exception text when the task threw
  ojson report;       // full task payload, stable key order
};

struct RunResult {
  std::vector<TaskOutcome> outcomes;
  bool all_passed() const;
  std::size_t passed_count() const;
};

// Restrict a run to one task kind (empty = all); witness tasks can further be
// restricted to a single witness name.
struct TaskFilter {
  std::string kind;
  std::string witness;
};

RunResult run_tasks(const Workspace& ws, const RunConfig& config,
                    const TaskFilter& filter = {});

// JSON lines (one object per outcome plus a summary line) or a CSV table.
std::string render_report(const RunResult& result, const std::string& format);

// Write the rendered report to <dir>/reports.jsonl or <dir>/reports.csv,
// creating the directory; returns the file path.
std::string write_report(const RunResult& result, const OutputConfig& out);

}  // namespace gmv::run
