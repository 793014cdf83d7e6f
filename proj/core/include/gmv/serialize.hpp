#pragma once

// JSON views of every report the toolkit emits, plus the declarative run
// configuration.  All converters build nlohmann::ordered_json with a fixed
// key order, so identical inputs serialize to identical bytes — the
// reproducibility contract of the command-line front end rests on this.
//
// Config validation collects *all* problems (unknown version, duplicate ids,
// dangling references, missing seeds) instead of stopping at the first.

#include "gmv/bodies.hpp"
#include "gmv/functionals.hpp"
#include "gmv/jets.hpp"
#include "gmv/ksets.hpp"
#include "gmv/metric.hpp"
#include "gmv/model.hpp"
#include "gmv/palettes.hpp"
#include "gmv/tameness.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace gmv {

using ojson = nlohmann::ordered_json;

// --- report views ------------------------------------------------------------

ojson to_json(const GaugeValue& v);
ojson to_json(const OpNormResult& r);
ojson to_json(const TamenessCertificate& c);
ojson to_json(const RecheckReport& r);
ojson to_json(const ModulusReport& r);
ojson to_json(const DivergenceEvidence& e);
ojson to_json(const KjMembership& m);
ojson to_json(const HausdorffWitness& w);
ojson to_json(const BodyCheck& c);
ojson to_json(const AxiomReport& a);
ojson to_json(const PaletteCheckReport& r);
ojson to_json(const StrongnessReport& r);
ojson to_json(const TameSetReport& r);
ojson to_json(const AaBoxReport& r);
ojson to_json(const AbsorptionReport& r);
ojson to_json(const MapsIntoReport& r);
ojson to_json(const JetReport& r);
ojson to_json(const ExtensionReport& r);
ojson to_json(const UnboundedLadder& l);
ojson to_json(const GadgetReport& g);
ojson to_json(const SinRatioResult& r);
ojson to_json(const StepWitness& w);
ojson to_json(const FrechetMetric::StrictnessResult& s);
ojson model_summary(const ModelSpace& m);
ojson operator_summary(const GradedOperator& a);

// --- run configuration --------------------------------------------------------

struct ModelConfig {
  std::string id;
  std::string kind;  // trig | sequence_power | scalar | scalar_sqrt
  std::size_t modes = 16;
  std::size_t levels = 4;   // top level index
  std::size_t grid = 0;     // 0 = builder default
  std::size_t dim = 8;
  std::string phi = "rational";
};

struct OperatorConfig {
  std::string id;
  std::string kind;  // derivative | multiplication | diagonal | matrix |
                     // identity | zero | scale | sum | compose
  std::string model;          // single-model kinds
  std::string source, target; // two-model kinds
  std::vector<double> coeffs; // multiplication / diagonal payload
  std::vector<std::vector<double>> matrix;  // matrix payload, row-major
  std::vector<std::string> of;              // operand ids for scale/sum/compose
  double lambda = 1.0;                      // scale factor
};

struct TaskConfig {
  std::string id;    // report identifier; defaults to kind-<index>
  std::string kind;  // build | certify | scan | norm | metric | palette | witness
  ojson args;        // free-form task arguments, interpreted by the runner
  bool expect_negative = false;  // task is expected to report a falsification
};

struct OutputConfig {
  std::string dir = "reports";
  std::string format = "json";  // json | csv
};

struct RunConfig {
  int version = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tolerance = 1e-9;
  std::vector<ModelConfig> models;
  std::vector<OperatorConfig> operators;
  std::vector<TaskConfig> tasks;
  OutputConfig output;
};

struct ConfigLoad {
  RunConfig config;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

// Parse + validate a config document; all validation errors are collected.
ConfigLoad parse_config(const ojson& doc);

// Read the file and parse; file/JSON errors land in the error list.
ConfigLoad load_config(const std::string& path);

ojson config_to_json(const RunConfig& c);

}  // namespace gmv
