// Finite-dimensional model spaces carrying a graded seminorm tower and its
// Fréchet metric.
//
// Three built-in families:
//
//  * trig:      span{1, cos(mt), sin(mt) : m <= M} on [0,1], graded by
//               cumulative sup-of-derivatives on a uniform grid,
//               ||f||_k = max_{j<=k} max_grid |f^(j)|.  Differentiation is
//               exact in this basis (block rotation times the frequency), so
//               the usual spectral-accuracy caveats do not even arise.
//  * sequence:  R^D with weighted-max levels ||v||_n = max_k w[n][k] |v_k|,
//               default w[n][k] = (k+1)^n.
//  * scalar:    R with either a plain absolute-value tower or the sqrt metric
//               d(x,y) = sqrt|x-y|.
//
// Vectors are plain Eigen vectors tagged with the model id; ops that mix
// models check the tag.

#pragma once

#include "gmv/metric.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace gmv {

struct GradedVector {
  std::string model_id;
  Vec coords;
};

class ModelSpace {
 public:
  enum class Kind : std::uint8_t { trig, sequence, scalar };

  std::string id;
  Kind kind = Kind::sequence;

  std::size_t dim() const { return family_->dim(); }
  std::size_t levels() const { return family_->levels(); }
  const SeminormFamily& family() const { return *family_; }
  std::shared_ptr<const SeminormFamily> family_ptr() const { return family_; }
  const FrechetMetric& metric() const { return metric_; }

  GradedVector vector(Vec coords) const;
  GradedVector basis_vector(std::size_t k) const;
  const Vec& check(const GradedVector& v) const;

  // --- trig-model extras (throw on other kinds) -----------------------------
  std::size_t trig_modes() const;        // M
  std::size_t grid_points() const;       // G
  const Mat& diff_matrix() const;        // D x D, exact differentiation
  const Mat& derivative_rows(std::size_t j) const;  // E * Diff^j, G x D
  const std::vector<double>& grid() const;
  // Coefficient vector of cos(m t) / sin(m t); m = 0 gives the constant.
  Vec mode_coefficients(std::size_t m, bool sine) const;
  // Row functional evaluating the j-th derivative at an arbitrary point x.
  Vec eval_row(double x, std::size_t deriv_order = 0) const;

  // --- sequence-model extras -------------------------------------------------
  double level_weight(std::size_t n, std::size_t k) const;  // w[n][k]

  // FNV-1a checksum over the raw bytes of all derived matrices; persisted
  // alongside model parameters so a reload can prove it rebuilt the same
  // object.
  std::uint64_t checksum() const;

  // --- builders ---------------------------------------------------------------
  // G >= 4M enforced; K+1 seminorm levels (k = 0..K), K+1 <= M sensible.
  static ModelSpace trig(std::string id, std::size_t modes, std::size_t top_level,
                         std::size_t grid_points, ShapeFn phi = {});
  // Weight table w[n][k]; must be entrywise nondecreasing in n.
  static ModelSpace sequence(std::string id, std::size_t dim, std::size_t top_level,
                             std::vector<Vec> level_weights = {}, ShapeFn phi = {});
  // Power weights w[n][k] = (k+1)^n (the default sequence grading).
  static ModelSpace sequence_power(std::string id, std::size_t dim,
                                   std::size_t top_level, ShapeFn phi = {});
  static ModelSpace scalar(std::string id, std::size_t top_level, ShapeFn phi = {});
  static ModelSpace scalar_sqrt(std::string id);

 private:
  std::shared_ptr<const SeminormFamily> family_;
  FrechetMetric metric_;

  // trig payload
  std::size_t modes_ = 0;
  Mat diff_;
  std::vector<Mat> deriv_rows_;  // E * Diff^j for j = 0..K
  std::vector<double> grid_;

  // sequence payload
  std::vector<Vec> level_weights_;
};

// Largest ratio  ||D f||_0 / ||f||_0  over pure modes sin(N t): realized by
// the mode itself, so the returned value is >= N (grid sup of |sin| is <= 1
// while the derivative attains N at t = 0).  Reported together with the mode.
struct SinRatioResult {
  double ratio = 0.0;
  double numerator = 0.0;    // ||d/dt sin(Nt)||_0 on the grid
  double denominator = 0.0;  // ||sin(Nt)||_0 on the grid
};
SinRatioResult sin_mode_ratio(const ModelSpace& model, std::size_t N);

// Coefficients of sin(2s t) in the given trig model together with the grid
// seminorm profile; errors out unless 2s is an integer mode <= M.
struct StepWitness {
  GradedVector v;
  Vec seminorms;  // ||v||_i for i = 0..K
};
StepWitness step_full_witness(const ModelSpace& model, double s);

}  // namespace gmv
