// Seminorm towers.
//
// A SeminormFamily is a finite increasing tower  ||.||_0 <= ... <= ||.||_N
// of seminorms on R^D.  Each raw level is one of two computational kinds:
//
//   * max_form:    ||v|| = max_i |(S v)_i|   for a row matrix S
//                  (covers weighted-max coordinate norms and
//                  sup-of-derivatives-on-a-grid norms alike)
//   * euclid_form: ||v|| = |W v|_2           (a PSD quadratic form via its factor)
//
// Monotonicity is enforced by cumulative-max composition: the level-n value is
// max_{k<=n} raw_k(v).  profile() evaluates the whole tower in one pass.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct SeminormLevel {
  enum class Kind : std::uint8_t { max_form, euclid_form };

  Kind kind = Kind::max_form;
  Mat rows;           // S for max_form, W for euclid_form
  bool diagonal = false;  // max_form with rows == diag(dweights): fast paths
  Vec dweights;           // the diagonal when `diagonal` is set

  static SeminormLevel max(Mat S);
  static SeminormLevel weighted_max(Vec w);  // diagonal max_form
  static SeminormLevel euclid(Mat W);

  double eval(const Vec& v) const;
  std::size_t dim() const { return diagonal ? dweights.size() : rows.cols(); }
};

class SeminormFamily {
 public:
  SeminormFamily() = default;
  SeminormFamily(std::vector<SeminormLevel> raw, bool monotonized = true);

  std::size_t levels() const { return raw_.size(); }
  std::size_t dim() const { return raw_.empty() ? 0 : raw_[0].dim(); }
  bool monotonized() const { return monotonized_; }
  const SeminormLevel& raw_level(std::size_t k) const { return raw_.at(k); }

  // Tower value at level n (cumulative max when monotonized).
  double eval(std::size_t n, const Vec& v) const;

  // All tower values at once; profile[n] = ||v||_n.
  Vec profile(const Vec& v) const;

  // Certified constant C with ||v||_n <= C * ||v||_m on the whole space
  // (m <= n).  Exact when every participating raw level is diagonal — on a
  // finite-dimensional coordinate model consecutive weighted-max levels are
  // comparable entrywise — and +inf when no closed form is available.
  double cross_level_bound(std::size_t m, std::size_t n) const;

  // Homogeneity and triangle inequality spot-checked on random samples.
  struct SampleReport {
    bool homogeneous = true;
    bool triangle = true;
    double worst_homogeneity = 0.0;  // largest relative defect seen
    double worst_triangle = 0.0;     // largest violation seen (absolute)
    bool ok() const { return homogeneous && triangle; }
  };
  SampleReport validate_samples(std::uint64_t seed, int n_samples = 200,
                                double tol = 1e-9) const;

 private:
  std::vector<SeminormLevel> raw_;
  bool monotonized_ = true;
};

}  // namespace gmv
