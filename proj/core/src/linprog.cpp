#include "gmv/linprog.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gmv {

namespace {

constexpr int kIterationCap = 20000;

struct Tableau {
  Mat t;                   // m x (cols + 1); last column is the rhs
  std::vector<int> basis;  // basis[i] = column basic in row i
  int cols = 0;

  int rows() const { return static_cast<int>(t.rows()); }
  double rhs(int i) const { return t(i, cols); }

  void pivot(int r, int c) {
    t.row(r) /= t(r, c);
    for (int i = 0; i < rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[static_cast<std::size_t>(r)] = c;
  }
};

enum class SimplexOutcome { optimal, unbounded, stalled };

// Minimizes obj over the tableau with Bland's anti-cycling rule; obj has one
// entry per column.  Reduced costs are recomputed from scratch each
// iteration -- O(m*cols), immaterial at this library's problem sizes.
SimplexOutcome run_simplex(Tableau& tb, const Vec& obj, double tol, int& iters) {
  const int m = tb.rows();
  for (;;) {
    int enter = -1;
    for (int j = 0; j < tb.cols && enter < 0; ++j) {
      double rc = obj[j];
      for (int i = 0; i < m; ++i) rc -= obj[tb.basis[static_cast<std::size_t>(i)]] * tb.t(i, j);
      if (rc < -tol) enter = j;  // Bland: smallest improving index
    }
    if (enter < 0) return SimplexOutcome::optimal;

    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (tb.t(i, enter) > tol) {
        double ratio = tb.rhs(i) / tb.t(i, enter);
        bool better = ratio < best * (1.0 - 1e-12) - 1e-15;
        bool tie = !better && ratio <= best * (1.0 + 1e-12) + 1e-15;
        if (leave < 0 || better ||
            (tie && tb.basis[static_cast<std::size_t>(i)] <
                        tb.basis[static_cast<std::size_t>(leave)])) {
          if (leave < 0 || better) best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return SimplexOutcome::unbounded;
    tb.pivot(leave, enter);
    if (++iters > kIterationCap) return SimplexOutcome::stalled;
  }
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, double tol) {
  const int n = static_cast<int>(lp.c.size());
  const int m_eq = static_cast<int>(lp.a_eq.rows());
  const int m_ub = static_cast<int>(lp.a_ub.rows());
  const int m = m_eq + m_ub;
  if ((m_eq && lp.a_eq.cols() != n) || (m_ub && lp.a_ub.cols() != n)) {
    throw std::invalid_argument("linear program dimensions disagree");
  }

  LpResult res;
  if (m == 0) {
    // No constraints: optimum is 0 unless some cost is negative (unbounded).
    for (int j = 0; j < n; ++j) {
      if (lp.c[j] < -tol) {
        res.status = LpResult::Status::unbounded;
        return res;
      }
    }
    res.status = LpResult::Status::optimal;
    res.x = Vec::Zero(n);
    res.objective = 0.0;
    return res;
  }

  // Layout: [x (n) | slacks (m_ub) | artificials (m)].  Artificials are added
  // for every row; redundant ones are driven out or their rows dropped after
  // phase 1.
  const int n_slack = m_ub;
  const int n_art = m;
  const int cols = n + n_slack + n_art;

  Tableau tb;
  tb.cols = cols;
  tb.t = Mat::Zero(m, cols + 1);
  tb.basis.assign(static_cast<std::size_t>(m), -1);

  for (int i = 0; i < m_eq; ++i) {
    tb.t.block(i, 0, 1, n) = lp.a_eq.row(i);
    tb.t(i, cols) = lp.b_eq[i];
  }
  for (int i = 0; i < m_ub; ++i) {
    int r = m_eq + i;
    tb.t.block(r, 0, 1, n) = lp.a_ub.row(i);
    tb.t(r, n + i) = 1.0;  // slack
    tb.t(r, cols) = lp.b_ub[i];
  }
  // Nonnegative rhs, then one artificial per row as the starting basis.
  for (int i = 0; i < m; ++i) {
    if (tb.t(i, cols) < 0.0) tb.t.row(i) = -tb.t.row(i);
    tb.t(i, n + n_slack + i) = 1.0;
    tb.basis[static_cast<std::size_t>(i)] = n + n_slack + i;
  }

  // Phase 1: minimize the sum of artificials.
  Vec phase1 = Vec::Zero(cols);
  phase1.segment(n + n_slack, n_art).setOnes();
  SimplexOutcome out = run_simplex(tb, phase1, tol, res.iterations);
  if (out == SimplexOutcome::stalled) {
    res.status = LpResult::Status::stalled;
    return res;
  }
  double art_level = 0.0;
  for (int i = 0; i < m; ++i) {
    if (tb.basis[static_cast<std::size_t>(i)] >= n + n_slack) art_level += tb.rhs(i);
  }
  if (art_level > std::sqrt(tol)) {
    res.status = LpResult::Status::infeasible;
    return res;
  }
  // Drive remaining zero-level artificials out of the basis where possible;
  // rows where none of the real columns can pivot are redundant constraints.
  for (int i = 0; i < m; ++i) {
    if (tb.basis[static_cast<std::size_t>(i)] < n + n_slack) continue;
    int piv = -1;
    for (int j = 0; j < n + n_slack && piv < 0; ++j) {
      if (std::abs(tb.t(i, j)) > std::sqrt(tol)) piv = j;
    }
    if (piv >= 0) tb.pivot(i, piv);
  }
  // Drop redundant rows and the artificial columns before phase 2, so no
  // artificial can ever re-enter the basis.
  {
    std::vector<int> keep;
    for (int i = 0; i < m; ++i) {
      if (tb.basis[static_cast<std::size_t>(i)] < n + n_slack) keep.push_back(i);
    }
    Tableau clean;
    clean.cols = n + n_slack;
    clean.t = Mat(static_cast<int>(keep.size()), clean.cols + 1);
    clean.basis.resize(keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
      clean.t.block(static_cast<int>(r), 0, 1, clean.cols) =
          tb.t.block(keep[r], 0, 1, clean.cols);
      clean.t(static_cast<int>(r), clean.cols) = tb.t(keep[r], cols);
      clean.basis[r] = tb.basis[static_cast<std::size_t>(keep[r])];
    }
    tb = std::move(clean);
  }

  // Phase 2: real objective over the cleaned tableau.
  Vec phase2 = Vec::Zero(tb.cols);
  phase2.head(n) = lp.c;
  out = run_simplex(tb, phase2, tol, res.iterations);
  if (out == SimplexOutcome::unbounded) {
    res.status = LpResult::Status::unbounded;
    return res;
  }
  if (out == SimplexOutcome::stalled) {
    res.status = LpResult::Status::stalled;
    return res;
  }

  res.status = LpResult::Status::optimal;
  res.x = Vec::Zero(n);
  for (int i = 0; i < tb.rows(); ++i) {
    int b = tb.basis[static_cast<std::size_t>(i)];
    if (b < n) res.x[b] = tb.rhs(i);
  }
  res.objective = lp.c.dot(res.x);
  return res;
}

bool in_convex_hull(const Mat& vertices, const Vec& x, double tol) {
  const int k = static_cast<int>(vertices.cols());
  if (k == 0) return false;
  LinearProgram lp;
  lp.c = Vec::Zero(k);
  lp.a_eq = Mat(vertices.rows() + 1, k);
  lp.a_eq.topRows(vertices.rows()) = vertices;
  lp.a_eq.bottomRows(1).setOnes();
  lp.b_eq = Vec(vertices.rows() + 1);
  lp.b_eq.head(vertices.rows()) = x;
  lp.b_eq[vertices.rows()] = 1.0;
  return solve_lp(lp, tol).ok();
}

double polytope_gauge(const Mat& vertices, const Vec& x, double tol) {
  const int k = static_cast<int>(vertices.cols());
  if (x.lpNorm<Eigen::Infinity>() == 0.0) return 0.0;
  if (k == 0) return std::numeric_limits<double>::infinity();
  LinearProgram lp;
  lp.c = Vec::Ones(k);
  lp.a_eq = vertices;
  lp.b_eq = x;
  LpResult r = solve_lp(lp, tol);
  if (!r.ok()) return std::numeric_limits<double>::infinity();
  return r.objective;
}

}  // namespace gmv
