#include "gmv/operator.hpp"

#include <stdexcept>
#include <utility>

namespace gmv {

namespace {

// acc += coef * (cos|sin)(m t) with the sign conventions of negative
// frequencies folded in; m = 0 contributes to the constant slot.
void add_mode(Vec& acc, long m, bool sine, double coef) {
  if (m < 0) {
    m = -m;
    if (sine) coef = -coef;  // sin(-x) = -sin(x); cos is even
  }
  if (m == 0) {
    if (!sine) acc[0] += coef;  // sin(0) == 0 contributes nothing
    return;
  }
  auto idx = static_cast<Eigen::Index>(2 * m - 1 + (sine ? 1 : 0));
  if (idx >= acc.size()) throw std::logic_error("product mode exceeds target bandwidth");
  acc[idx] += coef;
}

// Product of two basis functions, appended into acc:
//   cos a * cos b = (cos(a-b) + cos(a+b)) / 2
//   sin a * sin b = (cos(a-b) - cos(a+b)) / 2
//   sin a * cos b = (sin(a+b) + sin(a-b)) / 2
void add_product(Vec& acc, long ma, bool sa, long mb, bool sb, double coef) {
  if (!sa && !sb) {
    add_mode(acc, ma - mb, false, coef / 2);
    add_mode(acc, ma + mb, false, coef / 2);
  } else if (sa && sb) {
    add_mode(acc, ma - mb, false, coef / 2);
    add_mode(acc, ma + mb, false, -coef / 2);
  } else if (sa && !sb) {
    add_mode(acc, ma + mb, true, coef / 2);
    add_mode(acc, ma - mb, true, coef / 2);
  } else {
    add_product(acc, mb, sb, ma, sa, coef);
  }
}

}  // namespace

GradedVector GradedOperator::apply(const ModelSpace& src, const ModelSpace& dst,
                                   const GradedVector& v) const {
  if (src.id != source_model || dst.id != target_model) {
    throw std::invalid_argument("operator '" + id + "' does not map " + src.id +
                                " to " + dst.id);
  }
  return dst.vector(matrix * src.check(v));
}

GradedOperator make_derivative(const ModelSpace& trig, std::string id) {
  GradedOperator op;
  op.id = std::move(id);
  op.source_model = trig.id;
  op.target_model = trig.id;
  op.matrix = trig.diff_matrix();
  return op;
}

GradedOperator make_multiplication(const ModelSpace& src, const ModelSpace& dst,
                                   const Vec& g_coeffs, std::string id) {
  if (g_coeffs.size() % 2 == 0 || g_coeffs.size() == 0) {
    throw std::invalid_argument("multiplier coefficients must have odd length 2*Mg+1");
  }
  auto mg = static_cast<std::size_t>((g_coeffs.size() - 1) / 2);
  if (dst.trig_modes() < src.trig_modes() + mg) {
    throw std::invalid_argument(
        "multiplication target bandwidth must cover source bandwidth + multiplier degree");
  }
  GradedOperator op;
  op.id = std::move(id);
  op.source_model = src.id;
  op.target_model = dst.id;
  op.matrix = Mat::Zero(static_cast<Eigen::Index>(dst.dim()),
                        static_cast<Eigen::Index>(src.dim()));
  // Column j = coefficients of g * (j-th source basis function).
  for (std::size_t j = 0; j < src.dim(); ++j) {
    long mj = j == 0 ? 0 : static_cast<long>((j + 1) / 2);
    bool sj = j != 0 && (j % 2 == 0);
    Vec col = Vec::Zero(static_cast<Eigen::Index>(dst.dim()));
    for (Eigen::Index gi = 0; gi < g_coeffs.size(); ++gi) {
      if (g_coeffs[gi] == 0.0) continue;
      long mi = gi == 0 ? 0 : static_cast<long>((gi + 1) / 2);
      bool si = gi != 0 && (gi % 2 == 0);
      if (mi == 0 && mj == 0) {
        col[0] += g_coeffs[gi];  // constant * constant
      } else if (mi == 0) {
        add_mode(col, mj, sj, g_coeffs[gi]);
      } else if (mj == 0) {
        add_mode(col, mi, si, g_coeffs[gi]);
      } else {
        add_product(col, mi, si, mj, sj, g_coeffs[gi]);
      }
    }
    op.matrix.col(static_cast<Eigen::Index>(j)) = col;
  }
  return op;
}

GradedOperator make_diagonal(const ModelSpace& m, const Vec& diag, std::string id) {
  if (static_cast<std::size_t>(diag.size()) != m.dim()) {
    throw std::invalid_argument("diagonal length must equal model dimension");
  }
  GradedOperator op;
  op.id = std::move(id);
  op.source_model = m.id;
  op.target_model = m.id;
  op.matrix = diag.asDiagonal();
  return op;
}

GradedOperator make_matrix(const ModelSpace& src, const ModelSpace& dst, Mat m,
                           std::string id) {
  if (static_cast<std::size_t>(m.rows()) != dst.dim() ||
      static_cast<std::size_t>(m.cols()) != src.dim()) {
    throw std::invalid_argument("matrix shape must be target_dim x source_dim");
  }
  GradedOperator op;
  op.id = std::move(id);
  op.source_model = src.id;
  op.target_model = dst.id;
  op.matrix = std::move(m);
  return op;
}

GradedOperator make_identity(const ModelSpace& m, std::string id) {
  GradedOperator op;
  op.id = std::move(id);
  op.source_model = m.id;
  op.target_model = m.id;
  op.matrix = Mat::Identity(static_cast<Eigen::Index>(m.dim()),
                            static_cast<Eigen::Index>(m.dim()));
  return op;
}

GradedOperator make_zero(const ModelSpace& src, const ModelSpace& dst, std::string id) {
  GradedOperator op;
  op.id = std::move(id);
  op.source_model = src.id;
  op.target_model = dst.id;
  op.matrix = Mat::Zero(static_cast<Eigen::Index>(dst.dim()),
                        static_cast<Eigen::Index>(src.dim()));
  return op;
}

GradedOperator scale_operator(const GradedOperator& a, double lambda) {
  GradedOperator op = a;
  op.matrix *= lambda;
  return op;
}

GradedOperator sum_operators(const GradedOperator& a, const GradedOperator& b) {
  if (a.source_model != b.source_model || a.target_model != b.target_model) {
    throw std::invalid_argument("operator sum requires matching models");
  }
  GradedOperator op = a;
  op.id = a.id + "+" + b.id;
  op.matrix = a.matrix + b.matrix;
  return op;
}

GradedOperator compose_operators(const GradedOperator& b, const GradedOperator& a) {
  if (a.target_model != b.source_model) {
    throw std::invalid_argument("composition requires a's target to be b's source");
  }
  GradedOperator op;
  op.id = b.id + "∘" + a.id;
  op.source_model = a.source_model;
  op.target_model = b.target_model;
  op.matrix = b.matrix * a.matrix;
  return op;
}

}  // namespace gmv
