#include "gmv/jets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gmv {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= double(i);
  return r;
}

// Evaluate a monomial polynomial's deriv-th derivative at u.
double poly_deriv_eval(const std::vector<double>& c, double u, int deriv) {
  double acc = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= deriv; --k) {
    double fall = 1.0;
    for (int j = 0; j < deriv; ++j) fall *= double(k - j);
    acc = acc * u + c[static_cast<std::size_t>(k)] * fall;
  }
  return acc;
}

}  // namespace

Smoothstep::Smoothstep(int smoothness) : q_(smoothness) {
  if (q_ < 1 || q_ > 24)
    throw std::invalid_argument("smoothstep smoothness out of range");
  // S(u) = int_0^u t^Q (1-t)^Q dt / B, expanded in monomials.
  coeffs_.assign(static_cast<std::size_t>(2 * q_ + 2), 0.0);
  double b = 0.0;
  for (int r = 0; r <= q_; ++r) {
    const double term = binomial(q_, r) * (r % 2 == 0 ? 1.0 : -1.0);
    coeffs_[static_cast<std::size_t>(q_ + r + 1)] = term / double(q_ + r + 1);
    b += term / double(q_ + r + 1);
  }
  for (double& c : coeffs_) c /= b;
  inv_beta_ = 1.0 / b;
}

double Smoothstep::eval(double u, int deriv) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return deriv == 0 ? 1.0 : 0.0;
  if (deriv == 0) {
    // The monomial expansion alternates in sign with large coefficients, so
    // evaluate on the half where the powers are small and use the exact
    // symmetry S(u) + S(1-u) = 1 for the other half.
    if (u <= 0.5) return poly_deriv_eval(coeffs_, u, 0);
    return 1.0 - poly_deriv_eval(coeffs_, 1.0 - u, 0);
  }
  // Derivatives come from the product form of the integrand,
  //   S'(u) = u^Q (1-u)^Q / B,
  // differentiated by Leibniz.  Each term is a product of powers of u and
  // (1-u), so values near the endpoints shrink without the catastrophic
  // cancellation the expanded polynomial suffers there.
  const int p = deriv - 1;
  double acc = 0.0;
  for (int j = std::max(0, p - q_); j <= std::min(p, q_); ++j) {
    double term = binomial(p, j);
    for (int i = 0; i < j; ++i) term *= double(q_ - i);            // d^j u^Q
    for (int i = 0; i < p - j; ++i) term *= -double(q_ - i);       // d^(p-j) (1-u)^Q
    term *= std::pow(u, double(q_ - j)) * std::pow(1.0 - u, double(q_ - (p - j)));
    acc += term;
  }
  return acc * inv_beta_;
}

double JetBump::eval(double x, int deriv, const Smoothstep& step) const {
  const double u = (x - point) / width;
  if (u <= -1.0 || u >= 1.0) return 0.0;

  // plateau P and its derivatives at u
  auto plateau = [&](int q) -> double {
    if (u >= -0.5 && u <= 0.5) return q == 0 ? 1.0 : 0.0;
    if (u < -0.5) {
      // S(2(u+1)) rising wing
      const double s = step.eval(2.0 * (u + 1.0), q);
      return s * std::pow(2.0, double(q));
    }
    // S(2(1-u)) falling wing
    const double s = step.eval(2.0 * (1.0 - u), q);
    return s * std::pow(-2.0, double(q));
  };

  // g(u) = u^order / order! * P(u); Leibniz for the deriv-th derivative.
  double g = 0.0;
  const int mmax = std::min(deriv, order);
  for (int m = 0; m <= mmax; ++m) {
    const int pw = order - m;
    const double mono = std::pow(u, double(pw)) / factorial(pw);
    g += binomial(deriv, m) * mono * plateau(deriv - m);
  }
  return amplitude * std::pow(width, double(order - deriv)) * g;
}

JetFunction::JetFunction(std::vector<JetBump> bumps, int smoothness)
    : bumps_(std::move(bumps)), step_(smoothness) {}

double JetFunction::eval(double x, int deriv) const {
  double s = 0.0;
  for (const auto& b : bumps_) s += b.eval(x, deriv, step_);
  return s;
}

Vec JetFunction::grid_values(const ModelSpace& model) const {
  const auto& g = model.grid();
  Vec v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = eval(g[i], 0);
  return v;
}

double JetFunction::sup_derivative(int k, std::size_t grid) const {
  double s = 0.0;
  for (std::size_t i = 0; i <= grid; ++i) {
    const double x = double(i) / double(grid);
    s = std::max(s, std::abs(eval(x, k)));
  }
  return s;
}

JetResult prescribed_jet(const std::vector<double>& points,
                         const std::vector<double>& values, int order,
                         const JetParams& params) {
  if (order < 0) throw std::invalid_argument("order must be nonnegative");
  const std::size_t count = static_cast<std::size_t>(order) + 1;
  if (points.size() < count || values.size() < count)
    throw std::invalid_argument(
        "need one point and one value per derivative order 0..order");

  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j)
      if (points[i] == points[j]) {
        std::ostringstream os;
        os << "points " << i << " and " << j << " coincide at " << points[i];
        throw std::invalid_argument(os.str());
      }

  const Smoothstep step(params.smoothness);

  if (!params.widths.empty() && params.widths.size() < count)
    throw std::invalid_argument("width list shorter than the condition list");

  std::vector<JetBump> bumps(count);
  for (std::size_t n = 0; n < count; ++n) {
    double width;
    if (!params.widths.empty()) {
      width = params.widths[n];
      if (!(width > 0.0)) throw std::invalid_argument("widths must be positive");
    } else {
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m < count; ++m)
        if (m != n) gap = std::min(gap, std::abs(points[n] - points[m]));
      width = std::min(std::ldexp(1.0, -static_cast<int>(n) - 2), 0.49 * gap);
    }
    JetBump b;
    b.point = points[n];
    b.order = static_cast<int>(n);
    b.amplitude = values[n];

    if (params.enforce_smallness && n > 0 && values[n] != 0.0) {
      // sup |v_n^(k)| = |a_n| width^{n-k} sup|g^(k)|; shrink the width until
      // every lower-order sup drops below 2^{-n}.
      for (int k = 0; k < static_cast<int>(n); ++k) {
        JetBump probe = b;
        probe.width = 1.0;
        double gk = 0.0;
        for (int s = -64; s <= 64; ++s)
          gk = std::max(gk, std::abs(probe.eval(probe.point + s / 64.0, k, step)));
        if (gk == 0.0) continue;
        const double target = std::ldexp(1.0, -static_cast<int>(n));
        const double cap =
            std::pow(target / gk, 1.0 / double(static_cast<int>(n) - k));
        width = std::min(width, 0.99 * cap);
      }
    }
    b.width = width;
    bumps[n] = b;
  }

  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j) {
      const auto& a = bumps[i];
      const auto& c = bumps[j];
      if (a.support_lo() < c.support_hi() && c.support_lo() < a.support_hi()) {
        std::ostringstream os;
        os << "bump supports overlap: condition " << i << " on ["
           << a.support_lo() << ", " << a.support_hi() << "] vs condition " << j
           << " on [" << c.support_lo() << ", " << c.support_hi() << "]";
        throw std::invalid_argument(os.str());
      }
    }

  JetFunction f(bumps, params.smoothness);
  JetReport rep;
  rep.supports_disjoint = true;

  for (std::size_t n = 0; n < count; ++n) {
    JetCondition c;
    c.point = points[n];
    c.order = static_cast<int>(n);
    c.target = values[n];
    c.achieved = f.eval(points[n], static_cast<int>(n));
    const double denom = std::max(std::abs(c.target), 1e-300);
    c.rel_err = std::abs(c.achieved - c.target) / denom;
    rep.conditions.push_back(c);
  }

  // Finite-difference spot checks: the closed-form derivative of order k
  // against a Richardson-extrapolated central difference of order k-1.
  double fd_worst = 0.0;
  for (int k = 1; k <= order; ++k) {
    for (std::size_t t = 0; t < params.fd_points; ++t) {
      const auto& b = f.bumps()[static_cast<std::size_t>(k)];
      const double x =
          b.point + (double(t + 1) / double(params.fd_points + 1) - 0.5) *
                        b.width * 0.8;
      const double h = b.width * 1e-3;
      auto d = [&](double hh) {
        return (f.eval(x + hh, k - 1) - f.eval(x - hh, k - 1)) / (2.0 * hh);
      };
      const double rich = (4.0 * d(h / 2.0) - d(h)) / 3.0;
      const double closed = f.eval(x, k);
      const double scale = std::max({std::abs(closed), std::abs(rich), 1e-9});
      fd_worst = std::max(fd_worst, std::abs(rich - closed) / scale);
    }
  }
  rep.fd_max_rel_err = fd_worst;

  if (params.enforce_smallness) {
    for (std::size_t n = 1; n < count; ++n)
      for (int k = 0; k < static_cast<int>(n); ++k) {
        JetFunction solo({f.bumps()[n]}, params.smoothness);
        JetSmallness s;
        s.order = static_cast<int>(n);
        s.k = k;
        s.norm = solo.sup_derivative(k, 2048);
        s.bound = std::ldexp(1.0, -static_cast<int>(n));
        s.ok = s.norm < s.bound;
        rep.smallness.push_back(s);
      }
  }

  std::ostringstream os;
  os << count << " derivative conditions carried by disjoint plateau bumps";
  rep.note = os.str();
  return {std::move(f), std::move(rep)};
}

}  // namespace gmv
