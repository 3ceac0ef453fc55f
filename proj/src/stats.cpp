#include "coljoin/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace coljoin::stats {

namespace {

// Regularized incomplete gamma, series and continued-fraction forms
// (Numerical Recipes style).
double gamma_series_p(double a, double x) {
  double sum = 1.0 / a, term = sum, ap = a;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_cf_q(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) return 1.0;
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series_p(a, x);
  return gamma_cf_q(a, x);
}

}  // namespace

double chi_square_pvalue(double statistic, unsigned dof) {
  if (dof == 0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * statistic);
}

GofResult chi_square_gof(std::span<const uint64_t> observed,
                         std::span<const double> expected,
                         double min_expected) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("observed/expected size mismatch");
  // pool consecutive low-mass cells left to right
  std::vector<double> exp_pooled;
  std::vector<double> obs_pooled;
  double e_acc = 0.0, o_acc = 0.0;
  for (size_t i = 0; i < observed.size(); ++i) {
    e_acc += expected[i];
    o_acc += static_cast<double>(observed[i]);
    if (e_acc >= min_expected) {
      exp_pooled.push_back(e_acc);
      obs_pooled.push_back(o_acc);
      e_acc = o_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (!exp_pooled.empty()) {
      exp_pooled.back() += e_acc;
      obs_pooled.back() += o_acc;
    } else {
      exp_pooled.push_back(e_acc);
      obs_pooled.push_back(o_acc);
    }
  }
  GofResult res;
  for (size_t i = 0; i < exp_pooled.size(); ++i) {
    if (exp_pooled[i] <= 0.0) continue;
    const double diff = obs_pooled[i] - exp_pooled[i];
    res.statistic += diff * diff / exp_pooled[i];
  }
  res.dof = exp_pooled.size() > 1 ? static_cast<unsigned>(exp_pooled.size() - 1) : 1;
  res.p_value = chi_square_pvalue(res.statistic, res.dof);
  return res;
}

}  // namespace coljoin::stats
