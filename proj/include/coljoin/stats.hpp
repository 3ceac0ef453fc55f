#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace coljoin::stats {

/// Upper-tail probability of a chi-square statistic with dof degrees of
/// freedom (regularized incomplete gamma Q(dof/2, x/2)).
double chi_square_pvalue(double statistic, unsigned dof);

struct GofResult {
  double statistic = 0.0;
  unsigned dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness-of-fit of observed counts against expected counts.
/// Cells with expected mass below min_expected are pooled into their
/// neighbor so the chi-square approximation stays valid.
GofResult chi_square_gof(std::span<const uint64_t> observed,
                         std::span<const double> expected,
                         double min_expected = 5.0);

}  // namespace coljoin::stats
