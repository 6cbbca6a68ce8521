#pragma once

#include <cstddef>
#include <vector>

namespace dunkl {

struct KsResult {
  double statistic = 0.0;  // sup |F_a − F_b|
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

/// Survival function Q(λ) = 2 Σ_{j≥1} (−1)^{j−1} e^{−2j²λ²} of the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// Two-sample Kolmogorov–Smirnov test (asymptotic p-value with the usual
/// small-sample correction of the argument).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace dunkl
