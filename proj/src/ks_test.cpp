#include "dunkl/ks_test.hpp"

#include "dunkl/error.hpp"

#include <algorithm>
#include <cmath>

namespace dunkl {

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  // The alternating series converges slowly for small λ; there Q is 1 to double precision.
  if (lambda < 0.2) return 1.0;
  double sum = 0.0, sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::invalid_argument, "KS test needs two nonempty samples");
  for (double v : a)
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "KS sample contains a non-finite value");
  for (double v : b)
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "KS sample contains a non-finite value");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n1 = static_cast<double>(a.size()), n2 = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  const double ne = std::sqrt(n1 * n2 / (n1 + n2));
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d);
  r.n1 = a.size();
  r.n2 = b.size();
  return r;
}

}  // namespace dunkl
