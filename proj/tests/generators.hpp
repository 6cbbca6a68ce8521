#pragma once

// Hand-rolled generators for property tests.
#include "dunkl/root_system.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace gen {

using dunkl::Vector;

inline Vector gaussian(std::mt19937_64& g, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = d(g);
  return v;
}

/// Point of the open chamber at distance ≥ margin·(1+‖x‖) from every wall.
inline Vector chamber_point(std::mt19937_64& g, const dunkl::RootSystem& s, double margin = 0.05) {
  for (;;) {
    Vector x = dunkl::project_to_chamber(s, gaussian(g, s.dimension(), 2.0)).point;
    const Vector dots = s.positive_matrix().transpose() * x;
    if (dots.minCoeff() >= margin * (1.0 + x.norm())) return x;
  }
}

inline std::vector<std::size_t> shuffled(std::mt19937_64& g, std::vector<std::size_t> v) {
  std::shuffle(v.begin(), v.end(), g);
  return v;
}

/// Random orthogonal matrix by Gram-Schmidt on Gaussian columns.
inline dunkl::Matrix orthogonal(std::mt19937_64& g, std::size_t n) {
  dunkl::Matrix q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    Vector v = gaussian(g, n);
    for (Eigen::Index i = 0; i < j; ++i) v -= q.col(i).dot(v) * q.col(i);
    q.col(j) = v.normalized();
  }
  return q;
}

}  // namespace gen
