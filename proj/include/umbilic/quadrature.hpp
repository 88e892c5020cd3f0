#pragma once

#include <vector>

namespace umbilic {

struct QuadratureRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Gauss–Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

}  // namespace umbilic
