#include "umbilic/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>

namespace umbilic {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");

  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }

  // legendre_p_zeros returns the nonnegative zeros in ascending order.
  const std::vector<double> positive = boost::math::legendre_p_zeros<double>(n);
  QuadratureRule rule;
  rule.nodes.reserve(n);
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    if (*it > 0.0) rule.nodes.push_back(-*it);
  }
  for (double x : positive) rule.nodes.push_back(x);
  std::sort(rule.nodes.begin(), rule.nodes.end());

  rule.weights.reserve(n);
  for (double x : rule.nodes) {
    const double dp = boost::math::legendre_p_prime(n, x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }

  std::lock_guard lock(mutex);
  cache.emplace(n, rule);
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (auto& x : rule.nodes) x = mid + half * x;
  for (auto& w : rule.weights) w *= half;
  return rule;
}

}  // namespace umbilic
