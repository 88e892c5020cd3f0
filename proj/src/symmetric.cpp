#include "umbilic/symmetric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "umbilic/errors.hpp"
#include "umbilic/parallel.hpp"
#include "umbilic/random.hpp"

namespace umbilic {

std::vector<double> elementary_symmetric(std::span<const double> kappa) {
  std::vector<double> sigma(kappa.size() + 1, 0.0);
  sigma[0] = 1.0;
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    for (std::size_t j = i + 1; j >= 1; --j) sigma[j] += kappa[i] * sigma[j - 1];
  }
  return sigma;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return std::round(b);
}

std::vector<double> normalized_curvatures(std::span<const double> kappa) {
  std::vector<double> H = elementary_symmetric(kappa);
  const int n = static_cast<int>(kappa.size());
  for (int k = 0; k <= n; ++k) H[k] /= binomial(n, k);
  return H;
}

bool in_garding_cone(std::span<const double> kappa, int k, double threshold) {
  const std::vector<double> H = normalized_curvatures(kappa);
  for (int j = 1; j <= k; ++j) {
    if (!(H[j] > threshold)) return false;
  }
  return true;
}

double traceless_norm_sq(std::span<const double> kappa) {
  double mean = 0.0;
  for (double v : kappa) mean += v;
  mean /= static_cast<double>(kappa.size());
  double sq = 0.0;
  for (double v : kappa) sq += (v - mean) * (v - mean);
  return sq;
}

namespace {

// H_k^2 - H_{k+1} H_{k-1} expanded about the mean m with d = κ - m:
// H_j = Σ_i a_{j,i} m^{j-i} σ_i(d), a_{j,i} = C(n-i, j-i) / C(n, j).
// The pure m^{2k} terms cancel identically and σ_1(d) = 0, so both are dropped.
double centered_newton_gap(std::span<const double> kappa, int k) {
  const int n = static_cast<int>(kappa.size());
  double m = 0.0;
  for (double v : kappa) m += v;
  m /= n;
  std::vector<double> d(kappa.begin(), kappa.end());
  for (double& v : d) v -= m;
  const std::vector<double> sd = elementary_symmetric(d);
  auto a = [n](int j, int i) { return binomial(n - i, j - i) / binomial(n, j); };
  double gap = 0.0;
  for (int i = 0; i <= k + 1; ++i) {
    if (i == 1) continue;
    for (int ip = 0; ip <= k + 1; ++ip) {
      if (ip == 1 || (i == 0 && ip == 0)) continue;
      const double coef = (i <= k && ip <= k ? a(k, i) * a(k, ip) : 0.0) -
                          (ip <= k - 1 ? a(k + 1, i) * a(k - 1, ip) : 0.0);
      if (coef == 0.0) continue;
      gap += coef * std::pow(m, 2 * k - i - ip) * sd[i] * sd[ip];
    }
  }
  return gap;
}

}  // namespace

NewtonGap newton_gap(std::span<const double> kappa, int k) {
  const int n = static_cast<int>(kappa.size());
  if (n < 2) throw DomainError("newton_gap needs n >= 2");
  if (k < 1 || k > n - 1) throw DomainError("newton_gap needs 1 <= k <= n - 1");
  if (!std::is_sorted(kappa.begin(), kappa.end())) throw DomainError("newton_gap expects ascending curvatures");
  if (!in_garding_cone(kappa, k)) throw PreconditionError("curvature vector outside Garding cone Gamma_" + std::to_string(k));

  NewtonGap out;
  out.gap = centered_newton_gap(kappa, k);
  out.traceless_sq = traceless_norm_sq(kappa);
  // ∂²σ_{k+1}/∂κ_1∂κ_n = σ_{k-1} of the remaining curvatures
  std::vector<double> inner(kappa.begin() + 1, kappa.end() - 1);
  out.hk1n1 = elementary_symmetric(inner)[k - 1] / binomial(n, k + 1);
  const double denom = out.traceless_sq * out.hk1n1 * out.hk1n1;
  out.ratio = denom > 0.0 ? out.gap / denom : std::numeric_limits<double>::infinity();
  return out;
}

NewtonSampling newton_constant_estimate(int n, int k, std::size_t samples, std::uint64_t seed) {
  if (samples < 1000) throw DomainError("newton_constant_estimate needs at least 1000 samples");
  if (n < 2 || k < 1 || k > n - 1) throw DomainError("newton_constant_estimate needs n >= 2, 1 <= k <= n - 1");

  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  struct Partial {
    double ratio = std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    double hk1n1 = std::numeric_limits<double>::infinity();
    std::size_t accepted = 0;
  };
  std::vector<Partial> partial(chunks);
  const CounterStream stream(seed, static_cast<std::uint64_t>(n) * 64 + k);

  parallel_for(chunks, [&](std::size_t c) {
    Partial& p = partial[c];
    std::vector<double> kappa(n);
    const std::size_t end = std::min(samples, (c + 1) * kChunk);
    for (std::size_t s = c * kChunk; s < end; ++s) {
      for (int i = 0; i < n; ++i) kappa[i] = stream.uniform(s * n + i, -2.0, 4.0);
      std::sort(kappa.begin(), kappa.end());
      if (!in_garding_cone(kappa, k)) continue;
      const NewtonGap g = newton_gap(kappa, k);
      ++p.accepted;
      p.ratio = std::min(p.ratio, g.ratio);
      p.gap = std::min(p.gap, g.gap);
      p.hk1n1 = std::min(p.hk1n1, g.hk1n1);
    }
  });

  NewtonSampling out;
  out.drawn = samples;
  out.seed = seed;
  out.estimate = out.min_gap = out.min_hk1n1 = std::numeric_limits<double>::infinity();
  for (const Partial& p : partial) {
    out.accepted += p.accepted;
    out.estimate = std::min(out.estimate, p.ratio);
    out.min_gap = std::min(out.min_gap, p.gap);
    out.min_hk1n1 = std::min(out.min_hk1n1, p.hk1n1);
  }
  if (out.accepted < 100) throw NumericalError("too few cone samples accepted: " + std::to_string(out.accepted));
  return out;
}

}  // namespace umbilic
