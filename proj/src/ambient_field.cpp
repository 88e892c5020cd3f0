#include "umbilic/ambient_field.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

#include "umbilic/errors.hpp"
#include "umbilic/random.hpp"

namespace umbilic {

namespace {

FieldJet central_differences(const AmbientField::ValueFn& f, const Vec3& x, double h) {
  FieldJet jet;
  jet.value = f(x);
  for (int i = 0; i < 3; ++i) {
    Vec3 ei = Vec3::Zero();
    ei[i] = h;
    const double fp = f(x + ei);
    const double fm = f(x - ei);
    jet.grad[i] = (fp - fm) / (2.0 * h);
    jet.hess(i, i) = (fp - 2.0 * jet.value + fm) / (h * h);
    for (int j = 0; j < i; ++j) {
      Vec3 ej = Vec3::Zero();
      ej[j] = h;
      const double mixed = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4.0 * h * h);
      jet.hess(i, j) = mixed;
      jet.hess(j, i) = mixed;
    }
  }
  return jet;
}

// f = a + b G(|x|²) with G, G', G'' supplied.
struct RadialProfile {
  std::function<std::array<double, 3>(double)> G;
  double a = 0.0;
  double b = 1.0;
};

FieldJet radial_jet(const RadialProfile& p, const Vec3& x) {
  const auto [g0, g1, g2] = p.G(x.squaredNorm());
  FieldJet jet;
  jet.value = p.a + p.b * g0;
  jet.grad = (2.0 * p.b * g1) * x;
  jet.hess = (2.0 * p.b * g1) * Mat3::Identity() + (4.0 * p.b * g2) * (x * x.transpose());
  return jet;
}

// ϑ'(r) as a function of q = |x|² in the chart: (1 - Kq) / (1 + Kq).
std::array<double, 3> warp_prime_of_q(int K, double q) {
  const double d = 1.0 + K * q;
  return {(1.0 - K * q) / d, -2.0 * K / (d * d), 4.0 * K * K / (d * d * d)};
}

}  // namespace

AmbientField::AmbientField(std::string name, Mode mode, ValueFn value, JetFn jet, double step)
    : name_(std::move(name)), mode_(mode), value_(std::move(value)), jet_(std::move(jet)), step_(step) {}

AmbientField AmbientField::analytic(std::string name, JetFn jet) {
  auto shared = std::make_shared<JetFn>(std::move(jet));
  ValueFn value = [shared](const Vec3& x) { return (*shared)(x).value; };
  JetFn j = [shared](const Vec3& x) { return (*shared)(x); };
  return AmbientField(std::move(name), Mode::analytic, std::move(value), std::move(j), 0.0);
}

AmbientField AmbientField::finite_difference(std::string name, ValueFn value, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  JetFn jet = [value, step](const Vec3& x) { return central_differences(value, x, step); };
  return AmbientField(std::move(name), Mode::finite_difference, std::move(value), std::move(jet), step);
}

double AmbientField::value(const Vec3& x) const { return value_(x); }

FieldJet AmbientField::jet(const Vec3& x) const { return jet_(x); }

AmbientField AmbientField::affine(double scale, double offset) const {
  ValueFn value = [v = value_, scale, offset](const Vec3& x) { return scale * v(x) + offset; };
  JetFn jet = [j = jet_, scale, offset](const Vec3& x) {
    FieldJet out = j(x);
    out.value = scale * out.value + offset;
    out.grad *= scale;
    out.hess *= scale;
    return out;
  };
  return AmbientField(name_, mode_, std::move(value), std::move(jet), step_);
}

AmbientField AmbientField::as_finite_difference(double step) const {
  return finite_difference(name_, value_, step);
}

AmbientField quadratic_field(const Mat3& A, double c) {
  const Mat3 S = 0.5 * (A + A.transpose());
  return AmbientField::analytic("quadratic", [S, c](const Vec3& x) {
    FieldJet jet;
    jet.value = x.dot(S * x) + c;
    jet.grad = 2.0 * S * x;
    jet.hess = 2.0 * S;
    return jet;
  });
}

AmbientField warp_prime_field(const Spaceform& space) {
  const int K = space.curvature();
  RadialProfile p{[K](double q) { return warp_prime_of_q(K, q); }, 0.0, 1.0};
  return AmbientField::analytic("warp_prime", [p](const Vec3& x) { return radial_jet(p, x); });
}

AmbientField torsion_ball_field(const Spaceform& space, double r0) {
  if (!space.admits_radius(r0) || r0 <= 0.0) throw DomainError("torsion ball radius outside admissible range");
  const int K = space.curvature();
  RadialProfile p;
  if (K == 0) {
    // (r² - r0²) / 6
    p.G = [](double q) { return std::array<double, 3>{q, 1.0, 0.0}; };
    p.a = -r0 * r0 / 6.0;
    p.b = 1.0 / 6.0;
  } else {
    // (1 - ϑ'(r)/ϑ'(r0)) / (3K)
    p.G = [K](double q) { return warp_prime_of_q(K, q); };
    p.a = 1.0 / (3.0 * K);
    p.b = -1.0 / (3.0 * K * space.theta_prime(r0));
  }
  return AmbientField::analytic("torsion_ball", [p](const Vec3& x) { return radial_jet(p, x); });
}

AmbientField polynomial_field(std::vector<Monomial> terms, std::string name) {
  return AmbientField::analytic(std::move(name), [terms = std::move(terms)](const Vec3& x) {
    auto pw = [](double v, int k) { return k <= 0 ? 1.0 : std::pow(v, k); };
    FieldJet jet;
    for (const Monomial& m : terms) {
      const auto& e = m.powers;
      std::array<double, 3> p0, p1, p2;
      for (int i = 0; i < 3; ++i) {
        p0[i] = pw(x[i], e[i]);
        p1[i] = e[i] * pw(x[i], e[i] - 1);
        p2[i] = e[i] * (e[i] - 1) * pw(x[i], e[i] - 2);
      }
      jet.value += m.coefficient * p0[0] * p0[1] * p0[2];
      jet.grad[0] += m.coefficient * p1[0] * p0[1] * p0[2];
      jet.grad[1] += m.coefficient * p0[0] * p1[1] * p0[2];
      jet.grad[2] += m.coefficient * p0[0] * p0[1] * p1[2];
      jet.hess(0, 0) += m.coefficient * p2[0] * p0[1] * p0[2];
      jet.hess(1, 1) += m.coefficient * p0[0] * p2[1] * p0[2];
      jet.hess(2, 2) += m.coefficient * p0[0] * p0[1] * p2[2];
      const double xy = m.coefficient * p1[0] * p1[1] * p0[2];
      const double xz = m.coefficient * p1[0] * p0[1] * p1[2];
      const double yz = m.coefficient * p0[0] * p1[1] * p1[2];
      jet.hess(0, 1) += xy;
      jet.hess(1, 0) += xy;
      jet.hess(0, 2) += xz;
      jet.hess(2, 0) += xz;
      jet.hess(1, 2) += yz;
      jet.hess(2, 1) += yz;
    }
    return jet;
  });
}

AmbientField tabulated_field(TabulatedGrid grid) {
  const auto& d = grid.dims;
  if (d[0] < 2 || d[1] < 2 || d[2] < 2) throw std::invalid_argument("tabulated field needs at least 2 samples per axis");
  if (grid.values.size() != static_cast<std::size_t>(d[0]) * d[1] * d[2]) {
    throw std::invalid_argument("tabulated field: value count does not match dims");
  }
  const double step = 0.5 * grid.spacing.minCoeff();
  auto table = std::make_shared<const TabulatedGrid>(std::move(grid));
  AmbientField::ValueFn value = [table](const Vec3& x) {
    const TabulatedGrid& g = *table;
    std::array<int, 3> i0;
    std::array<double, 3> t;
    for (int a = 0; a < 3; ++a) {
      const double u = (x[a] - g.origin[a]) / g.spacing[a];
      if (u < 0.0 || u > g.dims[a] - 1) throw DomainError("tabulated field evaluated outside its grid");
      i0[a] = std::min(static_cast<int>(std::floor(u)), g.dims[a] - 2);
      t[a] = u - i0[a];
    }
    auto at = [&](int i, int j, int k) {
      return g.values[(static_cast<std::size_t>(k) * g.dims[1] + j) * g.dims[0] + i];
    };
    double sum = 0.0;
    for (int c = 0; c < 8; ++c) {
      const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
      const double w = (di ? t[0] : 1 - t[0]) * (dj ? t[1] : 1 - t[1]) * (dk ? t[2] : 1 - t[2]);
      sum += w * at(i0[0] + di, i0[1] + dj, i0[2] + dk);
    }
    return sum;
  };
  return AmbientField::finite_difference("tabulated", std::move(value), step);
}

AmbientField random_polynomial_field(std::uint64_t seed, std::uint64_t stream, int max_degree) {
  const CounterStream rng(seed, stream);
  std::vector<Monomial> terms;
  std::uint64_t counter = 0;
  for (int d = 0; d <= max_degree; ++d) {
    for (int i = d; i >= 0; --i) {
      for (int j = d - i; j >= 0; --j) {
        terms.push_back({rng.uniform(counter++, -1.0, 1.0), {i, j, d - i - j}});
      }
    }
  }
  return polynomial_field(std::move(terms), "random_polynomial");
}

AmbientField anisotropic_quartic_field() {
  return polynomial_field({{1.0 / 1.44, {2, 0, 0}},
                           {1.0, {0, 2, 0}},
                           {1.0 / 0.81, {0, 0, 2}},
                           {0.2, {4, 0, 0}},
                           {0.1, {0, 2, 2}},
                           {-1.0, {0, 0, 0}}},
                          "anisotropic_quartic");
}

}  // namespace umbilic
