#include "ia/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ia::specfun {

namespace {

constexpr long double kEulerGamma = 0.57721566490153286060651209008240243L;

// exp(y)*E1(y) via the ascending series; accurate for y <= 1.
long double e1_scaled_series(long double y) {
  long double sum = 0.0L;
  long double term = 1.0L;
  for (int n = 1; n < 64; ++n) {
    term *= -y / n;
    const long double add = -term / n;
    sum += add;
    if (std::fabs(add) < 1e-22L * std::fabs(sum) + 1e-40L) break;
  }
  return std::exp(y) * (-std::log(y) - kEulerGamma + sum);
}

// exp(y)*E1(y) via the continued fraction
//   E1(y) = e^{-y} / (y + 1 - 1/(y + 3 - 4/(y + 5 - 9/(...))));
// modified Lentz evaluation, solid for y >= 1.
long double e1_scaled_cf(long double y) {
  constexpr long double tiny = 1e-38L;
  long double b = y + 1.0L;
  long double c = 1.0L / tiny;
  long double d = 1.0L / b;
  long double h = d;
  for (int n = 1; n < 300; ++n) {
    const long double a = -static_cast<long double>(n) * n;
    b += 2.0L;
    d = a * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const long double delta = c * d;
    h *= delta;
    if (std::fabs(delta - 1.0L) < 1e-20L) break;
  }
  return h;
}

long double e1_scaled_ld(long double y) {
  return y <= 1.0L ? e1_scaled_series(y) : e1_scaled_cf(y);
}

long double factorial_ld(int n) {
  static const auto table = [] {
    std::vector<long double> f(171, 1.0L);
    for (int i = 1; i <= 170; ++i) f[i] = f[i - 1] * i;
    return f;
  }();
  return table[static_cast<size_t>(n)];
}

// ---------------------------------------------------------------------------
// Partial-fraction weights for a product of Erlang Laplace transforms.
//
// With lambda_c = 1/scale_c, the transform of the sum is
//   F(s) = prod_c (1 + scale_c s)^{-shape_c},
// and expanding over the poles -lambda_i with multiplicities shape_i gives
//   F(s) = sum_i sum_t Xi(i,t) (1 + scale_i s)^{-t}.
// Derivatives of prod_{q != i} (s + lambda_q)^{-shape_q} at s = -lambda_i are
// generated through the log-derivative recurrence. Everything runs in long
// double: the weights cancel heavily when scales are close, which is also why
// close scales are merged before we get here.
// ---------------------------------------------------------------------------

struct WorkComponent {
  int shape;
  long double scale;
};

std::vector<std::vector<double>> partial_fraction_weights(
    const std::vector<WorkComponent>& comps) {
  const size_t n = comps.size();
  std::vector<long double> lambda(n);
  for (size_t c = 0; c < n; ++c) lambda[c] = 1.0L / comps[c].scale;

  std::vector<std::vector<double>> weights(n);
  std::vector<long double> hs, g;
  for (size_t i = 0; i < n; ++i) {
    const int eta = comps[i].shape;
    weights[i].assign(static_cast<size_t>(eta), 0.0);

    // hs_j = h^{(j)}(-lambda_i) * prod_{q != i} lambda_q^{shape_q}
    hs.assign(static_cast<size_t>(eta), 0.0L);
    long double hs0 = 1.0L;
    for (size_t q = 0; q < n; ++q) {
      if (q == i) continue;
      const long double ratio = lambda[q] / (lambda[q] - lambda[i]);
      for (int r = 0; r < comps[q].shape; ++r) hs0 *= ratio;
    }
    hs[0] = hs0;

    g.assign(static_cast<size_t>(eta), 0.0L);  // g[j] = (ln h)^{(j)}, j >= 1
    for (int j = 1; j < eta; ++j) {
      long double acc = 0.0L;
      for (size_t q = 0; q < n; ++q) {
        if (q == i) continue;
        acc += comps[q].shape / powl(lambda[q] - lambda[i], j);
      }
      const long double sign = (j % 2 == 0) ? 1.0L : -1.0L;
      g[static_cast<size_t>(j)] = sign * factorial_ld(j - 1) * acc;
    }

    for (int m = 1; m < eta; ++m) {
      // h^{(m)} = sum_{j=0}^{m-1} C(m-1,j) h^{(j)} g^{(m-j)}
      long double acc = 0.0L;
      long double c_mj = 1.0L;  // C(m-1, j)
      for (int j = 0; j < m; ++j) {
        acc += c_mj * hs[static_cast<size_t>(j)] * g[static_cast<size_t>(m - j)];
        c_mj = c_mj * (m - 1 - j) / (j + 1);
      }
      hs[static_cast<size_t>(m)] = acc;
    }

    long double lam_pow = 1.0L;  // lambda_i^{eta - t}, walking t downward
    for (int t = eta; t >= 1; --t) {
      const int deriv = eta - t;
      weights[i][static_cast<size_t>(t - 1)] = static_cast<double>(
          hs[static_cast<size_t>(deriv)] * lam_pow / factorial_ld(deriv));
      lam_pow *= lambda[i];
    }
  }
  return weights;
}

// Merge decision: keeping two Erlang groups distinct at relative scale gap
// delta produces weights of magnitude ~delta^-(shape_a+shape_b-1); past
// ~3e6 the stored doubles can no longer cancel back to a unit sum. Merging
// instead, with a mean-preserving common scale, perturbs the density only at
// O(delta^2).
bool should_merge(int shape_a, int shape_b, double rel_gap) {
  const int p = shape_a + shape_b - 1;
  return rel_gap < std::pow(10.0, -6.5 / p);
}

std::vector<WorkComponent> merge_close_scales(std::vector<WorkComponent> comps) {
  std::sort(comps.begin(), comps.end(),
            [](const WorkComponent& a, const WorkComponent& b) {
              return a.scale < b.scale;
            });
  bool merged = true;
  while (merged && comps.size() > 1) {
    merged = false;
    std::vector<WorkComponent> out;
    out.push_back(comps[0]);
    for (size_t c = 1; c < comps.size(); ++c) {
      WorkComponent& prev = out.back();
      const WorkComponent& cur = comps[c];
      const double rel_gap =
          static_cast<double>((cur.scale - prev.scale) / prev.scale);
      if (should_merge(prev.shape, cur.shape, rel_gap)) {
        const long double mass =
            prev.shape * prev.scale + cur.shape * cur.scale;
        prev.shape += cur.shape;
        prev.scale = mass / prev.shape;
        merged = true;
      } else {
        out.push_back(cur);
      }
    }
    comps = std::move(out);
  }
  return comps;
}

}  // namespace

double exp_integral_e1_scaled(double y) {
  if (!(y > 0.0)) throw DomainError("exp_integral_e1_scaled: y must be > 0");
  return static_cast<double>(e1_scaled_ld(static_cast<long double>(y)));
}

double exp_integral_ei(double x) {
  if (!(x < 0.0)) throw DomainError("exp_integral_ei: argument must be < 0");
  if (x > -1e-300)
    throw DomainError("exp_integral_ei: diverges as x -> 0-");
  const long double y = -static_cast<long double>(x);
  // Ei(x) = -E1(-x); undo the exp(y) scaling (underflows to -0 for y > ~11350,
  // where the true value is below the double range anyway).
  return static_cast<double>(-std::exp(-y) * e1_scaled_ld(y));
}

double digamma_int(long t) {
  if (t < 1) throw DomainError("digamma_int: t must be >= 1");
  long double h = 0.0L;
  for (long m = t - 1; m >= 1; --m) h += 1.0L / m;
  return static_cast<double>(h - kEulerGamma);
}

double z_integral(double x, long t, double z) {
  if (!(x > 0.0)) throw DomainError("z_integral: x must be > 0");
  if (!(z > 0.0)) throw DomainError("z_integral: z must be > 0");
  if (t < 1) throw DomainError("z_integral: shape must be >= 1");
  if (t > 170) throw DomainError("z_integral: shape too large");

  // E[ln(X+x)] = ln z + I(t, m), m = x/z, with
  //   I(1) = ln m + A(1),        A(1) = e^m E1(m),
  //   I(s+1) = I(s) + A(s+1)/s!, A(s+1) = (s-1)! - m A(s).
  const long double m = static_cast<long double>(x) / z;
  long double a = e1_scaled_ld(m);
  long double result = std::log(m) + a;
  for (long s = 1; s < t; ++s) {
    a = factorial_ld(static_cast<int>(s - 1)) - m * a;
    result += a / factorial_ld(static_cast<int>(s));
  }
  return static_cast<double>(result + std::log(static_cast<long double>(z)));
}

double erlang_pdf(double x, int shape, double scale) {
  if (x < 0.0) return 0.0;
  const double u = x / scale;
  if (shape == 1) return std::exp(-u) / scale;
  if (x == 0.0) return 0.0;
  return std::exp((shape - 1) * std::log(u) - u -
                  std::lgamma(static_cast<double>(shape))) /
         scale;
}

ErlangMixture::ErlangMixture(std::vector<ErlangComponent> components,
                             std::vector<std::vector<double>> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {}

double ErlangMixture::weight(int component, int order) const {
  return weights_[static_cast<size_t>(component)][static_cast<size_t>(order - 1)];
}

double ErlangMixture::weight_sum() const {
  double acc = 0.0;
  for (const auto& w : weights_) acc = std::accumulate(w.begin(), w.end(), acc);
  return acc;
}

double ErlangMixture::pdf(double x) const {
  if (x < 0.0) throw DomainError("mixture pdf: x must be >= 0");
  double acc = 0.0;
  for (size_t i = 0; i < components_.size(); ++i) {
    const double z = components_[i].scale;
    const double u = x / z;
    // sum_t Xi_t u^{t-1}/(t-1)! * e^{-u}/z
    double poly = 0.0;
    double upow = 1.0;
    for (int t = 1; t <= components_[i].shape; ++t) {
      poly += weights_[i][static_cast<size_t>(t - 1)] * upow;
      upow *= u / t;
    }
    acc += poly * std::exp(-u) / z;
  }
  return acc;
}

double ErlangMixture::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  double acc = 0.0;
  for (size_t i = 0; i < components_.size(); ++i) {
    const double u = x / components_[i].scale;
    // P(t, u) = 1 - e^{-u} sum_{j<t} u^j/j!
    double tail = std::exp(-u);
    double term = tail;  // j = 0
    double cum = term;
    for (int t = 1; t <= components_[i].shape; ++t) {
      acc += weights_[i][static_cast<size_t>(t - 1)] * (1.0 - cum);
      term *= u / t;
      cum += term;
    }
  }
  return acc;
}

double ErlangMixture::mean() const {
  double acc = 0.0;
  for (size_t i = 0; i < components_.size(); ++i)
    for (int t = 1; t <= components_[i].shape; ++t)
      acc += weights_[i][static_cast<size_t>(t - 1)] * t * components_[i].scale;
  return acc;
}

ErlangMixture mixture_weights(std::span<const ErlangComponent> components) {
  std::vector<WorkComponent> work;
  work.reserve(components.size());
  int total_shape = 0;
  for (const auto& c : components) {
    if (c.shape < 0) throw DomainError("mixture_weights: negative shape");
    if (c.shape == 0) continue;  // point mass at zero, contributes nothing
    if (!(c.scale > 0.0) || !std::isfinite(c.scale))
      throw DomainError("mixture_weights: scales must be finite and > 0");
    work.push_back({c.shape, static_cast<long double>(c.scale)});
    total_shape += c.shape;
  }
  if (work.empty())
    throw EmptyMixture("mixture_weights: no components with positive shape");
  if (total_shape > 170)
    throw DomainError("mixture_weights: total shape too large");

  work = merge_close_scales(std::move(work));
  auto weights = partial_fraction_weights(work);

  std::vector<ErlangComponent> out(work.size());
  for (size_t c = 0; c < work.size(); ++c)
    out[c] = ErlangComponent{work[c].shape, static_cast<double>(work[c].scale)};
  return ErlangMixture(std::move(out), std::move(weights));
}

ErlangMixture mixture_weights(std::initializer_list<ErlangComponent> components) {
  return mixture_weights(std::span<const ErlangComponent>(components.begin(),
                                                          components.size()));
}

double mixture_pdf(const ErlangMixture& m, double x) { return m.pdf(x); }

}  // namespace ia::specfun
