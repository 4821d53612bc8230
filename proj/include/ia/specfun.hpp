#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ia/errors.hpp"

namespace ia::specfun {

// Exponential integral Ei(x) for strictly negative x, relative error < 1e-12.
// Throws DomainError for x >= 0 and for |x| < 1e-300 where Ei diverges.
double exp_integral_ei(double x);

// exp(y) * E1(y) for y > 0. Scaled form, usable without overflow for any y.
double exp_integral_e1_scaled(double y);

// psi(t) for integer t >= 1: -gamma + sum_{m=1}^{t-1} 1/m.
double digamma_int(long t);

// E[ln(X + x)] where X ~ Erlang(shape t, scale z), for x > 0, z > 0, t >= 1.
double z_integral(double x, long t, double z);

// One Erlang term of shape eta (integer >= 1) and scale (mean of each
// constituent exponential).
struct ErlangComponent {
  int shape = 0;
  double scale = 0.0;
};

// Erlang pdf x^{t-1} exp(-x/z) / (z^t (t-1)!).
double erlang_pdf(double x, int shape, double scale);

// Density of a sum of independent Erlangs, expressed as a finite signed
// mixture of Erlang pdfs at the component scales:
//   pdf(x) = sum_i sum_{t=1}^{shape_i} Xi(i,t) g(x, t, scale_i).
// Individual weights may be negative; they always sum to 1.
class ErlangMixture {
 public:
  ErlangMixture() = default;
  ErlangMixture(std::vector<ErlangComponent> components,
                std::vector<std::vector<double>> weights);

  const std::vector<ErlangComponent>& components() const { return components_; }
  int component_count() const { return static_cast<int>(components_.size()); }

  // Xi(i, t), 1 <= t <= components()[i].shape.
  double weight(int component, int order) const;
  double weight_sum() const;

  double pdf(double x) const;  // DomainError for x < 0
  double cdf(double x) const;
  double mean() const;

  // sum_{i,t} Xi(i,t) * f(t, scale_i); the workhorse for rate formulas.
  template <class F>
  double expect(F&& f) const {
    double acc = 0.0;
    for (size_t i = 0; i < components_.size(); ++i)
      for (int t = 1; t <= components_[i].shape; ++t)
        acc += weights_[i][static_cast<size_t>(t - 1)] *
               f(t, components_[i].scale);
    return acc;
  }

 private:
  std::vector<ErlangComponent> components_;
  std::vector<std::vector<double>> weights_;  // weights_[i][t-1]
};

// Builds the mixture for the sum of the given independent Erlang terms.
// Shape-0 entries are dropped; throws EmptyMixture if nothing survives.
// Components whose scales are too close for the signed-weight expansion to
// be representable are merged first (shapes summed, mean-preserving scale).
ErlangMixture mixture_weights(std::span<const ErlangComponent> components);
ErlangMixture mixture_weights(std::initializer_list<ErlangComponent> components);

double mixture_pdf(const ErlangMixture& m, double x);

}  // namespace ia::specfun
