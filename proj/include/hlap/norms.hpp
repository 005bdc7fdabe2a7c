#pragma once

#include "hlap/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace hlap {

// Cellwise function: values[i] holds on a cell of Lebesgue measure measures[i].
template <class T = double>
struct SampledFunction {
  VectorX<T> values;
  VectorX<T> measures;

  SampledFunction() = default;
  SampledFunction(VectorX<T> v, VectorX<T> m) : values(std::move(v)), measures(std::move(m)) {
    validate();
  }

  void validate() const {
    if (values.size() != measures.size())
      throw DomainError("SampledFunction: values and measures differ in length");
    if (values.size() == 0) throw DomainError("SampledFunction: empty");
    if ((measures.array() < T(0)).any()) throw DomainError("SampledFunction: negative measure");
    if (!(measures.sum() > T(0))) throw DomainError("SampledFunction: total measure must be positive");
  }

  T total_measure() const { return measures.sum(); }
};

// Lorentz index (p, q); q = infinity encodes the weak space L^{p,inf}.
struct LorentzIndex {
  double p = 1;
  double q = 1;

  static constexpr double infinity = std::numeric_limits<double>::infinity();
  static LorentzIndex lebesgue(double p) { return {p, p}; }
  static LorentzIndex weak(double p) { return {p, infinity}; }
  bool weak_type() const { return std::isinf(q); }
};

inline double unit_ball_volume(int N) {
  return std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
}

inline double sobolev_constant(int N) {
  if (N < 2) throw DomainError("sobolev_constant: N must be >= 2");
  return 1.0 / (N * std::pow(unit_ball_volume(N), 1.0 / N));
}

inline double gamma_constant(int N) {
  if (N < 2) throw DomainError("gamma_constant: N must be >= 2");
  return 1.0 / ((N - 1) * std::pow(unit_ball_volume(N), 1.0 / N));
}

// (p/(N-p))^p, the reciprocal of the optimal Hardy constant.
template <class T = double>
T hardy_multiplier(int N, T p) {
  if (!(p >= T(1)) || !(p < T(N))) throw DomainError("hardy_multiplier: need 1 <= p < N");
  using std::pow;
  return pow(p / (T(N) - p), p);
}

// Sorted |f| in descending order with cumulative measures: f* is the step
// function equal to sorted[k] on (cumulative[k-1], cumulative[k]].
template <class T = double>
struct Rearrangement {
  VectorX<T> sorted;
  VectorX<T> cumulative;

  explicit Rearrangement(const SampledFunction<T>& f) {
    f.validate();
    const Eigen::Index n = f.values.size();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    using std::abs;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return abs(f.values[a]) > abs(f.values[b]);
    });
    sorted.resize(n);
    cumulative.resize(n);
    T acc = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      sorted[k] = abs(f.values[order[k]]);
      acc += f.measures[order[k]];
      cumulative[k] = acc;
    }
  }

  // |{t : f*(t) > s}|
  T level_measure(T s) const {
    T m = 0;
    for (Eigen::Index k = 0; k < sorted.size() && sorted[k] > s; ++k) m = cumulative[k];
    return m;
  }

  T operator()(T t) const {
    for (Eigen::Index k = 0; k < sorted.size(); ++k)
      if (t < cumulative[k]) return sorted[k];
    return T(0);
  }
};

template <class T>
T distribution_function(const SampledFunction<T>& f, T s) {
  if (s < T(0)) throw DomainError("distribution_function: negative level");
  f.validate();
  using std::abs;
  T m = 0;
  for (Eigen::Index i = 0; i < f.values.size(); ++i)
    if (abs(f.values[i]) > s) m += f.measures[i];
  return m;
}

template <class T>
T decreasing_rearrangement(const SampledFunction<T>& f, T t) {
  if (!(t > T(0))) throw DomainError("decreasing_rearrangement: t must be positive");
  return Rearrangement<T>(f)(t);
}

// [int_0^inf (t^{1/p} f*(t))^q dt/t]^{1/q}, or sup_t t^{1/p} f*(t) for q = inf.
// Both are evaluated exactly on the step function f*.
template <class T>
T lorentz_norm(const Rearrangement<T>& r, const LorentzIndex& idx) {
  if (!(idx.p >= 1) || !(idx.q >= 1)) throw DomainError("lorentz_norm: need p >= 1 and q >= 1");
  using std::pow;
  const T ip = T(1) / T(idx.p);
  if (idx.weak_type()) {
    T sup = 0;
    for (Eigen::Index k = 0; k < r.sorted.size(); ++k)
      if (r.sorted[k] > T(0)) sup = std::max(sup, pow(r.cumulative[k], ip) * r.sorted[k]);
    return sup;
  }
  const T q = T(idx.q);
  const T e = q / T(idx.p);
  T acc = 0, prev = 0;
  for (Eigen::Index k = 0; k < r.sorted.size(); ++k) {
    if (r.sorted[k] == T(0)) break;
    const T cur = pow(r.cumulative[k], e);
    acc += pow(r.sorted[k], q) * (cur - prev);
    prev = cur;
  }
  return pow(acc / e, T(1) / q);
}

template <class T>
T lorentz_norm(const SampledFunction<T>& f, const LorentzIndex& idx) {
  return lorentz_norm(Rearrangement<T>(f), idx);
}

template <class T>
T lebesgue_norm(const SampledFunction<T>& f, T q) {
  f.validate();
  using std::abs;
  using std::pow;
  return pow((f.values.array().abs().pow(q) * f.measures.array()).sum(), T(1) / q);
}

}  // namespace hlap
