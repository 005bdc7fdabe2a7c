#pragma once

#include <string>
#include <vector>

namespace hlap {

// sum_k coef[k] r^expo[k] on [a, b)
struct PowerSegment {
  double a = 0, b = 0;
  std::vector<double> coef, expo;
};

// Nonnegative radial source data.
struct SourceSpec {
  enum class Kind { Constant, Power, Steps, Tabulated };
  Kind kind = Kind::Constant;
  double c = 0;                // Constant / Power amplitude
  double b = 0;                // Power exponent: c / |x|^b
  std::vector<double> edges;   // Steps: f = values[k] on (edges[k], edges[k+1]); Tabulated: nodes
  std::vector<double> values;  // Steps: one per interval; Tabulated: one per node

  static SourceSpec constant(double c);
  static SourceSpec power(double c, double b);
  static SourceSpec steps(std::vector<double> edges, std::vector<double> values);
  static SourceSpec tabulated(std::vector<double> r, std::vector<double> values);

  void validate() const;
  double operator()(double r) const;
  bool is_zero() const;
  // Exact piecewise-power representation restricted to [lo, hi].
  std::vector<PowerSegment> segments(double lo, double hi) const;
  std::string kind_name() const;
};

// int_a^b (sum coef r^expo) r^m dr over the source's segments, exact.
double source_moment(const SourceSpec& f, double a, double b, double m);

// Adds lambda / r to a source (the p = 1 form of the Hardy term).
std::vector<PowerSegment> with_inverse_r(const SourceSpec& f, double lambda, double lo, double hi);
double segments_moment(const std::vector<PowerSegment>& segs, double a, double b, double m);

}  // namespace hlap
