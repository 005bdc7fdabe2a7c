#include "hlap/source.hpp"
#include "hlap/quadrature.hpp"
#include "hlap/types.hpp"

#include <algorithm>
#include <cmath>

namespace hlap {

SourceSpec SourceSpec::constant(double c) {
  SourceSpec s;
  s.kind = Kind::Constant;
  s.c = c;
  s.validate();
  return s;
}

SourceSpec SourceSpec::power(double c, double b) {
  SourceSpec s;
  s.kind = Kind::Power;
  s.c = c;
  s.b = b;
  s.validate();
  return s;
}

SourceSpec SourceSpec::steps(std::vector<double> edges, std::vector<double> values) {
  SourceSpec s;
  s.kind = Kind::Steps;
  s.edges = std::move(edges);
  s.values = std::move(values);
  s.validate();
  return s;
}

SourceSpec SourceSpec::tabulated(std::vector<double> r, std::vector<double> values) {
  SourceSpec s;
  s.kind = Kind::Tabulated;
  s.edges = std::move(r);
  s.values = std::move(values);
  s.validate();
  return s;
}

void SourceSpec::validate() const {
  switch (kind) {
    case Kind::Constant:
      if (!(c >= 0)) throw DomainError("source: constant must be nonnegative");
      break;
    case Kind::Power:
      if (!(c >= 0)) throw DomainError("source: amplitude must be nonnegative");
      if (!(b >= 0 && b <= 1)) throw DomainError("source: power exponent must lie in [0, 1]");
      break;
    case Kind::Steps:
      if (edges.size() < 2 || values.size() + 1 != edges.size())
        throw DomainError("source: steps need k+1 edges for k values");
      for (std::size_t k = 0; k + 1 < edges.size(); ++k)
        if (!(edges[k] < edges[k + 1])) throw DomainError("source: step edges must increase");
      if (edges.front() < 0) throw DomainError("source: step edges must be nonnegative");
      for (double v : values)
        if (!(v >= 0)) throw DomainError("source: step values must be nonnegative");
      break;
    case Kind::Tabulated:
      if (edges.size() < 2 || values.size() != edges.size())
        throw DomainError("source: tabulated data need matching r and value arrays");
      for (std::size_t k = 0; k + 1 < edges.size(); ++k)
        if (!(edges[k] < edges[k + 1])) throw DomainError("source: tabulated radii must increase");
      if (edges.front() < 0) throw DomainError("source: tabulated radii must be nonnegative");
      for (double v : values)
        if (!(v >= 0)) throw DomainError("source: tabulated values must be nonnegative");
      break;
  }
}

double SourceSpec::operator()(double r) const {
  switch (kind) {
    case Kind::Constant:
      return c;
    case Kind::Power:
      return b == 0 ? c : c * std::pow(r, -b);
    case Kind::Steps:
      for (std::size_t k = 0; k < values.size(); ++k)
        if (r > edges[k] && r <= edges[k + 1]) return values[k];
      return 0;
    case Kind::Tabulated: {
      if (r <= edges.front()) return values.front();
      if (r >= edges.back()) return values.back();
      const auto it = std::upper_bound(edges.begin(), edges.end(), r);
      const std::size_t k = std::size_t(it - edges.begin()) - 1;
      const double s = (r - edges[k]) / (edges[k + 1] - edges[k]);
      return (1 - s) * values[k] + s * values[k + 1];
    }
  }
  return 0;
}

bool SourceSpec::is_zero() const {
  switch (kind) {
    case Kind::Constant:
    case Kind::Power:
      return c == 0;
    default:
      return std::all_of(values.begin(), values.end(), [](double v) { return v == 0; });
  }
}

std::string SourceSpec::kind_name() const {
  switch (kind) {
    case Kind::Constant: return "constant";
    case Kind::Power: return "power";
    case Kind::Steps: return "steps";
    case Kind::Tabulated: return "tabulated";
  }
  return "";
}

std::vector<PowerSegment> SourceSpec::segments(double lo, double hi) const {
  std::vector<PowerSegment> out;
  if (!(hi > lo)) return out;
  auto push = [&](double a, double b, std::vector<double> cf, std::vector<double> ex) {
    a = std::max(a, lo);
    b = std::min(b, hi);
    if (b > a) out.push_back({a, b, std::move(cf), std::move(ex)});
  };
  switch (kind) {
    case Kind::Constant:
      push(lo, hi, {c}, {0});
      break;
    case Kind::Power:
      push(lo, hi, {c}, {-b});
      break;
    case Kind::Steps: {
      push(lo, edges.front(), {}, {});
      for (std::size_t k = 0; k < values.size(); ++k) push(edges[k], edges[k + 1], {values[k]}, {0});
      push(edges.back(), hi, {}, {});
      break;
    }
    case Kind::Tabulated: {
      push(lo, edges.front(), {values.front()}, {0});
      for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double slope = (values[k + 1] - values[k]) / (edges[k + 1] - edges[k]);
        push(edges[k], edges[k + 1], {values[k] - slope * edges[k], slope}, {0, 1});
      }
      push(edges.back(), hi, {values.back()}, {0});
      break;
    }
  }
  return out;
}

double segments_moment(const std::vector<PowerSegment>& segs, double a, double b, double m) {
  double s = 0;
  for (const auto& seg : segs) {
    const double lo = std::max(a, seg.a), hi = std::min(b, seg.b);
    if (!(hi > lo)) continue;
    for (std::size_t k = 0; k < seg.coef.size(); ++k)
      if (seg.coef[k] != 0) s += seg.coef[k] * power_integral(lo, hi, seg.expo[k] + m);
  }
  return s;
}

double source_moment(const SourceSpec& f, double a, double b, double m) {
  return segments_moment(f.segments(a, b), a, b, m);
}

std::vector<PowerSegment> with_inverse_r(const SourceSpec& f, double lambda, double lo, double hi) {
  auto segs = f.segments(lo, hi);
  if (lambda != 0)
    for (auto& s : segs) {
      s.coef.push_back(lambda);
      s.expo.push_back(-1);
    }
  return segs;
}

}  // namespace hlap
