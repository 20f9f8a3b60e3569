#include "cloudauction/priority.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

#include "cloudauction/model.hpp"

namespace cloudauction {

namespace {

void check_shape(const std::string& name, const std::function<double(double)>& f,
                 bool check_monotone) {
  if (!approx_equal(f(0.0), 1.0))
    throw std::invalid_argument(fmt::format("priority '{}': f(0) must be 1", name));
  double prev = f(0.0);
  for (int k = 1; k <= 1000; ++k) {
    const double x = k / 1000.0;
    const double y = f(x);
    if (!std::isfinite(y) || y < 1.0 - kEps)
      throw std::invalid_argument(fmt::format("priority '{}': f({}) < 1", name, x));
    if (check_monotone && y < prev - kEps)
      throw std::invalid_argument(fmt::format("priority '{}': decreasing at {}", name, x));
    prev = y;
  }
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument(fmt::format("bad number '{}' in {}", s, what));
  return v;
}

}  // namespace

PriorityFunction::PriorityFunction(Kind kind, double parameter, std::string name,
                                   std::function<double(double)> f, bool monotone)
    : kind_(kind), parameter_(parameter), name_(std::move(name)), f_(std::move(f)),
      monotone_(monotone) {}

PriorityFunction PriorityFunction::exponential(double chi) {
  if (!(chi > 1.0) || !std::isfinite(chi))
    throw std::invalid_argument("exponential priority requires chi > 1");
  return PriorityFunction(Kind::exponential, chi, fmt::format("exp:{}", chi),
                          [chi](double d) { return std::pow(chi, d); }, true);
}

PriorityFunction PriorityFunction::linear(double a) {
  if (!(a >= 0.0) || !std::isfinite(a))
    throw std::invalid_argument("linear priority requires a >= 0");
  return PriorityFunction(Kind::linear, a, fmt::format("lin:{}", a),
                          [a](double d) { return 1.0 + a * d; }, true);
}

PriorityFunction PriorityFunction::custom(std::string name, std::function<double(double)> f) {
  check_shape(name, f, true);
  return PriorityFunction(Kind::custom, std::nan(""), std::move(name), std::move(f), true);
}

PriorityFunction PriorityFunction::custom_unchecked(std::string name,
                                                    std::function<double(double)> f) {
  check_shape(name, f, false);
  return PriorityFunction(Kind::custom, std::nan(""), std::move(name), std::move(f), false);
}

PriorityFunction PriorityFunction::tabulated(std::string name, std::vector<double> samples) {
  if (samples.size() != kTableSize)
    throw std::invalid_argument(
        fmt::format("tabulated priority needs {} samples, got {}", kTableSize, samples.size()));
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i] < samples[i - 1] - kEps)
      throw std::invalid_argument(fmt::format("tabulated priority '{}' decreases at {}", name, i));
  auto f = [table = std::move(samples)](double d) {
    const double pos = d * static_cast<double>(kTableSize - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo >= kTableSize - 1) return table.back();
    const double frac = pos - static_cast<double>(lo);
    return table[lo] + frac * (table[lo + 1] - table[lo]);
  };
  check_shape(name, f, true);
  return PriorityFunction(Kind::custom, std::nan(""), std::move(name), std::move(f), true);
}

double PriorityFunction::operator()(double delta) const {
  if (!(delta >= -kEps && delta <= 1.0 + kEps))
    throw std::domain_error(fmt::format("priority evaluated at delta={} outside [0,1]", delta));
  return f_(std::clamp(delta, 0.0, 1.0));
}

double optimal_chi(int kappa) {
  if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
  const double k = kappa;
  return std::pow((k + 1.0) / k, k);
}

double optimal_a(int kappa) {
  if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
  const double k = kappa;
  return std::sqrt(2.0 * k / (k + 1.0));
}

double exponential_bound_term(double chi, int kappa) {
  return chi / (1.0 - std::pow(chi, -1.0 / kappa));
}

PriorityFunction parse_priority(std::string_view spec, int kappa) {
  if (spec == "exp-opt") return PriorityFunction::exponential(optimal_chi(kappa));
  if (spec == "lin-opt") return PriorityFunction::linear(optimal_a(kappa));
  if (spec.starts_with("exp:"))
    return PriorityFunction::exponential(parse_double(spec.substr(4), spec));
  if (spec.starts_with("lin:")) return PriorityFunction::linear(parse_double(spec.substr(4), spec));
  if (spec.starts_with("poly:")) {
    const auto rest = spec.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos)
      throw std::invalid_argument(fmt::format("expected poly:F1:Q, got '{}'", spec));
    const double top = parse_double(rest.substr(0, colon), spec);
    const double power = parse_double(rest.substr(colon + 1), spec);
    if (!(top >= 1.0) || !(power > 0.0))
      throw std::invalid_argument(fmt::format("poly priority needs F1 >= 1 and Q > 0: '{}'", spec));
    return PriorityFunction::custom(
        fmt::format("poly:{}:{}", top, power),
        [top, power](double d) { return 1.0 + (top - 1.0) * std::pow(d, power); });
  }
  throw std::invalid_argument(fmt::format(
      "unknown priority '{}' (expected exp:CHI, lin:A, exp-opt, lin-opt, poly:F1:Q)", spec));
}

}  // namespace cloudauction
