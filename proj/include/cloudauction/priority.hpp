#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cloudauction {

/// Non-decreasing priority f : [0,1] -> [1, inf) with f(0) = 1, used to boost
/// the value of partially processed jobs.
class PriorityFunction {
 public:
  enum class Kind { exponential, linear, custom };

  /// Number of samples in a tabulated custom function (grid step 1/1024).
  static constexpr std::size_t kTableSize = 1025;

  static PriorityFunction exponential(double chi);
  static PriorityFunction linear(double a);
  /// Closed-form custom function; f(0)=1 and monotonicity are checked on a
  /// 1e-3 grid.
  static PriorityFunction custom(std::string name, std::function<double(double)> f);
  /// Tabulated custom function over kTableSize equally spaced samples,
  /// linearly interpolated.
  static PriorityFunction tabulated(std::string name, std::vector<double> samples);
  /// Custom function that skips the monotonicity check. Only f(0)=1 is
  /// enforced; payments for mechanisms using it fall back to a grid sweep.
  static PriorityFunction custom_unchecked(std::string name, std::function<double(double)> f);

  double operator()(double delta) const;

  Kind kind() const { return kind_; }
  /// chi for exponential, a for linear, NaN for custom.
  double parameter() const { return parameter_; }
  bool monotone() const { return monotone_; }
  /// Round-trippable description ("exp:2", "lin:1.5", or the custom name).
  const std::string& describe() const { return name_; }

 private:
  PriorityFunction(Kind kind, double parameter, std::string name,
                   std::function<double(double)> f, bool monotone);

  Kind kind_;
  double parameter_;
  std::string name_;
  std::function<double(double)> f_;
  bool monotone_;
};

/// ((kappa+1)/kappa)^kappa, the base minimising chi / (1 - chi^(-1/kappa)).
double optimal_chi(int kappa);
/// sqrt(2 kappa / (kappa+1)), the slope minimising the linear-priority bound.
double optimal_a(int kappa);

/// chi / (1 - chi^(-1/kappa)): the single-machine bound without the +1.
double exponential_bound_term(double chi, int kappa);

/// Parses "exp:CHI", "lin:A", "exp-opt", "lin-opt", and the custom closed form
/// "poly:F1:Q" = 1 + (F1 - 1) * delta^Q.
PriorityFunction parse_priority(std::string_view spec, int kappa);

}  // namespace cloudauction
