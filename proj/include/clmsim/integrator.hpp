#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace clmsim {

/// Derivative callback: writes dx/dt for the given state into `out`.
using DerivFn = std::function<void(std::span<const double> x, std::span<double> out)>;

/// One predictor-corrector (Heun) step:
///   predictor  x~ = x + h f(x)
///   corrector  x+ = x + (h/2) (f(x) + f(x~))
/// Exact for constant derivatives. Throws IntegrationError if a derivative
/// evaluation is non-finite; `who` names the offending component.
[[nodiscard]] std::vector<double> modified_euler_step(std::span<const double> x, const DerivFn& f,
                                                      double h, std::string_view who = "state");

/// Throws IntegrationError(who, index) on the first non-finite entry.
void check_finite(std::span<const double> values, std::string_view who);

}  // namespace clmsim
