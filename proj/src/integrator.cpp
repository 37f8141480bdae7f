#include "clmsim/integrator.hpp"

#include <cmath>
#include <stdexcept>

#include "clmsim/errors.hpp"

namespace clmsim {

void check_finite(std::span<const double> values, std::string_view who) {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i])) throw IntegrationError(std::string(who), static_cast<int>(i));
}

std::vector<double> modified_euler_step(std::span<const double> x, const DerivFn& f, double h,
                                        std::string_view who) {
    if (!(h > 0.0)) throw std::invalid_argument("step size must be > 0");
    const std::size_t n = x.size();
    std::vector<double> f0(n), predicted(n), f1(n), out(n);

    f(x, f0);
    check_finite(f0, who);
    for (std::size_t i = 0; i < n; ++i) predicted[i] = x[i] + h * f0[i];

    f(predicted, f1);
    check_finite(f1, who);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + 0.5 * h * (f0[i] + f1[i]);
    return out;
}

}  // namespace clmsim
