#pragma once

#include <utility>
#include <vector>

namespace clmsim {

/// Piecewise-linear voltage magnitude imposed at a source bus (angle 0).
/// Linear interpolation between knots, constant extrapolation outside.
class PlayInProfile {
public:
    /// Knots are (t seconds, |V| pu); times must be nondecreasing, magnitudes > 0.
    explicit PlayInProfile(std::vector<std::pair<double, double>> knots);

    [[nodiscard]] double magnitude(double t) const;
    [[nodiscard]] const std::vector<std::pair<double, double>>& knots() const { return knots_; }

    /// The ramp-down / hold / ramp-up sag used by the component play-in tests:
    /// 1.0 pu until t_start, down to v_min over 0.1 s, hold 0.1 s, back up over 0.1 s.
    [[nodiscard]] static PlayInProfile sag(double t_start = 1.0, double v_min = 0.5);

private:
    std::vector<std::pair<double, double>> knots_;
};

}  // namespace clmsim
