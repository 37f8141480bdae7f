#include "clmsim/playin.hpp"

#include "clmsim/errors.hpp"

namespace clmsim {

PlayInProfile::PlayInProfile(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
    if (knots_.empty()) throw SimError("play-in profile must have at least one knot");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!(knots_[i].second > 0.0)) throw SimError("play-in magnitudes must be > 0");
        if (i > 0 && knots_[i].first < knots_[i - 1].first)
            throw SimError("play-in knot times must be nondecreasing");
    }
}

double PlayInProfile::magnitude(double t) const {
    if (t <= knots_.front().first) return knots_.front().second;
    if (t >= knots_.back().first) return knots_.back().second;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const auto [t0, v0] = knots_[i - 1];
        const auto [t1, v1] = knots_[i];
        if (t <= t1) {
            if (t1 == t0) return v1;
            const double w = (t - t0) / (t1 - t0);
            return v0 + w * (v1 - v0);
        }
    }
    return knots_.back().second;
}

PlayInProfile PlayInProfile::sag(double t_start, double v_min) {
    return PlayInProfile({{0.0, 1.0},
                          {t_start, 1.0},
                          {t_start + 0.1, v_min},
                          {t_start + 0.2, v_min},
                          {t_start + 0.3, 1.0}});
}

}  // namespace clmsim
