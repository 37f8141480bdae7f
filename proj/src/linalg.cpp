#include "clmsim/linalg.hpp"

#include <cmath>
#include <utility>

#include "clmsim/errors.hpp"

namespace clmsim {

std::vector<Phasor> ComplexMatrix::multiply(const std::vector<Phasor>& x) const {
    std::vector<Phasor> y(n_, Phasor{0.0, 0.0});
    for (std::size_t r = 0; r < n_; ++r) {
        Phasor acc{0.0, 0.0};
        const Phasor* row = &data_[r * n_];
        for (std::size_t c = 0; c < n_; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

LuFactors::LuFactors(const ComplexMatrix& a) : n_(a.size()), lu_(n_ * n_), perm_(n_) {
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) lu_[r * n_ + c] = a.at(r, c);
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;

    for (std::size_t k = 0; k < n_; ++k) {
        std::size_t pivot = k;
        double best = std::abs(lu_[perm_[k] * n_ + k]);
        for (std::size_t r = k + 1; r < n_; ++r) {
            const double mag = std::abs(lu_[perm_[r] * n_ + k]);
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (best < 1e-14) throw TopologyError("singular network matrix");
        std::swap(perm_[k], perm_[pivot]);

        const Phasor pk = lu_[perm_[k] * n_ + k];
        for (std::size_t r = k + 1; r < n_; ++r) {
            Phasor* row = &lu_[perm_[r] * n_];
            const Phasor m = row[k] / pk;
            row[k] = m;
            const Phasor* prow = &lu_[perm_[k] * n_];
            for (std::size_t c = k + 1; c < n_; ++c) row[c] -= m * prow[c];
        }
    }
}

std::vector<Phasor> LuFactors::solve(std::vector<Phasor> b) const {
    std::vector<Phasor> y(n_);
    for (std::size_t r = 0; r < n_; ++r) {
        Phasor acc = b[perm_[r]];
        const Phasor* row = &lu_[perm_[r] * n_];
        for (std::size_t c = 0; c < r; ++c) acc -= row[c] * y[c];
        y[r] = acc;
    }
    for (std::size_t ri = n_; ri-- > 0;) {
        Phasor acc = y[ri];
        const Phasor* row = &lu_[perm_[ri] * n_];
        for (std::size_t c = ri + 1; c < n_; ++c) acc -= row[c] * y[c];
        y[ri] = acc / row[ri];
    }
    return y;
}

}  // namespace clmsim
