#pragma once

#include <cstddef>
#include <vector>

#include "clmsim/phasor.hpp"

namespace clmsim {

/// Dense complex matrix in row-major storage. Desk-scale networks only;
/// sparse storage is a documented extension point, not built.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n, Phasor{0.0, 0.0}) {}

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] Phasor& at(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    [[nodiscard]] const Phasor& at(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

    [[nodiscard]] std::vector<Phasor> multiply(const std::vector<Phasor>& x) const;

    [[nodiscard]] bool operator==(const ComplexMatrix& other) const {
        return n_ == other.n_ && data_ == other.data_;
    }

private:
    std::size_t n_ = 0;
    std::vector<Phasor> data_;
};

/// LU factorization with partial pivoting of a dense complex matrix.
/// Throws TopologyError when the matrix is numerically singular.
class LuFactors {
public:
    explicit LuFactors(const ComplexMatrix& a);

    [[nodiscard]] std::vector<Phasor> solve(std::vector<Phasor> b) const;

private:
    std::size_t n_ = 0;
    std::vector<Phasor> lu_;
    std::vector<std::size_t> perm_;
};

}  // namespace clmsim
