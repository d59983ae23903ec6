#pragma once

#include <cstddef>
#include <vector>

namespace qmetric {

// dense square matrix, row-major
template <class T>
class square_matrix {
public:
    square_matrix() = default;
    explicit square_matrix(int n, const T& fill = T())
        : n_(n), cells_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {}

    int size() const { return n_; }

    T& operator()(int i, int j) { return cells_[idx(i, j)]; }
    const T& operator()(int i, int j) const { return cells_[idx(i, j)]; }

    T* data() { return cells_.data(); }
    const T* data() const { return cells_.data(); }

    friend bool operator==(const square_matrix&, const square_matrix&) = default;

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }

    int n_ = 0;
    std::vector<T> cells_;
};

} // namespace qmetric
