#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qmetric/error.hpp"
#include "qmetric/matrix.hpp"
#include "qmetric/scalar.hpp"

namespace qmetric {

template <class S>
class quasi_metric_space;

template <class S>
quasi_metric_space<S> validate_space(square_matrix<S> rho, std::vector<std::string> labels = {},
                                     numeric_policy<S> pol = {});

// finite space with a symmetric, zero-diagonal, positive-off-diagonal
// distance matrix; construction goes through validate_space only
template <class S>
class quasi_metric_space {
public:
    int size() const { return rho_.size(); }
    const S& rho(int i, int j) const { return rho_(i, j); }
    const square_matrix<S>& distances() const { return rho_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }

private:
    quasi_metric_space(square_matrix<S> rho, std::vector<std::string> labels)
        : rho_(std::move(rho)), labels_(std::move(labels)) {}

    friend quasi_metric_space validate_space<S>(square_matrix<S>, std::vector<std::string>, numeric_policy<S>);

    square_matrix<S> rho_;
    std::vector<std::string> labels_;
};

namespace detail {

inline std::string cell_ref(int i, int j) {
    return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

} // namespace detail

// checks axioms (1) and (2) on the matrix and wraps it; the first offense in
// row-major order wins, with sub-checks per cell ordered diagonal, negative,
// zero, asymmetric
template <class S>
quasi_metric_space<S> validate_space(square_matrix<S> rho, std::vector<std::string> labels,
                                     numeric_policy<S> pol) {
    const int n = rho.size();
    if (n < 1)
        throw error(errc::bad_parameter, "a space needs at least one point");

    if (labels.empty()) {
        labels.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    } else if (static_cast<int>(labels.size()) != n) {
        throw error(errc::bad_parameter, "label count does not match the matrix size");
    }

    const S zero = S(0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const S& x = rho(i, j);
            if constexpr (!numeric_policy<S>::exact) {
                if (!std::isfinite(x))
                    throw error(errc::bad_parameter, "entry at " + detail::cell_ref(i, j) + " is not finite", i, j);
            }
            if (i == j) {
                if (!pol.eq(x, zero))
                    throw error(errc::nonzero_diagonal,
                                "axiom (1): diagonal entry at " + detail::cell_ref(i, j) + " must be 0", i, j);
                continue;
            }
            if (x < zero && !pol.eq(x, zero))
                throw error(errc::negative_entry,
                            "axiom (1): negative distance at " + detail::cell_ref(i, j), i, j);
            if (pol.eq(x, zero))
                throw error(errc::zero_off_diagonal,
                            "axiom (1): zero distance between distinct points " + detail::cell_ref(i, j), i, j);
            if (!pol.eq(x, rho(j, i)))
                throw error(errc::asymmetric_entry,
                            "axiom (2): entries at " + detail::cell_ref(i, j) + " and " + detail::cell_ref(j, i) +
                                " differ", i, j);
        }
    }
    return quasi_metric_space<S>(std::move(rho), std::move(labels));
}

template <class S>
quasi_metric_space<S> validate_space(const std::vector<std::vector<S>>& grid,
                                     std::vector<std::string> labels = {}, numeric_policy<S> pol = {}) {
    const int n = static_cast<int>(grid.size());
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(grid[static_cast<std::size_t>(i)].size()) != n)
            throw error(errc::non_square,
                        "matrix is not square: row " + std::to_string(i) + " has " +
                            std::to_string(grid[static_cast<std::size_t>(i)].size()) + " entries, expected " +
                            std::to_string(n), i);
    }
    square_matrix<S> m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return validate_space<S>(std::move(m), std::move(labels), pol);
}

} // namespace qmetric
