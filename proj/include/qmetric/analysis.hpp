#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "qmetric/space.hpp"

namespace qmetric {

namespace detail {

// exact rescaling of a rational matrix onto int64; declines when the common
// denominator is huge or when path sums could leave the safe 64-bit range
struct scaled_matrix {
    int n = 0;
    bigint scale = 1;
    std::vector<std::int64_t> cells;
};

inline std::optional<scaled_matrix> try_scale(const square_matrix<rational>& m) {
    using boost::multiprecision::lcm;
    const int n = m.size();
    const bigint den_cap = bigint(1) << 44;
    bigint l = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            l = lcm(l, denominator(m(i, j)));
            if (l > den_cap) return std::nullopt;
        }
    scaled_matrix out;
    out.n = n;
    out.scale = l;
    out.cells.resize(static_cast<std::size_t>(n) * n);
    const bigint sum_cap = bigint(1) << 62;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bigint e = numerator(m(i, j)) * (l / denominator(m(i, j)));
            if (e * (n + 1) >= sum_cap) return std::nullopt;
            out.cells[static_cast<std::size_t>(i) * n + j] = e.convert_to<std::int64_t>();
        }
    return out;
}

// a/b > c/d for positive denominators, with each type's native exactness
inline bool ratio_gt(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return static_cast<__int128>(a) * d > static_cast<__int128>(c) * b;
}
inline bool ratio_gt(double a, double b, double c, double d) { return a * d > c * b; }
inline bool ratio_gt(const rational& a, const rational& b, const rational& c, const rational& d) {
    return a * d > c * b;
}

template <class V>
struct ratio_scan_result {
    V num{};
    V den{};
    std::array<int, 3> triple{};
};

// max over ordered triples (x, y, z) of distinct indices of
// cell(x, z) / den_of(cell(x, y), cell(y, z)); strict improvement keeps the
// lexicographically first maximizer
template <class Cell, class DenOp>
auto scan_triples(int n, Cell cell, DenOp den_of) {
    using V = std::decay_t<decltype(cell(0, 0))>;
    ratio_scan_result<V> best;
    bool found = false;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (y == x) continue;
            for (int z = 0; z < n; ++z) {
                if (z == x || z == y) continue;
                V num = cell(x, z);
                V den = den_of(cell(x, y), cell(y, z));
                if (!found || ratio_gt(num, den, best.num, best.den)) {
                    best.num = std::move(num);
                    best.den = std::move(den);
                    best.triple = {x, y, z};
                    found = true;
                }
            }
        }
    return best;
}

} // namespace detail

template <class S>
struct extreme_triple {
    S value{};
    std::optional<std::array<int, 3>> witness;  // lexicographically first maximizer
};

// least K with rho(x, z) <= K * max(rho(x, y), rho(y, z)) over all triples of
// distinct points; K = 1 by convention when there are no triples
template <class S>
extreme_triple<S> quasi_constant(const quasi_metric_space<S>& q) {
    const int n = q.size();
    if (n < 3) return {S(1), std::nullopt};
    auto max_of = [](const auto& a, const auto& b) { return a < b ? b : a; };
    if constexpr (std::is_same_v<S, rational>) {
        if (auto sc = detail::try_scale(q.distances())) {
            auto cell = [&](int i, int j) { return sc->cells[static_cast<std::size_t>(i) * n + j]; };
            auto r = detail::scan_triples(n, cell, max_of);
            return {rational(bigint(r.num), bigint(r.den)), r.triple};
        }
    }
    auto cell = [&](int i, int j) { return q.rho(i, j); };
    auto r = detail::scan_triples(n, cell, max_of);
    return {S(r.num / r.den), r.triple};
}

// least C with rho(x, z) <= C * (rho(x, y) + rho(y, z)); C = 1/2 by
// convention when there are no triples
template <class S>
extreme_triple<S> mult_triangle_constant(const quasi_metric_space<S>& q) {
    const int n = q.size();
    if (n < 3) return {S(1) / S(2), std::nullopt};
    auto sum_of = [](const auto& a, const auto& b) { return a + b; };
    if constexpr (std::is_same_v<S, rational>) {
        if (auto sc = detail::try_scale(q.distances())) {
            auto cell = [&](int i, int j) { return sc->cells[static_cast<std::size_t>(i) * n + j]; };
            auto r = detail::scan_triples(n, cell, sum_of);
            return {rational(bigint(r.num), bigint(r.den)), r.triple};
        }
    }
    auto cell = [&](int i, int j) { return q.rho(i, j); };
    auto r = detail::scan_triples(n, cell, sum_of);
    return {S(r.num / r.den), r.triple};
}

template <class S>
struct space_analysis {
    S quasi_constant{};     // least K in axiom (3)
    S triangle_constant{};  // least C in the additive comparison
    bool is_metric = false;       // triangle_constant <= 1
    bool is_ultrametric = false;  // quasi_constant <= 1
    std::optional<std::array<int, 3>> worst_triple_quasi;
    std::optional<std::array<int, 3>> worst_triple_triangle;
};

template <class S>
space_analysis<S> classify(const quasi_metric_space<S>& q, numeric_policy<S> pol = {}) {
    auto k = quasi_constant(q);
    auto c = mult_triangle_constant(q);
    space_analysis<S> out;
    out.quasi_constant = k.value;
    out.triangle_constant = c.value;
    out.is_metric = pol.leq(c.value, S(1));
    out.is_ultrametric = pol.leq(k.value, S(1));
    out.worst_triple_quasi = k.witness;
    out.worst_triple_triangle = c.witness;
    return out;
}

namespace detail {

inline constexpr unsigned snowflake_exponent_cap = 1u << 20;

inline unsigned integer_exponent(const rational& p) {
    if (denominator(p) != 1)
        throw error(errc::non_integer_exponent, "exact mode needs an integer exponent, got " + to_string(p));
    if (p <= 0)
        throw error(errc::bad_exponent, "exponent must be positive, got " + to_string(p));
    if (numerator(p) > snowflake_exponent_cap)
        throw error(errc::bad_exponent, "integer exponent larger than supported");
    return numerator(p).convert_to<unsigned>();
}

} // namespace detail

// entrywise power rho^p; exact mode demands a positive integer p, float mode
// any positive real
template <class S>
quasi_metric_space<S> snowflake(const quasi_metric_space<S>& q, const S& p, numeric_policy<S> pol = {}) {
    const int n = q.size();
    square_matrix<S> m(n);
    if constexpr (std::is_same_v<S, rational>) {
        const unsigned e = detail::integer_exponent(p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = pow_int(q.rho(i, j), e);
    } else {
        if (!(p > 0))
            throw error(errc::bad_exponent, "exponent must be positive, got " + to_string(p));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = i == j ? 0.0 : std::pow(q.rho(i, j), p);
    }
    return validate_space<S>(std::move(m), q.labels(), pol);
}

} // namespace qmetric
