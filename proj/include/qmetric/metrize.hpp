#pragma once

#include <cstdint>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "qmetric/analysis.hpp"
#include "qmetric/space.hpp"

namespace qmetric {

// a chain is a sequence of point indices; consecutive repeats are legal in
// principle but never produced by the closure
using chain = std::vector<int>;

namespace detail {

// textbook all-pairs relaxation with strict improvement only, intermediate
// indices tried in ascending order; both together pin the witness chains
template <class V>
void shortest_path_closure(std::vector<V>& d, std::vector<std::int32_t>& mid, int n) {
    for (int k = 0; k < n; ++k) {
        const V* dk = d.data() + static_cast<std::size_t>(k) * n;
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            V* di = d.data() + static_cast<std::size_t>(i) * n;
            const V dik = di[k];
            std::int32_t* mi = mid.data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) {
                if (j == k || j == i) continue;
                V via = dik + dk[j];
                if (via < di[j]) {
                    di[j] = std::move(via);
                    mi[j] = k;
                }
            }
        }
    }
}

} // namespace detail

// shortest-chain closure of a space: the distances, plus enough structure to
// reconstruct one minimizing chain per pair
template <class S>
class chain_metric_result {
public:
    chain_metric_result(square_matrix<S> d, square_matrix<std::int32_t> mid,
                        std::vector<std::pair<int, int>> zero_pairs)
        : d_(std::move(d)), mid_(std::move(mid)), zero_pairs_(std::move(zero_pairs)) {}

    int size() const { return d_.size(); }
    const square_matrix<S>& distances() const { return d_; }
    const S& d(int i, int j) const { return d_(i, j); }

    // pairs of distinct points at closure distance exactly zero; empty
    // whenever the input passed validation
    const std::vector<std::pair<int, int>>& zero_pairs() const { return zero_pairs_; }

    // one minimizing chain from i to j; ties were resolved during the
    // closure by preferring the lowest intermediate index
    chain witness(int i, int j) const {
        const int n = d_.size();
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw error(errc::bad_index, "witness indices out of range");
        chain c;
        c.push_back(i);
        if (i == j) {
            c.push_back(j);
            return c;
        }
        append_tail(i, j, c);
        return c;
    }

private:
    // appends the chain from i (exclusive) to j (inclusive)
    void append_tail(int i, int j, chain& c) const {
        const std::int32_t k = mid_(i, j);
        if (k >= 0) {
            append_tail(i, k, c);
            append_tail(k, j, c);
        } else {
            c.push_back(j);
        }
    }

    square_matrix<S> d_;
    square_matrix<std::int32_t> mid_;
    std::vector<std::pair<int, int>> zero_pairs_;
};

// infimum over finite chains of the summed edge lengths; on a finite space
// this is the all-pairs shortest-path closure of the distance matrix
template <class S>
chain_metric_result<S> chain_metrize(const quasi_metric_space<S>& q) {
    const int n = q.size();
    const std::size_t cells = static_cast<std::size_t>(n) * n;
    std::vector<std::int32_t> mid(cells, -1);
    square_matrix<S> d(n);

    bool done = false;
    if constexpr (std::is_same_v<S, rational>) {
        // int64 fast path; update decisions are identical to the generic
        // route, so distances and witnesses match exactly
        if (auto sc = detail::try_scale(q.distances())) {
            detail::shortest_path_closure(sc->cells, mid, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    d(i, j) = rational(bigint(sc->cells[static_cast<std::size_t>(i) * n + j]), sc->scale);
            done = true;
        }
    }
    if (!done) {
        std::vector<S> work(q.distances().data(), q.distances().data() + cells);
        detail::shortest_path_closure(work, mid, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d(i, j) = work[static_cast<std::size_t>(i) * n + j];
    }

    std::vector<std::pair<int, int>> zeros;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (d(i, j) == S(0)) zeros.emplace_back(i, j);

    square_matrix<std::int32_t> midm(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            midm(i, j) = mid[static_cast<std::size_t>(i) * n + j];
    return chain_metric_result<S>(std::move(d), std::move(midm), std::move(zeros));
}

// brute-force reference: enumerates every chain with up to max_interior
// distinct interior points per pair; guarded by an explicit work estimate so
// a typo cannot start a year-long loop
template <class S>
square_matrix<S> chain_oracle(const quasi_metric_space<S>& q, int max_interior,
                              std::uint64_t budget = 20'000'000) {
    const int n = q.size();
    if (max_interior < 0)
        throw error(errc::bad_parameter, "max_interior must be nonnegative");
    if (!(n <= 10 || max_interior <= 8))
        throw error(errc::enumeration_budget,
                    "oracle needs n <= 10 or max_interior <= 8; use chain_metrize instead");
    const int mi = std::min(max_interior, std::max(0, n - 2));

    // chains per pair: sum over s of (n-2)(n-3)...(n-1-s)
    long double work = 1.0L, ff = 1.0L;
    for (int s = 1; s <= mi; ++s) {
        ff *= static_cast<long double>(n - 1 - s);
        work += ff;
    }
    work *= static_cast<long double>(n) * (n - 1) / 2;
    if (work > static_cast<long double>(budget))
        throw error(errc::enumeration_budget, "oracle enumeration would exceed the work budget");

    square_matrix<S> d = q.distances();
    std::vector<char> used(static_cast<std::size_t>(n), 0);

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            S& best = d(i, j);
            used.assign(used.size(), 0);
            used[static_cast<std::size_t>(i)] = 1;
            // extensions only ever add positive edges, so a partial sum at or
            // above the best finished chain can be cut
            auto dfs = [&](auto&& self, int cur, int left, const S& partial) -> void {
                S total = partial + q.rho(cur, j);
                if (total < best) best = std::move(total);
                if (left == 0) return;
                for (int v = 0; v < n; ++v) {
                    if (used[static_cast<std::size_t>(v)] || v == j) continue;
                    S next = partial + q.rho(cur, v);
                    if (!(next < best)) continue;
                    used[static_cast<std::size_t>(v)] = 1;
                    self(self, v, left - 1, next);
                    used[static_cast<std::size_t>(v)] = 0;
                }
            };
            dfs(dfs, i, mi, S(0));
            d(j, i) = d(i, j);
        }
    }
    return d;
}

template <class S>
struct frink_report {
    S quasi_constant{};
    bool applicable = false;  // quasi constant at most 2
    bool lower_ok = false;    // rho / (2K) <= d entrywise
    bool upper_ok = false;    // d <= rho entrywise
    S min_ratio{};            // min over distinct pairs of d / rho
    std::pair<int, int> argmin_pair{0, 0};
};

// checks the two-sided comparison between a space and its chain metrization:
// when K <= 2 the closure is squeezed between rho/(2K) and rho
template <class S>
frink_report<S> frink_check(const quasi_metric_space<S>& q, const chain_metric_result<S>& closure,
                            numeric_policy<S> pol = {}) {
    const int n = q.size();
    auto k = quasi_constant(q);

    frink_report<S> rep;
    rep.quasi_constant = k.value;
    rep.applicable = pol.leq(k.value, S(2));

    rep.min_ratio = S(1);
    rep.argmin_pair = {0, 0};
    bool have = false;
    rep.upper_ok = true;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (!pol.leq(closure.d(i, j), q.rho(i, j))) rep.upper_ok = false;
            S ratio = closure.d(i, j) / q.rho(i, j);
            if (!have || ratio < rep.min_ratio) {
                rep.min_ratio = std::move(ratio);
                rep.argmin_pair = {i, j};
                have = true;
            }
        }
    rep.lower_ok = pol.geq(rep.min_ratio, S(1) / (S(2) * k.value));
    return rep;
}

template <class S>
frink_report<S> frink_check(const quasi_metric_space<S>& q, numeric_policy<S> pol = {}) {
    return frink_check(q, chain_metrize(q), pol);
}

template <class S>
struct chain_bound_result {
    S bound{};
    bool holds = false;
};

// the K(first + 2 * middle + last) edge bound for a chain with at least one
// interior point; holds compares rho(endpoints) against it
template <class S>
chain_bound_result<S> chain_bound(const quasi_metric_space<S>& q, const chain& sigma,
                                  std::optional<std::type_identity_t<S>> k_override = {},
                                  numeric_policy<S> pol = {}) {
    const int n = q.size();
    if (sigma.size() < 3)
        throw error(errc::chain_too_short, "bound needs a chain with at least one interior point");
    for (int idx : sigma)
        if (idx < 0 || idx >= n)
            throw error(errc::bad_index, "chain index " + std::to_string(idx) + " out of range");

    const S k = k_override ? *k_override : quasi_constant(q).value;
    const int last = static_cast<int>(sigma.size()) - 1;
    S sum = S(0);
    for (int t = 0; t < last; ++t) {
        const S& edge = q.rho(sigma[static_cast<std::size_t>(t)], sigma[static_cast<std::size_t>(t) + 1]);
        sum += (t == 0 || t == last - 1) ? edge : S(2) * edge;
    }
    chain_bound_result<S> out;
    out.bound = k * sum;
    out.holds = pol.leq(q.rho(sigma.front(), sigma.back()), out.bound);
    return out;
}

} // namespace qmetric
