#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qmetric/error.hpp"
#include "qmetric/scalar.hpp"
#include "qmetric/space.hpp"

namespace qmetric::dyadic {

// dyadic rational k / 2^n in [0, 1], stored in lowest terms: level 0 holds
// the endpoints 0 and 1, level n >= 1 holds odd k with 0 < k < 2^n
class point {
public:
    static constexpr unsigned max_level = 30;

    point() = default;  // the point 0

    static point zero() { return point(0, 0); }
    static point one() { return point(1, 0); }

    // reduces num / 2^level to lowest terms and validates the range
    static point make(std::uint64_t num, unsigned level) {
        if (level > max_level)
            throw error(errc::bad_parameter, "dyadic level exceeds the supported range");
        while (level > 0 && num % 2 == 0) {
            num /= 2;
            --level;
        }
        if (num > (std::uint64_t(1) << level))
            throw error(errc::bad_parameter, "dyadic value lies outside [0, 1]");
        return point(num, level);
    }

    std::uint64_t num() const { return num_; }
    unsigned level() const { return level_; }
    bool is_endpoint() const { return level_ == 0; }

    rational value() const { return rational(bigint(num_), bigint(1) << level_); }
    std::string str() const { return to_string(value()); }

    friend bool operator==(point, point) = default;
    // value order; numerators stay below 2^30 so the cross products fit
    friend std::strong_ordering operator<=>(point a, point b) {
        return (a.num_ << b.level_) <=> (b.num_ << a.level_);
    }

private:
    point(std::uint64_t num, unsigned level) : num_(num), level_(level) {}

    std::uint64_t num_ = 0;
    unsigned level_ = 0;
};

// both neighbors of an interior point sit strictly below its level
inline point left_neighbor(point z) {
    if (z.is_endpoint())
        throw error(errc::endpoint_has_no_neighbors, "0 and 1 have no neighbors");
    return point::make(z.num() - 1, z.level());
}

inline point right_neighbor(point z) {
    if (z.is_endpoint())
        throw error(errc::endpoint_has_no_neighbors, "0 and 1 have no neighbors");
    return point::make(z.num() + 1, z.level());
}

inline std::pair<point, point> neighbors(point z) { return {left_neighbor(z), right_neighbor(z)}; }

enum class side { left, right };

// iterated neighbor sequence from z down to an endpoint; levels strictly
// decrease along the way, so it always terminates
inline std::vector<point> path(point z, side dir) {
    std::vector<point> seq{z};
    while (!seq.back().is_endpoint())
        seq.push_back(dir == side::left ? left_neighbor(seq.back()) : right_neighbor(seq.back()));
    return seq;
}

inline std::vector<point> left_path(point z) { return path(z, side::left); }
inline std::vector<point> right_path(point z) { return path(z, side::right); }

inline point mirror(point z) { return point::make((std::uint64_t(1) << z.level()) - z.num(), z.level()); }

// the unique common point of right_path(z) and left_path(z'); intersection
// counts other than one indicate a construction bug and are rejected loudly
inline point meet(point z, point zp) {
    if (!(z < zp))
        throw error(errc::precond_violation, "meet needs z < z'");
    if (z == point::zero() && zp == point::one())
        throw error(errc::precond_violation, "the pair (0, 1) has no V-path meet");
    const auto rp = right_path(z);
    const auto lp = left_path(zp);
    int hits = 0;
    point found;
    for (const point& u : rp)
        for (const point& v : lp)
            if (u == v) {
                ++hits;
                found = u;
            }
    if (hits == 0)
        throw error(errc::no_intersection, "descent paths of " + z.str() + " and " + zp.str() + " never meet");
    if (hits > 1)
        throw error(errc::multiple_intersections,
                    "descent paths of " + z.str() + " and " + zp.str() + " meet more than once");
    return found;
}

// geometric data of the construction: the base a in (0, 1/2] and the derived
// tent lengths
class params {
public:
    explicit params(rational base) : a_(std::move(base)) {
        if (!(a_ > 0 && 2 * a_ <= 1))
            throw error(errc::bad_parameter, "base a must lie in (0, 1/2], got " + to_string(a_));
    }

    const rational& a() const { return a_; }
    rational power(unsigned lvl) const { return pow_int(a_, lvl); }

    // a + a^2 + ... + a^{n-1} + 2 a^n, the summed edge lengths of the tent
    // over a level-n point
    rational tau(int n) const {
        if (n < 1)
            throw error(errc::nonpositive_index, "tau is defined for levels >= 1");
        rational total = 0, pw = 1;
        for (int i = 1; i < n; ++i) {
            pw *= a_;
            total += pw;
        }
        pw *= a_;
        total += 2 * pw;
        return total;
    }

    rational tau_limit() const { return a_ / (1 - a_); }       // limit of tau as the level grows
    rational triangle_bound() const { return (1 - a_) / a_; }  // least usable additive-comparison constant

private:
    rational a_;
};

// V-path length between distinct points: the pair (0, 1) gets 1 outright,
// every other pair descends both sides to the meet, each traversed edge
// weighing a to the level of its upper endpoint
inline rational distance(point z, point zp, const params& p) {
    if (z == zp)
        throw error(errc::same_point, "distance needs distinct points");
    if (zp < z) std::swap(z, zp);
    if (z == point::zero() && zp == point::one()) return rational(1);
    const point m = meet(z, zp);
    rational total = 0;
    for (const point& u : right_path(z)) {
        if (u == m) break;
        total += p.power(u.level());
    }
    for (const point& u : left_path(zp)) {
        if (u == m) break;
        total += p.power(u.level());
    }
    return total;
}

// all points of level at most depth, ascending by value; these are exactly
// k / 2^depth for k = 0 .. 2^depth, reduced
inline std::vector<point> points_up_to(int depth) {
    if (depth < 0)
        throw error(errc::bad_parameter, "depth must be nonnegative");
    if (depth > 22)
        throw error(errc::depth_budget, "point enumeration capped at depth 22");
    std::vector<point> pts;
    pts.reserve((std::size_t(1) << depth) + 1);
    for (std::uint64_t k = 0; k <= (std::uint64_t(1) << depth); ++k)
        pts.push_back(point::make(k, static_cast<unsigned>(depth)));
    return pts;
}

// the finite space on all points of level at most depth, with the V-path
// distance; paths and their prefix costs are cached per point, the meet is
// located by exhaustive intersection with uniqueness asserted
inline quasi_metric_space<rational> truncate(int depth, const params& p, int depth_budget = 12) {
    if (depth < 0)
        throw error(errc::bad_parameter, "depth must be nonnegative");
    if (depth > depth_budget)
        throw error(errc::depth_budget,
                    "depth " + std::to_string(depth) + " exceeds the budget " + std::to_string(depth_budget));

    const auto pts = points_up_to(depth);
    const int n = static_cast<int>(pts.size());

    std::vector<rational> apow(static_cast<std::size_t>(depth) + 1);
    apow[0] = 1;
    for (int l = 1; l <= depth; ++l) apow[static_cast<std::size_t>(l)] = apow[static_cast<std::size_t>(l) - 1] * p.a();

    struct side_data {
        std::vector<point> path;
        std::vector<rational> prefix;  // prefix[t] = cost of the first t edges
    };
    auto build = [&](point z, side dir) {
        side_data sd;
        sd.path = path(z, dir);
        sd.prefix.resize(sd.path.size());
        sd.prefix[0] = 0;
        for (std::size_t t = 1; t < sd.path.size(); ++t)
            sd.prefix[t] = sd.prefix[t - 1] + apow[sd.path[t - 1].level()];
        return sd;
    };
    std::vector<side_data> rps, lps;
    rps.reserve(static_cast<std::size_t>(n));
    lps.reserve(static_cast<std::size_t>(n));
    for (const point& z : pts) {
        rps.push_back(build(z, side::right));
        lps.push_back(build(z, side::left));
    }

    square_matrix<rational> m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            rational v;
            if (i == 0 && j == n - 1) {
                v = 1;  // the pair (0, 1)
            } else {
                const auto& rp = rps[static_cast<std::size_t>(i)];
                const auto& lp = lps[static_cast<std::size_t>(j)];
                int hits = 0;
                std::size_t ri = 0, lj = 0;
                for (std::size_t t = 0; t < rp.path.size(); ++t)
                    for (std::size_t u = 0; u < lp.path.size(); ++u)
                        if (rp.path[t] == lp.path[u]) {
                            ++hits;
                            ri = t;
                            lj = u;
                        }
                if (hits == 0)
                    throw error(errc::no_intersection,
                                "descent paths of " + pts[static_cast<std::size_t>(i)].str() + " and " +
                                    pts[static_cast<std::size_t>(j)].str() + " never meet");
                if (hits > 1)
                    throw error(errc::multiple_intersections,
                                "descent paths of " + pts[static_cast<std::size_t>(i)].str() + " and " +
                                    pts[static_cast<std::size_t>(j)].str() + " meet more than once");
                v = rp.prefix[ri] + lp.prefix[lj];
            }
            m(i, j) = v;
            m(j, i) = std::move(v);
        }
    }

    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (const point& z : pts) labels.push_back(z.str());
    return validate_space<rational>(std::move(m), std::move(labels));
}

// collapses a triangle z1 < z0 < z2, with z0 at or left of the V-path bottom
// of {z1, z2}, onto the special triangle through z0: returns (z1', z2') where
// z1' is the meet of z1 and z0, and z2' is the first right-path point of z0
// shared with the right path of z1
inline std::pair<point, point> reduce_triangle(point z1, point z0, point z2) {
    if (!(z1 < z0 && z0 < z2))
        throw error(errc::precond_violation, "need z1 < z0 < z2");
    if (z1 == point::zero() && z2 == point::one())
        throw error(errc::precond_violation, "the pair (0, 1) has no V-path to reduce against");
    const point bottom = meet(z1, z2);
    if (!(z0 <= bottom))
        throw error(errc::precond_violation,
                    "z0 must lie at or left of the V-path bottom; mirror the triangle first");

    const point z1p = meet(z1, z0);
    const auto rp0 = right_path(z0);
    const auto rp1 = right_path(z1);
    for (const point& u : rp0)
        if (std::find(rp1.begin(), rp1.end(), u) != rp1.end())
            return {z1p, u};
    throw error(errc::no_intersection,
                "right paths of " + z0.str() + " and " + z1.str() + " never merge");
}

struct fact_report {
    int depth = 0;
    int points_checked = 0;
    bool level_coverage_ok = true;  // levels below a point each appear exactly once across its two paths
    bool neighbor_jump_ok = true;   // a path point's opposite neighbor is the first lower-level point across the tent
    bool edge_gap_ok = true;        // no point strictly inside an edge span has level at most the span's
    std::string first_failure;      // empty when everything holds
    bool all_ok() const { return level_coverage_ok && neighbor_jump_ok && edge_gap_ok; }
};

// exhaustively checks the structural properties of the construction on all
// points of level at most depth
inline fact_report verify_facts(int depth) {
    if (depth < 1)
        throw error(errc::bad_parameter, "fact verification needs depth >= 1");
    const auto pts = points_up_to(depth);

    fact_report rep;
    rep.depth = depth;
    auto fail = [&](bool& flag, std::string msg) {
        if (rep.first_failure.empty()) rep.first_failure = std::move(msg);
        flag = false;
    };

    for (const point& z : pts) {
        if (z.is_endpoint()) continue;
        ++rep.points_checked;
        const auto lp = left_path(z);
        const auto rp = right_path(z);

        // every level strictly between 0 and level(z), exactly once over the
        // interiors of both paths
        std::vector<int> count(z.level(), 0);
        auto tally = [&](const std::vector<point>& pth) {
            for (std::size_t t = 1; t + 1 < pth.size(); ++t) ++count[pth[t].level()];
        };
        tally(lp);
        tally(rp);
        for (unsigned lvl = 1; lvl < z.level(); ++lvl)
            if (count[lvl] != 1)
                fail(rep.level_coverage_ok, z.str() + ": level " + std::to_string(lvl) + " appears " +
                                                std::to_string(count[lvl]) + " times across its paths");

        // the opposite neighbor of each interior path point is the first
        // point of lower level on the other side of the tent
        auto check_jump = [&](const std::vector<point>& own, const std::vector<point>& other, bool own_is_left) {
            for (std::size_t t = 1; t < own.size(); ++t) {
                const point u = own[t];
                if (u.is_endpoint()) break;
                point expect;
                bool got = false;
                for (std::size_t s = 1; s < other.size(); ++s)
                    if (other[s].level() < u.level()) {
                        expect = other[s];
                        got = true;
                        break;
                    }
                const point actual = own_is_left ? right_neighbor(u) : left_neighbor(u);
                if (!got || actual != expect)
                    fail(rep.neighbor_jump_ok,
                         z.str() + ": neighbor jump fails at " + u.str());
            }
        };
        check_jump(lp, rp, true);
        check_jump(rp, lp, false);
    }

    // graph edges: {0, 1} plus both neighbor edges of every interior point;
    // nothing of comparable level may sit strictly inside an edge span
    struct edge {
        point lo, hi;
        unsigned lvl;
    };
    std::vector<edge> edges;
    edges.push_back({point::zero(), point::one(), 0});
    for (const point& z : pts) {
        if (z.is_endpoint()) continue;
        edges.push_back({left_neighbor(z), z, z.level()});
        edges.push_back({z, right_neighbor(z), z.level()});
    }
    for (const edge& e : edges) {
        auto first = std::upper_bound(pts.begin(), pts.end(), e.lo);
        auto lastx = std::lower_bound(pts.begin(), pts.end(), e.hi);
        for (auto it = first; it != lastx; ++it)
            if (it->level() <= e.lvl)
                fail(rep.edge_gap_ok, it->str() + " of level " + std::to_string(it->level()) +
                                          " sits inside the edge " + e.lo.str() + ".." + e.hi.str());
    }
    return rep;
}

// both descent paths of z merged into one vertex sequence, ascending by
// value; plotted as (value, level) this is the tent over z
inline std::vector<point> tent(point z) {
    const auto lp = left_path(z);
    const auto rp = right_path(z);
    std::vector<point> out(lp.rbegin(), lp.rend());
    out.insert(out.end(), rp.begin() + 1, rp.end());
    return out;
}

} // namespace qmetric::dyadic
