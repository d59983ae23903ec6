#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "qmetric/dyadic.hpp"
#include "qmetric/metrize.hpp"

namespace qmetric::harness {

struct collapse_row {
    int depth = 0;
    rational chain_distance;      // closure distance between 0 and 1
    rational upper_bound;         // (2a)^depth
    rational uniform_chain_cost;  // 2^depth * a^depth, the evenly spaced chain
};

// closure distance from 0 to 1 across deepening truncations; the uniform
// chain bounds it from above and it never grows with depth, both checked
inline std::vector<collapse_row> collapse_experiment(const dyadic::params& p, int depth_max,
                                                     int depth_budget = 12) {
    if (depth_max < 1)
        throw error(errc::bad_parameter, "collapse needs depth_max >= 1");
    if (depth_max > depth_budget)
        throw error(errc::depth_budget, "collapse depth exceeds the budget");

    std::vector<collapse_row> rows;
    rows.reserve(static_cast<std::size_t>(depth_max));
    for (int n = 1; n <= depth_max; ++n) {
        const auto space = dyadic::truncate(n, p, depth_budget);
        const auto closure = chain_metrize(space);
        collapse_row row;
        row.depth = n;
        row.chain_distance = closure.d(0, space.size() - 1);
        row.upper_bound = pow_int(2 * p.a(), static_cast<unsigned>(n));
        row.uniform_chain_cost = pow_int(rational(2), static_cast<unsigned>(n)) *
                                 pow_int(p.a(), static_cast<unsigned>(n));
        if (!(row.chain_distance <= row.uniform_chain_cost))
            throw error(errc::property_violation, "closure distance exceeds the uniform chain cost");
        if (!rows.empty() && !(row.chain_distance <= rows.back().chain_distance))
            throw error(errc::property_violation, "closure distance grew as the truncation deepened");
        rows.push_back(std::move(row));
    }
    return rows;
}

struct ratio_result {
    rational max_ratio;                      // worst rho(z1, z2) / (rho(z1, z0) + rho(z0, z2))
    std::array<dyadic::point, 3> witness{};  // (z1, z0, z2), middle point second
};

// worst additive-comparison ratio over a truncation; certified against the
// closed-form ceiling (1 - a) / a before returning
inline ratio_result ratio_experiment(const dyadic::params& p, int depth, int depth_budget = 8) {
    if (depth < 1)
        throw error(errc::bad_parameter, "ratio scan needs depth >= 1");
    if (depth > depth_budget)
        throw error(errc::depth_budget, "ratio scan depth exceeds the budget");

    const auto space = dyadic::truncate(depth, p);
    const auto pts = dyadic::points_up_to(depth);
    const auto c = mult_triangle_constant(space);
    if (!(c.value <= p.triangle_bound()))
        throw error(errc::property_violation, "triangle ratio exceeded the (1 - a) / a ceiling");
    const auto [x, y, z] = *c.witness;
    return {c.value,
            {pts[static_cast<std::size_t>(x)], pts[static_cast<std::size_t>(y)], pts[static_cast<std::size_t>(z)]}};
}

enum class space_kind { euclidean, ultrametric, snowflaked, perturbed };

struct generator_spec {
    space_kind kind = space_kind::euclidean;
    int count = 0;
    std::uint64_t seed = 0;
    std::optional<double> exponent;  // snowflake power, or perturbation width
};

// top 53 bits of the raw stream; avoids std::uniform_real_distribution,
// whose output differs across standard libraries
inline double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// seeded families of float-mode spaces for exercising the analysis code:
// planar point clouds, random merge trees, and their snowflaked or
// multiplicatively perturbed variants
inline quasi_metric_space<double> generate_space(const generator_spec& spec) {
    if (spec.count < 2)
        throw error(errc::bad_spec, "generator needs at least 2 points");
    const int n = spec.count;
    std::mt19937_64 g(spec.seed);
    square_matrix<double> m(n);

    if (spec.kind == space_kind::ultrametric) {
        // random binary merge tree with strictly increasing merge heights;
        // the result satisfies the max comparison with constant 1
        std::vector<std::vector<int>> clusters;
        clusters.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) clusters.push_back({i});
        double h = 0.0;
        while (clusters.size() > 1) {
            const std::size_t a = static_cast<std::size_t>(g() % clusters.size());
            std::size_t b = static_cast<std::size_t>(g() % (clusters.size() - 1));
            if (b >= a) ++b;
            h += 0.1 + uniform01(g);
            for (int i : clusters[a])
                for (int j : clusters[b]) {
                    m(i, j) = h;
                    m(j, i) = h;
                }
            auto& keep = clusters[std::min(a, b)];
            auto& gone = clusters[std::max(a, b)];
            keep.insert(keep.end(), gone.begin(), gone.end());
            clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(std::max(a, b)));
        }
        return validate_space<double>(std::move(m));
    }

    std::vector<std::array<double, 2>> pt(static_cast<std::size_t>(n));
    for (auto& q : pt) q = {uniform01(g), uniform01(g)};
    // coincident points would break positivity; redraw the later one
    for (std::size_t i = 1; i < pt.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (pt[i] == pt[j]) {
                pt[i] = {uniform01(g), uniform01(g)};
                j = static_cast<std::size_t>(-1);
            }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double dx = pt[static_cast<std::size_t>(i)][0] - pt[static_cast<std::size_t>(j)][0];
            const double dy = pt[static_cast<std::size_t>(i)][1] - pt[static_cast<std::size_t>(j)][1];
            m(i, j) = std::sqrt(dx * dx + dy * dy);
        }

    if (spec.kind == space_kind::snowflaked) {
        const double p = spec.exponent.value_or(2.0);
        if (!(p > 0))
            throw error(errc::bad_spec, "snowflake exponent must be positive");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) m(i, j) = std::pow(m(i, j), p);
    } else if (spec.kind == space_kind::perturbed) {
        const double w = spec.exponent.value_or(0.25);
        if (!(w >= 0))
            throw error(errc::bad_spec, "perturbation width must be nonnegative");
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double f = 1.0 + w * uniform01(g);
                m(i, j) *= f;
                m(j, i) = m(i, j);
            }
    }
    return validate_space<double>(std::move(m));
}

} // namespace qmetric::harness
