#include <catch2/catch_amalgamated.hpp>

#include <array>

#include "qmetric/analysis.hpp"

using qmetric::errc;
using qmetric::error;
using qmetric::rational;

namespace {

template <class S>
qmetric::quasi_metric_space<S> space3(S a, S b, S c) {
    // rho(0,1)=a, rho(1,2)=b, rho(0,2)=c
    return qmetric::validate_space<S>({{S(0), a, c}, {a, S(0), b}, {c, b, S(0)}});
}

const std::array<int, 3> first_triple{0, 1, 2};

} // namespace

TEST_CASE("quasi constant on hand-checked spaces") {
    // equilateral: every ratio is 1
    auto eq = space3<rational>(1, 1, 1);
    auto k = qmetric::quasi_constant(eq);
    CHECK(k.value == 1);
    CHECK(k.witness == first_triple);

    // collinear 1-2-3: worst ratio 3 / max(1, 2)
    auto col = space3<rational>(1, 2, 3);
    k = qmetric::quasi_constant(col);
    CHECK(k.value == rational(3, 2));
    CHECK(k.witness == first_triple);

    // depth-1 dyadic shape: 1 / max(2/5, 2/5)
    auto dy = space3<rational>(rational(2, 5), rational(2, 5), 1);
    k = qmetric::quasi_constant(dy);
    CHECK(k.value == rational(5, 2));
    CHECK(k.witness == first_triple);
}

TEST_CASE("triangle constant on hand-checked spaces") {
    auto dy = space3<rational>(rational(2, 5), rational(2, 5), 1);
    auto c = qmetric::mult_triangle_constant(dy);
    CHECK(c.value == rational(5, 4));
    CHECK(c.witness == first_triple);

    auto spread = space3<rational>(1, 1, 3);
    c = qmetric::mult_triangle_constant(spread);
    CHECK(c.value == rational(3, 2));
    CHECK(c.witness == first_triple);

    // triangle sums exactly double each side
    auto eq = space3<rational>(1, 1, 1);
    CHECK(qmetric::mult_triangle_constant(eq).value == rational(1, 2));
}

TEST_CASE("small spaces fall back to the conventions") {
    auto pair = qmetric::validate_space<rational>({{rational(0), rational(5)}, {rational(5), rational(0)}});
    auto k = qmetric::quasi_constant(pair);
    auto c = qmetric::mult_triangle_constant(pair);
    CHECK(k.value == 1);
    CHECK_FALSE(k.witness.has_value());
    CHECK(c.value == rational(1, 2));
    CHECK_FALSE(c.witness.has_value());

    auto an = qmetric::classify(pair);
    CHECK(an.is_metric);
    CHECK(an.is_ultrametric);
}

TEST_CASE("classify") {
    auto eq = qmetric::classify(space3<rational>(1, 1, 1));
    CHECK(eq.quasi_constant == 1);
    CHECK(eq.triangle_constant == rational(1, 2));
    CHECK(eq.is_metric);
    CHECK(eq.is_ultrametric);

    auto pyth = qmetric::classify(space3<double>(3.0, 4.0, 5.0));
    CHECK(pyth.is_metric);
    CHECK_FALSE(pyth.is_ultrametric);
    CHECK(pyth.quasi_constant == 1.25);
    CHECK(pyth.triangle_constant == 5.0 / 7.0);

    auto dy = qmetric::classify(space3<rational>(rational(2, 5), rational(2, 5), 1));
    CHECK_FALSE(dy.is_metric);
    CHECK(dy.quasi_constant == rational(5, 2));
}

TEST_CASE("the int64 shortcut and the generic scan agree") {
    // scaling a space by a positive constant moves every denominator past
    // the shortcut's cap but changes no ratio, so everything must match
    auto base = qmetric::validate_space<rational>({
        {rational(0), rational(1, 3), rational(5, 7), rational(2, 5)},
        {rational(1, 3), rational(0), rational(1, 2), rational(9, 11)},
        {rational(5, 7), rational(1, 2), rational(0), rational(3, 4)},
        {rational(2, 5), rational(9, 11), rational(3, 4), rational(0)},
    });
    const rational huge_unit = rational(1, (qmetric::bigint(1) << 50) + 1);
    const int n = base.size();
    qmetric::square_matrix<rational> big(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            big(i, j) = base.rho(i, j) * huge_unit;
    auto scaled = qmetric::validate_space<rational>(std::move(big));

    REQUIRE(qmetric::detail::try_scale(base.distances()).has_value());
    REQUIRE_FALSE(qmetric::detail::try_scale(scaled.distances()).has_value());

    auto k1 = qmetric::quasi_constant(base);
    auto k2 = qmetric::quasi_constant(scaled);
    CHECK(k1.value == k2.value);
    CHECK(k1.witness == k2.witness);

    auto c1 = qmetric::mult_triangle_constant(base);
    auto c2 = qmetric::mult_triangle_constant(scaled);
    CHECK(c1.value == c2.value);
    CHECK(c1.witness == c2.witness);
}

TEST_CASE("snowflake transforms entries and constants") {
    auto col = space3<rational>(1, 2, 3);
    auto sq = qmetric::snowflake(col, rational(2));
    CHECK(sq.rho(0, 1) == 1);
    CHECK(sq.rho(1, 2) == 4);
    CHECK(sq.rho(0, 2) == 9);
    CHECK(qmetric::quasi_constant(sq).value == rational(9, 4));

    // identity exponent
    auto same = qmetric::snowflake(col, rational(1));
    CHECK(same.distances() == col.distances());

    // unit distances are a fixed point at any power
    auto eq = space3<rational>(1, 1, 1);
    CHECK(qmetric::snowflake(eq, rational(3)).distances() == eq.distances());

    // labels survive
    auto labeled = qmetric::validate_space<rational>(
        {{rational(0), rational(2)}, {rational(2), rational(0)}}, {"A", "B"});
    CHECK(qmetric::snowflake(labeled, rational(2)).label(1) == "B");
}

TEST_CASE("snowflake exponent rules") {
    auto col = space3<rational>(1, 2, 3);
    CHECK_THROWS_AS(qmetric::snowflake(col, rational(1, 2)), error);
    CHECK_THROWS_AS(qmetric::snowflake(col, rational(0)), error);
    CHECK_THROWS_AS(qmetric::snowflake(col, rational(-2)), error);
    try {
        qmetric::snowflake(col, rational(1, 2));
    } catch (const error& e) {
        CHECK(e.code() == errc::non_integer_exponent);
    }

    auto fl = space3<double>(1.0, 4.0, 5.0);
    auto half = qmetric::snowflake(fl, 0.5);
    CHECK(half.rho(1, 2) == 2.0);
    CHECK_THROWS_AS(qmetric::snowflake(fl, -1.0), error);
    CHECK_THROWS_AS(qmetric::snowflake(fl, 0.0), error);
}
