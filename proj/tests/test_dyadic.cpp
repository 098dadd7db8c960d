#include "parahaar/dyadic.hpp"
#include "parahaar/rng.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace parahaar;

namespace {
GridFunction random_function(const TruncatedGrid& grid, SplitMix64& rng) {
    GridFunction f(grid.cell_count());
    for (std::int64_t c = 0; c < grid.cell_count(); ++c) f.values[c] = rng.next_gaussian();
    return f;
}
}  // namespace

TEST_CASE("grid construction and canonical ordering") {
    CHECK(make_grid(1).interval_count() == 1);
    CHECK(make_grid(1).interval_at(0) == DyadicInterval{0, 0});
    CHECK(make_grid(2).interval_count() == 3);
    CHECK(make_grid(10).interval_count() == 1023);
    CHECK_THROWS_AS(make_grid(0), std::out_of_range);
    CHECK_THROWS_AS(make_grid(25), std::out_of_range);

    const TruncatedGrid g = make_grid(4);
    for (std::int64_t i = 0; i < g.interval_count(); ++i) {
        const DyadicInterval I = g.interval_at(i);
        CHECK(g.index_of(I) == i);
        if (i > 0) {
            const DyadicInterval prev = g.interval_at(i - 1);
            // level-major, position-minor
            CHECK((prev.level < I.level || (prev.level == I.level && prev.pos < I.pos)));
        }
    }
}

TEST_CASE("parent and child round trips") {
    SplitMix64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const int level = 1 + static_cast<int>(rng.next() % 20);
        const std::int64_t pos = static_cast<std::int64_t>(rng.next() % (std::uint64_t{1} << level));
        const DyadicInterval I{level, pos};
        REQUIRE(I.valid());
        const DyadicInterval p = I.parent();
        CHECK((p.left_child() == I || p.right_child() == I));
        CHECK(I.left_child().parent() == I);
        CHECK(I.right_child().parent() == I);
    }
    CHECK_THROWS_AS((DyadicInterval{0, 0}.parent()), std::domain_error);
}

TEST_CASE("haar evaluation matches the definition") {
    const TruncatedGrid g = make_grid(2);
    const GridFunction h00 = haar(g, {0, 0});
    CHECK(h00.values[0] == -1.0);
    CHECK(h00.values[1] == -1.0);
    CHECK(h00.values[2] == 1.0);
    CHECK(h00.values[3] == 1.0);

    const GridFunction h10 = haar(g, {1, 0});
    const double r2 = std::sqrt(2.0);
    CHECK(h10.values[0] == Catch::Approx(-r2).margin(1e-15));
    CHECK(h10.values[1] == Catch::Approx(r2).margin(1e-15));
    CHECK(h10.values[2] == 0.0);
    CHECK(h10.values[3] == 0.0);
    CHECK(inner(g, h10, h10) == Catch::Approx(1.0).margin(1e-14));

    CHECK_THROWS_AS(haar(g, {2, 0}), std::out_of_range);
    CHECK_THROWS_AS(haar(g, {1, 2}), std::invalid_argument);
}

TEST_CASE("haar_one evaluation, level-L extension, pairings") {
    const TruncatedGrid g = make_grid(2);
    const GridFunction h1 = haar_one(g, {1, 0});
    const double r2 = std::sqrt(2.0);
    CHECK(h1.values[0] == Catch::Approx(r2).margin(1e-15));
    CHECK(h1.values[1] == Catch::Approx(r2).margin(1e-15));
    CHECK(h1.values[2] == 0.0);

    CHECK(inner(g, haar_one(g, {1, 0}), haar_one(g, {0, 0})) == Catch::Approx(std::sqrt(0.5)).margin(1e-14));
    CHECK(inner(g, constant_one(g), haar_one(g, {1, 0})) == Catch::Approx(std::sqrt(0.5)).margin(1e-14));

    // h^1 exists one level below the Haar family
    CHECK_NOTHROW(haar_one(g, {2, 3}));
    CHECK_THROWS_AS(haar_one(g, {3, 0}), std::out_of_range);

    for (std::int64_t i = 0; i < g.interval_count(); ++i) {
        const DyadicInterval I = g.interval_at(i);
        CHECK(std::abs(inner(g, haar_one(g, I), haar(g, I))) < 1e-14);
    }
}

TEST_CASE("inner product basics") {
    const TruncatedGrid g = make_grid(2);
    CHECK(std::abs(inner(g, haar(g, {0, 0}), haar(g, {1, 0}))) < 1e-15);
    CHECK(inner(g, haar(g, {0, 0}), haar(g, {0, 0})) == Catch::Approx(1.0).margin(1e-15));
    GridFunction short_f(Eigen::VectorXd::Ones(2));
    CHECK_THROWS_AS(inner(g, haar(g, {0, 0}), short_f), std::invalid_argument);
}

TEST_CASE("tau examples and domain errors") {
    CHECK(tau({1, 0}, {0, 0}) == -1);
    CHECK(tau({1, 1}, {0, 0}) == +1);
    CHECK(tau({2, 1}, {0, 0}) == -1);
    CHECK_THROWS_AS(tau({0, 0}, {0, 0}), std::domain_error);
    CHECK_THROWS_AS(tau({0, 0}, {1, 0}), std::domain_error);
    CHECK_THROWS_AS(tau({1, 0}, {1, 1}), std::domain_error);
}

TEST_CASE("relation examples") {
    CHECK(relation({1, 0}, {0, 0}) == IntervalRelation::first_inside_second);
    CHECK(relation({1, 0}, {1, 1}) == IntervalRelation::disjoint);
    CHECK(relation({2, 3}, {1, 1}) == IntervalRelation::first_inside_second);
    CHECK(relation({0, 0}, {2, 3}) == IntervalRelation::second_inside_first);
    CHECK(relation({2, 3}, {2, 3}) == IntervalRelation::equal);
}

TEST_CASE("nested-or-disjoint and containment consistency") {
    const TruncatedGrid g = make_grid(5);
    for (std::int64_t i = 0; i < g.interval_count(); ++i) {
        for (std::int64_t j = 0; j < g.interval_count(); ++j) {
            const DyadicInterval I = g.interval_at(i), J = g.interval_at(j);
            const auto rel = relation(I, J);
            if (rel == IntervalRelation::first_inside_second) CHECK(contains(J, I));
            if (rel == IntervalRelation::second_inside_first) CHECK(contains(I, J));
            if (rel == IntervalRelation::disjoint) {
                CHECK(!contains(I, J));
                CHECK(!contains(J, I));
            }
        }
    }
}

TEST_CASE("orthonormality of the Haar family") {
    for (int L = 1; L <= 6; ++L) {
        const TruncatedGrid g = make_grid(L);
        for (std::int64_t i = 0; i < g.interval_count(); ++i) {
            for (std::int64_t j = 0; j < g.interval_count(); ++j) {
                const double ip = inner(g, haar(g, g.interval_at(i)), haar(g, g.interval_at(j)));
                CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("mean-zero completeness: f = <f,1> 1 + sum <f,h_I> h_I") {
    SplitMix64 rng(11);
    for (int L = 1; L <= 8; ++L) {
        const TruncatedGrid g = make_grid(L);
        const GridFunction f = random_function(g, rng);
        GridFunction rec(g.cell_count());
        rec.values.setConstant(inner(g, f, constant_one(g)));
        for (std::int64_t i = 0; i < g.interval_count(); ++i) {
            const GridFunction h = haar(g, g.interval_at(i));
            rec.values += inner(g, f, h) * h.values;
        }
        CHECK((rec.values - f.values).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("h1 pair inner products follow sqrt(|I|/|J|)") {
    for (int L = 2; L <= 6; ++L) {
        const TruncatedGrid g = make_grid(L);
        for (std::int64_t i = 0; i < g.interval_count(); ++i) {
            for (std::int64_t j = 0; j < g.interval_count(); ++j) {
                const DyadicInterval I = g.interval_at(i), J = g.interval_at(j);
                const double ip = inner(g, haar_one(g, I), haar_one(g, J));
                if (contains(J, I))
                    CHECK(ip == Catch::Approx(std::sqrt(I.measure() / J.measure())).margin(1e-12));
                else if (contains(I, J))
                    CHECK(ip == Catch::Approx(std::sqrt(J.measure() / I.measure())).margin(1e-12));
                else
                    CHECK(std::abs(ip) < 1e-14);
            }
        }
    }
}

TEST_CASE("h_J restricted to a strictly smaller I is the constant tau(I,J) |J|^{-1/2}") {
    const TruncatedGrid g = make_grid(5);
    for (std::int64_t j = 0; j < g.interval_count(); ++j) {
        const DyadicInterval J = g.interval_at(j);
        const GridFunction hJ = haar(g, J);
        for (std::int64_t i = 0; i < g.interval_count(); ++i) {
            const DyadicInterval I = g.interval_at(i);
            if (!strictly_contains(J, I)) continue;
            const double expected = tau(I, J) / std::sqrt(J.measure());
            const auto [first, count] = g.cell_range(I);
            for (std::int64_t c = first; c < first + count; ++c)
                CHECK(hJ.values[c] == Catch::Approx(expected).margin(1e-13));
        }
    }
}
