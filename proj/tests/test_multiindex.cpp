#include <doctest.h>

#include <set>

#include "dbar/multiindex.hpp"

using namespace dbar;

namespace {

// Independent enumeration: filter all tuples with entries in [-1, k+1].
std::set<std::vector<int>> brute_force_grade(int n, int k) {
    std::set<std::vector<int>> out;
    std::vector<int> t(static_cast<size_t>(n), -1);
    while (true) {
        int sum = 0, negs = 0;
        for (int e : t) {
            sum += e;
            if (e == -1) ++negs;
        }
        if (sum == k && negs <= 1) out.insert(t);
        int i = n - 1;
        while (i >= 0 && t[static_cast<size_t>(i)] == k + 1) {
            t[static_cast<size_t>(i)] = -1;
            --i;
        }
        if (i < 0) break;
        ++t[static_cast<size_t>(i)];
    }
    return out;
}

} // namespace

TEST_CASE("enumerate_grade examples") {
    CHECK(enumerate_grade(1, -1) == std::vector<MultiIndex>{MultiIndex{{-1}}});
    CHECK(enumerate_grade(2, 0) ==
          std::vector<MultiIndex>{MultiIndex{{-1, 1}}, MultiIndex{{0, 0}}, MultiIndex{{1, -1}}});
    CHECK(enumerate_grade(2, 1) ==
          std::vector<MultiIndex>{MultiIndex{{-1, 2}}, MultiIndex{{0, 1}}, MultiIndex{{1, 0}},
                                  MultiIndex{{2, -1}}});
}

TEST_CASE("enumerate_grade errors") {
    CHECK_THROWS_AS(enumerate_grade(0, 0), InvalidDimension);
    CHECK_THROWS_AS(enumerate_grade(2, -2), InvalidGrade);
}

TEST_CASE("enumerate_grade matches brute force and is sorted") {
    for (int n = 1; n <= 3; ++n) {
        for (int k = -1; k <= 10; ++k) {
            const auto got = enumerate_grade(n, k);
            const auto expected = brute_force_grade(n, k);
            REQUIRE(got.size() == expected.size());
            for (size_t i = 0; i < got.size(); ++i) {
                CHECK(expected.count(got[i].entries()) == 1);
                if (i) CHECK(got[i - 1] < got[i]);
            }
        }
    }
}

TEST_CASE("grades are disjoint") {
    std::set<std::vector<int>> seen;
    for (int k = -1; k <= 6; ++k)
        for (const auto& g : enumerate_grade(2, k)) {
            CHECK(seen.count(g.entries()) == 0);
            seen.insert(g.entries());
        }
}

TEST_CASE("block_dimension") {
    CHECK(block_dimension(MultiIndex{{0, 0}}) == 2);
    CHECK(block_dimension(MultiIndex{{-1, 3}}) == 1);
    CHECK_THROWS_AS(block_dimension(MultiIndex{{-1, -1}}), NotInGamma);
    CHECK_THROWS_AS(block_dimension(MultiIndex{{-2, 0}}), NotInGamma);
}

TEST_CASE("admissible_directions") {
    CHECK(admissible_directions(MultiIndex{{-1, 0}}) == std::vector<int>{0});
    CHECK(admissible_directions(MultiIndex{{2, 5}}) == std::vector<int>{0, 1});
    CHECK(admissible_directions(MultiIndex{{0, -1, 3}}) == std::vector<int>{1});
    CHECK_THROWS_AS(admissible_directions(MultiIndex{{-1, -1}}), NotInGamma);
}

TEST_CASE("block dimensions partition the basis forms u_alpha dzbar_j") {
    // every (alpha, j) with alpha >= 0, |alpha| = k+1 lies in exactly one
    // E_gamma via gamma = alpha - e_j, so the grade-k block dimensions sum
    // to n * #{|alpha| = k+1}
    for (int n = 1; n <= 3; ++n) {
        for (int k = -1; k <= 8; ++k) {
            int total = 0;
            for (const auto& g : enumerate_grade(n, k)) total += block_dimension(g);
            const int pairs =
                n * static_cast<int>(enumerate_nonnegative_grade(n, k + 1).size());
            CHECK(total == pairs);

            // and the map is injective: distinct gammas from distinct pairs
            std::set<std::vector<int>> gammas;
            for (const auto& alpha : enumerate_nonnegative_grade(n, k + 1))
                for (int j = 0; j < n; ++j) {
                    const auto g = alpha.minus_unit(j);
                    CHECK(g.in_gamma());
                    gammas.insert(g.entries());
                }
            CHECK(static_cast<int>(gammas.size()) ==
                  static_cast<int>(enumerate_grade(n, k).size()));
        }
    }
}

TEST_CASE("dimension mixing is an error") {
    CHECK_THROWS_AS((MultiIndex{{1, 2}}.plus(MultiIndex{{1}})), DimensionMismatch);
    CHECK_THROWS_AS((void)(MultiIndex{{1, 2}} < MultiIndex{{1}}), DimensionMismatch);
}
