#include <doctest.h>

#include <random>

#include "treegaze/align.hpp"
#include "treegaze/error.hpp"

using namespace treegaze;

namespace {

std::vector<int> random_seq(std::mt19937_64& rng, int max_len, int alphabet) {
    std::uniform_int_distribution<int> len(0, max_len), sym(1, alphabet);
    std::vector<int> v(static_cast<std::size_t>(len(rng)));
    for (auto& x : v) x = sym(rng);
    return v;
}

int ed(const std::vector<int>& a, const std::vector<int>& b) { return edit_distance(a, b); }

}  // namespace

TEST_SUITE("align") {
    TEST_CASE("examples") {
        CHECK(ed({1, 2, 3}, {1, 2, 3}) == 0);
        CHECK(ed({}, {1, 2, 3}) == 3);
        CHECK(ed({1, 2, 1, 3}, {1, 2, 3}) == 1);
        CHECK(ed({}, {}) == 0);
        CHECK(ed({1, 2}, {2, 1}) == 2);
    }

    TEST_CASE("metric properties and length bounds") {
        std::mt19937_64 rng(21);
        for (int rep = 0; rep < 2000; ++rep) {
            const auto a = random_seq(rng, 8, 4), b = random_seq(rng, 8, 4), c = random_seq(rng, 8, 4);
            const int ab = ed(a, b);
            CHECK(ed(a, a) == 0);
            CHECK(ab == ed(b, a));
            CHECK(ed(a, c) <= ab + ed(b, c));
            const int diff = std::abs(static_cast<int>(a.size()) - static_cast<int>(b.size()));
            CHECK(ab >= diff);
            CHECK(ab <= static_cast<int>(std::max(a.size(), b.size())));
        }
    }

    TEST_CASE("custom costs") {
        AlignmentCosts c;
        c.substitution = 3;  // cheaper as delete + insert
        CHECK(edit_distance(std::vector<int>{1}, std::vector<int>{2}, c) == 2);
        c.match = -1;
        CHECK_THROWS_AS(edit_distance(std::vector<int>{1}, std::vector<int>{1}, c), DomainError);
    }

    TEST_CASE("sentence mean") {
        const std::vector<int> text{1, 2, 3, 4};
        // Distances 2 and 4.
        const std::vector<std::vector<int>> two{{1, 2}, {}};
        CHECK_THROWS_AS(sentence_edit_distance(std::vector<std::vector<int>>{{}}, text), DomainError);
        const std::vector<std::vector<int>> a{{1, 2}, {4, 3, 2, 1}};
        CHECK(ed({4, 3, 2, 1}, text) == 4);
        CHECK(sentence_edit_distance(a, text) == 3.0);
        const std::vector<std::vector<int>> serial{text, text};
        CHECK(sentence_edit_distance(serial, text) == 0.0);
        const std::vector<std::vector<int>> b{text, {1, 2, 3}, {5, 5, 5, 5, 5}};
        CHECK(ed({5, 5, 5, 5, 5}, text) == 5);
        CHECK(sentence_edit_distance(b, text) == 2.0);
        // Empty paths are ignored.
        CHECK(sentence_edit_distance(two, text) == 2.0);
    }
}
