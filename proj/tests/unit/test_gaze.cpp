#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "treegaze/error.hpp"
#include "treegaze/gaze.hpp"

using namespace treegaze;

namespace {

FixationRecord fix(int word, double onset, double dur = 200, std::string p = "p1", std::string s = "s1") {
    return {std::move(p), std::move(s), word, onset, dur};
}

std::vector<int> path_of(const std::vector<FixationRecord>& r) { return build_gaze_sequence(r).path; }

}  // namespace

TEST_SUITE("gaze") {
    TEST_CASE("duration filter is strict less-than") {
        std::istringstream in(
            "participant,sentence_id,word_index,onset_ms,duration_ms\n"
            "p1,s1,1,0,99\n"
            "p1,s1,2,120,100\n"
            "p1,s1,3,250,99.999\n");
        const auto r = load_fixations(in);
        REQUIRE(r.size() == 1);
        CHECK(r[0].word_index == 2);
    }

    TEST_CASE("header-only file gives no records; column order is free") {
        std::istringstream a("participant,sentence_id,word_index,onset_ms,duration_ms\n");
        CHECK(load_fixations(a).empty());
        std::istringstream b("duration_ms,onset_ms,word_index,sentence_id,participant\r\n150,10,4,s9,px\r\n");
        const auto r = load_fixations(b);
        REQUIRE(r.size() == 1);
        CHECK(r[0] == FixationRecord{"px", "s9", 4, 10, 150});
    }

    TEST_CASE("ingestion errors carry the row") {
        auto line_of = [](const char* text) -> std::size_t {
            std::istringstream in(text);
            try {
                load_fixations(in);
            } catch (const ParseError& e) {
                return e.line();
            }
            return 0;
        };
        CHECK(line_of("participant,sentence_id,word_index,onset_ms\np,s,1,0\n") == 1);
        CHECK(line_of("participant,sentence_id,word_index,onset_ms,duration_ms\np,s,1,0,200\np,s,x,0,200\n") == 3);
        CHECK(line_of("participant,sentence_id,word_index,onset_ms,duration_ms\np,s,0,0,200\n") == 2);
        CHECK(line_of("participant,sentence_id,word_index,onset_ms,duration_ms\np,s,1,-5,200\n") == 2);
        CHECK(line_of("participant,sentence_id,word_index,onset_ms,duration_ms\np,s,1,0,0\n") == 2);
        CHECK(line_of("participant,sentence_id,word_index,onset_ms,duration_ms\np,s,2.5,0,200\n") == 2);
    }

    TEST_CASE("sequence building") {
        CHECK(path_of({fix(1, 0), fix(2, 100), fix(2, 300), fix(3, 500)}) == std::vector<int>{1, 2, 3});
        CHECK(path_of({fix(1, 0), fix(3, 100), fix(2, 300), fix(3, 500)}) == std::vector<int>{1, 3, 2, 3});
        CHECK(path_of({fix(2, 500), fix(1, 100)}) == std::vector<int>{1, 2});
        CHECK(path_of({}).empty());
        CHECK_FALSE(build_gaze_sequence(std::vector<FixationRecord>{fix(1, 0)}).usable_for_transitions());
        // Equal onsets keep file order.
        CHECK(path_of({fix(3, 50), fix(1, 50), fix(2, 60)}) == std::vector<int>{3, 1, 2});
    }

    TEST_CASE("mixed participants in one sequence are refused") {
        CHECK_THROWS_AS(build_gaze_sequence(std::vector<FixationRecord>{fix(1, 0), fix(2, 10, 200, "p2")}), DomainError);
    }

    TEST_CASE("grouping keeps first-appearance order") {
        const std::vector<FixationRecord> r{fix(1, 0, 200, "a", "s2"), fix(1, 0, 200, "b", "s1"),
                                            fix(2, 300, 200, "a", "s2"), fix(2, 300, 200, "b", "s1")};
        const auto g = build_gaze_sequences(r);
        REQUIRE(g.size() == 2);
        CHECK(g[0].participant == "a");
        CHECK(g[0].sentence_id == "s2");
        CHECK(g[1].path == std::vector<int>{1, 2});
    }

    TEST_CASE("row permutation invariance with distinct onsets") {
        std::mt19937_64 rng(3);
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<FixationRecord> r;
            std::uniform_int_distribution<int> w(1, 6);
            for (int i = 0; i < 12; ++i) r.push_back(fix(w(rng), 17.0 * i + rep));
            const auto want = path_of(r);
            std::shuffle(r.begin(), r.end(), rng);
            CHECK(path_of(r) == want);
            for (std::size_t i = 1; i < want.size(); ++i) CHECK(want[i] != want[i - 1]);
        }
    }

    TEST_CASE("filter-then-build agrees with build on pre-filtered data") {
        // Short fixations placed only where removing them does not alter a collapse.
        std::vector<FixationRecord> all{fix(1, 0), fix(2, 210, 80), fix(3, 300), fix(4, 520), fix(5, 700, 60), fix(6, 800)};
        std::ostringstream csv;
        write_fixations(csv, all);
        std::istringstream in(csv.str());
        const auto kept = load_fixations(in);
        std::vector<FixationRecord> manual;
        std::copy_if(all.begin(), all.end(), std::back_inserter(manual), [](const auto& f) { return f.duration_ms >= 100; });
        CHECK(kept == manual);
        CHECK(path_of(kept) == std::vector<int>{1, 3, 4, 6});
    }

    TEST_CASE("corpus checks and text order") {
        const auto s = annotate(Sentence::make("s1", {{1, "a", 0, "root", {}, {}}, {2, "b", 1, "obj", {}, {}},
                                                      {3, "c", 1, "obj", {}, {}}}));
        CHECK(text_sequence(s) == std::vector<int>{1, 2, 3});
        const std::vector<Sentence> corpus{s};
        CHECK_NOTHROW(check_against_corpus(std::vector<FixationRecord>{fix(3, 0)}, corpus));
        CHECK_THROWS_AS(check_against_corpus(std::vector<FixationRecord>{fix(4, 0)}, corpus), IngestError);
        CHECK_THROWS_AS(check_against_corpus(std::vector<FixationRecord>{fix(1, 0, 200, "p", "nope")}, corpus), IngestError);
        const auto one = Sentence::make("x", {{1, "solo", 0, "root", {}, {}}});
        CHECK(text_sequence(one) == std::vector<int>{1});
    }
}
