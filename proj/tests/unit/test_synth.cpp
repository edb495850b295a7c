#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "treegaze/error.hpp"
#include "treegaze/stats.hpp"
#include "treegaze/synth.hpp"
#include "treegaze/transitions.hpp"

using namespace treegaze;
using namespace treegaze::synth;
using doctest::Approx;

namespace {

std::vector<Sentence> bank(std::size_t n, std::uint64_t seed) {
    TreebankOptions o;
    o.sentences = n;
    o.seed = seed;
    return gen_treebank(o);
}

}  // namespace

TEST_SUITE("synth") {
    TEST_CASE("treebank") {
        const auto s = bank(30, 4);
        REQUIRE(s.size() == 30);
        std::set<std::string> ids;
        for (const auto& x : s) {
            CHECK(x.size() >= 6);
            CHECK(x.size() <= 20);
            CHECK(x.has_depths());
            ids.insert(x.id());
        }
        CHECK(ids.size() == 30);
        const auto again = bank(30, 4);
        CHECK(std::equal(again[7].tokens().begin(), again[7].tokens().end(), s[7].tokens().begin(), s[7].tokens().end()));
        TreebankOptions bad;
        bad.min_length = 5;
        bad.max_length = 4;
        CHECK_THROWS(gen_treebank(bad));
    }

    TEST_CASE("serial reader reads in text order") {
        for (const auto& s : bank(20, 1)) {
            auto m = make_rng(1, 0), a = make_rng(1, 1);
            const auto path = gen_reader_path(s, ReaderModel{}, m, a);
            CHECK(path == text_sequence(s));
        }
    }

    TEST_CASE("tree-guided reader") {
        ReaderModel full{ReaderKind::TreeGuided, 1.0, 0.0, 0.0};
        ReaderModel zero{ReaderKind::TreeGuided, 0.0, 0.1, 0.1};
        ReaderModel serial{ReaderKind::Serial, 0.0, 0.1, 0.1};
        for (const auto& s : bank(40, 2)) {
            const auto roles = roles_of(s);
            auto m = make_rng(9, 0), a = make_rng(9, 1);
            const auto path = gen_reader_path(s, full, m, a);
            for (std::size_t i = 0; i + 1 < path.size(); ++i)
                if (roles[static_cast<std::size_t>(path[i] - 1)] == Role::Head)
                    CHECK(roles[static_cast<std::size_t>(path[i + 1] - 1)] == Role::Head);

            auto m1 = make_rng(3, 0), a1 = make_rng(3, 1), m2 = make_rng(3, 0), a2 = make_rng(3, 1);
            CHECK(gen_reader_path(s, zero, m1, a1) == gen_reader_path(s, serial, m2, a2));
        }
        CHECK_THROWS((ReaderModel{ReaderKind::TreeGuided, 1.5, 0, 0}.validate()));
        CHECK_THROWS((ReaderModel{ReaderKind::Serial, 0, 0.7, 0.6}.validate()));
    }

    TEST_CASE("fixation records") {
        const auto s = bank(10, 3);
        const ReaderModel model{ReaderKind::TreeGuided, 0.5, 0.05, 0.05};
        const auto recs = gen_reader_paths(s, model, 4, 11);
        CHECK(recs == gen_reader_paths(s, model, 4, 11));
        std::set<std::string> participants;
        for (std::size_t i = 0; i < recs.size(); ++i) {
            participants.insert(recs[i].participant);
            CHECK(recs[i].duration_ms >= 100.0);
            if (i > 0 && recs[i - 1].participant == recs[i].participant && recs[i - 1].sentence_id == recs[i].sentence_id)
                CHECK(recs[i].onset_ms > recs[i - 1].onset_ms);
        }
        CHECK(participants.size() == 4);
        CHECK_NOTHROW(check_against_corpus(recs, s));
    }

    TEST_CASE("norms and surprisal cover the treebank") {
        const auto s = bank(10, 5);
        const auto norms = gen_norms(s, 1);
        const auto surp = gen_word_surprisal(s, 1);
        for (const auto& x : s) {
            REQUIRE(surp.count(x.id()) == 1);
            CHECK(surp.at(x.id()).size() == x.size());
            for (const auto& t : x.tokens()) {
                const auto key = fold_case(t.surface);
                CHECK(norms.count(key) == (std::stol(key.substr(1)) % 10 == 7 ? 0u : 1u));
            }
            for (const auto& w : surp.at(x.id())) CHECK(w.lexical > 0);
        }
    }

    TEST_CASE("noise-free FRP recovers the planted slope") {
        FrpOptions o;
        o.subjects = 2;
        o.trials = 50;
        o.channels = 2;
        o.noise_sd = 0.0;
        o.amplitude = 1.0;
        o.seed = 4;
        const auto data = gen_frp_dataset(o);
        REQUIRE(data.size() == 2);
        CHECK(data[0].n_timepoints == 800);
        CHECK(data[0].subject == "sub-01");
        const auto b = frp::regress_timewise(data[1], false);
        for (std::size_t k = 0; k < b.n_timepoints; ++k) {
            const double ms = data[1].time_of(k) * 1000.0;
            if (ms >= 100.0 - 1e-9 && ms <= 200.0 + 1e-9)
                CHECK(b.slope(1, k) == Approx(1.0).epsilon(1e-6));
            else
                CHECK(std::fabs(b.slope(1, k)) < 1e-12);
        }
        CHECK(gen_frp_subject(o, 1).data == data[1].data);
    }

    TEST_CASE("frp option validation") {
        FrpOptions o;
        o.window_ms = {300.0, 100.0};
        CHECK_THROWS(o.validate());
        FrpOptions n;
        n.noise_sd = -1;
        CHECK_THROWS(n.validate());
        FrpOptions z;
        z.subjects = 0;
        CHECK_THROWS(z.validate());
    }

    TEST_CASE("planted effect is found in at least 95 of 100 datasets") {
        int found = 0;
        for (std::uint64_t ds = 0; ds < 100; ++ds) {
            FrpOptions o;
            o.channels = 1;
            o.seed = 30000 + ds;
            const auto data = gen_frp_dataset(o);
            stats::SeriesMatrix m(o.subjects, o.timepoints);
            const std::size_t roi[] = {0};
            for (std::size_t s = 0; s < data.size(); ++s) {
                const auto series = frp::roi_average(frp::regress_timewise(data[s]), roi);
                for (std::size_t t = 0; t < series.size(); ++t) m(s, t) = series[t];
            }
            stats::ClusterOptions c;
            c.n_permutations = 500;
            c.seed = ds;
            const auto r = stats::cluster_permutation_1samp(m, c);
            bool hit = false;
            for (const auto& cl : r.significant()) {
                const double from = data[0].time_of(cl.start) * 1000.0, to = data[0].time_of(cl.end) * 1000.0;
                hit = hit || (cl.sign > 0 && from <= 200.0 && to >= 100.0);
            }
            found += hit;
        }
        CHECK(found >= 95);
    }
}
