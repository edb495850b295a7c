#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "treegaze/error.hpp"
#include "treegaze/synth.hpp"
#include "treegaze/transitions.hpp"

using namespace treegaze;
using doctest::Approx;

namespace {

constexpr Role H = Role::Head;
constexpr Role N = Role::NonHead;

// Textbook Welch evaluated directly, used as the oracle.
struct WelchOracle {
    double t, df;
};
WelchOracle welch_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    auto mv = [](const std::vector<double>& x) {
        double m = 0;
        for (double v : x) m += v;
        m /= static_cast<double>(x.size());
        double s = 0;
        for (double v : x) s += (v - m) * (v - m);
        return std::pair{m, s / static_cast<double>(x.size() - 1)};
    };
    const auto [ma, va] = mv(a);
    const auto [mb, vb] = mv(b);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double se2 = va / na + vb / nb;
    const double df = se2 * se2 / ((va / na) * (va / na) / (na - 1) + (vb / nb) * (vb / nb) / (nb - 1));
    return {(ma - mb) / std::sqrt(se2), df};
}

}  // namespace

TEST_SUITE("transitions") {
    TEST_CASE("classification") {
        CHECK(classify_transition(H, H) == TransitionType::HH);
        CHECK(classify_transition(H, N) == TransitionType::HN);
        CHECK(classify_transition(N, H) == TransitionType::NH);
        CHECK(classify_transition(N, N) == TransitionType::NN);
        CHECK(to_string(TransitionType::NH) == "NH");
    }

    TEST_CASE("distribution examples") {
        const std::vector<Role> hnh{H, N, H};
        const auto d = transition_distribution(std::vector<int>{1, 2, 3}, hnh);
        CHECK(d.n_transitions == 2);
        CHECK(d.p_hn() == 0.5);
        CHECK(d.p_nh() == 0.5);
        CHECK(d.p_hh() == 0.0);
        CHECK(d.p_nn() == 0.0);

        const std::vector<Role> hh{H, H};
        CHECK(transition_distribution(std::vector<int>{1, 2}, hh).p_hh() == 1.0);

        const std::vector<Role> hnnx{H, N, N, H};
        const auto e = transition_distribution(std::vector<int>{1, 2, 3, 2}, hnnx);
        CHECK(e.p_hn() == Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(e.p_nn() == Approx(2.0 / 3.0).epsilon(1e-15));

        CHECK_THROWS_AS(transition_distribution(std::vector<int>{1}, hh), DomainError);
        CHECK_THROWS_AS(transition_distribution(std::vector<int>{1, 3}, hh), DomainError);
    }

    TEST_CASE("probabilities sum to one and swap under relabeling") {
        std::mt19937_64 rng(5);
        for (int rep = 0; rep < 200; ++rep) {
            const int n = 2 + rep % 10;
            std::vector<Role> roles, flipped;
            std::bernoulli_distribution coin(0.5);
            for (int i = 0; i < n; ++i) {
                roles.push_back(coin(rng) ? H : N);
                flipped.push_back(roles.back() == H ? N : H);
            }
            std::uniform_int_distribution<int> w(1, n);
            std::vector<int> path{w(rng)};
            while (path.size() < 8) {
                const int next = w(rng);
                if (next != path.back()) path.push_back(next);
            }
            const auto d = transition_distribution(path, roles);
            const auto f = transition_distribution(path, flipped);
            CHECK(std::fabs(d.p_hh() + d.p_hn() + d.p_nh() + d.p_nn() - 1.0) < 1e-12);
            CHECK(d.p_hh() == f.p_nn());
            CHECK(d.p_hn() == f.p_nh());
            CHECK(d.p_nh() == f.p_hn());
        }
    }

    TEST_CASE("sentence condition value is the participant mean") {
        auto dist = [](std::size_t hh, std::size_t total) {
            TransitionDistribution d;
            d.counts[0] = hh;
            d.counts[3] = total - hh;
            d.n_transitions = total;
            return d;
        };
        const std::vector<TransitionDistribution> two{dist(1, 5), dist(2, 5)};
        CHECK(sentence_condition_value(two, TransitionType::HH) == Approx(0.3));
        const std::vector<TransitionDistribution> one{dist(1, 4)};
        CHECK(sentence_condition_value(one, TransitionType::HH) == 0.25);
        const std::vector<TransitionDistribution> three{dist(0, 3), dist(0, 3), dist(3, 3)};
        CHECK(sentence_condition_value(three, TransitionType::HH) == Approx(1.0 / 3.0));
        CHECK_THROWS_AS(sentence_condition_value(std::vector<TransitionDistribution>{}, TransitionType::HH), DomainError);
    }

    TEST_CASE("compare_conditions matches the Welch formula") {
        const std::vector<double> a{2.1, 2.0, 1.9}, b{1.1, 1.0, 0.9};
        const auto w = compare_conditions(a, b);
        CHECK(w.t == Approx(12.247).epsilon(1e-4));
        CHECK(w.df == Approx(4.0).epsilon(1e-12));
        const auto o = welch_oracle({2.1, 2.0, 1.9}, {1.1, 1.0, 0.9});
        CHECK(w.t == Approx(o.t).epsilon(1e-12));

        const std::vector<double> c{1, 2, 3};
        const auto same = compare_conditions(c, c);
        CHECK(same.t == 0.0);
        CHECK(same.p_two_tailed == Approx(1.0));

        const auto swapped = compare_conditions(b, a);
        CHECK(swapped.t == -w.t);
        CHECK(swapped.p_two_tailed == Approx(w.p_two_tailed).epsilon(1e-12));

        const std::vector<double> k1{1, 1, 1}, k2{2, 2, 2};
        CHECK_THROWS_AS(compare_conditions(k1, k2), DomainError);
        CHECK_THROWS_AS(compare_conditions(std::vector<double>{1}, c), DomainError);
    }

    TEST_CASE("random groups against the oracle") {
        std::mt19937_64 rng(8);
        std::normal_distribution<double> g(0, 1);
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<double> a(2 + rep % 9), b(2 + rep % 13);
            for (auto& v : a) v = g(rng);
            for (auto& v : b) v = 2 * g(rng) + 0.3;
            const auto w = compare_conditions(a, b);
            const auto o = welch_oracle(a, b);
            CHECK(w.t == Approx(o.t).epsilon(1e-10));
            CHECK(w.df == Approx(o.df).epsilon(1e-10));
        }
    }

    TEST_CASE("serial gaze equal to text gives identical conditions") {
        synth::TreebankOptions tb;
        tb.sentences = 40;
        tb.seed = 2;
        const auto corpus = synth::gen_treebank(tb);
        const auto fix = synth::gen_reader_paths(corpus, synth::ReaderModel{}, 5, 2);
        const auto report = analyze_transitions(corpus, build_gaze_sequences(fix));
        REQUIRE(report.sentences.size() == corpus.size());
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const auto& st = report.sentences[i];
            CHECK(st.baseline.n_transitions == corpus[i].size() - 1);
            for (auto type : kTransitionTypes)
                CHECK(st.gaze_mean[static_cast<std::size_t>(type)] ==
                      doctest::Approx(st.baseline.probability(type)).epsilon(1e-12));
        }
        for (const auto& w : report.welch)
            if (w) CHECK(w->t == 0.0);
    }

    TEST_CASE("report CSV layout") {
        const auto s = annotate(Sentence::make("s1", {{1, "a", 0, "root", {}, {}}, {2, "b", 1, "obj", {}, {}},
                                                      {3, "c", 2, "amod", {}, {}}}));
        const auto s2 = annotate(Sentence::make("s2", {{1, "d", 2, "nsubj", {}, {}}, {2, "e", 0, "root", {}, {}}}));
        const std::vector<Sentence> corpus{s, s2};
        const std::vector<GazeSequence> seq{
            {"p1", "s1", {1, 3, 2}}, {"p2", "s1", {2}}, {"p1", "s2", {1, 2}}, {"p2", "s2", {2, 1}}};
        const auto report = analyze_transitions(corpus, seq);
        REQUIRE(report.sentences.size() == 2);
        CHECK(report.sentences[1].gaze.size() == 2);
        CHECK(report.sentences[0].gaze.size() == 1);
        std::ostringstream out;
        write_transition_csv(out, report);
        std::istringstream in(out.str());
        std::string header;
        std::getline(in, header);
        CHECK(header == "sentence_id,condition,type,probability,n_transitions");
        int rows = 0;
        for (std::string line; std::getline(in, line);) ++rows;
        CHECK(rows == 16);
    }
}
