#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "treegaze/bayesnet.hpp"
#include "treegaze/error.hpp"
#include "treegaze/synth.hpp"

using namespace treegaze;
using namespace treegaze::bn;
using doctest::Approx;

namespace {

DiscreteData two_columns(const std::vector<int>& x, const std::vector<int>& y) {
    return DiscreteData({"X", "Y"}, {2, 2}, {x, y});
}

DiscreteBN chain_bn(double stay) {
    const Arc arcs[] = {{0, 1}, {1, 2}};
    return make_bn(Dag::from_arcs(3, arcs), {"A", "B", "C"}, {2, 2, 2},
                   {{0.5, 0.5}, {stay, 1 - stay, 1 - stay, stay}, {stay, 1 - stay, 1 - stay, stay}});
}

DiscreteBN pair_bn(double same) {
    const Arc arcs[] = {{0, 1}};
    return make_bn(Dag::from_arcs(2, arcs), {"X", "Y"}, {2, 2}, {{0.5, 0.5}, {same, 1 - same, 1 - same, same}});
}

}  // namespace

TEST_SUITE("bayesnet") {
    TEST_CASE("dag operations") {
        Dag g(3);
        g.add_arc(0, 1);
        g.add_arc(1, 2);
        CHECK_FALSE(g.can_add(2, 0));
        CHECK_THROWS_AS(g.add_arc(2, 0), DomainError);
        CHECK_THROWS_AS(g.add_arc(0, 1), DomainError);
        CHECK_THROWS_AS(g.add_arc(1, 1), DomainError);
        CHECK(g.topological_order() == std::vector<int>{0, 1, 2});
        g.reverse_arc(1, 2);
        CHECK(g.has_arc(2, 1));
        CHECK(g.skeleton() == std::vector<Arc>{{0, 1}, {1, 2}});
        g.remove_arc(0, 1);
        CHECK(g.arc_count() == 1);
        CHECK_THROWS_AS(g.remove_arc(0, 1), DomainError);
        CHECK(g.is_acyclic());
    }

    TEST_CASE("BIC hand example and decomposition") {
        const auto d = DiscreteData({"X"}, {2}, {{0, 0, 0, 0, 0, 1, 1, 1, 1, 1}});
        CHECK(bic_score(Dag(1), d) == Approx(-8.0828).epsilon(1e-5));
        CHECK(bic_score(Dag(1), d) == Approx(10 * std::log(0.5) - 0.5 * std::log(10.0)).epsilon(1e-14));
        CHECK_THROWS_AS(bic_score(Dag(1), DiscreteData({"X"}, {2}, {{}})), DomainError);

        const auto data = synth::gen_bn_dataset(chain_bn(0.8), 300, 1);
        const Arc arcs[] = {{0, 1}, {0, 2}, {1, 2}};
        const auto g = Dag::from_arcs(3, arcs);
        double sum = 0;
        for (int v = 0; v < 3; ++v) sum += family_score(data, v, g.parents(v));
        CHECK(bic_score(g, data) == Approx(sum).epsilon(1e-14));
    }

    TEST_CASE("adding an edge between independent columns lowers the score on average") {
        double total = 0;
        for (int rep = 0; rep < 200; ++rep) {
            const auto d = synth::gen_bn_dataset(synth::independent_network(2, 2), 1000, 40 + rep);
            const Arc arcs[] = {{0, 1}};
            total += bic_score(Dag::from_arcs(2, arcs), d) - bic_score(Dag(2), d);
        }
        CHECK(total / 200 < 0);
    }

    TEST_CASE("two-column searches agree with exhaustive scoring") {
        for (int rep = 0; rep < 20; ++rep) {
            const auto indep = synth::gen_bn_dataset(synth::independent_network(2, 2), 1000, 600 + rep);
            const auto dep = synth::gen_bn_dataset(pair_bn(0.9), 1000, 700 + rep);
            for (const auto* d : {&indep, &dep}) {
                const Arc fwd[] = {{0, 1}}, back[] = {{1, 0}};
                const double best = std::max({bic_score(Dag(2), *d), bic_score(Dag::from_arcs(2, fwd), *d),
                                              bic_score(Dag::from_arcs(2, back), *d)});
                const auto learned = hill_climb(*d);
                CHECK(bic_score(learned, *d) == Approx(best).epsilon(1e-12));
            }
            CHECK(hill_climb(dep).skeleton() == std::vector<Arc>{{0, 1}});
        }
        const auto d = synth::gen_bn_dataset(synth::independent_network(2, 2), 1000, 3);
        CHECK(hill_climb(d).arc_count() == 0);
    }

    TEST_CASE("chain skeleton recovered on at least 95 of 100 seeds") {
        int ok = 0;
        const auto truth = chain_bn(0.8);
        for (int seed = 0; seed < 100; ++seed) {
            const auto d = synth::gen_bn_dataset(truth, 500, 2000 + seed);
            const auto g = hill_climb(d);
            CHECK(g.is_acyclic());
            ok += g.skeleton() == truth.dag.skeleton();
        }
        CHECK(ok >= 95);
    }

    TEST_CASE("search options") {
        const auto d = synth::gen_bn_dataset(chain_bn(0.9), 400, 5);
        HillClimbOptions none;
        none.max_parents = 0;
        CHECK(hill_climb(d, none).arc_count() == 0);
        HillClimbOptions neg;
        neg.max_parents = -1;
        CHECK_THROWS_AS(hill_climb(d, neg), DomainError);
        HillClimbOptions r;
        r.restarts = 5;
        r.seed = 9;
        const auto a = hill_climb_search(d, r);
        CHECK(a.score >= hill_climb_search(d).score - 1e-9);
        CHECK(hill_climb_search(d, r).dag == a.dag);
        CHECK_THROWS_AS(hill_climb(DiscreteData({"X"}, {2}, {{0, 1}})), DomainError);
    }

    TEST_CASE("MLE fitting") {
        const auto d = DiscreteData({"X"}, {2}, {{0, 0, 0, 0, 0, 0, 0, 1, 1, 1}});
        const auto bn = fit_mle(Dag(1), d);
        CHECK(bn.cpts[0](0, 0) == Approx(0.7));
        CHECK(bn.cpts[0](0, 1) == Approx(0.3));

        const auto e = DiscreteData({"X"}, {2}, {{1, 1, 1, 1}});
        const auto lap = fit_mle(Dag(1), e, 1.0);
        CHECK(lap.cpts[0](0, 0) == Approx(1.0 / 6.0));
        CHECK(lap.cpts[0](0, 1) == Approx(5.0 / 6.0));

        // Parent value 1 never observed: uniform row.
        const auto p = two_columns({0, 0, 0}, {0, 1, 1});
        const Arc arcs[] = {{0, 1}};
        const auto fitted = fit_mle(Dag::from_arcs(2, arcs), p);
        CHECK(fitted.cpts[1](1, 0) == 0.5);
        CHECK(fitted.cpts[1](0, 1) == Approx(2.0 / 3.0));

        const auto big = synth::gen_bn_dataset(synth::planted_feature_network(), 300, 3);
        const auto full = fit_mle(synth::planted_feature_network().dag, big, 0.5);
        for (const auto& cpt : full.cpts)
            for (std::size_t r = 0; r < cpt.rows(); ++r) {
                double s = 0;
                for (int v = 0; v < cpt.cardinality; ++v) s += cpt(r, v);
                CHECK(s == Approx(1.0).epsilon(1e-9));
            }
    }

    TEST_CASE("CPT row order: ascending parents, last fastest") {
        const Arc arcs[] = {{0, 2}, {1, 2}};
        // X0 card 2, X1 card 3; row = x0 * 3 + x1.
        const auto d = DiscreteData({"A", "B", "C"}, {2, 3, 2}, {{0, 0, 1, 1, 1}, {0, 2, 0, 2, 2}, {0, 1, 1, 0, 0}});
        const auto bn = fit_mle(Dag::from_arcs(3, arcs), d);
        const auto& c = bn.cpts[2];
        CHECK(c.parents == std::vector<int>{0, 1});
        CHECK(c.row_of(std::vector<int>{1, 2}) == 5);
        CHECK(c(5, 0) == 1.0);
        CHECK(c(2, 1) == 1.0);
    }

    TEST_CASE("ancestral sampling") {
        const auto root = make_bn(Dag(1), {"X"}, {2}, {{0.5, 0.5}});
        const auto d = ancestral_sample(root, 10000, 12);
        double ones = 0;
        for (int v : d.column(0)) ones += v;
        CHECK(std::fabs(ones / 10000 - 0.5) < 0.02);
        CHECK(ancestral_sample(root, 100, 5) == ancestral_sample(root, 100, 5));
        const auto det = make_bn(Dag::from_arcs(2, std::vector<Arc>{{0, 1}}), {"X", "Y"}, {2, 2},
                                 {{0.0, 1.0}, {1.0, 0.0, 0.0, 1.0}});
        const auto t = ancestral_sample(det, 20, 1);
        for (std::size_t r = 0; r < t.rows(); ++r) {
            CHECK(t(r, 0) == 1);
            CHECK(t(r, 1) == 1);
        }
        CHECK_THROWS_AS(make_bn(Dag(1), {"X"}, {2}, {{0.5, 0.6}}), DomainError);
    }

    TEST_CASE("bootstrap arc strength") {
        std::vector<int> x, y;
        std::mt19937_64 rng(2);
        for (int i = 0; i < 200; ++i) {
            x.push_back(static_cast<int>(rng() & 1));
            y.push_back(x.back());
        }
        const auto det = two_columns(x, y);
        const auto b = bootstrap_arc_strength(det, 50, 4);
        CHECK(b.undirected_frequency(0, 1) == 1.0);
        CHECK(b.replicates == 50);

        const auto one = bootstrap_arc_strength(det, 1, 4);
        CHECK((one.undirected_frequency(0, 1) == 0.0 || one.undirected_frequency(0, 1) == 1.0));

        const auto indep = synth::gen_bn_dataset(synth::independent_network(3, 4), 1000, 8);
        const auto ib = bootstrap_arc_strength(indep, 200, 8);
        for (int a = 0; a < 3; ++a)
            for (int c = a + 1; c < 3; ++c) CHECK(ib.undirected_frequency(a, c) < 0.25);
        // Replicate-indexed seeding: a longer run starts with the same replicates.
        const auto again = bootstrap_arc_strength(indep, 200, 8);
        CHECK(again.undirected == ib.undirected);
    }

    TEST_CASE("score loss") {
        const auto indep = synth::gen_bn_dataset(synth::independent_network(2, 2), 1000, 77);
        const Arc arcs[] = {{0, 1}};
        const auto g = Dag::from_arcs(2, arcs);
        CHECK(score_loss(g, indep, 0, 1) < 0);
        CHECK_THROWS_AS(score_loss(g, indep, 1, 0), DomainError);

        double prev = 0;
        for (std::size_t n : {100, 400, 1600}) {
            std::vector<int> x(n), y(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = y[i] = static_cast<int>(i % 2);
            const double loss = score_loss(g, two_columns(x, y), 0, 1);
            CHECK(loss == Approx(static_cast<double>(n) * std::log(2.0) - 0.5 * std::log(static_cast<double>(n))).epsilon(1e-9));
            CHECK(loss > prev);
            prev = loss;
        }

        const auto d = synth::gen_bn_dataset(chain_bn(0.8), 300, 9);
        const Arc chain[] = {{0, 1}, {1, 2}};
        const auto cg = Dag::from_arcs(3, chain);
        const auto losses = score_loss_strength(cg, d);
        REQUIRE(losses.size() == 2);
        auto without = cg;
        without.remove_arc(0, 1);
        CHECK(family_score(d, 2, without.parents(2)) == family_score(d, 2, cg.parents(2)));
        CHECK(losses[0].loss == Approx(bic_score(cg, d) - bic_score(without, d)).epsilon(1e-12));
    }

    TEST_CASE("mutual information properties") {
        std::mt19937_64 rng(10);
        for (int rep = 0; rep < 200; ++rep) {
            const int kx = 2 + rep % 3, ky = 2 + rep % 4;
            std::vector<int> x(60), y(60);
            for (std::size_t i = 0; i < 60; ++i) {
                x[i] = static_cast<int>(rng() % static_cast<unsigned>(kx));
                y[i] = rep % 2 ? (x[i] + static_cast<int>(rng() % 2)) % ky : static_cast<int>(rng() % static_cast<unsigned>(ky));
            }
            const auto a = mutual_information(x, y);
            const auto b = mutual_information(y, x);
            CHECK(a.nats == Approx(b.nats).epsilon(1e-12));
            CHECK(a.nats >= -1e-15);
            CHECK(a.nats <= std::min(entropy(x), entropy(y)) + 1e-12);
            CHECK(a.n_times_nats == Approx(60 * a.nats));
        }
        // Direct formula for the joint counts [[4,1],[1,4]].
        const std::vector<int> u{0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, v{0, 0, 0, 0, 1, 0, 1, 1, 1, 1};
        const double formula = 0.8 * std::log(1.6) + 0.2 * std::log(0.4);
        CHECK(mutual_information(u, v).nats == Approx(formula).epsilon(1e-14));
        CHECK_THROWS_AS(mutual_information(u, std::vector<int>{0, 1}), DomainError);
    }

    TEST_CASE("report writers") {
        const auto d = synth::gen_bn_dataset(synth::planted_feature_network(), 400, 1);
        const auto g = hill_climb(d);
        const auto rep = arc_strength_report(g, d, bootstrap_arc_strength(d, 10, 1));
        REQUIRE(rep.size() == g.arc_count());
        std::ostringstream arcs, strength, cpts, dot;
        write_arcs_csv(arcs, g, d.names());
        write_strength_csv(strength, rep, d.names());
        write_cpts_json(cpts, fit_mle(g, d));
        write_dot(dot, g, d.names(), rep);
        CHECK(arcs.str().rfind("parent,child\n", 0) == 0);
        CHECK(strength.str().rfind("parent,child,boot_frequency,score_loss", 0) == 0);
        const auto j = nlohmann::json::parse(cpts.str());
        CHECK(j.contains("edit_distance"));
        CHECK(dot.str().rfind("digraph", 0) == 0);
    }
}
