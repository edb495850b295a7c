#include <doctest.h>

#include <random>
#include <sstream>

#include "treegaze/corpus.hpp"
#include "treegaze/error.hpp"

using namespace treegaze;

namespace {

Token tok(int index, int head, std::string deprel = "dep") {
    Token t;
    t.index = index;
    t.surface = "w" + std::to_string(index);
    t.head = head;
    t.deprel = std::move(deprel);
    return t;
}

Sentence from_heads(const std::vector<int>& heads, const std::vector<std::string>& rels = {}) {
    std::vector<Token> tokens;
    for (std::size_t i = 0; i < heads.size(); ++i)
        tokens.push_back(tok(static_cast<int>(i + 1), heads[i], rels.empty() ? "dep" : rels[i]));
    return annotate(Sentence::make("s", tokens));
}

// Depth by walking up the head chain, independent of compute_depths.
int walk_depth(const Sentence& s, int index) {
    int d = 0;
    while (s.token(index).head != 0) {
        index = s.token(index).head;
        ++d;
    }
    return d;
}

std::vector<int> random_tree(std::mt19937_64& rng, int n) {
    // Random recursive tree over a shuffled order, root at a random position.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> heads(static_cast<std::size_t>(n), 0);
    for (int k = 1; k < n; ++k) {
        std::uniform_int_distribution<int> pick(0, k - 1);
        heads[static_cast<std::size_t>(order[static_cast<std::size_t>(k)] - 1)] = order[static_cast<std::size_t>(pick(rng))];
    }
    return heads;
}

const char* kThreeTokens =
    "# sent_id = ex1\n"
    "1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_\n"
    "2\tcat\tcat\tNOUN\t_\t_\t3\tnsubj\t_\t_\n"
    "3\tran\trun\tVERB\t_\t_\t0\troot\t_\t_\n"
    "\n";

}  // namespace

TEST_SUITE("corpus") {
    TEST_CASE("parse_conllu transcribes ID, FORM, HEAD and DEPREL") {
        const auto s = parse_conllu(kThreeTokens);
        REQUIRE(s.size() == 1);
        CHECK(s[0].id() == "ex1");
        REQUIRE(s[0].size() == 3);
        CHECK(s[0].token(1).head == 2);
        CHECK(s[0].token(2).head == 3);
        CHECK(s[0].token(3).head == 0);
        CHECK(s[0].token(1).surface == "The");
        CHECK(s[0].token(2).deprel == "nsubj");
    }

    TEST_CASE("empty document gives no sentences") {
        CHECK(parse_conllu("").empty());
        CHECK(parse_conllu("\n\n").empty());
        CHECK(parse_conllu("# only a comment\n\n").empty());
    }

    TEST_CASE("mutual heads with no root is a tree error naming the sentence") {
        const char* doc =
            "# sent_id = loop\n"
            "1\ta\t_\t_\t_\t_\t2\tdep\t_\t_\n"
            "2\tb\t_\t_\t_\t_\t1\tdep\t_\t_\n\n";
        try {
            parse_conllu(doc);
            FAIL("expected TreeError");
        } catch (const TreeError& e) {
            CHECK(e.sentence_id() == "loop");
        }
    }

    TEST_CASE("tree errors: multiple roots, out-of-range head, cycle below a root, self head") {
        CHECK_THROWS_AS(Sentence::make("m", {tok(1, 0), tok(2, 0)}), TreeError);
        CHECK_THROWS_AS(Sentence::make("r", {tok(1, 0), tok(2, 5)}), TreeError);
        CHECK_THROWS_AS(Sentence::make("c", {tok(1, 0), tok(2, 3), tok(3, 2)}), TreeError);
        CHECK_THROWS_AS(Sentence::make("self", {tok(1, 0), tok(2, 2)}), TreeError);
        CHECK_THROWS_AS(Sentence::make("gap", {tok(1, 0), tok(3, 1)}), TreeError);
    }

    TEST_CASE("malformed column count reports the line number") {
        const char* doc = "1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n2\tb\t_\t1\tdep\n\n";
        try {
            parse_conllu(doc);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }

    TEST_CASE("multiword ranges and empty nodes are skipped; CRLF and ordinal ids") {
        const char* doc =
            "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\r\n"
            "1\tdo\t_\t_\t_\t_\t0\troot\t_\t_\r\n"
            "2\tn't\t_\t_\t_\t_\t1\tadvmod\t_\t_\r\n"
            "2.1\tgo\t_\t_\t_\t_\t_\t_\t_\t_\r\n"
            "\r\n"
            "1\tyes\t_\t_\t_\t_\t0\troot\t_\t_\r\n";
        const auto s = parse_conllu(doc);
        REQUIRE(s.size() == 2);
        CHECK(s[0].id() == "1");
        CHECK(s[1].id() == "2");
        CHECK(s[0].size() == 2);
        CHECK(s[0].token(2).surface == "n't");
    }

    TEST_CASE("depths: root 0, child of root 1, chain 0..3") {
        const auto chain = from_heads({0, 1, 2, 3});
        for (int i = 1; i <= 4; ++i) CHECK(*chain.token(i).depth == i - 1);
        CHECK(max_depth(chain) == 3);
        const auto flat = from_heads({0, 1, 1, 1});
        CHECK(*flat.token(1).depth == 0);
        CHECK(*flat.token(3).depth == 1);
        CHECK(max_depth(flat) == 1);
        CHECK(max_depth(from_heads({0})) == 0);
    }

    TEST_CASE("roles: depth 0 and 1 are Head, depth 2 is NonHead") {
        const auto chain = from_heads({0, 1, 2});
        CHECK(*chain.token(1).role == Role::Head);
        CHECK(*chain.token(2).role == Role::Head);
        CHECK(*chain.token(3).role == Role::NonHead);
    }

    TEST_CASE("label_roles without depths is refused") {
        const auto raw = Sentence::make("s", {tok(1, 0)});
        CHECK_THROWS_AS(label_roles(raw), DomainError);
    }

    TEST_CASE("clause counting") {
        CHECK(count_clauses(from_heads({0, 1, 1}, {"root", "nsubj", "obj"})) == 1);
        CHECK(count_clauses(from_heads({0, 1, 1, 3}, {"root", "ccomp", "advcl", "det"})) == 3);
        CHECK(count_clauses(from_heads({0, 1}, {"root", "acl:relcl"})) == 2);
        CHECK(count_clauses(from_heads({0, 1, 1, 1, 1, 1}, {"root", "csubj", "xcomp", "parataxis", "acl", "conj"})) == 5);
    }

    TEST_CASE("properties on random trees") {
        std::mt19937_64 rng(7);
        for (int rep = 0; rep < 300; ++rep) {
            const int n = 1 + rep % 25;
            const auto s = from_heads(random_tree(rng, n));
            int roots = 0, heads = 0, nonheads = 0;
            for (const auto& t : s.tokens()) {
                roots += *t.depth == 0;
                CHECK(*t.depth == walk_depth(s, t.index));
                (*t.role == Role::Head ? heads : nonheads) += 1;
                CHECK((*t.role == Role::Head) == (*t.depth <= 1));
            }
            CHECK(roots == 1);
            CHECK(heads + nonheads == n);
            CHECK(compute_depths(s) == s);  // idempotent
        }
    }

    TEST_CASE("write then parse round-trips the consumed columns") {
        std::mt19937_64 rng(11);
        std::vector<Sentence> corpus;
        for (int k = 0; k < 20; ++k) {
            const auto heads = random_tree(rng, 2 + k % 9);
            std::vector<Token> tokens;
            for (std::size_t i = 0; i < heads.size(); ++i)
                tokens.push_back(tok(static_cast<int>(i + 1), heads[i], i % 3 ? "nmod:poss" : "obj"));
            corpus.push_back(Sentence::make("s" + std::to_string(k), tokens));
        }
        std::ostringstream out;
        write_conllu(out, corpus);
        CHECK(parse_conllu(out.str()) == corpus);
    }

    TEST_CASE("role table CSV") {
        auto s = parse_conllu(kThreeTokens);
        s[0] = annotate(s[0]);
        std::ostringstream out;
        write_role_table(out, s);
        CHECK(out.str() ==
              "sent_id,token_index,surface,head,deprel,depth,role\n"
              "ex1,1,The,2,det,2,NonHead\n"
              "ex1,2,cat,3,nsubj,1,Head\n"
              "ex1,3,ran,0,root,0,Head\n");
    }
}
