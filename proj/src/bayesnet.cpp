#include "treegaze/bayesnet.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>

#include <json.hpp>

#include "treegaze/csv.hpp"
#include "treegaze/error.hpp"
#include "treegaze/random.hpp"

namespace treegaze::bn {

// ---------------------------------------------------------------------------
// DiscreteData

DiscreteData::DiscreteData(std::vector<std::string> names, std::vector<int> cardinalities,
                           std::vector<std::vector<int>> columns)
    : names_(std::move(names)), cards_(std::move(cardinalities)), columns_(std::move(columns)) {
    if (names_.size() != columns_.size() || cards_.size() != columns_.size())
        throw DomainError("discrete data: names, cardinalities and columns differ in count");
    const auto n = rows();
    for (std::size_t v = 0; v < columns_.size(); ++v) {
        if (columns_[v].size() != n) throw DomainError("discrete data: columns differ in length");
        if (cards_[v] < 1) throw DomainError("discrete data: cardinality of " + names_[v] + " must be >= 1");
        for (int x : columns_[v])
            if (x < 0 || x >= cards_[v])
                throw DomainError("discrete data: value " + std::to_string(x) + " of " + names_[v] +
                                  " outside [0, " + std::to_string(cards_[v]) + ")");
    }
}

DiscreteData DiscreteData::from_columns(std::vector<std::vector<int>> columns) {
    std::vector<std::string> names;
    std::vector<int> cards;
    for (std::size_t v = 0; v < columns.size(); ++v) {
        names.push_back("X" + std::to_string(v + 1));
        const int mx = columns[v].empty() ? 0 : *std::max_element(columns[v].begin(), columns[v].end());
        cards.push_back(std::max(1, mx + 1));
    }
    return DiscreteData(std::move(names), std::move(cards), std::move(columns));
}

DiscreteData DiscreteData::select_rows(std::span<const std::size_t> rows) const {
    DiscreteData out;
    out.names_ = names_;
    out.cards_ = cards_;
    out.columns_.resize(columns_.size());
    for (std::size_t v = 0; v < columns_.size(); ++v) {
        out.columns_[v].reserve(rows.size());
        for (auto r : rows) out.columns_[v].push_back(columns_[v].at(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dag

Dag::Dag(std::size_t node_count) : parents_(node_count) {}

Dag Dag::from_arcs(std::size_t node_count, std::span<const Arc> arcs) {
    Dag d(node_count);
    for (auto [p, c] : arcs) d.add_arc(p, c);
    return d;
}

void Dag::check_node(int v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= parents_.size())
        throw DomainError("node " + std::to_string(v) + " out of range");
}

bool Dag::has_arc(int parent, int child) const {
    check_node(parent);
    check_node(child);
    const auto& ps = parents_[static_cast<std::size_t>(child)];
    return std::binary_search(ps.begin(), ps.end(), parent);
}

std::vector<Arc> Dag::arcs() const {
    std::vector<Arc> out;
    for (std::size_t c = 0; c < parents_.size(); ++c)
        for (int p : parents_[c]) out.emplace_back(p, static_cast<int>(c));
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t Dag::arc_count() const {
    std::size_t n = 0;
    for (const auto& ps : parents_) n += ps.size();
    return n;
}

bool Dag::reaches(int from, int to) const {
    check_node(from);
    check_node(to);
    if (from == to) return true;
    // Walk parents backwards from `to`.
    std::vector<char> seen(parents_.size(), 0);
    std::vector<int> stack{to};
    seen[static_cast<std::size_t>(to)] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int p : parents_[static_cast<std::size_t>(v)]) {
            if (p == from) return true;
            if (!seen[static_cast<std::size_t>(p)]) {
                seen[static_cast<std::size_t>(p)] = 1;
                stack.push_back(p);
            }
        }
    }
    return false;
}

bool Dag::can_add(int parent, int child) const {
    return parent != child && !has_arc(parent, child) && !reaches(child, parent);
}

void Dag::add_arc(int parent, int child) {
    check_node(parent);
    check_node(child);
    if (parent == child) throw DomainError("self-loop on node " + std::to_string(parent));
    if (has_arc(parent, child)) throw DomainError("duplicate arc");
    if (reaches(child, parent)) throw DomainError("arc would create a cycle");
    auto& ps = parents_[static_cast<std::size_t>(child)];
    ps.insert(std::upper_bound(ps.begin(), ps.end(), parent), parent);
}

void Dag::remove_arc(int parent, int child) {
    if (!has_arc(parent, child)) throw DomainError("arc not in graph");
    auto& ps = parents_[static_cast<std::size_t>(child)];
    ps.erase(std::lower_bound(ps.begin(), ps.end(), parent));
}

void Dag::reverse_arc(int parent, int child) {
    remove_arc(parent, child);
    try {
        add_arc(child, parent);
    } catch (...) {
        add_arc(parent, child);
        throw;
    }
}

std::vector<int> Dag::topological_order() const {
    const auto n = parents_.size();
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<int>> children(n);
    for (std::size_t c = 0; c < n; ++c) {
        indeg[c] = static_cast<int>(parents_[c].size());
        for (int p : parents_[c]) children[static_cast<std::size_t>(p)].push_back(static_cast<int>(c));
    }
    std::vector<int> order;
    std::vector<int> ready;
    for (std::size_t v = n; v-- > 0;)
        if (indeg[v] == 0) ready.push_back(static_cast<int>(v));
    while (!ready.empty()) {
        const int v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (int c : children[static_cast<std::size_t>(v)])
            if (--indeg[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
    }
    return order;
}

bool Dag::is_acyclic() const { return topological_order().size() == parents_.size(); }

std::vector<Arc> Dag::skeleton() const {
    auto out = arcs();
    for (auto& a : out)
        if (a.first > a.second) std::swap(a.first, a.second);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// BIC

double family_score(const DiscreteData& data, int node, std::span<const int> parents) {
    const std::size_t n = data.rows();
    if (n == 0) throw DomainError("BIC undefined on empty data");
    const auto& cards = data.cardinalities();
    const int card = cards.at(static_cast<std::size_t>(node));
    std::size_t q = 1;
    for (int p : parents) q *= static_cast<std::size_t>(cards.at(static_cast<std::size_t>(p)));

    std::vector<std::size_t> counts(q * static_cast<std::size_t>(card), 0);
    const auto child = data.column(static_cast<std::size_t>(node));
    std::vector<std::span<const int>> pcols;
    for (int p : parents) pcols.push_back(data.column(static_cast<std::size_t>(p)));
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t row = 0;
        for (std::size_t k = 0; k < pcols.size(); ++k)
            row = row * static_cast<std::size_t>(cards[static_cast<std::size_t>(parents[k])]) +
                  static_cast<std::size_t>(pcols[k][r]);
        ++counts[row * static_cast<std::size_t>(card) + static_cast<std::size_t>(child[r])];
    }
    double loglik = 0.0;
    for (std::size_t row = 0; row < q; ++row) {
        std::size_t total = 0;
        for (int k = 0; k < card; ++k) total += counts[row * static_cast<std::size_t>(card) + static_cast<std::size_t>(k)];
        if (total == 0) continue;
        for (int k = 0; k < card; ++k) {
            const auto c = counts[row * static_cast<std::size_t>(card) + static_cast<std::size_t>(k)];
            if (c > 0) loglik += static_cast<double>(c) * std::log(static_cast<double>(c) / static_cast<double>(total));
        }
    }
    const double params = static_cast<double>(card - 1) * static_cast<double>(q);
    return loglik - 0.5 * params * std::log(static_cast<double>(n));
}

double bic_score(const Dag& dag, const DiscreteData& data) {
    if (dag.node_count() != data.vars()) throw DomainError("graph and data disagree on variable count");
    double s = 0.0;
    for (std::size_t v = 0; v < dag.node_count(); ++v)
        s += family_score(data, static_cast<int>(v), dag.parents(static_cast<int>(v)));
    return s;
}

// ---------------------------------------------------------------------------
// Hill climbing

namespace {

constexpr double kMinImprovement = 1e-9;
constexpr double kTieTolerance = 1e-9;

class FamilyCache {
public:
    explicit FamilyCache(const DiscreteData& data) : data_(data) {}

    double operator()(int node, const std::vector<int>& parents) {
        std::uint64_t mask = 0;
        for (int p : parents) mask |= std::uint64_t{1} << p;
        const auto key = std::make_pair(node, mask);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        const double s = family_score(data_, node, parents);
        cache_.emplace(key, s);
        return s;
    }

private:
    const DiscreteData& data_;
    std::map<std::pair<int, std::uint64_t>, double> cache_;
};

std::vector<int> with(std::vector<int> ps, int v) {
    ps.insert(std::upper_bound(ps.begin(), ps.end(), v), v);
    return ps;
}

std::vector<int> without(std::vector<int> ps, int v) {
    ps.erase(std::remove(ps.begin(), ps.end(), v), ps.end());
    return ps;
}

enum class Move { Add, Delete, Reverse };

HillClimbResult climb(const DiscreteData& data, Dag dag, int max_parents, FamilyCache& fam) {
    const int n = static_cast<int>(data.vars());
    std::vector<double> node_score(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) node_score[static_cast<std::size_t>(v)] = fam(v, dag.parents(v));

    HillClimbResult res;
    while (true) {
        double best = kMinImprovement;
        bool found = false;
        Move best_move = Move::Add;
        int bi = -1, bj = -1;
        auto consider = [&](Move m, int i, int j, double delta) {
            if (delta > best + (found ? kTieTolerance : 0.0)) {
                best = delta;
                best_move = m;
                bi = i;
                bj = j;
                found = true;
            }
        };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j || dag.adjacent(i, j)) continue;
                if (static_cast<int>(dag.parents(j).size()) >= max_parents) continue;
                if (dag.reaches(j, i)) continue;
                consider(Move::Add, i, j, fam(j, with(dag.parents(j), i)) - node_score[static_cast<std::size_t>(j)]);
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j || !dag.has_arc(i, j)) continue;
                consider(Move::Delete, i, j, fam(j, without(dag.parents(j), i)) - node_score[static_cast<std::size_t>(j)]);
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j || !dag.has_arc(i, j)) continue;
                if (static_cast<int>(dag.parents(i).size()) >= max_parents) continue;
                dag.remove_arc(i, j);
                const bool cyclic = dag.reaches(i, j);
                dag.add_arc(i, j);
                if (cyclic) continue;
                const double delta = fam(j, without(dag.parents(j), i)) - node_score[static_cast<std::size_t>(j)] +
                                     fam(i, with(dag.parents(i), j)) - node_score[static_cast<std::size_t>(i)];
                consider(Move::Reverse, i, j, delta);
            }
        if (!found) break;
        switch (best_move) {
            case Move::Add: dag.add_arc(bi, bj); break;
            case Move::Delete: dag.remove_arc(bi, bj); break;
            case Move::Reverse: dag.reverse_arc(bi, bj); break;
        }
        node_score[static_cast<std::size_t>(bi)] = fam(bi, dag.parents(bi));
        node_score[static_cast<std::size_t>(bj)] = fam(bj, dag.parents(bj));
        ++res.steps;
    }
    res.score = std::accumulate(node_score.begin(), node_score.end(), 0.0);
    res.dag = std::move(dag);
    return res;
}

void check_search_input(const DiscreteData& data, int max_parents) {
    if (max_parents < 0) throw DomainError("max_parents must be >= 0");
    if (data.vars() < 2) throw DomainError("structure search needs at least two variables");
    if (data.vars() > 63) throw DomainError("structure search supports at most 63 variables");
    if (data.rows() == 0) throw DomainError("structure search on empty data");
}

}  // namespace

HillClimbResult hill_climb_from(const DiscreteData& data, Dag start, int max_parents) {
    check_search_input(data, max_parents);
    if (start.node_count() != data.vars()) throw DomainError("start graph and data disagree on variable count");
    FamilyCache fam(data);
    return climb(data, std::move(start), max_parents, fam);
}

HillClimbResult hill_climb_search(const DiscreteData& data, const HillClimbOptions& options) {
    check_search_input(data, options.max_parents);
    if (options.restarts < 0 || options.perturb < 0) throw DomainError("restarts and perturb must be >= 0");
    FamilyCache fam(data);
    auto best = climb(data, Dag(data.vars()), options.max_parents, fam);

    Rng rng = make_rng(options.seed);
    const int n = static_cast<int>(data.vars());
    std::uniform_int_distribution<int> node(0, n - 1);
    for (int r = 0; r < options.restarts; ++r) {
        Dag start = best.dag;
        for (int added = 0, attempts = 0; added < options.perturb && attempts < 100 * (options.perturb + 1); ++attempts) {
            const int i = node(rng), j = node(rng);
            if (i == j || start.adjacent(i, j) || !start.can_add(i, j)) continue;
            if (static_cast<int>(start.parents(j).size()) >= options.max_parents) continue;
            start.add_arc(i, j);
            ++added;
        }
        auto cand = climb(data, std::move(start), options.max_parents, fam);
        if (cand.score > best.score + kMinImprovement) best = std::move(cand);
    }
    return best;
}

Dag hill_climb(const DiscreteData& data, const HillClimbOptions& options) {
    return hill_climb_search(data, options).dag;
}

// ---------------------------------------------------------------------------
// Parameters

std::size_t Cpt::row_of(std::span<const int> parent_values) const {
    if (parent_values.size() != parents.size()) throw DomainError("parent configuration has wrong length");
    std::size_t row = 0;
    for (std::size_t k = 0; k < parents.size(); ++k)
        row = row * static_cast<std::size_t>(parent_cardinalities[k]) + static_cast<std::size_t>(parent_values[k]);
    return row;
}

DiscreteBN fit_mle(const Dag& dag, const DiscreteData& data, double alpha) {
    if (dag.node_count() != data.vars()) throw DomainError("graph and data disagree on variable count");
    if (!(alpha >= 0.0)) throw DomainError("smoothing alpha must be >= 0");
    DiscreteBN bn;
    bn.dag = dag;
    bn.names = data.names();
    bn.cardinalities = data.cardinalities();
    for (std::size_t v = 0; v < dag.node_count(); ++v) {
        Cpt cpt;
        cpt.node = static_cast<int>(v);
        cpt.parents = dag.parents(static_cast<int>(v));
        cpt.cardinality = bn.cardinalities[v];
        std::size_t q = 1;
        for (int p : cpt.parents) {
            cpt.parent_cardinalities.push_back(bn.cardinalities[static_cast<std::size_t>(p)]);
            q *= static_cast<std::size_t>(cpt.parent_cardinalities.back());
        }
        const auto card = static_cast<std::size_t>(cpt.cardinality);
        std::vector<double> counts(q * card, 0.0);
        std::vector<int> pv(cpt.parents.size());
        for (std::size_t r = 0; r < data.rows(); ++r) {
            for (std::size_t k = 0; k < cpt.parents.size(); ++k) pv[k] = data(r, static_cast<std::size_t>(cpt.parents[k]));
            counts[cpt.row_of(pv) * card + static_cast<std::size_t>(data(r, v))] += 1.0;
        }
        cpt.probs.resize(q * card);
        for (std::size_t row = 0; row < q; ++row) {
            double total = 0.0;
            for (std::size_t k = 0; k < card; ++k) total += counts[row * card + k];
            const double denom = total + alpha * static_cast<double>(card);
            for (std::size_t k = 0; k < card; ++k)
                cpt.probs[row * card + k] = denom > 0.0 ? (counts[row * card + k] + alpha) / denom
                                                        : 1.0 / static_cast<double>(card);
        }
        bn.cpts.push_back(std::move(cpt));
    }
    return bn;
}

DiscreteBN make_bn(Dag dag, std::vector<std::string> names, std::vector<int> cardinalities,
                   std::vector<std::vector<double>> cpt_probs) {
    const auto n = dag.node_count();
    if (names.size() != n || cardinalities.size() != n || cpt_probs.size() != n)
        throw DomainError("network definition sizes disagree with the graph");
    DiscreteBN bn;
    for (std::size_t v = 0; v < n; ++v) {
        Cpt cpt;
        cpt.node = static_cast<int>(v);
        cpt.parents = dag.parents(static_cast<int>(v));
        cpt.cardinality = cardinalities[v];
        std::size_t q = 1;
        for (int p : cpt.parents) {
            cpt.parent_cardinalities.push_back(cardinalities[static_cast<std::size_t>(p)]);
            q *= static_cast<std::size_t>(cpt.parent_cardinalities.back());
        }
        const auto card = static_cast<std::size_t>(cpt.cardinality);
        if (cpt_probs[v].size() != q * card)
            throw DomainError("CPT of " + names[v] + " has " + std::to_string(cpt_probs[v].size()) +
                              " entries, expected " + std::to_string(q * card));
        for (std::size_t row = 0; row < q; ++row) {
            double sum = 0.0;
            for (std::size_t k = 0; k < card; ++k) {
                const double p = cpt_probs[v][row * card + k];
                if (!(p >= 0.0)) throw DomainError("negative probability in CPT of " + names[v]);
                sum += p;
            }
            if (std::fabs(sum - 1.0) > 1e-9) throw DomainError("CPT row of " + names[v] + " does not sum to 1");
        }
        cpt.probs = std::move(cpt_probs[v]);
        bn.cpts.push_back(std::move(cpt));
    }
    bn.dag = std::move(dag);
    bn.names = std::move(names);
    bn.cardinalities = std::move(cardinalities);
    return bn;
}

DiscreteData ancestral_sample(const DiscreteBN& bn, std::size_t n, std::uint64_t seed) {
    const auto vars = bn.dag.node_count();
    std::vector<std::vector<int>> cols(vars, std::vector<int>(n, 0));
    const auto order = bn.dag.topological_order();
    Rng rng = make_rng(seed);
    std::vector<int> pv;
    for (std::size_t r = 0; r < n; ++r) {
        for (int v : order) {
            const auto& cpt = bn.cpts[static_cast<std::size_t>(v)];
            pv.resize(cpt.parents.size());
            for (std::size_t k = 0; k < cpt.parents.size(); ++k)
                pv[k] = cols[static_cast<std::size_t>(cpt.parents[k])][r];
            const auto row = cpt.row_of(pv);
            const double u = uniform01(rng);
            double acc = 0.0;
            int value = cpt.cardinality - 1;
            for (int k = 0; k < cpt.cardinality; ++k) {
                acc += cpt(row, k);
                if (u < acc) {
                    value = k;
                    break;
                }
            }
            // Zero-probability tail values are never emitted.
            while (value > 0 && cpt(row, value) == 0.0) --value;
            cols[static_cast<std::size_t>(v)][r] = value;
        }
    }
    return DiscreteData(bn.names, bn.cardinalities, std::move(cols));
}

// ---------------------------------------------------------------------------
// Strength

BootstrapArcs bootstrap_arc_strength(const DiscreteData& data, std::size_t replicates, std::uint64_t seed,
                                     const HillClimbOptions& search) {
    if (replicates < 1) throw DomainError("bootstrap needs at least one replicate");
    const auto n = data.vars();
    BootstrapArcs out;
    out.replicates = replicates;
    out.node_count = n;
    out.directed.assign(n * n, 0.0);
    out.undirected.assign(n * n, 0.0);
    std::vector<std::size_t> rows(data.rows());
    for (std::size_t b = 0; b < replicates; ++b) {
        Rng rng = make_rng(seed, b + 1);
        std::uniform_int_distribution<std::size_t> pick(0, data.rows() - 1);
        for (auto& r : rows) r = pick(rng);
        HillClimbOptions opts = search;
        opts.seed = rng();
        const Dag dag = hill_climb(data.select_rows(rows), opts);
        for (auto [p, c] : dag.arcs()) {
            const auto pi = static_cast<std::size_t>(p), ci = static_cast<std::size_t>(c);
            out.directed[pi * n + ci] += 1.0;
            out.undirected[pi * n + ci] += 1.0;
            out.undirected[ci * n + pi] += 1.0;
        }
    }
    const double b = static_cast<double>(replicates);
    for (auto& x : out.directed) x /= b;
    for (auto& x : out.undirected) x /= b;
    return out;
}

double score_loss(const Dag& dag, const DiscreteData& data, int parent, int child) {
    if (!dag.has_arc(parent, child)) throw DomainError("arc " + std::to_string(parent) + "->" +
                                                       std::to_string(child) + " not in graph");
    const auto& ps = dag.parents(child);
    return family_score(data, child, ps) - family_score(data, child, without(ps, parent));
}

std::vector<ArcLoss> score_loss_strength(const Dag& dag, const DiscreteData& data) {
    std::vector<ArcLoss> out;
    for (const auto& a : dag.arcs()) out.push_back({a, score_loss(dag, data, a.first, a.second)});
    return out;
}

namespace {

std::size_t levels(std::span<const int> x) {
    int mx = -1;
    for (int v : x) {
        if (v < 0) throw DomainError("discrete values must be non-negative");
        mx = std::max(mx, v);
    }
    return static_cast<std::size_t>(mx + 1);
}

}  // namespace

double entropy(std::span<const int> x) {
    if (x.empty()) throw DomainError("entropy of empty column");
    std::vector<double> c(levels(x), 0.0);
    for (int v : x) c[static_cast<std::size_t>(v)] += 1.0;
    const double n = static_cast<double>(x.size());
    double h = 0.0;
    for (double k : c)
        if (k > 0) h -= k / n * std::log(k / n);
    return h;
}

MutualInformation mutual_information(std::span<const int> x, std::span<const int> y) {
    if (x.size() != y.size()) throw DomainError("mutual information: lengths differ");
    if (x.empty()) throw DomainError("mutual information of empty columns");
    const auto kx = levels(x), ky = levels(y);
    std::vector<double> joint(kx * ky, 0.0), px(kx, 0.0), py(ky, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto a = static_cast<std::size_t>(x[i]), b = static_cast<std::size_t>(y[i]);
        joint[a * ky + b] += 1.0;
        px[a] += 1.0;
        py[b] += 1.0;
    }
    const double n = static_cast<double>(x.size());
    double mi = 0.0;
    for (std::size_t a = 0; a < kx; ++a)
        for (std::size_t b = 0; b < ky; ++b) {
            const double c = joint[a * ky + b];
            if (c > 0) mi += c / n * std::log(c * n / (px[a] * py[b]));
        }
    mi = std::max(0.0, mi);
    return {mi, n * mi};
}

std::vector<ArcStrength> arc_strength_report(const Dag& dag, const DiscreteData& data, const BootstrapArcs& boot) {
    if (boot.node_count != dag.node_count()) throw DomainError("bootstrap result and graph disagree on node count");
    std::vector<ArcStrength> out;
    for (const auto& a : dag.arcs()) {
        ArcStrength s;
        s.arc = a;
        s.boot_frequency = boot.undirected_frequency(a.first, a.second);
        s.directed_frequency = boot.directed_frequency(a.first, a.second);
        s.score_loss = score_loss(dag, data, a.first, a.second);
        s.mi = mutual_information(data.column(static_cast<std::size_t>(a.first)),
                                  data.column(static_cast<std::size_t>(a.second)));
        out.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Export

namespace {

const std::string& name_of(const std::vector<std::string>& names, int v) {
    return names.at(static_cast<std::size_t>(v));
}

}  // namespace

void write_arcs_csv(std::ostream& out, const Dag& dag, const std::vector<std::string>& names) {
    out << "parent,child\n";
    for (auto [p, c] : dag.arcs()) out << csv::escape(name_of(names, p)) << ',' << csv::escape(name_of(names, c)) << '\n';
}

void write_strength_csv(std::ostream& out, std::span<const ArcStrength> report, const std::vector<std::string>& names) {
    out << "parent,child,boot_frequency,score_loss,directed_frequency,mi_nats,n_mi\n";
    for (const auto& s : report) {
        out << csv::escape(name_of(names, s.arc.first)) << ',' << csv::escape(name_of(names, s.arc.second)) << ','
            << csv::format_double(s.boot_frequency) << ',' << csv::format_double(s.score_loss) << ','
            << csv::format_double(s.directed_frequency) << ',' << csv::format_double(s.mi.nats) << ','
            << csv::format_double(s.mi.n_times_nats) << '\n';
    }
}

void write_cpts_json(std::ostream& out, const DiscreteBN& bn) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& cpt : bn.cpts) {
        nlohmann::ordered_json node;
        node["cardinality"] = cpt.cardinality;
        nlohmann::ordered_json parents = nlohmann::ordered_json::array();
        for (int p : cpt.parents) parents.push_back(name_of(bn.names, p));
        node["parents"] = parents;
        node["parent_cardinalities"] = cpt.parent_cardinalities;
        node["row_order"] = "mixed radix over parents, last parent fastest";
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (std::size_t r = 0; r < cpt.rows(); ++r) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (int k = 0; k < cpt.cardinality; ++k) row.push_back(cpt(r, k));
            rows.push_back(row);
        }
        node["probabilities"] = rows;
        j[name_of(bn.names, cpt.node)] = node;
    }
    out << j.dump(2) << '\n';
}

void write_dot(std::ostream& out, const Dag& dag, const std::vector<std::string>& names,
               std::span<const ArcStrength> report) {
    out << "digraph network {\n  rankdir=LR;\n  node [shape=ellipse];\n";
    for (std::size_t v = 0; v < dag.node_count(); ++v) out << "  \"" << names.at(v) << "\";\n";
    for (auto [p, c] : dag.arcs()) {
        out << "  \"" << name_of(names, p) << "\" -> \"" << name_of(names, c) << '"';
        for (const auto& s : report) {
            if (s.arc == Arc{p, c}) {
                out << " [label=\"" << std::fixed << std::setprecision(2) << s.boot_frequency << " / "
                    << s.score_loss << "\"]";
                out.unsetf(std::ios::fixed);
                out << std::setprecision(6);
                break;
            }
        }
        out << ";\n";
    }
    out << "}\n";
}

}  // namespace treegaze::bn
