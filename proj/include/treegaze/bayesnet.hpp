#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace treegaze::bn {

/// Column-major table of discrete observations; value v of variable i lies in
/// [0, cardinalities[i]).
class DiscreteData {
public:
    DiscreteData() = default;
    /// Validates shapes and value ranges; throws DomainError.
    DiscreteData(std::vector<std::string> names, std::vector<int> cardinalities,
                 std::vector<std::vector<int>> columns);
    /// Names default to X1..Xn and cardinalities to 1 + the column maximum.
    static DiscreteData from_columns(std::vector<std::vector<int>> columns);

    std::size_t vars() const noexcept { return columns_.size(); }
    std::size_t rows() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::vector<int>& cardinalities() const noexcept { return cards_; }
    std::span<const int> column(std::size_t var) const { return columns_.at(var); }
    int operator()(std::size_t row, std::size_t var) const { return columns_[var][row]; }

    /// Rows picked by index (bootstrap resampling).
    DiscreteData select_rows(std::span<const std::size_t> rows) const;

    friend bool operator==(const DiscreteData&, const DiscreteData&) = default;

private:
    std::vector<std::string> names_;
    std::vector<int> cards_;
    std::vector<std::vector<int>> columns_;
};

using Arc = std::pair<int, int>;  // (parent, child)

/// Directed acyclic graph over nodes 0..n-1. Mutators refuse changes that would
/// create a cycle, a self-loop or a duplicate edge.
class Dag {
public:
    Dag() = default;
    explicit Dag(std::size_t node_count);
    static Dag from_arcs(std::size_t node_count, std::span<const Arc> arcs);

    std::size_t node_count() const noexcept { return parents_.size(); }
    bool has_arc(int parent, int child) const;
    bool adjacent(int a, int b) const { return has_arc(a, b) || has_arc(b, a); }
    /// Sorted ascending.
    const std::vector<int>& parents(int node) const { return parents_.at(static_cast<std::size_t>(node)); }
    /// All arcs in lexicographic (parent, child) order.
    std::vector<Arc> arcs() const;
    std::size_t arc_count() const;

    /// True if there is a directed path from `from` to `to` (a node reaches itself).
    bool reaches(int from, int to) const;
    bool can_add(int parent, int child) const;
    void add_arc(int parent, int child);
    void remove_arc(int parent, int child);
    void reverse_arc(int parent, int child);

    bool is_acyclic() const;
    std::vector<int> topological_order() const;
    /// Unordered adjacency as (min, max) pairs, sorted.
    std::vector<Arc> skeleton() const;

    friend bool operator==(const Dag&, const Dag&) = default;

private:
    void check_node(int v) const;
    std::vector<std::vector<int>> parents_;
};

/// BIC contribution of one node given its parents:
/// sum n_jk ln(n_jk / n_j) - (card - 1) * q / 2 * ln N.
double family_score(const DiscreteData& data, int node, std::span<const int> parents);

/// Decomposable BIC, higher is better.
double bic_score(const Dag& dag, const DiscreteData& data);

struct HillClimbOptions {
    int max_parents = 4;
    int restarts = 0;
    int perturb = 1;  // random arc additions per restart
    std::uint64_t seed = 0;
};

struct HillClimbResult {
    Dag dag;
    double score = 0.0;
    std::size_t steps = 0;
};

/// Greedy BIC search from the empty graph with add/delete/reverse moves. Each
/// step applies the best move improving the score by more than 1e-9; ties go
/// to add < delete < reverse, then the lexicographically smallest pair.
HillClimbResult hill_climb_search(const DiscreteData& data, const HillClimbOptions& options = {});
Dag hill_climb(const DiscreteData& data, const HillClimbOptions& options = {});

/// Greedy ascent from `start` without restarts.
HillClimbResult hill_climb_from(const DiscreteData& data, Dag start, int max_parents);

/// Conditional probability table of one node. Rows enumerate parent
/// configurations in mixed radix over `parents` (ascending node order) with the
/// last parent varying fastest; each row holds `cardinality` probabilities.
struct Cpt {
    int node = 0;
    std::vector<int> parents;
    std::vector<int> parent_cardinalities;
    int cardinality = 0;
    std::vector<double> probs;

    std::size_t rows() const noexcept { return cardinality == 0 ? 0 : probs.size() / static_cast<std::size_t>(cardinality); }
    double operator()(std::size_t row, int value) const {
        return probs[row * static_cast<std::size_t>(cardinality) + static_cast<std::size_t>(value)];
    }
    /// Row index of a parent configuration given in `parents` order.
    std::size_t row_of(std::span<const int> parent_values) const;
};

struct DiscreteBN {
    Dag dag;
    std::vector<std::string> names;
    std::vector<int> cardinalities;
    std::vector<Cpt> cpts;  // indexed by node
};

/// (count + alpha) / (row_total + alpha * card); rows with no mass are uniform.
DiscreteBN fit_mle(const Dag& dag, const DiscreteData& data, double alpha = 0.0);

/// Builds a network from explicit CPTs (validated: rows sum to 1).
DiscreteBN make_bn(Dag dag, std::vector<std::string> names, std::vector<int> cardinalities,
                   std::vector<std::vector<double>> cpt_probs);

/// Samples n rows in topological order; deterministic for a given seed.
DiscreteData ancestral_sample(const DiscreteBN& bn, std::size_t n, std::uint64_t seed);

struct BootstrapArcs {
    std::size_t replicates = 0;
    std::size_t node_count = 0;
    std::vector<double> directed;    // [parent * n + child]
    std::vector<double> undirected;  // symmetric

    double directed_frequency(int parent, int child) const { return directed[static_cast<std::size_t>(parent) * node_count + static_cast<std::size_t>(child)]; }
    double undirected_frequency(int a, int b) const { return undirected[static_cast<std::size_t>(a) * node_count + static_cast<std::size_t>(b)]; }
};

/// Re-learns the structure on B bootstrap resamples. Replicate b draws from
/// its own stream of `seed`, so results do not depend on execution order.
BootstrapArcs bootstrap_arc_strength(const DiscreteData& data, std::size_t replicates, std::uint64_t seed,
                                     const HillClimbOptions& search = {});

/// BIC(dag) - BIC(dag without parent->child); throws if the arc is absent.
double score_loss(const Dag& dag, const DiscreteData& data, int parent, int child);

struct ArcLoss {
    Arc arc;
    double loss = 0.0;
};
std::vector<ArcLoss> score_loss_strength(const Dag& dag, const DiscreteData& data);

struct MutualInformation {
    double nats = 0.0;
    double n_times_nats = 0.0;  // N * MI
};

MutualInformation mutual_information(std::span<const int> x, std::span<const int> y);

/// Plug-in entropy in nats.
double entropy(std::span<const int> x);

struct ArcStrength {
    Arc arc;
    double boot_frequency = 0.0;      // skeleton frequency over replicates
    double directed_frequency = 0.0;  // this orientation only
    double score_loss = 0.0;
    MutualInformation mi;             // between the arc's endpoints
};

std::vector<ArcStrength> arc_strength_report(const Dag& dag, const DiscreteData& data,
                                             const BootstrapArcs& boot);

void write_arcs_csv(std::ostream& out, const Dag& dag, const std::vector<std::string>& names);
void write_strength_csv(std::ostream& out, std::span<const ArcStrength> report,
                        const std::vector<std::string>& names);
void write_cpts_json(std::ostream& out, const DiscreteBN& bn);
void write_dot(std::ostream& out, const Dag& dag, const std::vector<std::string>& names,
               std::span<const ArcStrength> report = {});

}  // namespace treegaze::bn
