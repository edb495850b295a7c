#include "treegaze/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "treegaze/csv.hpp"
#include "treegaze/error.hpp"

namespace treegaze::synth {

namespace {

// Stream ids keep the generators independent of each other under one seed.
constexpr std::uint64_t kTreebankStream = 0x100;
constexpr std::uint64_t kNormsStream = 0x200;
constexpr std::uint64_t kSurprisalStream = 0x300;
constexpr std::uint64_t kReaderStream = 0x10000;
constexpr std::uint64_t kFrpStream = 0x20000;

struct RelationWeight {
    const char* label;
    double weight;
};

constexpr RelationWeight kRelations[] = {
    {"nsubj", 3.0}, {"obj", 2.5},  {"det", 3.0},  {"amod", 2.0},   {"advmod", 1.5},    {"case", 2.0},
    {"nmod", 2.0},  {"obl", 1.5},  {"punct", 2.0}, {"compound", 1.0}, {"ccomp", 0.5},  {"advcl", 0.5},
    {"acl:relcl", 0.4}, {"xcomp", 0.4}, {"csubj", 0.1}, {"parataxis", 0.1},
};

std::string surface_of(std::size_t rank) { return "w" + std::to_string(rank); }

}  // namespace

std::vector<Sentence> gen_treebank(const TreebankOptions& options) {
    if (options.min_length < 1 || options.max_length < options.min_length)
        throw ConfigError("treebank lengths must satisfy 1 <= min_length <= max_length");
    if (options.vocabulary < 1) throw ConfigError("treebank vocabulary must be positive");
    Rng rng = make_rng(options.seed, kTreebankStream);
    std::uniform_int_distribution<int> length(options.min_length, options.max_length);
    std::vector<double> weights;
    for (const auto& r : kRelations) weights.push_back(r.weight);
    std::discrete_distribution<std::size_t> relation(weights.begin(), weights.end());
    // Zipf-like ranks: floor(V^u) spreads mass towards frequent words.
    const double log_v = std::log(static_cast<double>(options.vocabulary));

    std::vector<Sentence> out;
    for (std::size_t s = 0; s < options.sentences; ++s) {
        const int n = length(rng);
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 1);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<Token> tokens(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            auto& t = tokens[static_cast<std::size_t>(i)];
            t.index = i + 1;
            const auto rank = static_cast<std::size_t>(std::exp(uniform01(rng) * log_v));
            t.surface = surface_of(std::clamp<std::size_t>(rank, 1, options.vocabulary));
        }
        // Random recursive tree: each token in shuffled order attaches to an earlier one.
        for (int k = 0; k < n; ++k) {
            auto& t = tokens[static_cast<std::size_t>(order[static_cast<std::size_t>(k)] - 1)];
            if (k == 0) {
                t.head = 0;
                t.deprel = "root";
            } else {
                std::uniform_int_distribution<int> pick(0, k - 1);
                t.head = order[static_cast<std::size_t>(pick(rng))];
                t.deprel = kRelations[relation(rng)].label;
            }
        }
        out.push_back(annotate(Sentence::make("s" + std::to_string(s + 1), std::move(tokens))));
    }
    return out;
}

void ReaderModel::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("reader lambda must lie in [0, 1]");
    if (!(skip_prob >= 0.0 && skip_prob < 1.0)) throw ConfigError("reader skip_prob must lie in [0, 1)");
    if (!(regress_prob >= 0.0 && regress_prob < 1.0)) throw ConfigError("reader regress_prob must lie in [0, 1)");
    if (!(skip_prob + regress_prob < 1.0)) throw ConfigError("reader skip_prob + regress_prob must be < 1");
}

std::vector<int> gen_reader_path(const Sentence& sentence, const ReaderModel& model, Rng& movement, Rng& attraction) {
    const int n = static_cast<int>(sentence.size());
    std::vector<int> path;
    if (n == 0) return path;
    const auto roles = roles_of(sentence);
    auto is_head = [&](int w) { return roles[static_cast<std::size_t>(w - 1)] == Role::Head; };
    const std::size_t cap = 20 * static_cast<std::size_t>(n) + 20;

    int pos = 1;
    path.push_back(pos);
    while (path.size() < cap) {
        if (model.kind == ReaderKind::TreeGuided && is_head(pos) && uniform01(attraction) < model.lambda) {
            int next = pos + 1;
            while (next <= n && !is_head(next)) ++next;
            if (next > n) break;
            pos = next;
            path.push_back(pos);
            continue;
        }
        const double u = uniform01(movement);
        int next = pos + 1;
        if (u < model.regress_prob) {
            if (pos > 1) next = pos - 1;
        } else if (u < model.regress_prob + model.skip_prob) {
            next = pos + 2;
        }
        if (next > n) break;
        pos = next;
        path.push_back(pos);
    }
    return path;
}

std::vector<FixationRecord> gen_reader_paths(std::span<const Sentence> sentences, const ReaderModel& model,
                                             std::size_t n_participants, std::uint64_t seed) {
    model.validate();
    std::vector<FixationRecord> out;
    for (std::size_t p = 0; p < n_participants; ++p) {
        const std::string participant = "p" + std::to_string(p + 1);
        for (std::size_t s = 0; s < sentences.size(); ++s) {
            const std::uint64_t idx = p * sentences.size() + s;
            Rng movement = make_rng(seed, kReaderStream + 3 * idx);
            Rng attraction = make_rng(seed, kReaderStream + 3 * idx + 1);
            Rng timing = make_rng(seed, kReaderStream + 3 * idx + 2);
            std::exponential_distribution<double> extra_duration(1.0 / 120.0);
            std::uniform_real_distribution<double> saccade(20.0, 40.0);
            double onset = std::round(saccade(timing));
            for (int w : gen_reader_path(sentences[s], model, movement, attraction)) {
                const double duration = 100.0 + std::round(extra_duration(timing));
                out.push_back({participant, sentences[s].id(), w, onset, duration});
                onset += duration + std::round(saccade(timing));
            }
        }
    }
    return out;
}

FrequencyNorms gen_norms(std::span<const Sentence> sentences, std::uint64_t seed) {
    Rng rng = make_rng(seed, kNormsStream);
    std::lognormal_distribution<double> jitter(0.0, 0.3);
    FrequencyNorms norms;
    for (const auto& s : sentences) {
        for (const auto& t : s.tokens()) {
            const auto key = fold_case(t.surface);
            if (norms.contains(key)) continue;
            const double rank = std::stod(key.substr(1));
            // Roughly one word in ten is absent from the norms.
            if (static_cast<long>(rank) % 10 == 7) continue;
            norms[key] = std::round(1e5 / rank * jitter(rng) * 100.0) / 100.0;
        }
    }
    return norms;
}

std::map<std::string, std::vector<WordSurprisal>> gen_word_surprisal(std::span<const Sentence> sentences,
                                                                     std::uint64_t seed) {
    Rng rng = make_rng(seed, kSurprisalStream);
    std::lognormal_distribution<double> lexical(1.5, 0.5);
    std::lognormal_distribution<double> syntactic(0.0, 0.5);
    std::map<std::string, std::vector<WordSurprisal>> out;
    for (const auto& s : sentences) {
        auto& rows = out[s.id()];
        for (const auto& t : s.tokens()) rows.push_back({t.index, lexical(rng), syntactic(rng)});
    }
    return out;
}

void write_norms_csv(std::ostream& out, const FrequencyNorms& norms) {
    std::vector<std::pair<std::string, double>> rows(norms.begin(), norms.end());
    std::sort(rows.begin(), rows.end());
    out << "word,freq_per_million\n";
    for (const auto& [w, f] : rows) out << csv::escape(w) << ',' << csv::format_double(f) << '\n';
}

void write_surprisal_csv(std::ostream& out, const std::map<std::string, std::vector<WordSurprisal>>& rows) {
    out << "sentence_id,token_index,lexical_surprisal,syntactic_surprisal\n";
    for (const auto& [id, words] : rows)
        for (const auto& w : words)
            out << csv::escape(id) << ',' << w.token_index << ',' << csv::format_double(w.lexical) << ','
                << csv::format_double(w.syntactic) << '\n';
}

bn::DiscreteData gen_bn_dataset(const bn::DiscreteBN& bn, std::size_t n, std::uint64_t seed) {
    return bn::ancestral_sample(bn, n, seed);
}

bn::DiscreteBN planted_feature_network() {
    // Nodes follow the feature column order: X1 edit_distance, X2 max_depth,
    // X3 familiarity, X4 surprisal, X5 n_clauses; four levels each, like the
    // binned feature table. Edit distance is a latent Gaussian
    // w_d*d + w_f*f + w_s*s + N(0, sigma) cut at its approximate quartiles.
    const bn::Arc arcs[] = {{1, 0}, {2, 0}, {3, 0}, {1, 4}};
    bn::Dag dag = bn::Dag::from_arcs(5, arcs);
    constexpr int k = 4;
    const double w[3] = {1.0, 0.9, 0.8};
    const double sigma = 0.6;
    const double level_var = (k * k - 1) / 12.0;  // uniform on 0..k-1
    const double centre = (k - 1) / 2.0 * (w[0] + w[1] + w[2]);
    const double spread = std::sqrt(level_var * (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]) + sigma * sigma);
    const double q = 0.6744897501960817;  // standard normal upper quartile
    const double inf = std::numeric_limits<double>::infinity();
    const double cut[k + 1] = {-inf, centre - q * spread, centre, centre + q * spread, inf};
    auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };

    // Rows in mixed radix over parents (1, 2, 3), last fastest.
    std::vector<double> ed;
    for (int d = 0; d < k; ++d)
        for (int f = 0; f < k; ++f)
            for (int s = 0; s < k; ++s) {
                const double mu = w[0] * d + w[1] * f + w[2] * s;
                for (int b = 0; b < k; ++b) ed.push_back(phi((cut[b + 1] - mu) / sigma) - phi((cut[b] - mu) / sigma));
            }
    // n_clauses tracks max_depth: same level with probability 0.6.
    std::vector<double> clauses;
    for (int d = 0; d < k; ++d)
        for (int c = 0; c < k; ++c) clauses.push_back(c == d ? 0.6 : 0.4 / (k - 1));
    const std::vector<double> uniform(k, 1.0 / k);
    std::vector<std::string> names(kFeatureNames.begin(), kFeatureNames.end());
    return bn::make_bn(std::move(dag), std::move(names), std::vector<int>(5, k),
                       {ed, uniform, uniform, uniform, clauses});
}

bn::DiscreteBN independent_network(std::size_t nodes, int cardinality) {
    std::vector<std::string> names;
    std::vector<std::vector<double>> cpts;
    for (std::size_t v = 0; v < nodes; ++v) {
        names.push_back("X" + std::to_string(v + 1));
        cpts.emplace_back(static_cast<std::size_t>(cardinality), 1.0 / cardinality);
    }
    return bn::make_bn(bn::Dag(nodes), std::move(names), std::vector<int>(nodes, cardinality), std::move(cpts));
}

void FrpOptions::validate() const {
    if (subjects < 1 || trials < 3 || channels < 1 || timepoints < 1)
        throw ConfigError("FRP generator needs >= 1 subject, >= 3 trials, >= 1 channel and >= 1 timepoint");
    const double lo_ms = frp::kDefaultTmin * 1000.0;
    const double hi_ms = (frp::kDefaultTmin + static_cast<double>(timepoints - 1) / frp::kDefaultSfreq) * 1000.0;
    if (!(window_ms[0] < window_ms[1]) || window_ms[0] < lo_ms - 1e-9 || window_ms[1] > hi_ms + 1e-9)
        throw ConfigError("effect window must satisfy a < b within [" + csv::format_double(lo_ms) + ", " +
                          csv::format_double(hi_ms) + "] ms");
    if (!(noise_sd >= 0.0) || !(surprisal_sigma > 0.0)) throw ConfigError("noise_sd must be >= 0 and surprisal_sigma > 0");
}

frp::EpochSet gen_frp_subject(const FrpOptions& options, std::size_t subject) {
    Rng rng = make_rng(options.seed, kFrpStream + subject);
    std::lognormal_distribution<double> surprisal(0.0, options.surprisal_sigma);
    std::normal_distribution<double> noise(0.0, 1.0);

    frp::EpochSet e;
    e.subject = "sub-" + std::string(subject + 1 < 10 ? "0" : "") + std::to_string(subject + 1);
    e.n_trials = options.trials;
    e.n_channels = options.channels;
    e.n_timepoints = options.timepoints;
    e.data.resize(e.n_trials * e.n_channels * e.n_timepoints);
    std::vector<char> in_window(e.n_timepoints);
    for (std::size_t k = 0; k < e.n_timepoints; ++k) {
        const double ms = e.time_of(k) * 1000.0;
        in_window[k] = ms >= options.window_ms[0] - 1e-9 && ms <= options.window_ms[1] + 1e-9;
    }
    for (std::size_t i = 0; i < e.n_trials; ++i) {
        frp::TrialMeta m;
        m.sentence_id = "s" + std::to_string(i / 10 + 1);
        m.token_index = static_cast<int>(i % 10) + 1;
        m.syntactic_surprisal = surprisal(rng);
        m.lexical_surprisal = surprisal(rng);
        for (std::size_t ch = 0; ch < e.n_channels; ++ch)
            for (std::size_t k = 0; k < e.n_timepoints; ++k) {
                const double signal = in_window[k] ? options.amplitude * m.syntactic_surprisal : 0.0;
                const double eps = options.noise_sd > 0.0 ? options.noise_sd * noise(rng) : 0.0;
                e.at(i, ch, k) = static_cast<float>(signal + eps);
            }
        e.trials.push_back(std::move(m));
    }
    return e;
}

std::vector<frp::EpochSet> gen_frp_dataset(const FrpOptions& options) {
    options.validate();
    std::vector<frp::EpochSet> out;
    for (std::size_t s = 0; s < options.subjects; ++s) out.push_back(gen_frp_subject(options, s));
    return out;
}

}  // namespace treegaze::synth
