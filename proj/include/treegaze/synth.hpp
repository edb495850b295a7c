#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "treegaze/bayesnet.hpp"
#include "treegaze/corpus.hpp"
#include "treegaze/features.hpp"
#include "treegaze/frp.hpp"
#include "treegaze/gaze.hpp"
#include "treegaze/random.hpp"

namespace treegaze::synth {

struct TreebankOptions {
    std::size_t sentences = 50;
    int min_length = 6;
    int max_length = 20;
    std::size_t vocabulary = 400;
    std::uint64_t seed = 0;
};

/// Random dependency trees (random recursive attachment) with UD-style
/// relation labels, some of them clausal. Sentences are annotated.
std::vector<Sentence> gen_treebank(const TreebankOptions& options);

enum class ReaderKind { Serial, TreeGuided };

/// Serial: left to right, each step skipping one word with skip_prob or going
/// back one word with regress_prob. TreeGuided: on a Head, with probability
/// lambda jump to the nearest Head further right (the path ends when none is
/// left); otherwise take a serial step. Attraction draws use their own stream,
/// so lambda = 0 reproduces Serial exactly.
struct ReaderModel {
    ReaderKind kind = ReaderKind::Serial;
    double lambda = 0.0;
    double skip_prob = 0.0;
    double regress_prob = 0.0;

    void validate() const;
};

/// Word path of one reading; `sentence` must carry roles.
std::vector<int> gen_reader_path(const Sentence& sentence, const ReaderModel& model, Rng& movement, Rng& attraction);

/// Fixation records for every participant x sentence. Onsets strictly
/// increase within a reading; durations are at least 100 ms.
std::vector<FixationRecord> gen_reader_paths(std::span<const Sentence> sentences, const ReaderModel& model,
                                             std::size_t n_participants, std::uint64_t seed);

/// Frequency norms for the treebank vocabulary. Word ranks ending in 7
/// (about one word in ten) are left out so that unknown words occur.
FrequencyNorms gen_norms(std::span<const Sentence> sentences, std::uint64_t seed);

/// Per-word lexical and syntactic surprisal (log-normal, nats).
std::map<std::string, std::vector<WordSurprisal>> gen_word_surprisal(std::span<const Sentence> sentences,
                                                                     std::uint64_t seed);

void write_norms_csv(std::ostream& out, const FrequencyNorms& norms);
void write_surprisal_csv(std::ostream& out, const std::map<std::string, std::vector<WordSurprisal>>& rows);

bn::DiscreteData gen_bn_dataset(const bn::DiscreteBN& bn, std::size_t n, std::uint64_t seed);

/// Five-node network over the sentence features (four levels each) with arcs
/// max_depth -> edit_distance, familiarity -> edit_distance,
/// surprisal -> edit_distance and max_depth -> n_clauses.
bn::DiscreteBN planted_feature_network();

/// Mutually independent uniform variables.
bn::DiscreteBN independent_network(std::size_t nodes = 5, int cardinality = 4);

struct FrpOptions {
    std::size_t subjects = 12;
    std::size_t trials = 400;
    std::size_t channels = 4;
    std::array<double, 2> window_ms{100.0, 200.0};
    double amplitude = 0.5;
    double noise_sd = 1.0;
    double surprisal_sigma = 0.5;  // log-normal(0, sigma)
    std::size_t timepoints = frp::kDefaultTimepoints;
    std::uint64_t seed = 0;

    void validate() const;
};

/// amplitude(t) = amplitude * surprisal * [t in window] + N(0, noise_sd) on every channel.
std::vector<frp::EpochSet> gen_frp_dataset(const FrpOptions& options);

/// One subject of `gen_frp_dataset` (same streams).
frp::EpochSet gen_frp_subject(const FrpOptions& options, std::size_t subject);

}  // namespace treegaze::synth
