#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treegaze/corpus.hpp"
#include "treegaze/gaze.hpp"
#include "treegaze/stats.hpp"

namespace treegaze {

enum class TransitionType { HH = 0, HN = 1, NH = 2, NN = 3 };

inline constexpr std::array<TransitionType, 4> kTransitionTypes{TransitionType::HH, TransitionType::HN,
                                                                TransitionType::NH, TransitionType::NN};

std::string_view to_string(TransitionType type);

TransitionType classify_transition(Role from, Role to);

struct TransitionDistribution {
    std::array<std::size_t, 4> counts{};
    std::size_t n_transitions = 0;

    double probability(TransitionType type) const;
    double p_hh() const { return probability(TransitionType::HH); }
    double p_hn() const { return probability(TransitionType::HN); }
    double p_nh() const { return probability(TransitionType::NH); }
    double p_nn() const { return probability(TransitionType::NN); }
};

/// Counts the |path| - 1 consecutive transitions of `path` (1-based word
/// indices) under `roles` (role of word i at roles[i - 1]).
TransitionDistribution transition_distribution(std::span<const int> path, std::span<const Role> roles);

/// Mean probability of `type` over participants' distributions for one sentence.
double sentence_condition_value(std::span<const TransitionDistribution> per_participant, TransitionType type);

/// Welch comparison of per-sentence values. The report passes gaze as `group_a`
/// and the text baseline as `group_b`.
stats::WelchResult compare_conditions(std::span<const double> group_a, std::span<const double> group_b);

struct SentenceTransitions {
    std::string sentence_id;
    TransitionDistribution baseline;
    std::vector<TransitionDistribution> gaze;  // one per participant with >= 2 path entries
    std::array<double, 4> gaze_mean{};
    std::size_t gaze_transitions = 0;
};

struct TransitionReport {
    std::vector<SentenceTransitions> sentences;
    /// Per type: Welch test of gaze (a) against text baseline (b); empty when
    /// both conditions have zero variance for that type.
    std::array<std::optional<stats::WelchResult>, 4> welch{};
};

/// Runs the head/non-head transition analysis. Sentences need roles; sentences
/// without any usable gaze path or with fewer than two tokens are left out.
TransitionReport analyze_transitions(std::span<const Sentence> sentences,
                                     std::span<const GazeSequence> sequences);

/// CSV `sentence_id,condition,type,probability,n_transitions`.
void write_transition_csv(std::ostream& out, const TransitionReport& report);

}  // namespace treegaze
