#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treegaze/corpus.hpp"

namespace treegaze {

inline constexpr double kDefaultMinFixationMs = 100.0;

struct FixationRecord {
    std::string participant;
    std::string sentence_id;
    int word_index = 0;  // 1-based
    double onset_ms = 0.0;
    double duration_ms = 0.0;

    friend bool operator==(const FixationRecord&, const FixationRecord&) = default;
};

/// Time-ordered, refixation-collapsed word path of one reader through one sentence.
struct GazeSequence {
    std::string participant;
    std::string sentence_id;
    std::vector<int> path;

    bool usable_for_transitions() const noexcept { return path.size() >= 2; }
};

/// Reads `participant,sentence_id,word_index,onset_ms,duration_ms` and drops
/// records with duration_ms < min_duration_ms. Rows stay in file order.
std::vector<FixationRecord> load_fixations(std::istream& in,
                                           double min_duration_ms = kDefaultMinFixationMs);

void write_fixations(std::ostream& out, std::span<const FixationRecord> records);

/// Stable sort by onset, then collapse consecutive repeats of a word.
/// All records must share participant and sentence; empty input gives an empty path.
GazeSequence build_gaze_sequence(std::span<const FixationRecord> fixations);

/// Groups records by (participant, sentence_id) in order of first appearance
/// and builds one sequence per group.
std::vector<GazeSequence> build_gaze_sequences(std::span<const FixationRecord> fixations);

/// Throws IngestError when a record names an unknown sentence or a word
/// index outside its sentence.
void check_against_corpus(std::span<const FixationRecord> fixations,
                          std::span<const Sentence> sentences);

/// [1, 2, ..., n]
std::vector<int> text_sequence(const Sentence& sentence);

}  // namespace treegaze
