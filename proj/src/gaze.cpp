#include "treegaze/gaze.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "treegaze/csv.hpp"
#include "treegaze/error.hpp"

namespace treegaze {

std::vector<FixationRecord> load_fixations(std::istream& in, double min_duration_ms) {
    csv::Reader reader(in);
    std::vector<FixationRecord> out;
    if (!reader.read_header()) return out;
    const auto c_part = reader.require_column("participant");
    const auto c_sent = reader.require_column("sentence_id");
    const auto c_word = reader.require_column("word_index");
    const auto c_onset = reader.require_column("onset_ms");
    const auto c_dur = reader.require_column("duration_ms");

    while (auto row = reader.next()) {
        const auto& f = row->fields;
        FixationRecord r;
        r.participant = f[c_part];
        r.sentence_id = f[c_sent];
        const auto word = csv::to_integer(f[c_word], "word_index", row->line);
        r.onset_ms = csv::to_double(f[c_onset], "onset_ms", row->line);
        r.duration_ms = csv::to_double(f[c_dur], "duration_ms", row->line);
        if (word <= 0) throw ParseError("word_index must be positive", row->line);
        if (!std::isfinite(r.onset_ms) || r.onset_ms < 0.0)
            throw ParseError("onset_ms must be finite and non-negative", row->line);
        if (!std::isfinite(r.duration_ms) || r.duration_ms <= 0.0)
            throw ParseError("duration_ms must be finite and positive", row->line);
        r.word_index = static_cast<int>(word);
        if (r.duration_ms < min_duration_ms) continue;
        out.push_back(std::move(r));
    }
    return out;
}

void write_fixations(std::ostream& out, std::span<const FixationRecord> records) {
    out << "participant,sentence_id,word_index,onset_ms,duration_ms\n";
    for (const auto& r : records) {
        out << csv::escape(r.participant) << ',' << csv::escape(r.sentence_id) << ',' << r.word_index
            << ',' << csv::format_double(r.onset_ms) << ',' << csv::format_double(r.duration_ms)
            << '\n';
    }
}

GazeSequence build_gaze_sequence(std::span<const FixationRecord> fixations) {
    GazeSequence seq;
    if (fixations.empty()) return seq;
    seq.participant = fixations.front().participant;
    seq.sentence_id = fixations.front().sentence_id;
    for (const auto& r : fixations) {
        if (r.participant != seq.participant || r.sentence_id != seq.sentence_id)
            throw DomainError("build_gaze_sequence: records span several participant/sentence groups");
    }
    std::vector<std::size_t> order(fixations.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return fixations[a].onset_ms < fixations[b].onset_ms;
    });
    for (auto i : order) {
        const int w = fixations[i].word_index;
        if (seq.path.empty() || seq.path.back() != w) seq.path.push_back(w);
    }
    return seq;
}

std::vector<GazeSequence> build_gaze_sequences(std::span<const FixationRecord> fixations) {
    std::vector<std::pair<std::string, std::string>> keys;
    std::map<std::pair<std::string, std::string>, std::vector<FixationRecord>> groups;
    for (const auto& r : fixations) {
        auto key = std::make_pair(r.participant, r.sentence_id);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) keys.push_back(key);
        it->second.push_back(r);
    }
    std::vector<GazeSequence> out;
    out.reserve(keys.size());
    for (const auto& k : keys) out.push_back(build_gaze_sequence(groups.at(k)));
    return out;
}

void check_against_corpus(std::span<const FixationRecord> fixations,
                          std::span<const Sentence> sentences) {
    std::unordered_map<std::string, std::size_t> lengths;
    for (const auto& s : sentences) lengths[s.id()] = s.size();
    for (const auto& r : fixations) {
        auto it = lengths.find(r.sentence_id);
        if (it == lengths.end())
            throw IngestError("fixation for participant " + r.participant + " names unknown sentence '" +
                              r.sentence_id + "'");
        if (static_cast<std::size_t>(r.word_index) > it->second)
            throw IngestError("fixation word_index " + std::to_string(r.word_index) +
                              " outside sentence '" + r.sentence_id + "' (" +
                              std::to_string(it->second) + " tokens)");
    }
}

std::vector<int> text_sequence(const Sentence& sentence) {
    std::vector<int> seq(sentence.size());
    std::iota(seq.begin(), seq.end(), 1);
    return seq;
}

}  // namespace treegaze
