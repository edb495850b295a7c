#include "treegaze/transitions.hpp"

#include <unordered_map>

#include "treegaze/csv.hpp"
#include "treegaze/error.hpp"

namespace treegaze {

std::string_view to_string(TransitionType type) {
    switch (type) {
        case TransitionType::HH: return "HH";
        case TransitionType::HN: return "HN";
        case TransitionType::NH: return "NH";
        case TransitionType::NN: return "NN";
    }
    return "?";
}

TransitionType classify_transition(Role from, Role to) {
    if (from == Role::Head) return to == Role::Head ? TransitionType::HH : TransitionType::HN;
    return to == Role::Head ? TransitionType::NH : TransitionType::NN;
}

double TransitionDistribution::probability(TransitionType type) const {
    if (n_transitions == 0) return 0.0;
    return static_cast<double>(counts[static_cast<std::size_t>(type)]) / static_cast<double>(n_transitions);
}

TransitionDistribution transition_distribution(std::span<const int> path, std::span<const Role> roles) {
    if (path.size() < 2) throw DomainError("transition distribution undefined for paths shorter than 2");
    auto role_at = [&](int w) {
        if (w < 1 || static_cast<std::size_t>(w) > roles.size())
            throw DomainError("path word index " + std::to_string(w) + " has no role");
        return roles[static_cast<std::size_t>(w - 1)];
    };
    TransitionDistribution d;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const auto type = classify_transition(role_at(path[i - 1]), role_at(path[i]));
        ++d.counts[static_cast<std::size_t>(type)];
    }
    d.n_transitions = path.size() - 1;
    return d;
}

double sentence_condition_value(std::span<const TransitionDistribution> per_participant, TransitionType type) {
    if (per_participant.empty()) throw DomainError("no participant distributions for sentence");
    double sum = 0.0;
    for (const auto& d : per_participant) sum += d.probability(type);
    return sum / static_cast<double>(per_participant.size());
}

stats::WelchResult compare_conditions(std::span<const double> group_a, std::span<const double> group_b) {
    return stats::welch_t(group_a, group_b);
}

TransitionReport analyze_transitions(std::span<const Sentence> sentences,
                                     std::span<const GazeSequence> sequences) {
    std::unordered_map<std::string, std::vector<const GazeSequence*>> by_sentence;
    for (const auto& g : sequences)
        if (g.usable_for_transitions()) by_sentence[g.sentence_id].push_back(&g);

    TransitionReport report;
    for (const auto& s : sentences) {
        if (s.size() < 2) continue;
        auto it = by_sentence.find(s.id());
        if (it == by_sentence.end()) continue;
        const auto roles = roles_of(s);
        SentenceTransitions st;
        st.sentence_id = s.id();
        st.baseline = transition_distribution(text_sequence(s), roles);
        for (const auto* g : it->second) {
            st.gaze.push_back(transition_distribution(g->path, roles));
            st.gaze_transitions += st.gaze.back().n_transitions;
        }
        for (auto type : kTransitionTypes)
            st.gaze_mean[static_cast<std::size_t>(type)] = sentence_condition_value(st.gaze, type);
        report.sentences.push_back(std::move(st));
    }
    if (report.sentences.size() < 2)
        throw DomainError("transition comparison needs at least two sentences with gaze data");

    for (auto type : kTransitionTypes) {
        const auto k = static_cast<std::size_t>(type);
        std::vector<double> gaze, base;
        for (const auto& st : report.sentences) {
            gaze.push_back(st.gaze_mean[k]);
            base.push_back(st.baseline.probability(type));
        }
        try {
            report.welch[k] = compare_conditions(gaze, base);
        } catch (const DomainError&) {
            report.welch[k].reset();
        }
    }
    return report;
}

void write_transition_csv(std::ostream& out, const TransitionReport& report) {
    out << "sentence_id,condition,type,probability,n_transitions\n";
    for (const auto& st : report.sentences) {
        for (auto type : kTransitionTypes) {
            out << csv::escape(st.sentence_id) << ",baseline," << to_string(type) << ','
                << csv::format_double(st.baseline.probability(type)) << ',' << st.baseline.n_transitions
                << '\n';
        }
        for (auto type : kTransitionTypes) {
            out << csv::escape(st.sentence_id) << ",gaze," << to_string(type) << ','
                << csv::format_double(st.gaze_mean[static_cast<std::size_t>(type)]) << ','
                << st.gaze_transitions << '\n';
        }
    }
}

}  // namespace treegaze
