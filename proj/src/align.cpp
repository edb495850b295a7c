#include "treegaze/align.hpp"

#include <algorithm>
#include <numeric>

#include "treegaze/error.hpp"

namespace treegaze {

int edit_distance(std::span<const int> a, std::span<const int> b, const AlignmentCosts& costs) {
    if (costs.match < 0 || costs.substitution < 0 || costs.insertion < 0 || costs.deletion < 0)
        throw DomainError("alignment costs must be non-negative");
    // Two rows of the (|a|+1) x (|b|+1) table.
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j) * costs.insertion;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i) * costs.deletion;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int diag = prev[j - 1] + (a[i - 1] == b[j - 1] ? costs.match : costs.substitution);
            cur[j] = std::min({prev[j] + costs.deletion, cur[j - 1] + costs.insertion, diag});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double sentence_edit_distance(std::span<const std::vector<int>> gaze_paths, std::span<const int> text) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& p : gaze_paths) {
        if (p.empty()) continue;
        sum += edit_distance(p, text);
        ++n;
    }
    if (n == 0) throw DomainError("no participant with a non-empty gaze path");
    return sum / static_cast<double>(n);
}

}  // namespace treegaze
