#pragma once

#include <span>
#include <vector>

namespace treegaze {

/// Unit Levenshtein costs inside the Needleman-Wunsch recurrence.
struct AlignmentCosts {
    int match = 0;
    int substitution = 1;
    int insertion = 1;
    int deletion = 1;
};

/// Minimal total cost of turning `a` into `b`:
/// D[i][j] = min(D[i-1][j] + del, D[i][j-1] + ins, D[i-1][j-1] + (a_i == b_j ? match : sub)).
int edit_distance(std::span<const int> a, std::span<const int> b, const AlignmentCosts& costs = {});

/// Mean edit distance of each non-empty gaze path to the text order.
/// Throws DomainError when no path is non-empty.
double sentence_edit_distance(std::span<const std::vector<int>> gaze_paths, std::span<const int> text);

}  // namespace treegaze
