#pragma once

#include <array>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treegaze/corpus.hpp"

namespace treegaze {

/// Case-folded word -> frequency per million.
using FrequencyNorms = std::unordered_map<std::string, double>;

/// Reads CSV `word,freq_per_million`.
FrequencyNorms load_norms(std::istream& in);

struct WordSurprisal {
    int token_index = 0;
    double lexical = 0.0;    // nats
    double syntactic = 0.0;  // nats
};

/// Reads CSV `sentence_id,token_index,lexical_surprisal,syntactic_surprisal`;
/// rows per sentence are kept in file order.
std::map<std::string, std::vector<WordSurprisal>> load_word_surprisal(std::istream& in);

std::string fold_case(std::string_view word);

/// Mean over tokens of log10(freq_per_million + 1); unknown words count as 0.
double familiarity(const Sentence& sentence, const FrequencyNorms& norms);

double sentence_surprisal(std::span<const double> word_surprisals);

struct ZScored {
    std::vector<double> values;
    bool constant = false;  // zero spread: values are all 0
};

/// (x - mean) / sd with the n - 1 standard deviation. Needs n >= 2.
ZScored zscore(std::span<const double> column);

/// Equal-width bins over [min, max]; right-open except the top bin, which is closed.
std::vector<int> discretize_equal_width(std::span<const double> column, int k = 4);

struct CorrelationMatrix {
    std::size_t size = 0;
    std::vector<double> r;          // row-major, NaN where undefined
    std::vector<bool> undefined;    // per column: zero variance

    double operator()(std::size_t i, std::size_t j) const { return r[i * size + j]; }
};

/// Pearson correlations between equally long columns (>= 3 rows).
CorrelationMatrix correlation_matrix(std::span<const std::vector<double>> columns);

double pearson(std::span<const double> x, std::span<const double> y);

inline constexpr std::size_t kFeatureCount = 5;
/// Column order of the sentence table: X1..X5.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
    "edit_distance", "max_depth", "familiarity", "surprisal", "n_clauses"};

struct FeatureColumn {
    std::vector<double> raw;
    std::vector<double> z;
    std::vector<int> bin;
    bool constant = false;
};

struct FeatureTable {
    std::vector<std::string> sentence_ids;
    std::array<FeatureColumn, kFeatureCount> columns;
    int bins = 4;

    std::size_t rows() const noexcept { return sentence_ids.size(); }
    std::vector<std::vector<double>> raw_columns() const;
    std::vector<std::vector<int>> discrete_columns() const;
};

struct SentenceFeatures {
    std::string sentence_id;
    std::array<double, kFeatureCount> raw{};
};

/// Raw predictors for one annotated sentence. `edit_distance` comes from the
/// scanpath alignment, `surprisal` from the per-word lexical surprisal file.
SentenceFeatures sentence_features(const Sentence& sentence, double edit_distance,
                                   const FrequencyNorms& norms, std::span<const double> word_surprisals);

/// z-scores every column, then discretizes the z-scores into `bins` equal-width bins.
FeatureTable assemble_feature_table(std::span<const SentenceFeatures> rows, int bins = 4);

/// CSV with `sentence_id` then `<name>_raw,<name>_z,<name>_bin` per feature.
void write_feature_csv(std::ostream& out, const FeatureTable& table);
void write_correlation_csv(std::ostream& out, const CorrelationMatrix& matrix);

}  // namespace treegaze
