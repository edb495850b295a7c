#include "treegaze/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "treegaze/csv.hpp"
#include "treegaze/error.hpp"
#include "treegaze/stats.hpp"

namespace treegaze {

FrequencyNorms load_norms(std::istream& in) {
    csv::Reader reader(in);
    FrequencyNorms norms;
    if (!reader.read_header()) return norms;
    const auto c_word = reader.require_column("word");
    const auto c_freq = reader.require_column("freq_per_million");
    while (auto row = reader.next()) {
        const double f = csv::to_double(row->fields[c_freq], "freq_per_million", row->line);
        if (!(f >= 0.0) || !std::isfinite(f)) throw ParseError("freq_per_million must be finite and >= 0", row->line);
        norms[fold_case(row->fields[c_word])] = f;
    }
    return norms;
}

std::map<std::string, std::vector<WordSurprisal>> load_word_surprisal(std::istream& in) {
    csv::Reader reader(in);
    std::map<std::string, std::vector<WordSurprisal>> out;
    if (!reader.read_header()) return out;
    const auto c_sent = reader.require_column("sentence_id");
    const auto c_tok = reader.require_column("token_index");
    const auto c_lex = reader.require_column("lexical_surprisal");
    const auto c_syn = reader.require_column("syntactic_surprisal");
    while (auto row = reader.next()) {
        const auto& f = row->fields;
        WordSurprisal w;
        const auto tok = csv::to_integer(f[c_tok], "token_index", row->line);
        if (tok <= 0) throw ParseError("token_index must be positive", row->line);
        w.token_index = static_cast<int>(tok);
        w.lexical = csv::to_double(f[c_lex], "lexical_surprisal", row->line);
        w.syntactic = csv::to_double(f[c_syn], "syntactic_surprisal", row->line);
        if (!std::isfinite(w.lexical) || !std::isfinite(w.syntactic))
            throw ParseError("surprisal values must be finite", row->line);
        out[f[c_sent]].push_back(w);
    }
    return out;
}

std::string fold_case(std::string_view word) {
    std::string out(word);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

double familiarity(const Sentence& sentence, const FrequencyNorms& norms) {
    if (sentence.size() == 0) throw DomainError("familiarity of an empty sentence");
    double sum = 0.0;
    for (const auto& t : sentence.tokens()) {
        auto it = norms.find(fold_case(t.surface));
        sum += std::log10((it == norms.end() ? 0.0 : it->second) + 1.0);
    }
    return sum / static_cast<double>(sentence.size());
}

double sentence_surprisal(std::span<const double> word_surprisals) {
    if (word_surprisals.empty()) throw DomainError("sentence surprisal needs at least one word value");
    return stats::mean(word_surprisals);
}

ZScored zscore(std::span<const double> column) {
    if (column.size() < 2) throw DomainError("z-score needs at least two values");
    const double m = stats::mean(column);
    const double sd = stats::sample_sd(column);
    ZScored out;
    out.values.resize(column.size(), 0.0);
    // Spread below rounding noise of the mean counts as constant.
    if (!(sd > 1e-14 * std::max(1.0, std::fabs(m)))) {
        out.constant = true;
        return out;
    }
    for (std::size_t i = 0; i < column.size(); ++i) out.values[i] = (column[i] - m) / sd;
    return out;
}

std::vector<int> discretize_equal_width(std::span<const double> column, int k) {
    if (k < 1) throw DomainError("bin count must be positive");
    std::vector<int> bins(column.size(), 0);
    if (column.empty()) return bins;
    const auto [lo_it, hi_it] = std::minmax_element(column.begin(), column.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) return bins;
    const double width = (hi - lo) / k;
    for (std::size_t i = 0; i < column.size(); ++i) {
        const int b = static_cast<int>(std::floor((column[i] - lo) / width));
        bins[i] = std::clamp(b, 0, k - 1);
    }
    return bins;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("pearson: column lengths differ");
    if (x.size() < 2) throw DomainError("pearson: needs at least two rows");
    const double mx = stats::mean(x), my = stats::mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(std::span<const std::vector<double>> columns) {
    CorrelationMatrix m;
    m.size = columns.size();
    m.r.assign(m.size * m.size, std::numeric_limits<double>::quiet_NaN());
    m.undefined.assign(m.size, false);
    if (m.size == 0) return m;
    const auto n = columns.front().size();
    if (n < 3) throw DomainError("correlation matrix needs at least three rows");
    for (const auto& c : columns)
        if (c.size() != n) throw DomainError("correlation matrix: column lengths differ");
    for (std::size_t i = 0; i < m.size; ++i) {
        const auto [lo, hi] = std::minmax_element(columns[i].begin(), columns[i].end());
        m.undefined[i] = !(*hi > *lo);
    }
    for (std::size_t i = 0; i < m.size; ++i) {
        for (std::size_t j = i; j < m.size; ++j) {
            if (m.undefined[i] || m.undefined[j]) continue;
            const double r = i == j ? 1.0 : pearson(columns[i], columns[j]);
            m.r[i * m.size + j] = m.r[j * m.size + i] = r;
        }
    }
    return m;
}

std::vector<std::vector<double>> FeatureTable::raw_columns() const {
    std::vector<std::vector<double>> out;
    for (const auto& c : columns) out.push_back(c.raw);
    return out;
}

std::vector<std::vector<int>> FeatureTable::discrete_columns() const {
    std::vector<std::vector<int>> out;
    for (const auto& c : columns) out.push_back(c.bin);
    return out;
}

SentenceFeatures sentence_features(const Sentence& sentence, double edit_distance,
                                   const FrequencyNorms& norms, std::span<const double> word_surprisals) {
    SentenceFeatures f;
    f.sentence_id = sentence.id();
    f.raw = {edit_distance, static_cast<double>(max_depth(sentence)), familiarity(sentence, norms),
             sentence_surprisal(word_surprisals), static_cast<double>(count_clauses(sentence))};
    return f;
}

FeatureTable assemble_feature_table(std::span<const SentenceFeatures> rows, int bins) {
    FeatureTable table;
    table.bins = bins;
    for (const auto& r : rows) table.sentence_ids.push_back(r.sentence_id);
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
        auto& col = table.columns[k];
        for (const auto& r : rows) col.raw.push_back(r.raw[k]);
        auto z = zscore(col.raw);
        col.z = std::move(z.values);
        col.constant = z.constant;
        col.bin = discretize_equal_width(col.z, bins);
    }
    return table;
}

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
    out << "sentence_id";
    for (auto name : kFeatureNames) out << ',' << name << "_raw," << name << "_z," << name << "_bin";
    out << '\n';
    for (std::size_t i = 0; i < table.rows(); ++i) {
        out << csv::escape(table.sentence_ids[i]);
        for (const auto& c : table.columns)
            out << ',' << csv::format_double(c.raw[i]) << ',' << csv::format_double(c.z[i]) << ',' << c.bin[i];
        out << '\n';
    }
}

void write_correlation_csv(std::ostream& out, const CorrelationMatrix& matrix) {
    out << "variable";
    for (std::size_t j = 0; j < matrix.size; ++j)
        out << ',' << (matrix.size == kFeatureCount ? std::string(kFeatureNames[j]) : "v" + std::to_string(j));
    out << '\n';
    for (std::size_t i = 0; i < matrix.size; ++i) {
        out << (matrix.size == kFeatureCount ? std::string(kFeatureNames[i]) : "v" + std::to_string(i));
        for (std::size_t j = 0; j < matrix.size; ++j) out << ',' << csv::format_double(matrix(i, j));
        out << '\n';
    }
}

}  // namespace treegaze
