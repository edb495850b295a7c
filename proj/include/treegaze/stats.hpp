#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace treegaze::stats {

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator).
double sample_sd(std::span<const double> x);

/// Student t distribution with `df` degrees of freedom (df > 0).
class StudentT {
public:
    explicit StudentT(double df);
    double df() const noexcept { return df_; }
    double cdf(double x) const;
    /// P(|T| >= |t|)
    double two_tailed_p(double t) const;
    double quantile(double prob) const;
    /// Critical value c with P(|T| >= c) = alpha.
    double two_tailed_critical(double alpha) const;

private:
    double df_;
};

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p_two_tailed = 1.0;
    double mean_a = 0.0, sd_a = 0.0;
    double mean_b = 0.0, sd_b = 0.0;
};

/// Welch unequal-variance t test of mean(a) - mean(b).
WelchResult welch_t(std::span<const double> a, std::span<const double> b);

/// Row-major subjects x timepoints matrix.
struct SeriesMatrix {
    std::size_t subjects = 0;
    std::size_t timepoints = 0;
    std::vector<double> values;

    SeriesMatrix() = default;
    SeriesMatrix(std::size_t n_subjects, std::size_t n_timepoints, double fill = 0.0)
        : subjects(n_subjects), timepoints(n_timepoints), values(n_subjects * n_timepoints, fill) {}

    double& operator()(std::size_t s, std::size_t t) { return values[s * timepoints + t]; }
    double operator()(std::size_t s, std::size_t t) const { return values[s * timepoints + t]; }
    std::span<const double> row(std::size_t s) const {
        return std::span<const double>(values).subspan(s * timepoints, timepoints);
    }
};

/// One-sample t statistic against zero at each timepoint; 0 where the column has no spread.
std::vector<double> one_sample_t(const SeriesMatrix& series);

struct Cluster {
    std::size_t start = 0;  // first timepoint
    std::size_t end = 0;    // last timepoint, inclusive
    int sign = 0;           // +1 or -1
    double mass = 0.0;      // sum of |t| over the run
    double p_value = 1.0;
};

struct ClusterResult {
    std::vector<Cluster> clusters;
    std::vector<double> t_values;
    std::size_t n_permutations = 0;
    double threshold_t = 0.0;
    double alpha = 0.05;

    std::vector<Cluster> significant() const;
};

struct ClusterOptions {
    std::size_t n_permutations = 1000;
    double alpha = 0.05;
    /// Cluster-forming |t| threshold; <= 0 means the two-tailed critical value at alpha.
    double threshold_t = 0.0;
    std::uint64_t seed = 0;
};

/// Maximal runs of same-sign |t| > threshold; mass = sum |t|.
std::vector<Cluster> find_clusters(std::span<const double> t_values, double threshold);

/// Sign-flip cluster permutation test of the per-timepoint mean against zero.
/// The null is the maximum cluster mass (0 when no cluster forms) under random
/// per-subject sign flips; p = (1 + #{null >= observed}) / (n_permutations + 1).
ClusterResult cluster_permutation_1samp(const SeriesMatrix& series, const ClusterOptions& options);

struct BootstrapPoint {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

/// Percentile bootstrap of the across-subject mean at each timepoint.
/// Subjects are resampled as whole rows; percentiles interpolate linearly
/// between order statistics.
std::vector<BootstrapPoint> bootstrap_ci(const SeriesMatrix& series, std::size_t n_boot = 1000,
                                         double level = 0.95, std::uint64_t seed = 0);

/// Linear-interpolation percentile of sorted data, q in [0, 1].
double percentile_sorted(std::span<const double> sorted, double q);

enum class Alternative { Greater, Less, TwoSided };
enum class WilcoxonMethod { Auto, Exact, Normal };

inline constexpr std::size_t kWilcoxonExactMaxN = 20;

struct WilcoxonResult {
    double w_plus = 0.0;  // sum of ranks of positive values
    double p = 1.0;
    std::size_t n = 0;    // non-zero values used
    bool exact = true;
};

/// Signed-rank test of symmetry about zero. Zeros are dropped; tied |values|
/// receive average ranks. Auto uses the exact (tie-aware) null for n <= 20 and
/// the continuity-corrected normal approximation above.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> values,
                                    Alternative alternative = Alternative::Greater,
                                    WilcoxonMethod method = WilcoxonMethod::Auto);

struct FdrResult {
    std::vector<bool> rejected;
    std::vector<double> adjusted;
};

/// Benjamini-Hochberg step-up procedure.
FdrResult fdr_bh(std::span<const double> pvals, double alpha = 0.05);

}  // namespace treegaze::stats
