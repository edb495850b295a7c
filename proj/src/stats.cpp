#include "treegaze/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "treegaze/error.hpp"
#include "treegaze/random.hpp"

namespace treegaze::stats {

double mean(std::span<const double> x) {
    if (x.empty()) throw DomainError("mean of empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
    if (x.size() < 2) throw DomainError("standard deviation needs at least two values");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

// ---------------------------------------------------------------------------
// Student t

StudentT::StudentT(double df) : df_(df) {
    if (!(df > 0.0)) throw DomainError("Student t requires df > 0");
}

double StudentT::cdf(double x) const {
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    return boost::math::cdf(boost::math::students_t(df_), x);
}

double StudentT::two_tailed_p(double t) const {
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return 0.0;
    const double tail = boost::math::cdf(boost::math::complement(boost::math::students_t(df_), std::fabs(t)));
    return std::min(1.0, 2.0 * tail);
}

double StudentT::quantile(double prob) const {
    if (!(prob > 0.0 && prob < 1.0)) throw DomainError("Student t quantile needs 0 < prob < 1");
    return boost::math::quantile(boost::math::students_t(df_), prob);
}

double StudentT::two_tailed_critical(double alpha) const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    return boost::math::quantile(boost::math::complement(boost::math::students_t(df_), alpha / 2.0));
}

// ---------------------------------------------------------------------------
// Welch

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw DomainError("Welch t test needs at least two values per group");
    WelchResult r;
    r.mean_a = mean(a);
    r.mean_b = mean(b);
    r.sd_a = sample_sd(a);
    r.sd_b = sample_sd(b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double va = r.sd_a * r.sd_a / na;
    const double vb = r.sd_b * r.sd_b / nb;
    if (va + vb <= 0.0) throw DomainError("Welch t test undefined: both groups have zero variance");
    r.t = (r.mean_a - r.mean_b) / std::sqrt(va + vb);
    r.df = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    r.p_two_tailed = StudentT(r.df).two_tailed_p(r.t);
    return r;
}

// ---------------------------------------------------------------------------
// Cluster permutation

namespace {

// t from per-timepoint sum and sum of squares; 0 where there is no spread.
inline double t_from_moments(double sum, double sumsq, double n) {
    const double m = sum / n;
    const double ss = sumsq - n * m * m;
    if (!(ss > 1e-12 * sumsq) || ss <= 0.0) return 0.0;
    return m / std::sqrt(ss / (n - 1.0) / n);
}

double max_cluster_mass(std::span<const double> t, double threshold) {
    double best = 0.0, run = 0.0;
    int sign = 0;
    for (double v : t) {
        const int s = v > threshold ? 1 : (v < -threshold ? -1 : 0);
        if (s != 0 && s == sign) {
            run += std::fabs(v);
        } else {
            best = std::max(best, run);
            run = s != 0 ? std::fabs(v) : 0.0;
            sign = s;
        }
    }
    return std::max(best, run);
}

}  // namespace

std::vector<double> one_sample_t(const SeriesMatrix& series) {
    if (series.subjects < 2) throw DomainError("one-sample t needs at least two subjects");
    const double n = static_cast<double>(series.subjects);
    std::vector<double> t(series.timepoints);
    for (std::size_t j = 0; j < series.timepoints; ++j) {
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t s = 0; s < series.subjects; ++s) {
            const double v = series(s, j);
            sum += v;
            sumsq += v * v;
        }
        t[j] = t_from_moments(sum, sumsq, n);
    }
    return t;
}

std::vector<Cluster> find_clusters(std::span<const double> t_values, double threshold) {
    std::vector<Cluster> out;
    for (std::size_t j = 0; j < t_values.size();) {
        const double v = t_values[j];
        const int s = v > threshold ? 1 : (v < -threshold ? -1 : 0);
        if (s == 0) {
            ++j;
            continue;
        }
        Cluster c;
        c.start = j;
        c.sign = s;
        while (j < t_values.size() && s * t_values[j] > threshold) {
            c.mass += std::fabs(t_values[j]);
            ++j;
        }
        c.end = j - 1;
        out.push_back(c);
    }
    return out;
}

std::vector<Cluster> ClusterResult::significant() const {
    std::vector<Cluster> out;
    for (const auto& c : clusters)
        if (c.p_value < alpha) out.push_back(c);
    return out;
}

ClusterResult cluster_permutation_1samp(const SeriesMatrix& series, const ClusterOptions& options) {
    if (options.n_permutations < 1) throw DomainError("cluster permutation needs n_permutations >= 1");
    if (series.subjects < 2) throw DomainError("cluster permutation needs at least two subjects");
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");

    const std::size_t n_sub = series.subjects;
    const std::size_t n_t = series.timepoints;
    const double n = static_cast<double>(n_sub);

    ClusterResult result;
    result.alpha = options.alpha;
    result.n_permutations = options.n_permutations;
    result.threshold_t = options.threshold_t > 0.0
                             ? options.threshold_t
                             : StudentT(n - 1.0).two_tailed_critical(options.alpha);

    std::vector<double> sumsq(n_t, 0.0), sum(n_t, 0.0);
    for (std::size_t s = 0; s < n_sub; ++s) {
        const auto row = series.row(s);
        for (std::size_t j = 0; j < n_t; ++j) {
            sumsq[j] += row[j] * row[j];
            sum[j] += row[j];
        }
    }
    result.t_values.resize(n_t);
    for (std::size_t j = 0; j < n_t; ++j) result.t_values[j] = t_from_moments(sum[j], sumsq[j], n);
    result.clusters = find_clusters(result.t_values, result.threshold_t);
    if (result.clusters.empty()) return result;

    Rng rng = make_rng(options.seed);
    std::vector<double> null_max(options.n_permutations);
    std::vector<double> t_perm(n_t);
    std::vector<int> signs(n_sub);
    for (std::size_t p = 0; p < options.n_permutations; ++p) {
        for (std::size_t s = 0; s < n_sub; s += 64) {
            std::uint64_t bits = rng();
            for (std::size_t k = s; k < std::min(n_sub, s + 64); ++k, bits >>= 1)
                signs[k] = (bits & 1u) ? -1 : 1;
        }
        std::fill(sum.begin(), sum.end(), 0.0);
        for (std::size_t s = 0; s < n_sub; ++s) {
            const double* row = series.values.data() + s * n_t;
            if (signs[s] > 0)
                for (std::size_t j = 0; j < n_t; ++j) sum[j] += row[j];
            else
                for (std::size_t j = 0; j < n_t; ++j) sum[j] -= row[j];
        }
        for (std::size_t j = 0; j < n_t; ++j) t_perm[j] = t_from_moments(sum[j], sumsq[j], n);
        null_max[p] = max_cluster_mass(t_perm, result.threshold_t);
    }
    const double denom = static_cast<double>(options.n_permutations) + 1.0;
    for (auto& c : result.clusters) {
        // Tolerate rounding between the observed and an identical permuted mass.
        const double cut = c.mass * (1.0 - 1e-12);
        const auto hits = std::count_if(null_max.begin(), null_max.end(), [&](double m) { return m >= cut; });
        c.p_value = (1.0 + static_cast<double>(hits)) / denom;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Bootstrap

double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw DomainError("percentile of empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("percentile level must lie in [0, 1]");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

std::vector<BootstrapPoint> bootstrap_ci(const SeriesMatrix& series, std::size_t n_boot, double level,
                                         std::uint64_t seed) {
    if (n_boot < 2) throw DomainError("bootstrap needs at least two resamples");
    if (series.subjects < 2) throw DomainError("bootstrap needs at least two subjects");
    if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
    const std::size_t n_sub = series.subjects;
    const std::size_t n_t = series.timepoints;

    // boot(b, j): mean of resample b at timepoint j, stored timepoint-major for sorting.
    std::vector<double> boot(n_t * n_boot, 0.0);
    Rng rng = make_rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n_sub - 1);
    std::vector<double> acc(n_t);
    for (std::size_t b = 0; b < n_boot; ++b) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t k = 0; k < n_sub; ++k) {
            const auto row = series.row(pick(rng));
            for (std::size_t j = 0; j < n_t; ++j) acc[j] += row[j];
        }
        for (std::size_t j = 0; j < n_t; ++j) boot[j * n_boot + b] = acc[j] / static_cast<double>(n_sub);
    }

    const double tail = (1.0 - level) / 2.0;
    std::vector<BootstrapPoint> out(n_t);
    std::vector<double> column(n_sub);
    for (std::size_t j = 0; j < n_t; ++j) {
        for (std::size_t s = 0; s < n_sub; ++s) column[s] = series(s, j);
        std::span<double> dist(boot.data() + j * n_boot, n_boot);
        std::sort(dist.begin(), dist.end());
        out[j].mean = mean(column);
        out[j].lo = percentile_sorted(dist, tail);
        out[j].hi = percentile_sorted(dist, 1.0 - tail);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Wilcoxon signed-rank

namespace {

double normal_cdf(double z) { return boost::math::cdf(boost::math::normal(), z); }

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> values, Alternative alternative,
                                    WilcoxonMethod method) {
    std::vector<double> nz;
    for (double v : values) {
        if (std::isnan(v)) throw DomainError("Wilcoxon signed-rank: NaN value");
        if (v != 0.0) nz.push_back(v);
    }
    if (nz.empty()) throw DomainError("Wilcoxon signed-rank: all values are zero");
    const std::size_t n = nz.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::fabs(nz[a]) < std::fabs(nz[b]); });
    // Doubled average ranks are integers, which keeps the exact null integral.
    std::vector<long> rank2(n);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::fabs(nz[order[j + 1]]) == std::fabs(nz[order[i]])) ++j;
        const long r2 = static_cast<long>(i + j + 2);  // 2 * mean of ranks i+1..j+1
        for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = r2;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }

    WilcoxonResult r;
    r.n = n;
    long w2 = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (nz[i] > 0) w2 += rank2[i];
    r.w_plus = static_cast<double>(w2) / 2.0;

    const bool exact = method == WilcoxonMethod::Exact ||
                       (method == WilcoxonMethod::Auto && n <= kWilcoxonExactMaxN);
    r.exact = exact;
    double p_greater = 0.0, p_less = 0.0;
    if (exact) {
        // Null distribution of 2W over the 2^n equally likely sign patterns.
        const long total2 = std::accumulate(rank2.begin(), rank2.end(), 0L);
        std::vector<double> count(static_cast<std::size_t>(total2) + 1, 0.0);
        count[0] = 1.0;
        long reach = 0;
        for (long r2 : rank2) {
            for (long s = reach; s >= 0; --s)
                if (count[static_cast<std::size_t>(s)] != 0.0)
                    count[static_cast<std::size_t>(s + r2)] += count[static_cast<std::size_t>(s)];
            reach += r2;
        }
        const double patterns = std::ldexp(1.0, static_cast<int>(n));
        double ge = 0.0, le = 0.0;
        for (long s = 0; s <= total2; ++s) {
            if (s >= w2) ge += count[static_cast<std::size_t>(s)];
            if (s <= w2) le += count[static_cast<std::size_t>(s)];
        }
        p_greater = ge / patterns;
        p_less = le / patterns;
    } else {
        const double nn = static_cast<double>(n);
        const double mu = nn * (nn + 1.0) / 4.0;
        const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
        const double sd = std::sqrt(var);
        p_greater = 1.0 - normal_cdf((r.w_plus - mu - 0.5) / sd);
        p_less = normal_cdf((r.w_plus - mu + 0.5) / sd);
    }
    switch (alternative) {
        case Alternative::Greater: r.p = p_greater; break;
        case Alternative::Less: r.p = p_less; break;
        case Alternative::TwoSided: r.p = std::min(1.0, 2.0 * std::min(p_greater, p_less)); break;
    }
    r.p = std::clamp(r.p, 0.0, 1.0);
    return r;
}

// ---------------------------------------------------------------------------
// Benjamini-Hochberg

FdrResult fdr_bh(std::span<const double> pvals, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("FDR alpha must lie in (0, 1]");
    const std::size_t m = pvals.size();
    for (double p : pvals)
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p-values must lie in [0, 1]");
    FdrResult r{std::vector<bool>(m, false), std::vector<double>(m, 1.0)};
    if (m == 0) return r;

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pvals[a] < pvals[b]; });

    const double md = static_cast<double>(m);
    std::size_t last = 0;  // number of rejections
    for (std::size_t i = 0; i < m; ++i)
        if (pvals[order[i]] <= static_cast<double>(i + 1) * alpha / md) last = i + 1;
    for (std::size_t i = 0; i < last; ++i) r.rejected[order[i]] = true;

    double running = 1.0;
    for (std::size_t i = m; i-- > 0;) {
        running = std::min(running, md * pvals[order[i]] / static_cast<double>(i + 1));
        r.adjusted[order[i]] = std::min(1.0, running);
    }
    return r;
}

}  // namespace treegaze::stats
