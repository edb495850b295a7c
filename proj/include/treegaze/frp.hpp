#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace treegaze::frp {

inline constexpr double kDefaultSfreq = 500.0;
inline constexpr double kDefaultTmin = -0.600;
inline constexpr double kDefaultTmax = 1.000;
/// round((tmax - tmin) * sfreq) for the default epoch window.
inline constexpr std::size_t kDefaultTimepoints = 800;

struct TrialMeta {
    std::string sentence_id;
    int token_index = 0;
    double syntactic_surprisal = 0.0;  // nats
    double lexical_surprisal = 0.0;    // nats
};

/// Fixation-locked epochs of one subject: trials x channels x timepoints,
/// C order (trial, then channel, then time), microvolts.
struct EpochSet {
    std::string subject;
    std::size_t n_trials = 0;
    std::size_t n_channels = 0;
    std::size_t n_timepoints = 0;
    double sfreq = kDefaultSfreq;
    double tmin = kDefaultTmin;
    std::vector<float> data;
    std::vector<TrialMeta> trials;

    float at(std::size_t trial, std::size_t channel, std::size_t t) const {
        return data[(trial * n_channels + channel) * n_timepoints + t];
    }
    float& at(std::size_t trial, std::size_t channel, std::size_t t) {
        return data[(trial * n_channels + channel) * n_timepoints + t];
    }
    /// Seconds of sample k: tmin + k / sfreq.
    double time_of(std::size_t k) const { return tmin + static_cast<double>(k) / sfreq; }
    /// Throws IngestError when shapes or values are inconsistent.
    void validate() const;
};

enum class Predictor { Syntactic, Lexical };

/// Per-channel, per-timepoint OLS coefficients (intercept, slope).
struct BetaSeries {
    std::string subject;
    std::size_t n_channels = 0;
    std::size_t n_timepoints = 0;
    double sfreq = kDefaultSfreq;
    double tmin = kDefaultTmin;
    std::vector<double> beta;  // [(channel * n_timepoints + t) * 2 + coef]

    double intercept(std::size_t ch, std::size_t t) const { return beta[(ch * n_timepoints + t) * 2]; }
    double slope(std::size_t ch, std::size_t t) const { return beta[(ch * n_timepoints + t) * 2 + 1]; }
};

/// Reads the JSON sidecar, the float32 little-endian payload and the trial
/// metadata CSV it names (paths relative to the sidecar).
EpochSet load_epochs(const std::filesystem::path& sidecar);

/// Writes `<stem>.json`, `<stem>.bin` and `<stem>_meta.csv` into `dir`.
void write_epochs(const EpochSet& epochs, const std::filesystem::path& dir, const std::string& stem);

/// Ordinary least squares of trial amplitudes on [1, predictor] at every
/// channel and timepoint. With `standardize`, the predictor is z-scored across
/// trials first (n - 1 sd). Flat channels give slope 0.
BetaSeries regress_timewise(const EpochSet& epochs, bool standardize = true,
                            Predictor predictor = Predictor::Syntactic);

/// Mean slope over the ROI channels at each timepoint.
std::vector<double> roi_average(const BetaSeries& beta, std::span<const std::size_t> roi);

/// Writes `<stem>.json` and `<stem>.bin` (float32 LE, channel -> time -> coefficient).
void write_betas(const BetaSeries& beta, const std::filesystem::path& dir, const std::string& stem);
BetaSeries load_betas(const std::filesystem::path& sidecar);

}  // namespace treegaze::frp
