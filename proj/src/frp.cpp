#include "treegaze/frp.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "treegaze/csv.hpp"
#include "treegaze/error.hpp"

namespace treegaze::frp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kDtype = "float32-le";
constexpr const char* kEpochOrder = "trial,channel,time";
constexpr const char* kBetaOrder = "channel,time,coefficient";

std::uint32_t to_le(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big)
        return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
    return v;
}

std::vector<float> read_float32_le(const fs::path& path, std::size_t expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open payload " + path.string());
    in.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::size_t>(in.tellg());
    in.seekg(0);
    if (bytes != expected * 4)
        throw IngestError("payload size mismatch in " + path.string() + ": " + std::to_string(bytes) +
                          " bytes, sidecar dimensions require " + std::to_string(expected * 4));
    std::vector<std::uint32_t> raw(expected);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
    std::vector<float> out(expected);
    for (std::size_t i = 0; i < expected; ++i) out[i] = std::bit_cast<float>(to_le(raw[i]));
    return out;
}

template <class T>
void write_float32_le(const fs::path& path, std::span<const T> values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write " + path.string());
    std::vector<std::uint32_t> raw(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        raw[i] = to_le(std::bit_cast<std::uint32_t>(static_cast<float>(values[i])));
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 4));
}

json read_sidecar(const fs::path& sidecar) {
    std::ifstream in(sidecar);
    if (!in) throw IngestError("cannot open sidecar " + sidecar.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IngestError("sidecar " + sidecar.string() + " is not valid JSON: " + e.what());
    }
}

template <class T>
T field(const json& j, const char* key, const fs::path& sidecar) {
    if (!j.contains(key)) throw IngestError("sidecar " + sidecar.string() + " lacks field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw IngestError("sidecar " + sidecar.string() + " field '" + key + "' has the wrong type");
    }
}

std::size_t positive_dim(const json& j, const char* key, const fs::path& sidecar) {
    const auto v = field<long long>(j, key, sidecar);
    if (v <= 0) throw IngestError("sidecar field '" + std::string(key) + "' must be positive");
    return static_cast<std::size_t>(v);
}

std::vector<TrialMeta> read_trial_meta(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open trial metadata " + path.string());
    csv::Reader reader(in);
    std::vector<TrialMeta> out;
    if (!reader.read_header()) return out;
    const auto c_sent = reader.require_column("sentence_id");
    const auto c_tok = reader.require_column("token_index");
    const auto c_syn = reader.require_column("syntactic_surprisal");
    const auto c_lex = reader.require_column("lexical_surprisal");
    while (auto row = reader.next()) {
        TrialMeta m;
        m.sentence_id = row->fields[c_sent];
        m.token_index = static_cast<int>(csv::to_integer(row->fields[c_tok], "token_index", row->line));
        m.syntactic_surprisal = csv::to_double(row->fields[c_syn], "syntactic_surprisal", row->line);
        m.lexical_surprisal = csv::to_double(row->fields[c_lex], "lexical_surprisal", row->line);
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace

void EpochSet::validate() const {
    if (data.size() != n_trials * n_channels * n_timepoints)
        throw IngestError("epoch data size does not match n_trials x n_channels x n_timepoints");
    if (trials.size() != n_trials)
        throw IngestError("trial metadata has " + std::to_string(trials.size()) + " rows for " +
                          std::to_string(n_trials) + " trials");
    if (!(sfreq > 0.0) || !std::isfinite(tmin)) throw IngestError("invalid sfreq or tmin");
    for (float v : data)
        if (std::isnan(v)) throw IngestError("epoch payload contains NaN");
    for (const auto& m : trials)
        if (!std::isfinite(m.syntactic_surprisal) || !std::isfinite(m.lexical_surprisal))
            throw IngestError("trial metadata contains a non-finite surprisal");
}

EpochSet load_epochs(const fs::path& sidecar) {
    const json j = read_sidecar(sidecar);
    EpochSet e;
    e.n_trials = positive_dim(j, "n_trials", sidecar);
    e.n_channels = positive_dim(j, "n_channels", sidecar);
    e.n_timepoints = positive_dim(j, "n_timepoints", sidecar);
    e.sfreq = field<double>(j, "sfreq", sidecar);
    e.tmin = field<double>(j, "tmin", sidecar);
    if (!(e.sfreq > 0.0)) throw IngestError("sidecar field 'sfreq' must be positive");
    const auto dtype = j.value("dtype", std::string(kDtype));
    if (dtype != kDtype) throw IngestError("unsupported dtype '" + dtype + "' (expected float32-le)");
    const auto order = j.value("order", std::string(kEpochOrder));
    if (order != kEpochOrder) throw IngestError("unsupported order '" + order + "' (expected trial,channel,time)");
    const std::string stem = sidecar.stem().string();
    e.subject = j.value("subject", stem);
    const auto base = sidecar.parent_path();
    e.data = read_float32_le(base / j.value("payload", stem + ".bin"), e.n_trials * e.n_channels * e.n_timepoints);
    for (float v : e.data)
        if (std::isnan(v)) throw IngestError("payload of " + e.subject + " contains NaN values");
    e.trials = read_trial_meta(base / j.value("metadata", stem + "_meta.csv"));
    if (e.trials.size() != e.n_trials)
        throw IngestError("metadata row count mismatch for " + e.subject + ": " + std::to_string(e.trials.size()) +
                          " rows for n_trials = " + std::to_string(e.n_trials));
    e.validate();
    return e;
}

void write_epochs(const EpochSet& epochs, const fs::path& dir, const std::string& stem) {
    epochs.validate();
    fs::create_directories(dir);
    nlohmann::ordered_json j;
    j["subject"] = epochs.subject;
    j["n_trials"] = epochs.n_trials;
    j["n_channels"] = epochs.n_channels;
    j["n_timepoints"] = epochs.n_timepoints;
    j["sfreq"] = epochs.sfreq;
    j["tmin"] = epochs.tmin;
    j["dtype"] = kDtype;
    j["order"] = kEpochOrder;
    j["payload"] = stem + ".bin";
    j["metadata"] = stem + "_meta.csv";
    std::ofstream(dir / (stem + ".json")) << j.dump(2) << '\n';
    write_float32_le<float>(dir / (stem + ".bin"), epochs.data);
    std::ofstream meta(dir / (stem + "_meta.csv"));
    meta << "sentence_id,token_index,syntactic_surprisal,lexical_surprisal\n";
    for (const auto& m : epochs.trials)
        meta << csv::escape(m.sentence_id) << ',' << m.token_index << ',' << csv::format_double(m.syntactic_surprisal)
             << ',' << csv::format_double(m.lexical_surprisal) << '\n';
}

BetaSeries regress_timewise(const EpochSet& epochs, bool standardize, Predictor predictor) {
    const std::size_t n = epochs.n_trials;
    if (n < 3) throw DomainError("time-resolved regression needs at least 3 trials");
    if (epochs.trials.size() != n) throw DomainError("trial metadata does not match trial count");

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = predictor == Predictor::Syntactic ? epochs.trials[i].syntactic_surprisal
                                                 : epochs.trials[i].lexical_surprisal;
    double xbar = 0.0;
    for (double v : x) xbar += v;
    xbar /= static_cast<double>(n);
    double sxx = 0.0;
    for (double v : x) sxx += (v - xbar) * (v - xbar);
    if (!(sxx > 1e-12 * std::max(1.0, xbar * xbar) * static_cast<double>(n)))
        throw DomainError("predictor has zero variance across trials");
    if (standardize) {
        const double sd = std::sqrt(sxx / static_cast<double>(n - 1));
        for (auto& v : x) v = (v - xbar) / sd;
        xbar = 0.0;
        sxx = static_cast<double>(n - 1);
    }

    // Centred closed form: slope = sum (x - xbar) y / Sxx, intercept = ybar - slope * xbar.
    const std::size_t nt = epochs.n_timepoints;
    BetaSeries out;
    out.subject = epochs.subject;
    out.n_channels = epochs.n_channels;
    out.n_timepoints = nt;
    out.sfreq = epochs.sfreq;
    out.tmin = epochs.tmin;
    out.beta.assign(epochs.n_channels * nt * 2, 0.0);
    std::vector<double> ysum(nt), xy(nt);
    for (std::size_t ch = 0; ch < epochs.n_channels; ++ch) {
        std::fill(ysum.begin(), ysum.end(), 0.0);
        std::fill(xy.begin(), xy.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double w = x[i] - xbar;
            const float* y = epochs.data.data() + (i * epochs.n_channels + ch) * nt;
            for (std::size_t t = 0; t < nt; ++t) {
                ysum[t] += y[t];
                xy[t] += w * y[t];
            }
        }
        for (std::size_t t = 0; t < nt; ++t) {
            const double slope = xy[t] / sxx;
            const double ybar = ysum[t] / static_cast<double>(n);
            out.beta[(ch * nt + t) * 2] = ybar - slope * xbar;
            out.beta[(ch * nt + t) * 2 + 1] = slope;
        }
    }
    return out;
}

std::vector<double> roi_average(const BetaSeries& beta, std::span<const std::size_t> roi) {
    if (roi.empty()) throw DomainError("ROI must contain at least one channel");
    for (auto ch : roi)
        if (ch >= beta.n_channels) throw DomainError("ROI channel " + std::to_string(ch) + " out of range");
    std::vector<double> out(beta.n_timepoints, 0.0);
    for (auto ch : roi)
        for (std::size_t t = 0; t < beta.n_timepoints; ++t) out[t] += beta.slope(ch, t);
    for (auto& v : out) v /= static_cast<double>(roi.size());
    return out;
}

void write_betas(const BetaSeries& beta, const fs::path& dir, const std::string& stem) {
    fs::create_directories(dir);
    nlohmann::ordered_json j;
    j["subject"] = beta.subject;
    j["n_channels"] = beta.n_channels;
    j["n_timepoints"] = beta.n_timepoints;
    j["n_coefficients"] = 2;
    j["coefficients"] = {"intercept", "slope"};
    j["sfreq"] = beta.sfreq;
    j["tmin"] = beta.tmin;
    j["dtype"] = kDtype;
    j["order"] = kBetaOrder;
    j["payload"] = stem + ".bin";
    std::ofstream(dir / (stem + ".json")) << j.dump(2) << '\n';
    write_float32_le<double>(dir / (stem + ".bin"), beta.beta);
}

BetaSeries load_betas(const fs::path& sidecar) {
    const json j = read_sidecar(sidecar);
    BetaSeries b;
    b.n_channels = positive_dim(j, "n_channels", sidecar);
    b.n_timepoints = positive_dim(j, "n_timepoints", sidecar);
    if (field<long long>(j, "n_coefficients", sidecar) != 2) throw IngestError("beta files carry 2 coefficients");
    b.sfreq = field<double>(j, "sfreq", sidecar);
    b.tmin = field<double>(j, "tmin", sidecar);
    const std::string stem = sidecar.stem().string();
    b.subject = j.value("subject", stem);
    const auto raw = read_float32_le(sidecar.parent_path() / j.value("payload", stem + ".bin"),
                                     b.n_channels * b.n_timepoints * 2);
    b.beta.assign(raw.begin(), raw.end());
    return b;
}

}  // namespace treegaze::frp
