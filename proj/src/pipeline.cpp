#include "treegaze/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "treegaze/align.hpp"
#include "treegaze/bayesnet.hpp"
#include "treegaze/csv.hpp"
#include "treegaze/error.hpp"
#include "treegaze/features.hpp"
#include "treegaze/frp.hpp"
#include "treegaze/stats.hpp"
#include "treegaze/svg.hpp"
#include "treegaze/transitions.hpp"

namespace treegaze::pipeline {

using nlohmann::json;
using ojson = nlohmann::ordered_json;
using namespace treegaze::synth;

// ---------------------------------------------------------------------------
// Config

namespace {

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
void read(const json& j, const char* key, T& out, const char* where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(where) + "." + key + " has the wrong type");
    }
}

fs::path resolve(const fs::path& base, const std::string& p) {
    if (p.empty()) return {};
    const fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

ReaderKind parse_reader_kind(const std::string& s) {
    if (s == "serial") return ReaderKind::Serial;
    if (s == "tree_guided" || s == "tree-guided" || s == "treeguided") return ReaderKind::TreeGuided;
    throw ConfigError("reader kind must be 'serial' or 'tree_guided', got '" + s + "'");
}

std::string path_string(const fs::path& p) { return p.generic_string(); }

}  // namespace

RunConfig RunConfig::from_json(const json& j, const fs::path& base_dir) {
    check_keys(j, "config", {"paths", "parameters", "rois", "out_dir", "synth"});
    RunConfig c;
    if (j.contains("paths")) {
        const auto& p = j["paths"];
        check_keys(p, "paths", {"conllu", "fixations", "norms", "surprisal", "epochs_dir"});
        std::string s;
        s.clear(); read(p, "conllu", s, "paths"); c.conllu = resolve(base_dir, s);
        s.clear(); read(p, "fixations", s, "paths"); c.fixations = resolve(base_dir, s);
        s.clear(); read(p, "norms", s, "paths"); c.norms = resolve(base_dir, s);
        s.clear(); read(p, "surprisal", s, "paths"); c.surprisal = resolve(base_dir, s);
        s.clear(); read(p, "epochs_dir", s, "paths"); c.epochs_dir = resolve(base_dir, s);
    }
    if (j.contains("out_dir")) {
        std::string s;
        read(j, "out_dir", s, "config");
        c.out_dir = resolve(base_dir, s);
    } else if (!base_dir.empty()) {
        c.out_dir = base_dir / "out";
    }
    if (j.contains("parameters")) {
        const auto& p = j["parameters"];
        check_keys(p, "parameters", {"min_fixation_ms", "bins", "n_perm", "n_boot", "alpha", "max_parents",
                                     "restarts", "seed", "standardize", "cluster_threshold", "predictors"});
        auto& q = c.params;
        read(p, "min_fixation_ms", q.min_fixation_ms, "parameters");
        read(p, "bins", q.bins, "parameters");
        read(p, "n_perm", q.n_perm, "parameters");
        read(p, "n_boot", q.n_boot, "parameters");
        read(p, "alpha", q.alpha, "parameters");
        read(p, "max_parents", q.max_parents, "parameters");
        read(p, "restarts", q.restarts, "parameters");
        read(p, "seed", q.seed, "parameters");
        read(p, "standardize", q.standardize, "parameters");
        read(p, "cluster_threshold", q.cluster_threshold, "parameters");
        read(p, "predictors", q.predictors, "parameters");
    }
    if (j.contains("rois")) {
        const auto& r = j["rois"];
        if (!r.is_object()) throw ConfigError("rois must map names to channel-index lists");
        for (const auto& [name, chans] : r.items()) {
            std::vector<std::size_t> idx;
            try {
                idx = chans.get<std::vector<std::size_t>>();
            } catch (const json::exception&) {
                throw ConfigError("roi '" + name + "' must be a list of non-negative channel indices");
            }
            if (idx.empty()) throw ConfigError("roi '" + name + "' is empty");
            c.rois[name] = std::move(idx);
        }
    }
    if (j.contains("synth")) {
        const auto& s = j["synth"];
        check_keys(s, "synth", {"sentences", "min_length", "max_length", "vocabulary", "participants", "reader", "frp"});
        SynthConfig sc;
        read(s, "sentences", sc.treebank.sentences, "synth");
        read(s, "min_length", sc.treebank.min_length, "synth");
        read(s, "max_length", sc.treebank.max_length, "synth");
        read(s, "vocabulary", sc.treebank.vocabulary, "synth");
        read(s, "participants", sc.participants, "synth");
        if (s.contains("reader")) {
            const auto& r = s["reader"];
            check_keys(r, "synth.reader", {"kind", "lambda", "skip_prob", "regress_prob"});
            std::string kind = "serial";
            read(r, "kind", kind, "synth.reader");
            sc.reader.kind = parse_reader_kind(kind);
            read(r, "lambda", sc.reader.lambda, "synth.reader");
            read(r, "skip_prob", sc.reader.skip_prob, "synth.reader");
            read(r, "regress_prob", sc.reader.regress_prob, "synth.reader");
        }
        if (s.contains("frp")) {
            const auto& f = s["frp"];
            check_keys(f, "synth.frp", {"subjects", "trials", "channels", "window_ms", "amplitude", "noise_sd",
                                        "surprisal_sigma", "timepoints"});
            FrpOptions fo;
            read(f, "subjects", fo.subjects, "synth.frp");
            read(f, "trials", fo.trials, "synth.frp");
            read(f, "channels", fo.channels, "synth.frp");
            read(f, "window_ms", fo.window_ms, "synth.frp");
            read(f, "amplitude", fo.amplitude, "synth.frp");
            read(f, "noise_sd", fo.noise_sd, "synth.frp");
            read(f, "surprisal_sigma", fo.surprisal_sigma, "synth.frp");
            read(f, "timepoints", fo.timepoints, "synth.frp");
            sc.frp = fo;
        }
        c.synth = sc;
    }
    c.validate_parameters();
    return c;
}

RunConfig RunConfig::load(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + file.string() + " is not valid JSON: " + e.what());
    }
    return from_json(j, file.parent_path());
}

ojson RunConfig::to_json() const {
    ojson j;
    j["paths"] = {{"conllu", path_string(conllu)},       {"fixations", path_string(fixations)},
                  {"norms", path_string(norms)},         {"surprisal", path_string(surprisal)},
                  {"epochs_dir", path_string(epochs_dir)}};
    const auto& q = params;
    j["parameters"] = {{"min_fixation_ms", q.min_fixation_ms}, {"bins", q.bins},
                       {"n_perm", q.n_perm},                   {"n_boot", q.n_boot},
                       {"alpha", q.alpha},                     {"max_parents", q.max_parents},
                       {"restarts", q.restarts},               {"seed", q.seed},
                       {"standardize", q.standardize},         {"cluster_threshold", q.cluster_threshold},
                       {"predictors", q.predictors}};
    ojson rois_j = ojson::object();
    for (const auto& [name, idx] : rois) rois_j[name] = idx;
    j["rois"] = rois_j;
    j["out_dir"] = path_string(out_dir);
    return j;
}

void RunConfig::validate_parameters() const {
    const auto& q = params;
    if (!(q.min_fixation_ms >= 0.0)) throw ConfigError("min_fixation_ms must be >= 0");
    if (q.bins < 2 || q.bins > 64) throw ConfigError("bins must lie in [2, 64]");
    if (q.n_perm < 1) throw ConfigError("n_perm must be >= 1");
    if (q.n_boot < 2) throw ConfigError("n_boot must be >= 2");
    if (!(q.alpha > 0.0 && q.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (q.max_parents < 0) throw ConfigError("max_parents must be >= 0");
    if (q.restarts < 0) throw ConfigError("restarts must be >= 0");
    if (q.predictors.empty()) throw ConfigError("predictors must name at least one of syntactic, lexical");
    for (const auto& p : q.predictors)
        if (p != "syntactic" && p != "lexical") throw ConfigError("unknown predictor '" + p + "'");
    if (synth) {
        synth->reader.validate();
        if (synth->frp) synth->frp->validate();
        if (synth->treebank.min_length < 1 || synth->treebank.max_length < synth->treebank.min_length)
            throw ConfigError("synth lengths must satisfy 1 <= min_length <= max_length");
    }
}

void RunConfig::require(const fs::path& path, const char* key) const {
    if (path.empty()) throw ConfigError(std::string("paths.") + key + " is required for this command");
    if (!fs::exists(path)) throw ConfigError(std::string("paths.") + key + " does not exist: " + path.string());
}

// ---------------------------------------------------------------------------
// Shared loading

namespace {

std::ifstream open_in(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IngestError("cannot open " + p.string());
    return in;
}

std::ofstream open_out(const fs::path& p) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IngestError("cannot write " + p.string());
    return out;
}

// Prefixes ingestion errors with the file they came from.
template <class F>
auto with_context(const fs::path& file, F&& f) {
    try {
        return f();
    } catch (const ParseError& e) {
        throw ParseError(file.string() + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2),
                         e.line());
    } catch (const TreeError& e) {
        throw IngestError(file.string() + ": " + e.what());
    } catch (const IngestError& e) {
        throw IngestError(file.string() + ": " + e.what());
    }
}

std::vector<Sentence> load_corpus(const RunConfig& c) {
    c.require(c.conllu, "conllu");
    return with_context(c.conllu, [&] {
        auto in = open_in(c.conllu);
        auto raw = parse_conllu(in);
        std::vector<Sentence> out;
        out.reserve(raw.size());
        std::set<std::string> ids;
        for (auto& s : raw) {
            if (!ids.insert(s.id()).second) throw IngestError("duplicate sentence id '" + s.id() + "'");
            out.push_back(annotate(std::move(s)));
        }
        return out;
    });
}

std::vector<GazeSequence> load_sequences(const RunConfig& c, const std::vector<Sentence>& corpus) {
    c.require(c.fixations, "fixations");
    return with_context(c.fixations, [&] {
        auto in = open_in(c.fixations);
        const auto records = load_fixations(in, c.params.min_fixation_ms);
        check_against_corpus(records, corpus);
        return build_gaze_sequences(records);
    });
}

ojson welch_json(const std::optional<stats::WelchResult>& w, std::size_t n) {
    ojson j;
    if (!w) {
        j["t"] = nullptr;
        j["df"] = nullptr;
        j["p_two_tailed"] = nullptr;
        j["note"] = "both conditions have zero variance";
        return j;
    }
    j["t"] = w->t;
    j["df"] = w->df;
    j["p_two_tailed"] = w->p_two_tailed;
    j["mean_gaze"] = w->mean_a;
    j["sd_gaze"] = w->sd_a;
    j["mean_baseline"] = w->mean_b;
    j["sd_baseline"] = w->sd_b;
    j["n_sentences"] = n;
    return j;
}

struct AlignmentRows {
    struct Row {
        std::string sentence_id;
        std::string participant;
        int distance;
    };
    std::vector<Row> rows;
    std::vector<std::pair<std::string, double>> sentence_means;  // corpus order
    std::vector<std::size_t> participants;
};

AlignmentRows align_all(const std::vector<Sentence>& corpus, const std::vector<GazeSequence>& sequences) {
    std::unordered_map<std::string, std::vector<const GazeSequence*>> by_sentence;
    for (const auto& g : sequences) by_sentence[g.sentence_id].push_back(&g);
    AlignmentRows out;
    for (const auto& s : corpus) {
        auto it = by_sentence.find(s.id());
        if (it == by_sentence.end()) continue;
        const auto text = text_sequence(s);
        std::vector<std::vector<int>> paths;
        for (const auto* g : it->second) {
            if (g->path.empty()) continue;
            out.rows.push_back({s.id(), g->participant, edit_distance(g->path, text)});
            paths.push_back(g->path);
        }
        if (paths.empty()) continue;
        out.sentence_means.emplace_back(s.id(), sentence_edit_distance(paths, text));
        out.participants.push_back(paths.size());
    }
    return out;
}

FeatureTable build_features(const RunConfig& c, std::vector<Sentence>& corpus) {
    const auto sequences = load_sequences(c, corpus);
    const auto alignment = align_all(corpus, sequences);
    c.require(c.norms, "norms");
    c.require(c.surprisal, "surprisal");
    const auto norms = with_context(c.norms, [&] {
        auto in = open_in(c.norms);
        return load_norms(in);
    });
    const auto surprisal = with_context(c.surprisal, [&] {
        auto in = open_in(c.surprisal);
        return load_word_surprisal(in);
    });
    std::unordered_map<std::string, const Sentence*> by_id;
    for (const auto& s : corpus) by_id[s.id()] = &s;

    std::vector<SentenceFeatures> rows;
    for (const auto& [id, ed] : alignment.sentence_means) {
        auto it = surprisal.find(id);
        if (it == surprisal.end() || it->second.empty())
            throw IngestError(c.surprisal.string() + ": no surprisal values for sentence '" + id + "'");
        std::vector<double> lexical;
        for (const auto& w : it->second) lexical.push_back(w.lexical);
        rows.push_back(sentence_features(*by_id.at(id), ed, norms, lexical));
    }
    if (rows.size() < 3) throw DomainError("feature table needs at least three sentences with gaze data");
    return assemble_feature_table(rows, c.params.bins);
}

void write_feature_outputs(const RunConfig& c, const FeatureTable& table) {
    {
        auto out = open_out(c.out_dir / "features.csv");
        write_feature_csv(out, table);
    }
    const auto cols = table.raw_columns();
    auto out = open_out(c.out_dir / "correlation.csv");
    write_correlation_csv(out, correlation_matrix(cols));
}

}  // namespace

// ---------------------------------------------------------------------------
// Commands

void run_transitions(const RunConfig& c) {
    auto corpus = load_corpus(c);
    const auto sequences = load_sequences(c, corpus);
    const auto report = analyze_transitions(corpus, sequences);

    {
        auto out = open_out(c.out_dir / "roles.csv");
        write_role_table(out, corpus);
    }
    {
        auto out = open_out(c.out_dir / "transitions.csv");
        write_transition_csv(out, report);
    }
    ojson summary;
    summary["n_sentences"] = report.sentences.size();
    summary["test"] = "Welch two-sample t, gaze minus baseline, two-tailed";
    ojson types = ojson::object();
    std::vector<svg::BarGroup> bars;
    for (auto type : kTransitionTypes) {
        const auto k = static_cast<std::size_t>(type);
        types[std::string(to_string(type))] = welch_json(report.welch[k], report.sentences.size());
        svg::BarGroup g;
        g.label = std::string(to_string(type));
        std::vector<double> base, gaze;
        for (const auto& st : report.sentences) {
            base.push_back(st.baseline.probability(type));
            gaze.push_back(st.gaze_mean[k]);
        }
        g.mean = {stats::mean(base), stats::mean(gaze)};
        g.sd = {stats::sample_sd(base), stats::sample_sd(gaze)};
        g.p = report.welch[k] ? report.welch[k]->p_two_tailed : 1.0;
        bars.push_back(g);
    }
    summary["types"] = types;
    {
        auto out = open_out(c.out_dir / "transitions_summary.json");
        out << summary.dump(2) << '\n';
    }
    auto out = open_out(c.out_dir / "transitions.svg");
    svg::bar_plot(out, bars, {"baseline", "gaze"}, "Transition probabilities by type", "probability (mean \xC2\xB1 1 SD)");
}

void run_align(const RunConfig& c) {
    auto corpus = load_corpus(c);
    const auto sequences = load_sequences(c, corpus);
    const auto alignment = align_all(corpus, sequences);
    {
        auto out = open_out(c.out_dir / "edit_distance.csv");
        out << "sentence_id,participant,edit_distance\n";
        for (const auto& r : alignment.rows)
            out << csv::escape(r.sentence_id) << ',' << csv::escape(r.participant) << ',' << r.distance << '\n';
    }
    auto out = open_out(c.out_dir / "edit_distance_mean.csv");
    out << "sentence_id,mean_edit_distance,n_participants\n";
    for (std::size_t i = 0; i < alignment.sentence_means.size(); ++i)
        out << csv::escape(alignment.sentence_means[i].first) << ','
            << csv::format_double(alignment.sentence_means[i].second) << ',' << alignment.participants[i] << '\n';
}

void run_features(const RunConfig& c) {
    auto corpus = load_corpus(c);
    write_feature_outputs(c, build_features(c, corpus));
}

void run_bayesnet(const RunConfig& c) {
    auto corpus = load_corpus(c);
    const auto table = build_features(c, corpus);
    write_feature_outputs(c, table);

    std::vector<std::string> names(kFeatureNames.begin(), kFeatureNames.end());
    const bn::DiscreteData data(names, std::vector<int>(kFeatureCount, table.bins), table.discrete_columns());
    bn::HillClimbOptions search;
    search.max_parents = c.params.max_parents;
    search.restarts = c.params.restarts;
    search.seed = c.params.seed;
    const auto learned = bn::hill_climb_search(data, search);
    const auto fitted = bn::fit_mle(learned.dag, data);
    const auto boot = bn::bootstrap_arc_strength(data, c.params.n_boot, c.params.seed, search);
    const auto strength = bn::arc_strength_report(learned.dag, data, boot);

    {
        auto out = open_out(c.out_dir / "arcs.csv");
        bn::write_arcs_csv(out, learned.dag, names);
    }
    {
        auto out = open_out(c.out_dir / "cpts.json");
        bn::write_cpts_json(out, fitted);
    }
    {
        auto out = open_out(c.out_dir / "strength.csv");
        bn::write_strength_csv(out, strength, names);
    }
    {
        auto out = open_out(c.out_dir / "network.dot");
        bn::write_dot(out, learned.dag, names, strength);
    }
    {
        auto out = open_out(c.out_dir / "mutual_information.csv");
        out << "variable,target,mi_nats,n_mi\n";
        for (std::size_t v = 1; v < kFeatureCount; ++v) {
            const auto mi = bn::mutual_information(data.column(v), data.column(0));
            out << names[v] << ',' << names[0] << ',' << csv::format_double(mi.nats) << ','
                << csv::format_double(mi.n_times_nats) << '\n';
        }
    }
    ojson summary;
    summary["n_rows"] = data.rows();
    summary["bins"] = table.bins;
    summary["bic"] = learned.score;
    summary["search_steps"] = learned.steps;
    summary["bootstrap_replicates"] = boot.replicates;
    ojson arcs = ojson::array();
    for (const auto& s : strength)
        arcs.push_back({{"parent", names[static_cast<std::size_t>(s.arc.first)]},
                        {"child", names[static_cast<std::size_t>(s.arc.second)]},
                        {"boot_frequency", s.boot_frequency},
                        {"directed_frequency", s.directed_frequency},
                        {"score_loss", s.score_loss},
                        {"mi_nats", s.mi.nats},
                        {"n_mi", s.mi.n_times_nats}});
    summary["arcs"] = arcs;
    auto out = open_out(c.out_dir / "bayesnet_summary.json");
    out << summary.dump(2) << '\n';
}

void run_frp(const RunConfig& c) {
    c.require(c.epochs_dir, "epochs_dir");
    if (!fs::is_directory(c.epochs_dir)) throw ConfigError("paths.epochs_dir is not a directory");
    std::vector<fs::path> sidecars;
    for (const auto& e : fs::directory_iterator(c.epochs_dir))
        if (e.is_regular_file() && e.path().extension() == ".json") sidecars.push_back(e.path());
    std::sort(sidecars.begin(), sidecars.end());
    if (sidecars.size() < 2) throw IngestError("need epoch files for at least two subjects in " + c.epochs_dir.string());

    const std::vector<frp::Predictor> predictors = [&] {
        std::vector<frp::Predictor> p;
        for (const auto& s : c.params.predictors)
            p.push_back(s == "lexical" ? frp::Predictor::Lexical : frp::Predictor::Syntactic);
        return p;
    }();

    // betas[predictor][subject]
    std::vector<std::vector<frp::BetaSeries>> betas(predictors.size());
    std::size_t n_channels = 0, n_timepoints = 0;
    double sfreq = 0.0, tmin = 0.0;
    for (const auto& sc : sidecars) {
        const auto epochs = with_context(sc, [&] { return frp::load_epochs(sc); });
        if (n_timepoints == 0) {
            n_channels = epochs.n_channels;
            n_timepoints = epochs.n_timepoints;
            sfreq = epochs.sfreq;
            tmin = epochs.tmin;
        } else if (epochs.n_channels != n_channels || epochs.n_timepoints != n_timepoints ||
                   epochs.sfreq != sfreq || epochs.tmin != tmin) {
            throw IngestError(sc.string() + ": epoch geometry differs from the first subject");
        }
        for (std::size_t k = 0; k < predictors.size(); ++k) {
            auto b = frp::regress_timewise(epochs, c.params.standardize, predictors[k]);
            frp::write_betas(b, c.out_dir / "betas", b.subject + "_" + c.params.predictors[k]);
            betas[k].push_back(std::move(b));
        }
    }

    auto rois = c.rois;
    if (rois.empty()) {
        std::vector<std::size_t> all(n_channels);
        for (std::size_t i = 0; i < n_channels; ++i) all[i] = i;
        rois["all"] = all;
    }
    for (const auto& [name, idx] : rois)
        for (auto ch : idx)
            if (ch >= n_channels)
                throw ConfigError("roi '" + name + "' names channel " + std::to_string(ch) + " but data have " +
                                  std::to_string(n_channels));

    auto time_ms = [&](std::size_t k) { return (tmin + static_cast<double>(k) / sfreq) * 1000.0; };
    ojson clusters_json = ojson::object();
    for (const auto& [name, idx] : rois) {
        ojson per_predictor = ojson::object();
        for (std::size_t k = 0; k < predictors.size(); ++k) {
            const auto& pred = c.params.predictors[k];
            stats::SeriesMatrix series(betas[k].size(), n_timepoints);
            for (std::size_t s = 0; s < betas[k].size(); ++s) {
                const auto roi = frp::roi_average(betas[k][s], idx);
                std::copy(roi.begin(), roi.end(), series.values.begin() + static_cast<std::ptrdiff_t>(s * n_timepoints));
            }
            stats::ClusterOptions copt;
            copt.n_permutations = c.params.n_perm;
            copt.alpha = c.params.alpha;
            copt.threshold_t = c.params.cluster_threshold;
            copt.seed = c.params.seed;
            const auto clusters = stats::cluster_permutation_1samp(series, copt);
            const auto ci = stats::bootstrap_ci(series, c.params.n_boot, 0.95, c.params.seed);

            std::vector<double> pw(n_timepoints, 1.0);
            std::vector<double> column(series.subjects);
            for (std::size_t t = 0; t < n_timepoints; ++t) {
                for (std::size_t s = 0; s < series.subjects; ++s) column[s] = series(s, t);
                try {
                    pw[t] = stats::wilcoxon_signed_rank(column, stats::Alternative::Greater).p;
                } catch (const DomainError&) {
                    pw[t] = 1.0;
                }
            }
            const auto fdr = stats::fdr_bh(pw, c.params.alpha);

            {
                auto out = open_out(c.out_dir / ("roi_" + name + "_" + pred + ".csv"));
                out << "sample,time_ms,mean,ci_lo,ci_hi,wilcoxon_p,fdr_p,significant\n";
                for (std::size_t t = 0; t < n_timepoints; ++t)
                    out << t << ',' << csv::format_double(time_ms(t)) << ',' << csv::format_double(ci[t].mean) << ','
                        << csv::format_double(ci[t].lo) << ',' << csv::format_double(ci[t].hi) << ','
                        << csv::format_double(pw[t]) << ',' << csv::format_double(fdr.adjusted[t]) << ','
                        << (fdr.rejected[t] ? 1 : 0) << '\n';
            }

            ojson cj;
            cj["threshold_t"] = clusters.threshold_t;
            cj["n_permutations"] = clusters.n_permutations;
            cj["alpha"] = clusters.alpha;
            cj["n_subjects"] = series.subjects;
            ojson list = ojson::array();
            svg::TimeCourse course;
            for (const auto& cl : clusters.clusters) {
                const bool sig = cl.p_value < clusters.alpha;
                list.push_back({{"start_sample", cl.start},
                                {"end_sample", cl.end},
                                {"start_ms", time_ms(cl.start)},
                                {"end_ms", time_ms(cl.end)},
                                {"sign", cl.sign},
                                {"mass", cl.mass},
                                {"p_value", cl.p_value},
                                {"significant", sig}});
                if (sig) course.shaded.push_back({time_ms(cl.start), time_ms(cl.end)});
            }
            cj["clusters"] = list;
            per_predictor[pred] = cj;

            for (std::size_t t = 0; t < n_timepoints; ++t) {
                course.time_ms.push_back(time_ms(t));
                course.mean.push_back(ci[t].mean);
                course.lo.push_back(ci[t].lo);
                course.hi.push_back(ci[t].hi);
                course.significant.push_back(fdr.rejected[t]);
            }
            auto out = open_out(c.out_dir / ("frp_" + name + "_" + pred + ".svg"));
            svg::line_plot(out, course, "Surprisal effect (" + pred + "), ROI " + name, "beta (slope)");
        }
        clusters_json[name] = per_predictor;
    }
    auto out = open_out(c.out_dir / "clusters.json");
    out << clusters_json.dump(2) << '\n';
}

void run_synth(const RunConfig& c) {
    if (!c.synth) throw ConfigError("synth command needs a 'synth' section in the config");
    const auto& sc = *c.synth;
    auto tb = sc.treebank;
    tb.seed = c.params.seed;
    const auto corpus = gen_treebank(tb);
    {
        auto out = open_out(c.out_dir / "treebank.conllu");
        write_conllu(out, corpus);
    }
    {
        const auto fix = gen_reader_paths(corpus, sc.reader, sc.participants, c.params.seed);
        auto out = open_out(c.out_dir / "fixations.csv");
        write_fixations(out, fix);
    }
    {
        auto out = open_out(c.out_dir / "norms.csv");
        write_norms_csv(out, gen_norms(corpus, c.params.seed));
    }
    {
        auto out = open_out(c.out_dir / "surprisal.csv");
        write_surprisal_csv(out, gen_word_surprisal(corpus, c.params.seed));
    }
    RunConfig next = c;
    next.synth.reset();
    next.conllu = "treebank.conllu";
    next.fixations = "fixations.csv";
    next.norms = "norms.csv";
    next.surprisal = "surprisal.csv";
    next.out_dir = "results";
    if (sc.frp) {
        auto fo = *sc.frp;
        fo.seed = c.params.seed;
        fo.validate();
        for (std::size_t s = 0; s < fo.subjects; ++s) {
            const auto e = gen_frp_subject(fo, s);
            frp::write_epochs(e, c.out_dir / "epochs", e.subject);
        }
        next.epochs_dir = "epochs";
    }
    auto out = open_out(c.out_dir / "run_config.json");
    out << next.to_json().dump(2) << '\n';
}

}  // namespace treegaze::pipeline
