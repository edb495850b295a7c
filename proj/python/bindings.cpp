#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>
#include <optional>
#include <sstream>

#include "treegaze/align.hpp"
#include "treegaze/bayesnet.hpp"
#include "treegaze/corpus.hpp"
#include "treegaze/error.hpp"
#include "treegaze/features.hpp"
#include "treegaze/frp.hpp"
#include "treegaze/gaze.hpp"
#include "treegaze/pipeline.hpp"
#include "treegaze/stats.hpp"
#include "treegaze/synth.hpp"
#include "treegaze/transitions.hpp"

namespace py = pybind11;
using namespace treegaze;

namespace {

using Matrix = py::array_t<double, py::array::c_style | py::array::forcecast>;

stats::SeriesMatrix to_series(const Matrix& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array (subjects x timepoints)");
    stats::SeriesMatrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.values.begin());
    return m;
}

stats::Alternative parse_alternative(const std::string& s) {
    if (s == "greater") return stats::Alternative::Greater;
    if (s == "less") return stats::Alternative::Less;
    if (s == "two-sided") return stats::Alternative::TwoSided;
    throw py::value_error("alternative must be 'greater', 'less' or 'two-sided'");
}

stats::WilcoxonMethod parse_method(const std::string& s) {
    if (s == "auto") return stats::WilcoxonMethod::Auto;
    if (s == "exact") return stats::WilcoxonMethod::Exact;
    if (s == "normal") return stats::WilcoxonMethod::Normal;
    throw py::value_error("method must be 'auto', 'exact' or 'normal'");
}

Role parse_role(const std::string& s) {
    if (s == "Head") return Role::Head;
    if (s == "NonHead") return Role::NonHead;
    throw py::value_error("role must be 'Head' or 'NonHead'");
}

py::dict welch_dict(const stats::WelchResult& r) {
    py::dict d;
    d["t"] = r.t;
    d["df"] = r.df;
    d["p"] = r.p_two_tailed;
    d["mean_a"] = r.mean_a;
    d["sd_a"] = r.sd_a;
    d["mean_b"] = r.mean_b;
    d["sd_b"] = r.sd_b;
    return d;
}

bn::DiscreteData to_data(std::vector<std::vector<int>> columns, std::optional<std::vector<std::string>> names) {
    auto d = bn::DiscreteData::from_columns(std::move(columns));
    if (!names) return d;
    std::vector<std::vector<int>> cols;
    for (std::size_t v = 0; v < d.vars(); ++v) cols.emplace_back(d.column(v).begin(), d.column(v).end());
    return bn::DiscreteData(*names, d.cardinalities(), std::move(cols));
}

std::vector<std::pair<std::string, std::string>> named_arcs(const bn::Dag& g, const std::vector<std::string>& names) {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto [p, c] : g.arcs()) out.emplace_back(names[static_cast<std::size_t>(p)], names[static_cast<std::size_t>(c)]);
    return out;
}

void run_command(const std::string& command, const std::optional<std::filesystem::path>& config_path,
                 std::optional<std::uint64_t> seed, std::optional<std::filesystem::path> out) {
    pipeline::RunConfig config;
    if (config_path)
        config = pipeline::RunConfig::load(*config_path);
    else if (command == "synth")
        config.synth = pipeline::SynthConfig{};
    else
        throw ConfigError("a config path is required for '" + command + "'");
    if (seed) config.params.seed = *seed;
    if (out) config.out_dir = *out;
    config.validate_parameters();
    if (command == "transitions") pipeline::run_transitions(config);
    else if (command == "align") pipeline::run_align(config);
    else if (command == "features") pipeline::run_features(config);
    else if (command == "bayesnet") pipeline::run_bayesnet(config);
    else if (command == "frp") pipeline::run_frp(config);
    else if (command == "synth") pipeline::run_synth(config);
    else throw ConfigError("unknown command '" + command + "'");
}

}  // namespace

PYBIND11_MODULE(_treegaze, m) {
    m.doc() = "Head/non-head reading analyses, scanpath alignment, feature networks and FRP statistics";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<TreeError>(m, "TreeError", base.ptr());
    py::register_exception<IngestError>(m, "IngestError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    // corpus
    py::class_<Token>(m, "Token")
        .def_readonly("index", &Token::index)
        .def_readonly("surface", &Token::surface)
        .def_readonly("head", &Token::head)
        .def_readonly("deprel", &Token::deprel)
        .def_readonly("depth", &Token::depth)
        .def_property_readonly("role", [](const Token& t) -> std::optional<std::string> {
            if (!t.role) return std::nullopt;
            return std::string(to_string(*t.role));
        })
        .def("__repr__", [](const Token& t) {
            return "<Token " + std::to_string(t.index) + " " + t.surface + " head=" + std::to_string(t.head) + ">";
        });

    py::class_<Sentence>(m, "Sentence")
        .def_property_readonly("id", &Sentence::id)
        .def_property_readonly("tokens", [](const Sentence& s) { return std::vector<Token>(s.tokens().begin(), s.tokens().end()); })
        .def("__len__", &Sentence::size)
        .def("max_depth", [](const Sentence& s) { return max_depth(s); })
        .def("count_clauses", [](const Sentence& s) { return count_clauses(s); })
        .def("roles", [](const Sentence& s) {
            std::vector<std::string> out;
            for (auto r : roles_of(s)) out.emplace_back(to_string(r));
            return out;
        })
        .def("__repr__", [](const Sentence& s) { return "<Sentence " + s.id() + " (" + std::to_string(s.size()) + " tokens)>"; });

    m.def("parse_conllu", [](const std::string& text) {
        std::vector<Sentence> out;
        for (auto& s : parse_conllu(std::string_view(text))) out.push_back(annotate(std::move(s)));
        return out;
    }, py::arg("text"), "Parse CoNLL-U text; sentences come back with depths and roles.");
    m.def("to_conllu", [](const std::vector<Sentence>& s) {
        std::ostringstream out;
        write_conllu(out, s);
        return out.str();
    });

    // gaze
    py::class_<GazeSequence>(m, "GazeSequence")
        .def(py::init<std::string, std::string, std::vector<int>>(), py::arg("participant"), py::arg("sentence_id"),
             py::arg("path"))
        .def_readonly("participant", &GazeSequence::participant)
        .def_readonly("sentence_id", &GazeSequence::sentence_id)
        .def_readonly("path", &GazeSequence::path);

    m.def("load_gaze_sequences", [](const std::string& csv_text, double min_duration_ms) {
        std::istringstream in(csv_text);
        return build_gaze_sequences(load_fixations(in, min_duration_ms));
    }, py::arg("csv_text"), py::arg("min_duration_ms") = kDefaultMinFixationMs,
       "Filter, sort and collapse fixation rows into one path per reader and sentence.");

    // transitions
    m.def("transition_distribution", [](const std::vector<int>& path, const std::vector<std::string>& roles) {
        std::vector<Role> r;
        for (const auto& s : roles) r.push_back(parse_role(s));
        const auto d = transition_distribution(path, r);
        py::dict out;
        for (auto t : kTransitionTypes) out[py::str(std::string(to_string(t)))] = d.probability(t);
        out["n_transitions"] = d.n_transitions;
        return out;
    }, py::arg("path"), py::arg("roles"));

    m.def("analyze_transitions", [](const std::vector<Sentence>& sentences, const std::vector<GazeSequence>& seqs) {
        const auto report = analyze_transitions(sentences, seqs);
        py::dict out;
        for (auto t : kTransitionTypes) {
            const auto& w = report.welch[static_cast<std::size_t>(t)];
            out[py::str(std::string(to_string(t)))] = w ? py::object(welch_dict(*w)) : py::object(py::none());
        }
        return out;
    }, py::arg("sentences"), py::arg("sequences"), "Per transition type, Welch test of gaze against text order.");

    // alignment
    m.def("edit_distance", [](const std::vector<int>& a, const std::vector<int>& b, int match, int sub, int ins, int del) {
        return edit_distance(a, b, AlignmentCosts{match, sub, ins, del});
    }, py::arg("a"), py::arg("b"), py::arg("match") = 0, py::arg("substitution") = 1, py::arg("insertion") = 1,
       py::arg("deletion") = 1);

    // features
    m.def("zscore", [](const std::vector<double>& x) { return zscore(x).values; });
    m.def("discretize", [](const std::vector<double>& x, int k) { return discretize_equal_width(x, k); },
          py::arg("values"), py::arg("bins") = 4);
    m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); });

    // bayesnet
    m.def("hill_climb", [](std::vector<std::vector<int>> columns, std::optional<std::vector<std::string>> names,
                           int max_parents, int restarts, std::uint64_t seed) {
        const auto data = to_data(std::move(columns), std::move(names));
        bn::HillClimbOptions o;
        o.max_parents = max_parents;
        o.restarts = restarts;
        o.seed = seed;
        const auto r = bn::hill_climb_search(data, o);
        return py::make_tuple(named_arcs(r.dag, data.names()), r.score);
    }, py::arg("columns"), py::arg("names") = py::none(), py::arg("max_parents") = 4, py::arg("restarts") = 0,
       py::arg("seed") = 0, "Greedy BIC structure search; returns (arcs, score).");

    m.def("bic_score", [](std::vector<std::vector<int>> columns, const std::vector<std::pair<int, int>>& arcs) {
        const auto data = to_data(std::move(columns), std::nullopt);
        return bn::bic_score(bn::Dag::from_arcs(data.vars(), arcs), data);
    }, py::arg("columns"), py::arg("arcs"));

    m.def("arc_strength", [](std::vector<std::vector<int>> columns, std::optional<std::vector<std::string>> names,
                             std::size_t replicates, std::uint64_t seed) {
        const auto data = to_data(std::move(columns), std::move(names));
        const auto g = bn::hill_climb(data);
        const auto report = bn::arc_strength_report(g, data, bn::bootstrap_arc_strength(data, replicates, seed));
        py::list out;
        for (const auto& a : report) {
            py::dict d;
            d["parent"] = data.names()[static_cast<std::size_t>(a.arc.first)];
            d["child"] = data.names()[static_cast<std::size_t>(a.arc.second)];
            d["boot_frequency"] = a.boot_frequency;
            d["score_loss"] = a.score_loss;
            d["mi_nats"] = a.mi.nats;
            out.append(d);
        }
        return out;
    }, py::arg("columns"), py::arg("names") = py::none(), py::arg("replicates") = 200, py::arg("seed") = 0);

    m.def("mutual_information", [](const std::vector<int>& x, const std::vector<int>& y) {
        const auto r = bn::mutual_information(x, y);
        return py::make_tuple(r.nats, r.n_times_nats);
    }, "Plug-in mutual information; returns (nats, N * nats).");

    // stats
    m.def("welch_t", [](const std::vector<double>& a, const std::vector<double>& b) { return welch_dict(stats::welch_t(a, b)); });
    m.def("t_cdf", [](double x, double df) { return stats::StudentT(df).cdf(x); });
    m.def("t_critical", [](double alpha, double df) { return stats::StudentT(df).two_tailed_critical(alpha); });

    m.def("wilcoxon", [](const std::vector<double>& values, const std::string& alternative, const std::string& method) {
        const auto r = stats::wilcoxon_signed_rank(values, parse_alternative(alternative), parse_method(method));
        py::dict d;
        d["w_plus"] = r.w_plus;
        d["p"] = r.p;
        d["n"] = r.n;
        d["exact"] = r.exact;
        return d;
    }, py::arg("values"), py::arg("alternative") = "greater", py::arg("method") = "auto");

    m.def("fdr_bh", [](const std::vector<double>& p, double alpha) {
        const auto r = stats::fdr_bh(p, alpha);
        return py::make_tuple(std::vector<bool>(r.rejected.begin(), r.rejected.end()), r.adjusted);
    }, py::arg("pvalues"), py::arg("alpha") = 0.05, "Returns (rejected, adjusted).");

    m.def("cluster_test", [](const Matrix& series, std::size_t n_permutations, double alpha, double threshold,
                             std::uint64_t seed) {
        stats::ClusterOptions o{n_permutations, alpha, threshold, seed};
        const auto r = stats::cluster_permutation_1samp(to_series(series), o);
        py::list clusters;
        for (const auto& c : r.clusters) {
            py::dict d;
            d["start"] = c.start;
            d["end"] = c.end;
            d["sign"] = c.sign;
            d["mass"] = c.mass;
            d["p"] = c.p_value;
            clusters.append(d);
        }
        py::dict out;
        out["clusters"] = clusters;
        out["t"] = r.t_values;
        out["threshold_t"] = r.threshold_t;
        return out;
    }, py::arg("series"), py::arg("n_permutations") = 1000, py::arg("alpha") = 0.05, py::arg("threshold") = 0.0,
       py::arg("seed") = 0, "Sign-flip cluster permutation test of a subjects x timepoints array against zero.");

    m.def("bootstrap_ci", [](const Matrix& series, std::size_t n_boot, double level, std::uint64_t seed) {
        const auto pts = stats::bootstrap_ci(to_series(series), n_boot, level, seed);
        py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{3}});
        auto v = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            v(i, 0) = pts[i].mean;
            v(i, 1) = pts[i].lo;
            v(i, 2) = pts[i].hi;
        }
        return out;
    }, py::arg("series"), py::arg("n_boot") = 1000, py::arg("level") = 0.95, py::arg("seed") = 0,
       "Returns a timepoints x 3 array of (mean, lo, hi).");

    // frp
    m.def("regress_timewise", [](py::array_t<float, py::array::c_style | py::array::forcecast> epochs,
                                 const std::vector<double>& predictor, bool standardize) {
        if (epochs.ndim() != 3) throw py::value_error("epochs must be trials x channels x timepoints");
        frp::EpochSet e;
        e.subject = "python";
        e.n_trials = static_cast<std::size_t>(epochs.shape(0));
        e.n_channels = static_cast<std::size_t>(epochs.shape(1));
        e.n_timepoints = static_cast<std::size_t>(epochs.shape(2));
        e.data.assign(epochs.data(), epochs.data() + epochs.size());
        if (predictor.size() != e.n_trials) throw py::value_error("one predictor value per trial is required");
        for (double x : predictor) e.trials.push_back({"", 0, x, 0.0});
        e.validate();
        const auto b = frp::regress_timewise(e, standardize);
        py::array_t<double> out({static_cast<py::ssize_t>(b.n_channels), static_cast<py::ssize_t>(b.n_timepoints),
                                 py::ssize_t{2}});
        std::copy(b.beta.begin(), b.beta.end(), out.mutable_data());
        return out;
    }, py::arg("epochs"), py::arg("predictor"), py::arg("standardize") = true,
       "OLS of trial amplitudes on [1, predictor]; returns channels x timepoints x (intercept, slope).");

    // synth
    m.def("synth_treebank", [](std::size_t sentences, std::uint64_t seed) {
        synth::TreebankOptions o;
        o.sentences = sentences;
        o.seed = seed;
        return synth::gen_treebank(o);
    }, py::arg("sentences") = 50, py::arg("seed") = 0);

    m.def("synth_gaze", [](const std::vector<Sentence>& sentences, const std::string& kind, double lambda,
                           std::size_t participants, std::uint64_t seed) {
        synth::ReaderModel model;
        if (kind == "serial") model.kind = synth::ReaderKind::Serial;
        else if (kind == "tree_guided") model.kind = synth::ReaderKind::TreeGuided;
        else throw py::value_error("kind must be 'serial' or 'tree_guided'");
        model.lambda = lambda;
        model.validate();
        return build_gaze_sequences(synth::gen_reader_paths(sentences, model, participants, seed));
    }, py::arg("sentences"), py::arg("kind") = "serial", py::arg("lam") = 0.0, py::arg("participants") = 12,
       py::arg("seed") = 0);

    // pipeline
    m.def("run", &run_command, py::arg("command"), py::arg("config") = py::none(),
          py::arg("seed") = py::none(), py::arg("out") = py::none(),
          "Run one pipeline stage exactly as the command-line tool does.");
}
