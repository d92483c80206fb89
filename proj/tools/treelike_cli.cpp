// treelike: command-line front end for the tree-likeness analyses.
//
// Exit codes: 0 ok, 1 other failure, 2 parse/usage error, 3 validation error,
// 4 domain error. Failures print one line: "error: <category>: <message>".

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "treelike/treelike.hpp"

namespace {

using namespace treelike;

struct InputOptions {
    std::string path;
    std::string format = "csv";
    bool header = false;
    bool id_column = false;
    bool label_column = false;
    bool pad = false;
};

struct PreprocessOptions {
    std::optional<double> pca;
    std::optional<double> ball_norm;
};

struct AnalyzeOptions {
    InputOptions input;
    PreprocessOptions pre;
    bool distance_matrix = false;
    bool force = false;
    std::string metric = "euclidean";
    std::string analyses = "delta,ultra,nj";
    std::uint64_t samples = 100000;
    double epsilon = 1e-9;
    bool exact = false;
    std::string formula = "four_point";
    std::uint64_t seed = 42;
    std::size_t workers = default_workers();
    bool timings = false;
    std::string out;
};

struct SynthOptions {
    std::string kind;
    std::size_t n = 50;
    std::size_t dim = 10;
    double p = 0.8;
    std::uint64_t seed = 42;
    std::string format = "csv";
    bool matrix = false;
    std::string out;
};

struct ClusterOptions {
    InputOptions input;
    PreprocessOptions pre;
    std::size_t k = 2;
    std::uint64_t seed = 42;
    std::string metric = "euclidean";
    std::size_t max_iter = 300;
    double tol = 1e-8;
    std::size_t workers = default_workers();
    bool timings = false;
    std::string out;
};

void add_input_flags(CLI::App* cmd, InputOptions& in)
{
    cmd->add_option("--input", in.path, "Input file")->required();
    cmd->add_option("--format", in.format, "csv or raw_f64")->check(CLI::IsMember({"csv", "raw_f64"}));
    cmd->add_flag("--header", in.header, "CSV has a header row");
    cmd->add_flag("--id-column", in.id_column, "First CSV column is an identifier");
    cmd->add_flag("--label-column", in.label_column, "Next CSV column is a class label");
    cmd->add_flag("--pad", in.pad, "Zero-pad ragged CSV rows to the longest row");
}

void add_preprocess_flags(CLI::App* cmd, PreprocessOptions& pre)
{
    cmd->add_option("--pca", pre.pca, "Reduce with PCA to this retained-variance fraction")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--ball-norm", pre.ball_norm, "Largest row norm after rescaling into the unit ball")
        ->check(CLI::Range(0.0, 1.0));
}

void add_analyze_flags(CLI::App* cmd, AnalyzeOptions& o, bool with_analyses)
{
    add_input_flags(cmd, o.input);
    add_preprocess_flags(cmd, o.pre);
    cmd->add_flag("--distance-matrix", o.distance_matrix, "Input is a distance matrix, not embeddings");
    cmd->add_flag("--force", o.force, "Coerce an invalid distance matrix instead of rejecting it");
    cmd->add_option("--metric", o.metric, "euclidean or poincare")
        ->check(CLI::IsMember({"euclidean", "poincare"}));
    if (with_analyses) {
        cmd->add_option("--analyses", o.analyses, "Comma-separated subset of delta,ultra,nj");
        cmd->add_flag("--exact", o.exact, "Enumerate all quadruples/triples instead of sampling");
    }
    cmd->add_option("--samples", o.samples, "Sampled quadruples / triples")->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon", o.epsilon, "Ultrametric violation tolerance")->check(CLI::NonNegativeNumber);
    cmd->add_option("--formula", o.formula, "four_point or paper_slack")
        ->check(CLI::IsMember({"four_point", "paper_slack"}));
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--timings", o.timings, "Record wall-clock seconds per analysis");
    cmd->add_option("--out", o.out, "Report path (JSON)")->required();
}

CsvOptions csv_options(const InputOptions& in)
{
    CsvOptions c;
    c.header = in.header;
    c.id_column = in.id_column;
    c.label_column = in.label_column;
    c.pad = in.pad;
    return c;
}

template <class Fn>
auto timed(GeometryReport& report, bool enabled, const std::string& name, Fn&& fn)
{
    const auto start = std::chrono::steady_clock::now();
    auto result = fn();
    if (enabled)
        report.timings_seconds[name] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

/// Loads embeddings and applies the optional PCA / ball rescale, recording both.
EmbeddingSet prepare_embeddings(const InputOptions& in, const PreprocessOptions& pre,
                                MetricKind metric, GeometryReport& report)
{
    EmbeddingSet set = load_embeddings(in.path, file_format_from_string(in.format), csv_options(in));
    report.input = {in.path, in.format, "embeddings", set.size(), set.dim()};
    report.preprocessing.pad = in.pad;

    if (pre.pca) {
        auto [projected, model] = pca_fit_transform(set, *pre.pca);
        report.preprocessing.pca = {true, *pre.pca, projected.dim(), model.retained_fraction};
        report.notes.push_back("PCA applied before distance computation");
        set = std::move(projected);
    }
    if (metric == MetricKind::poincare || pre.ball_norm) {
        const double target = pre.ball_norm.value_or(0.9);
        auto rescaled = rescale_to_ball(set, target);
        report.preprocessing.rescale = {true, rescaled.scalar, target};
        set = std::move(rescaled.set);
    }
    return set;
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int run_analyze(const AnalyzeOptions& o)
{
    const auto analyses = split_list(o.analyses);
    for (const auto& a : analyses)
        if (a != "delta" && a != "ultra" && a != "nj")
            throw ParseError("unknown analysis '" + a + "' (expected delta, ultra, nj)");
    if (analyses.empty()) throw ParseError("--analyses must name at least one analysis");
    auto wants = [&](const char* a) { return std::find(analyses.begin(), analyses.end(), a) != analyses.end(); };

    GeometryReport report;
    DistanceMatrix d;
    if (o.distance_matrix) {
        if (o.pre.pca || o.pre.ball_norm)
            throw ParseError("--pca and --ball-norm apply to embeddings, not to --distance-matrix input");
        LoadedMatrix loaded = load_distance_matrix(o.input.path, file_format_from_string(o.input.format), o.force);
        report.input = {o.input.path, o.input.format, "distance_matrix", loaded.matrix.size(), std::nullopt};
        report.metric = "external";
        report.coercions = std::move(loaded.coercions);
        d = std::move(loaded.matrix);
    } else {
        const MetricKind metric = metric_kind_from_string(o.metric);
        const EmbeddingSet set = prepare_embeddings(o.input, o.pre, metric, report);
        report.metric = std::string(to_string(metric));
        d = timed(report, o.timings, "distances", [&] { return build_distance_matrix(set, metric, o.workers); });
    }

    const DeltaFormula formula = delta_formula_from_string(o.formula);
    if (wants("delta") && formula == DeltaFormula::paper_slack)
        report.notes.push_back("delta slack = max(0, min([a,b]_w, [b,c]_w) - [a,c]_w) per labelled quadruple");
    const Seed seed{o.seed};

    if (wants("delta")) {
        report.delta = timed(report, o.timings, "delta", [&] {
            return o.exact ? exact_delta(d, formula, o.workers)
                           : sample_delta(d, DeltaSampling{o.samples, seed, formula, o.workers, false});
        });
    }
    if (wants("ultra")) {
        report.ultra = timed(report, o.timings, "ultra", [&] {
            return o.exact ? exact_ultrametricity(d, o.epsilon, o.workers)
                           : sample_ultrametricity(d, o.samples, o.epsilon, seed, o.workers);
        });
    }
    if (wants("nj")) report.nj = timed(report, o.timings, "nj", [&] { return nj_scores(d, o.workers); });

    write_report(report, o.out);
    return 0;
}

int run_synth(const SynthOptions& o)
{
    SyntheticSpec spec;
    spec.kind = synthetic_kind_from_string(o.kind);
    spec.n = o.n;
    spec.dim = o.dim;
    spec.p = o.p;
    spec.seed = Seed{o.seed};
    const SyntheticData data = synthesize(spec);
    const FileFormat format = file_format_from_string(o.format);

    if (data.embeddings && !o.matrix) {
        if (format == FileFormat::csv)
            write_embeddings_csv(*data.embeddings, o.out);
        else
            write_raw_f64(o.out, data.embeddings->size(), data.embeddings->dim(), data.embeddings->values());
    } else {
        if (format == FileFormat::csv)
            write_matrix_csv(data.distances, o.out);
        else
            write_raw_f64(o.out, data.distances.size(), data.distances.size(), data.distances.entries());
    }
    return 0;
}

int run_cluster(const ClusterOptions& o)
{
    GeometryReport report;
    const MetricKind metric = metric_kind_from_string(o.metric);
    const EmbeddingSet set = prepare_embeddings(o.input, o.pre, metric, report);
    report.metric = std::string(to_string(metric));
    KMeansOptions km;
    km.k = o.k;
    km.seed = Seed{o.seed};
    km.max_iter = o.max_iter;
    km.tol = o.tol;
    km.workers = o.workers;
    km.silhouette_metric = metric;
    report.cluster = timed(report, o.timings, "cluster", [&] { return kmeans(set, km); });
    write_report(report, o.out);
    return 0;
}

std::string one_line(std::string s)
{
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

int fail(const char* category, const std::string& message, int code)
{
    std::cerr << "error: " << category << ": " << one_line(message) << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tree-likeness analysis of embeddings and distance matrices"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    AnalyzeOptions analyze;
    add_analyze_flags(app.add_subcommand("analyze", "Run delta / ultrametricity / NJ analyses"), analyze, true);

    AnalyzeOptions exact_delta_opts;
    exact_delta_opts.analyses = "delta";
    exact_delta_opts.exact = true;
    add_analyze_flags(app.add_subcommand("exact-delta", "Exact delta-hyperbolicity over all quadruples"),
                      exact_delta_opts, false);

    AnalyzeOptions exact_ultra_opts;
    exact_ultra_opts.analyses = "ultra";
    exact_ultra_opts.exact = true;
    add_analyze_flags(app.add_subcommand("exact-ultra", "Exact ultrametricity over all triples"),
                      exact_ultra_opts, false);

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic metric space");
    synth_cmd->add_option("kind", synth.kind, "sphere, graph, disk, tree or ultra")
        ->required()
        ->check(CLI::IsMember({"sphere", "graph", "disk", "tree", "ultra"}));
    synth_cmd->add_option("--n", synth.n, "Number of points / leaves");
    synth_cmd->add_option("--dim", synth.dim, "Sphere ambient dimension");
    synth_cmd->add_option("--p", synth.p, "Edge probability for graph")->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--seed", synth.seed, "Random seed");
    synth_cmd->add_option("--format", synth.format, "csv or raw_f64")->check(CLI::IsMember({"csv", "raw_f64"}));
    synth_cmd->add_flag("--matrix", synth.matrix, "Write the distance matrix even for sphere/disk");
    synth_cmd->add_option("--out", synth.out, "Output path")->required();

    ClusterOptions cluster;
    auto* cluster_cmd = app.add_subcommand("cluster", "k-means with validity indices");
    add_input_flags(cluster_cmd, cluster.input);
    add_preprocess_flags(cluster_cmd, cluster.pre);
    cluster_cmd->add_option("--k", cluster.k, "Number of clusters")->required();
    cluster_cmd->add_option("--seed", cluster.seed, "Random seed");
    cluster_cmd->add_option("--metric", cluster.metric, "Distance for the silhouette")
        ->check(CLI::IsMember({"euclidean", "poincare"}));
    cluster_cmd->add_option("--max-iter", cluster.max_iter, "Lloyd iteration cap");
    cluster_cmd->add_option("--tol", cluster.tol, "Centroid shift tolerance");
    cluster_cmd->add_option("--workers", cluster.workers, "Worker threads")->check(CLI::PositiveNumber);
    cluster_cmd->add_flag("--timings", cluster.timings, "Record wall-clock seconds");
    cluster_cmd->add_option("--out", cluster.out, "Report path (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("parse", e.what(), 2);
    }

    try {
        if (app.got_subcommand("analyze")) return run_analyze(analyze);
        if (app.got_subcommand("exact-delta")) return run_analyze(exact_delta_opts);
        if (app.got_subcommand("exact-ultra")) return run_analyze(exact_ultra_opts);
        if (app.got_subcommand("synth")) return run_synth(synth);
        if (app.got_subcommand("cluster")) return run_cluster(cluster);
    } catch (const ParseError& e) {
        return fail("parse", e.what(), 2);
    } catch (const ValidationError& e) {
        return fail("validation", e.what(), 3);
    } catch (const DomainError& e) {
        return fail("domain", e.what(), 4);
    } catch (const std::exception& e) {
        return fail("runtime", e.what(), 1);
    }
    return 1;
}
