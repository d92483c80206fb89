#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treelike/cluster_validity.hpp"
#include "treelike/core_types.hpp"
#include "treelike/hyperbolicity.hpp"
#include "treelike/io.hpp"
#include "treelike/json_format.hpp"
#include "treelike/neighbor_joining.hpp"
#include "treelike/ultrametricity.hpp"
#include "treelike/version.hpp"

namespace treelike {

inline constexpr int kReportSchemaVersion = 1;

struct InputDescriptor {
    std::string path;
    std::string format;              // csv | raw_f64 | synthetic
    std::string kind = "embeddings"; // embeddings | distance_matrix
    std::size_t n = 0;
    std::optional<std::size_t> dim;

    friend bool operator==(const InputDescriptor&, const InputDescriptor&) = default;
};

struct PcaRecord {
    bool enabled = false;
    double variance_target = 0.99;
    std::optional<std::size_t> out_dim;
    std::optional<double> retained_fraction;

    friend bool operator==(const PcaRecord&, const PcaRecord&) = default;
};

struct RescaleRecord {
    bool enabled = false;
    double scalar = 1.0;
    double target_max_norm = 0.9;

    friend bool operator==(const RescaleRecord&, const RescaleRecord&) = default;
};

struct PreprocessRecord {
    bool pad = false;
    PcaRecord pca;
    RescaleRecord rescale;

    friend bool operator==(const PreprocessRecord&, const PreprocessRecord&) = default;
};

/// Everything one CLI run produced. Timings are only filled on request, since
/// they would otherwise break byte-identical reruns.
struct GeometryReport {
    int schema_version = kReportSchemaVersion;
    std::string tool_version = kVersion;
    InputDescriptor input;
    PreprocessRecord preprocessing;
    std::string metric = "euclidean"; // euclidean | poincare | graph_shortest_path | external
    std::vector<std::string> coercions;
    std::vector<std::string> notes;
    std::optional<DeltaStats> delta;
    std::optional<UltraStats> ultra;
    std::optional<NjStats> nj;
    std::optional<ClusterResult> cluster;
    // Reserved for externally computed agglomerative / k-modes results.
    std::optional<Json> agglomerative;
    std::optional<Json> kmodes;
    std::map<std::string, double> timings_seconds;

    friend bool operator==(const GeometryReport&, const GeometryReport&) = default;
};

namespace detail {

template <class T>
std::optional<T> optional_field(const Json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

} // namespace detail

inline Json to_json(const DeltaStats& d)
{
    Json j;
    j["delta_max"] = d.delta_max;
    j["delta_avg"] = d.delta_avg;
    j["delta_std"] = d.delta_std;
    j["samples_evaluated"] = d.samples_evaluated;
    j["mode"] = std::string(to_string(d.mode));
    j["formula"] = std::string(to_string(d.formula));
    if (d.seed) j["seed"] = d.seed->value;
    return j;
}

inline DeltaStats delta_from_json(const Json& j)
{
    DeltaStats d;
    d.delta_max = j.at("delta_max").get<double>();
    d.delta_avg = j.at("delta_avg").get<double>();
    d.delta_std = j.at("delta_std").get<double>();
    d.samples_evaluated = j.at("samples_evaluated").get<std::uint64_t>();
    d.mode = evaluation_mode_from_string(j.at("mode").get<std::string>());
    d.formula = delta_formula_from_string(j.at("formula").get<std::string>());
    if (auto s = detail::optional_field<std::uint64_t>(j, "seed")) d.seed = Seed{*s};
    return d;
}

inline Json to_json(const UltraStats& u)
{
    Json j;
    j["max_violation"] = u.max_violation;
    j["avg_violation"] = u.avg_violation;
    j["std_violation"] = u.std_violation;
    j["num_violations"] = u.num_violations;
    j["total_triples"] = u.total_triples;
    j["epsilon"] = u.epsilon;
    j["avg_over_all_triples"] = u.avg_over_all_triples;
    j["mode"] = std::string(to_string(u.mode));
    if (u.seed) j["seed"] = u.seed->value;
    return j;
}

inline UltraStats ultra_from_json(const Json& j)
{
    UltraStats u;
    u.max_violation = j.at("max_violation").get<double>();
    u.avg_violation = j.at("avg_violation").get<double>();
    u.std_violation = j.at("std_violation").get<double>();
    u.num_violations = j.at("num_violations").get<std::uint64_t>();
    u.total_triples = j.at("total_triples").get<std::uint64_t>();
    u.epsilon = j.at("epsilon").get<double>();
    u.avg_over_all_triples = j.at("avg_over_all_triples").get<double>();
    u.mode = evaluation_mode_from_string(j.at("mode").get<std::string>());
    if (auto s = detail::optional_field<std::uint64_t>(j, "seed")) u.seed = Seed{*s};
    return u;
}

inline Json to_json(const NjStats& s)
{
    Json j;
    j["nj_max"] = s.nj_max;
    j["nj_avg"] = s.nj_avg;
    j["nj_std"] = s.nj_std;
    j["n"] = s.n;
    return j;
}

inline NjStats nj_from_json(const Json& j)
{
    return {j.at("nj_max").get<double>(), j.at("nj_avg").get<double>(), j.at("nj_std").get<double>(),
            j.at("n").get<std::size_t>()};
}

inline Json to_json(const ClusterResult& c)
{
    Json j;
    j["k"] = c.k;
    j["dim"] = c.dim;
    j["seed"] = c.seed.value;
    j["iterations"] = c.iterations;
    j["inertia"] = c.inertia;
    j["inertia_trace"] = c.inertia_trace;
    j["silhouette_metric"] = std::string(to_string(c.silhouette_metric));
    if (c.silhouette) j["silhouette"] = *c.silhouette;
    if (c.calinski_harabasz) j["calinski_harabasz"] = *c.calinski_harabasz;
    if (c.davies_bouldin) j["davies_bouldin"] = *c.davies_bouldin;
    j["centroids"] = c.centroids;
    j["assignments"] = c.assignments;
    return j;
}

inline ClusterResult cluster_from_json(const Json& j)
{
    ClusterResult c;
    c.k = j.at("k").get<std::size_t>();
    c.dim = j.at("dim").get<std::size_t>();
    c.seed = Seed{j.at("seed").get<std::uint64_t>()};
    c.iterations = j.at("iterations").get<std::size_t>();
    c.inertia = j.at("inertia").get<double>();
    c.inertia_trace = j.at("inertia_trace").get<std::vector<double>>();
    c.silhouette_metric = metric_kind_from_string(j.at("silhouette_metric").get<std::string>());
    c.silhouette = detail::optional_field<double>(j, "silhouette");
    c.calinski_harabasz = detail::optional_field<double>(j, "calinski_harabasz");
    c.davies_bouldin = detail::optional_field<double>(j, "davies_bouldin");
    c.centroids = j.at("centroids").get<std::vector<double>>();
    c.assignments = j.at("assignments").get<std::vector<std::size_t>>();
    return c;
}

inline Json to_json(const GeometryReport& r)
{
    Json j;
    j["schema_version"] = r.schema_version;
    j["tool_version"] = r.tool_version;

    Json input;
    input["path"] = r.input.path;
    input["format"] = r.input.format;
    input["kind"] = r.input.kind;
    input["n"] = r.input.n;
    if (r.input.dim) input["dim"] = *r.input.dim;
    j["input"] = std::move(input);

    Json pca;
    pca["enabled"] = r.preprocessing.pca.enabled;
    pca["variance_target"] = r.preprocessing.pca.variance_target;
    if (r.preprocessing.pca.out_dim) pca["out_dim"] = *r.preprocessing.pca.out_dim;
    if (r.preprocessing.pca.retained_fraction)
        pca["retained_fraction"] = *r.preprocessing.pca.retained_fraction;
    Json rescale;
    rescale["enabled"] = r.preprocessing.rescale.enabled;
    rescale["scalar"] = r.preprocessing.rescale.scalar;
    rescale["target_max_norm"] = r.preprocessing.rescale.target_max_norm;
    Json pre;
    pre["pad"] = r.preprocessing.pad;
    pre["pca"] = std::move(pca);
    pre["rescale"] = std::move(rescale);
    j["preprocessing"] = std::move(pre);

    j["metric"] = r.metric;
    j["coercions"] = r.coercions;
    j["notes"] = r.notes;
    if (r.delta) j["delta"] = to_json(*r.delta);
    if (r.ultra) j["ultra"] = to_json(*r.ultra);
    if (r.nj) j["nj"] = to_json(*r.nj);
    if (r.cluster) j["cluster"] = to_json(*r.cluster);
    if (r.agglomerative) j["agglomerative"] = *r.agglomerative;
    if (r.kmodes) j["kmodes"] = *r.kmodes;
    if (!r.timings_seconds.empty()) {
        Json t = Json::object();
        for (const auto& [name, secs] : r.timings_seconds) t[name] = secs;
        j["timings_seconds"] = std::move(t);
    }
    return j;
}

inline GeometryReport report_from_json(const Json& j)
{
    GeometryReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion)
        throw ParseError("unsupported report schema_version " + std::to_string(r.schema_version));
    r.tool_version = j.at("tool_version").get<std::string>();

    const Json& input = j.at("input");
    r.input.path = input.at("path").get<std::string>();
    r.input.format = input.at("format").get<std::string>();
    r.input.kind = input.at("kind").get<std::string>();
    r.input.n = input.at("n").get<std::size_t>();
    r.input.dim = detail::optional_field<std::size_t>(input, "dim");

    const Json& pre = j.at("preprocessing");
    r.preprocessing.pad = pre.at("pad").get<bool>();
    const Json& pca = pre.at("pca");
    r.preprocessing.pca.enabled = pca.at("enabled").get<bool>();
    r.preprocessing.pca.variance_target = pca.at("variance_target").get<double>();
    r.preprocessing.pca.out_dim = detail::optional_field<std::size_t>(pca, "out_dim");
    r.preprocessing.pca.retained_fraction = detail::optional_field<double>(pca, "retained_fraction");
    const Json& rescale = pre.at("rescale");
    r.preprocessing.rescale.enabled = rescale.at("enabled").get<bool>();
    r.preprocessing.rescale.scalar = rescale.at("scalar").get<double>();
    r.preprocessing.rescale.target_max_norm = rescale.at("target_max_norm").get<double>();

    r.metric = j.at("metric").get<std::string>();
    r.coercions = j.at("coercions").get<std::vector<std::string>>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.contains("delta")) r.delta = delta_from_json(j.at("delta"));
    if (j.contains("ultra")) r.ultra = ultra_from_json(j.at("ultra"));
    if (j.contains("nj")) r.nj = nj_from_json(j.at("nj"));
    if (j.contains("cluster")) r.cluster = cluster_from_json(j.at("cluster"));
    if (j.contains("agglomerative")) r.agglomerative = j.at("agglomerative");
    if (j.contains("kmodes")) r.kmodes = j.at("kmodes");
    if (j.contains("timings_seconds"))
        for (const auto& [name, secs] : j.at("timings_seconds").items()) r.timings_seconds[name] = secs.get<double>();
    return r;
}

inline std::string serialize_report(const GeometryReport& r) { return dump_json(to_json(r)); }

inline GeometryReport parse_report(const std::string& text)
{
    try {
        return report_from_json(Json::parse(text));
    } catch (const Json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
}

inline void write_report(const GeometryReport& r, const std::string& path)
{
    detail::write_file(path, serialize_report(r));
}

inline GeometryReport read_report(const std::string& path) { return parse_report(detail::read_file(path)); }

} // namespace treelike
