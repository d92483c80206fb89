#include <gtest/gtest.h>

#include "treelike/io.hpp"
#include "treelike/report.hpp"
#include "test_support.hpp"

using namespace treelike;
using testing_support::ScratchDir;

TEST(LoadEmbeddings, SimpleCsv)
{
    ScratchDir dir;
    const auto set = load_embeddings(dir.write("a.csv", "1.0,2.0\n3.0,4.0"), FileFormat::csv);
    EXPECT_EQ(set.size(), 2u);
    EXPECT_EQ(set.dim(), 2u);
    EXPECT_EQ(set.values(), (std::vector<double>{1, 2, 3, 4}));
}

TEST(LoadEmbeddings, RaggedRows)
{
    ScratchDir dir;
    const auto path = dir.write("r.csv", "1,2\n3,4,5\n");
    CsvOptions o;
    o.pad = true;
    const auto set = load_embeddings(path, FileFormat::csv, o);
    EXPECT_EQ(set.dim(), 3u);
    EXPECT_EQ(set.values(), (std::vector<double>{1, 2, 0, 3, 4, 5}));
    EXPECT_THROW(load_embeddings(path, FileFormat::csv), ParseError);
}

TEST(LoadEmbeddings, HeaderIdAndLabel)
{
    ScratchDir dir;
    CsvOptions o;
    o.header = true;
    o.id_column = true;
    o.label_column = true;
    const auto set =
        load_embeddings(dir.write("h.csv", "id,label,x,y\np1,kinase,0.5,1\np2,ligase,-2,3e-1\n"), FileFormat::csv, o);
    EXPECT_EQ(set.values(), (std::vector<double>{0.5, 1, -2, 0.3}));
    ASSERT_TRUE(set.ids() && set.labels());
    EXPECT_EQ(*set.ids(), (std::vector<std::string>{"p1", "p2"}));
    EXPECT_EQ(*set.labels(), (std::vector<std::string>{"kinase", "ligase"}));
}

TEST(LoadEmbeddings, MalformedNumberNamesLineAndColumn)
{
    ScratchDir dir;
    try {
        load_embeddings(dir.write("m.csv", "1,2\n3,abc\n"), FileFormat::csv);
        FAIL();
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
        EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
    }
}

TEST(LoadEmbeddings, RawF64)
{
    ScratchDir dir;
    const auto path = dir.file("one.bin");
    write_raw_f64(path, 1, 1, {5.0});
    const auto set = load_embeddings(path, FileFormat::raw_f64);
    EXPECT_EQ(set.size(), 1u);
    EXPECT_EQ(set.values(), (std::vector<double>{5.0}));

    const auto bad = dir.file("short.bin");
    write_raw_f64(bad, 2, 2, {1.0, 2.0});
    EXPECT_THROW(load_embeddings(bad, FileFormat::raw_f64), ParseError);
}

TEST(LoadEmbeddings, CsvRoundTripIsExact)
{
    ScratchDir dir;
    const auto set = EmbeddingSet::from_rows({{0.1, 1.0 / 3.0}, {-2.5e-300, 6.02214076e23}});
    const auto path = dir.file("rt.csv");
    write_embeddings_csv(set, path);
    EXPECT_EQ(load_embeddings(path, FileFormat::csv), set);
}

TEST(LoadDistanceMatrix, ValidCsv)
{
    ScratchDir dir;
    const auto m = load_distance_matrix(dir.write("d.csv", "0,1,2\n1,0,3\n2,3,0\n"), FileFormat::csv);
    EXPECT_EQ(m.matrix.size(), 3u);
    EXPECT_EQ(m.matrix.tag(), MetricTag::external);
    EXPECT_TRUE(m.coercions.empty());
}

TEST(LoadDistanceMatrix, AsymmetryNamesPair)
{
    ScratchDir dir;
    const auto path = dir.write("a.csv", "0,1,2\n1.5,0,3\n2,3,0\n");
    try {
        load_distance_matrix(path, FileFormat::csv);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("(0,1)"), std::string::npos) << e.what();
    }
    const auto forced = load_distance_matrix(path, FileFormat::csv, true);
    EXPECT_EQ(forced.matrix(0, 1), 1.25);
    EXPECT_EQ(forced.matrix(1, 0), 1.25);
    ASSERT_EQ(forced.coercions.size(), 1u);
    EXPECT_NE(forced.coercions[0].find("symmetrized"), std::string::npos);
}

TEST(LoadDistanceMatrix, ShapeAndValueErrors)
{
    ScratchDir dir;
    EXPECT_THROW(load_distance_matrix(dir.write("ns.csv", "0,1\n1,0,2\n"), FileFormat::csv), ShapeError);
    EXPECT_THROW(load_distance_matrix(dir.write("neg.csv", "0,-1\n-1,0\n"), FileFormat::csv), ValidationError);
    EXPECT_THROW(load_distance_matrix(dir.write("nan.csv", "0,nan\nnan,0\n"), FileFormat::csv, true),
                 ValidationError);
    const auto fixed = load_distance_matrix(dir.write("neg2.csv", "0.5,-1\n-1,0\n"), FileFormat::csv, true);
    EXPECT_EQ(fixed.matrix.entries(), (std::vector<double>{0, 0, 0, 0}));
    EXPECT_EQ(fixed.coercions.size(), 2u);

    const auto bin = dir.file("rect.bin");
    write_raw_f64(bin, 2, 3, {0, 1, 2, 3, 4, 5});
    EXPECT_THROW(load_distance_matrix(bin, FileFormat::raw_f64), ShapeError);
}

namespace {

GeometryReport sample_report()
{
    GeometryReport r;
    r.input = {"in.csv", "csv", "embeddings", 12, 4};
    r.preprocessing.pca = {true, 0.99, 3, 0.9912345678901234};
    r.preprocessing.rescale = {true, 0.123456789012345678, 0.9};
    r.metric = "poincare";
    r.notes = {"note"};
    r.delta = DeltaStats{0.1 + 0.2, 1.0 / 3.0, 1e-17, 100000, EvaluationMode::sampled, DeltaFormula::four_point,
                         Seed{42}};
    r.ultra = UltraStats{};
    r.ultra->epsilon = 1e-9;
    r.ultra->total_triples = 220;
    r.nj = NjStats{6, 6, 0, 3};
    ClusterResult c;
    c.k = 2;
    c.dim = 1;
    c.assignments = {0, 1};
    c.centroids = {0.5, 2.0 / 7.0};
    c.inertia_trace = {1.0, 0.5};
    c.silhouette = 0.75;
    r.cluster = c;
    r.timings_seconds["delta"] = 0.25;
    return r;
}

} // namespace

TEST(Report, RoundTripsExactly)
{
    const auto r = sample_report();
    const std::string text = serialize_report(r);
    EXPECT_EQ(parse_report(text), r);
    EXPECT_EQ(serialize_report(parse_report(text)), text);

    ScratchDir dir;
    write_report(r, dir.file("r.json"));
    EXPECT_EQ(read_report(dir.file("r.json")), r);
}

TEST(Report, OmitsAbsentSections)
{
    GeometryReport r;
    r.delta = DeltaStats{};
    const Json j = Json::parse(serialize_report(r));
    EXPECT_TRUE(j.contains("delta"));
    EXPECT_FALSE(j.contains("ultra"));
    EXPECT_FALSE(j.contains("nj"));
    EXPECT_FALSE(j.contains("cluster"));
    EXPECT_FALSE(j.contains("timings_seconds"));
    EXPECT_EQ(j.at("schema_version").get<int>(), kReportSchemaVersion);
    EXPECT_EQ(j.begin().key(), "schema_version");
}

TEST(Report, RejectsMalformedOrForeignSchema)
{
    EXPECT_THROW(parse_report("{not json"), ParseError);
    Json j = Json::parse(serialize_report(GeometryReport{}));
    j["schema_version"] = 99;
    EXPECT_THROW(parse_report(j.dump()), ParseError);
}

TEST(JsonFormat, SeventeenDigits)
{
    Json j;
    j["x"] = 0.1;
    EXPECT_EQ(dump_json(j), "{\n  \"x\": 0.10000000000000001\n}\n");
}
