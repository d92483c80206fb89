#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <sys/wait.h>

#include "treelike/io.hpp"
#include "treelike/report.hpp"
#include "treelike/synthetic.hpp"
#include "test_support.hpp"

using testing_support::ScratchDir;
using testing_support::slurp;

namespace {

struct Run {
    int code;
    std::string err;
};

Run run(const ScratchDir& dir, const std::string& args)
{
    const std::string err_path = dir.file("stderr.txt");
    const std::string cmd = std::string(TREELIKE_CLI_PATH) + " " + args + " >/dev/null 2>" + err_path;
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err_path)};
}

} // namespace

TEST(Cli, AnalyzeEmbeddings)
{
    ScratchDir dir;
    dir.write("e.csv", "0,0\n1,0\n1,1\n0,1\n2,2\n");
    const auto r = run(dir, "analyze --input " + dir.file("e.csv") + " --exact --out " + dir.file("r.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rep = treelike::read_report(dir.file("r.json"));
    ASSERT_TRUE(rep.delta && rep.ultra && rep.nj);
    EXPECT_EQ(rep.delta->mode, treelike::EvaluationMode::exact);
    EXPECT_EQ(rep.input.n, 5u);
    EXPECT_EQ(rep.metric, "euclidean");
}

TEST(Cli, ExitCodes)
{
    ScratchDir dir;
    dir.write("e.csv", "0,0\n1,0\n1,1\n0,1\n");
    dir.write("bad.csv", "0,0\n1,x\n");
    dir.write("asym.csv", "0,1,2,2\n1.5,0,3,2\n2,3,0,1\n2,2,1,0\n");
    const std::string out = " --out " + dir.file("o.json");

    EXPECT_EQ(run(dir, "analyze" + out).code, 2);
    EXPECT_EQ(run(dir, "frobnicate").code, 2);
    const auto parse = run(dir, "analyze --input " + dir.file("bad.csv") + out);
    EXPECT_EQ(parse.code, 2);
    EXPECT_EQ(parse.err.rfind("error: parse: ", 0), 0u) << parse.err;

    const auto val = run(dir, "analyze --distance-matrix --input " + dir.file("asym.csv") + out);
    EXPECT_EQ(val.code, 3);
    EXPECT_EQ(val.err.rfind("error: validation: ", 0), 0u) << val.err;
    EXPECT_EQ(std::count(val.err.begin(), val.err.end(), '\n'), 1);

    EXPECT_EQ(run(dir, "analyze --distance-matrix --force --input " + dir.file("asym.csv") + out).code, 0);
    EXPECT_FALSE(treelike::read_report(dir.file("o.json")).coercions.empty());

    // An all-zero data set cannot be rescaled into the ball.
    dir.write("zero.csv", "0,0\n0,0\n0,0\n0,0\n");
    const auto dom = run(dir, "analyze --metric poincare --input " + dir.file("zero.csv") + out);
    EXPECT_EQ(dom.code, 4);
    EXPECT_EQ(dom.err.rfind("error: domain: ", 0), 0u) << dom.err;
}

TEST(Cli, DeterministicAcrossWorkers)
{
    ScratchDir dir;
    const auto pts = treelike::sample_sphere(40, 6, treelike::Seed{3});
    treelike::write_embeddings_csv(pts, dir.file("s.csv"));
    const std::string base = "analyze --input " + dir.file("s.csv") + " --samples 20000 --seed 42";
    ASSERT_EQ(run(dir, base + " --workers 1 --out " + dir.file("a.json")).code, 0);
    ASSERT_EQ(run(dir, base + " --workers 8 --out " + dir.file("b.json")).code, 0);
    EXPECT_EQ(slurp(dir.file("a.json")), slurp(dir.file("b.json")));
}

TEST(Cli, SynthThenAnalyze)
{
    ScratchDir dir;
    ASSERT_EQ(run(dir, "synth tree --n 12 --seed 5 --out " + dir.file("t.csv")).code, 0);
    ASSERT_EQ(run(dir, "exact-delta --distance-matrix --input " + dir.file("t.csv") + " --out " +
                           dir.file("t.json"))
                  .code,
              0);
    const auto rep = treelike::read_report(dir.file("t.json"));
    ASSERT_TRUE(rep.delta.has_value());
    EXPECT_FALSE(rep.ultra.has_value());
    EXPECT_LE(rep.delta->delta_max, 1e-9);
    EXPECT_EQ(rep.metric, "external");
}

TEST(Cli, ClusterReport)
{
    ScratchDir dir;
    dir.write("c.csv", "0,0\n0.1,0\n0,0.1\n10,10\n10.1,10\n10,10.1\n");
    ASSERT_EQ(run(dir, "cluster --input " + dir.file("c.csv") + " --k 2 --out " + dir.file("c.json")).code, 0);
    const auto rep = treelike::read_report(dir.file("c.json"));
    ASSERT_TRUE(rep.cluster && rep.cluster->silhouette);
    EXPECT_GT(*rep.cluster->silhouette, 0.9);
}
