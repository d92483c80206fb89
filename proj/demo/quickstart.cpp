// Builds the three synthetic spaces and prints their exact delta statistics,
// followed by the ultrametric and NJ summaries of a random tree metric.

#include <cstdio>

#include "treelike/treelike.hpp"

int main()
{
    using namespace treelike;

    for (auto kind : {SyntheticKind::sphere, SyntheticKind::dense_graph, SyntheticKind::poincare_disk}) {
        SyntheticSpec spec;
        spec.kind = kind;
        spec.n = 30;
        spec.seed = Seed{7};
        const SyntheticData data = synthesize(spec);
        const DeltaStats delta = exact_delta(data.distances);
        std::printf("%-14s delta avg %.4f  std %.4f  max %.4f\n", std::string(to_string(kind)).c_str(),
                    delta.delta_avg, delta.delta_std, delta.delta_max);
    }

    const TreeFixture tree = tree_metric_fixture(12, Seed{7});
    const UltraStats ultra = exact_ultrametricity(tree.distances, 1e-9);
    const NjStats nj = nj_scores(tree.distances);
    const auto [a, b] = argmin_q_pair(tree.distances);
    std::printf("tree metric    delta max %.2e  ultra violations %llu/%llu  nj avg %.4f\n",
                exact_delta(tree.distances).delta_max, static_cast<unsigned long long>(ultra.num_violations),
                static_cast<unsigned long long>(ultra.total_triples), nj.nj_avg);
    std::printf("NJ would join leaves %zu and %zu (cherry: %s)\n", a, b, tree.is_cherry(a, b) ? "yes" : "no");
    return 0;
}
