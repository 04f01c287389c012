#include <benchmark/benchmark.h>

#include "psyrisk/classification/pipeline.hpp"
#include "psyrisk/corpus/synthetic.hpp"
#include "psyrisk/networks/kmeans.hpp"
#include "psyrisk/networks/mlp.hpp"
#include "psyrisk/text/porter.hpp"
#include "psyrisk/vector_space/svd.hpp"
#include "psyrisk/vector_space/tfidf.hpp"

using namespace psyrisk;

namespace {

const SyntheticCorpus& corpus()
{
    static const SyntheticCorpus c = generate_synthetic_corpus(SyntheticConfig::standard(), 1);
    return c;
}

std::vector<TermBag> term_bags()
{
    const TextAnalyzer analyzer(corpus().lexicon.all_phrases());
    std::vector<TermBag> bags;
    for (const auto& p : corpus().paragraphs) {
        bags.push_back(analyzer.terms(p.text));
    }
    return bags;
}

Eigen::MatrixXd random_rows(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
    Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = rng.normal();
    }
    return m;
}

void BM_PorterStem(benchmark::State& state)
{
    std::vector<std::string> words;
    for (const auto& p : corpus().paragraphs) {
        for (auto& w : tokenize(p.text)) {
            words.push_back(std::move(w));
        }
    }
    for (auto _ : state) {
        for (const auto& w : words) {
            benchmark::DoNotOptimize(porter_stem(w));
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words.size()));
}
BENCHMARK(BM_PorterStem);

void BM_AnalyzeParagraph(benchmark::State& state)
{
    const TextAnalyzer analyzer(corpus().lexicon.all_phrases());
    const auto& paragraphs = corpus().paragraphs;
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(analyzer.terms(paragraphs[i++ % paragraphs.size()].text));
    }
}
BENCHMARK(BM_AnalyzeParagraph);

void BM_Vectorize(benchmark::State& state)
{
    const auto bags = term_bags();
    const auto model = fit_tfidf(bags);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.vectorize(bags[i++ % bags.size()]));
    }
}
BENCHMARK(BM_Vectorize);

void BM_FitSvd(benchmark::State& state)
{
    const auto bags = term_bags();
    const auto model = fit_tfidf(bags);
    const SparseRowMatrix m = tfidf_matrix(model, bags);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_svd(m, SvdOptions{static_cast<std::size_t>(state.range(0)), 10, 2, 1}));
    }
}
BENCHMARK(BM_FitSvd)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MlpForwardBatch(benchmark::State& state)
{
    const MlpModel model = init_mlp(100, 1);
    const Eigen::MatrixXd x = random_rows(state.range(0), 100, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mlp_forward_batch(model, x, Mode::Infer));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForwardBatch)->Arg(1)->Arg(128);

void BM_KMeans(benchmark::State& state)
{
    const Eigen::MatrixXd x = random_rows(200, 100, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kmeans(x, 50, 4));
    }
}
BENCHMARK(BM_KMeans)->Unit(benchmark::kMillisecond);

void BM_ClassifyParagraph(benchmark::State& state)
{
    TrainOptions o = TrainOptions::defaults(ModelKind::Mlp);
    o.train.epochs = 1;
    const Pipeline p = train_pipeline(corpus().paragraphs, corpus().lexicon, o);
    const auto& paragraphs = corpus().paragraphs;
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify_paragraph(p, paragraphs[i++ % paragraphs.size()].text));
    }
}
BENCHMARK(BM_ClassifyParagraph);

}  // namespace
BENCHMARK_MAIN();
