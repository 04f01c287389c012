#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "psyrisk/errors.hpp"
#include "psyrisk/vector_space/lda.hpp"
#include "psyrisk/vector_space/similarity.hpp"
#include "psyrisk/vector_space/svd.hpp"
#include "psyrisk/vector_space/tfidf.hpp"

using namespace psyrisk;

namespace {

std::vector<TermBag> two_docs()
{
    return {TermBag{{"patient", 1}, {"anxious", 1}}, TermBag{{"patient", 1}, {"calm", 1}}};
}

double idf_of(const TfidfModel& m, const std::string& term)
{
    return m.idf()[*m.vocabulary().index(term)];
}

double weight_of(const TfidfModel& m, const TfidfVector& v, const std::string& term)
{
    return v.weights.coeff(static_cast<Eigen::Index>(*m.vocabulary().index(term)));
}

Eigen::VectorXd dense(const Eigen::SparseVector<double>& v) { return Eigen::VectorXd(v); }

}  // namespace

TEST(Tfidf, IdfExamples)
{
    const auto docs = two_docs();
    const auto model = fit_tfidf(docs);
    EXPECT_NEAR(idf_of(model, "patient"), 1.0, 1e-12);
    EXPECT_NEAR(idf_of(model, "anxious"), 1.405465, 1e-6);
    EXPECT_NEAR(idf_of(model, "calm"), 1.405465, 1e-6);
    EXPECT_EQ(model.corpus_size(), 2u);
    EXPECT_EQ(model.vocabulary().document_frequency(*model.vocabulary().index("patient")), 2u);
}

TEST(Tfidf, VocabularyIsLexicographic)
{
    const auto docs = two_docs();
    const auto model = fit_tfidf(docs);
    const auto terms = model.vocabulary().terms();
    ASSERT_EQ(terms.size(), 3u);
    EXPECT_EQ(terms[0], "anxious");
    EXPECT_EQ(terms[1], "calm");
    EXPECT_EQ(terms[2], "patient");
}

TEST(Tfidf, VectorizeExample)
{
    const auto docs = two_docs();
    const auto model = fit_tfidf(docs);
    const auto v = model.vectorize(TermBag{{"patient", 2}, {"anxious", 1}});
    EXPECT_FALSE(v.all_unknown);
    EXPECT_NEAR(weight_of(model, v, "patient"), 0.818180, 1e-6);
    EXPECT_NEAR(weight_of(model, v, "anxious"), 0.574962, 1e-6);
    EXPECT_NEAR(weight_of(model, v, "calm"), 0.0, 0.0);
    EXPECT_NEAR(v.weights.norm(), 1.0, 1e-12);
}

TEST(Tfidf, SingleDocumentHasUnitIdf)
{
    const std::vector<TermBag> docs{TermBag{{"a", 3}, {"b", 1}}};
    const auto model = fit_tfidf(docs);
    for (double idf : model.idf()) {
        EXPECT_DOUBLE_EQ(idf, 1.0);
    }
    EXPECT_DOUBLE_EQ(smoothed_idf(1, 1), 1.0);
}

TEST(Tfidf, EmptyCorpusIsAnError)
{
    EXPECT_THROW(fit_tfidf(std::vector<TermBag>{}), DataError);
    EXPECT_THROW(fit_tfidf(std::vector<TermBag>{TermBag{}, TermBag{}}), DataError);
}

TEST(Tfidf, AllUnknownTermsGiveFlaggedZeroVector)
{
    const auto docs = two_docs();
    const auto model = fit_tfidf(docs);
    const auto v = model.vectorize(TermBag{{"unseen", 4}});
    EXPECT_TRUE(v.all_unknown);
    EXPECT_EQ(v.weights.nonZeros(), 0);
    EXPECT_EQ(v.weights.size(), 3);
    EXPECT_TRUE(model.vectorize(TermBag{}).all_unknown);
}

TEST(Tfidf, RebuiltModelMatches)
{
    const auto docs = two_docs();
    const auto model = fit_tfidf(docs);
    const TfidfModel rebuilt(model.vocabulary(), model.corpus_size());
    const TermBag q{{"patient", 2}, {"calm", 5}};
    EXPECT_EQ(dense(rebuilt.vectorize(q).weights), dense(model.vectorize(q).weights));
}

TEST(Tfidf, MatrixRowsAreVectorizedDocuments)
{
    const auto docs = two_docs();
    const auto model = fit_tfidf(docs);
    const SparseRowMatrix m = tfidf_matrix(model, docs);
    ASSERT_EQ(m.rows(), 2);
    for (Eigen::Index i = 0; i < 2; ++i) {
        const Eigen::VectorXd row = Eigen::MatrixXd(m).row(i).transpose();
        EXPECT_EQ(row, dense(model.vectorize(docs[static_cast<std::size_t>(i)]).weights));
    }
}

TEST(TfidfProperty, MatchesBruteForceOracle)
{
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const auto corpus = oracle::random_corpus(rng, 20, 50);
        const auto model = fit_tfidf(corpus);
        // Query mixes corpus terms with terms beyond the vocabulary.
        auto query = oracle::random_corpus(rng, 1, 60).front();
        const auto expected = oracle::tfidf_weights(corpus, query);
        const auto got = model.vectorize(query);
        EXPECT_EQ(got.all_unknown, expected.empty());
        double known_total = 0.0;
        for (const auto& [term, w] : expected) {
            EXPECT_NEAR(weight_of(model, got, term), w, 1e-12) << term;
            known_total += w * w;
        }
        EXPECT_NEAR(got.weights.squaredNorm(), known_total, 1e-12);
    }
}

TEST(Svd, IdentityHasUnitSingularValues)
{
    const auto svd = fit_svd(Eigen::MatrixXd::Identity(3, 3), SvdOptions{3, 10, 2, 1});
    ASSERT_EQ(svd.rank(), 3u);
    for (Eigen::Index i = 0; i < 3; ++i) {
        EXPECT_NEAR(svd.singular_values(i), 1.0, 1e-12);
    }
}

TEST(Svd, RankOneOuterProduct)
{
    Rng rng(2);
    Eigen::VectorXd u = oracle::random_matrix(rng, 6, 1).col(0);
    Eigen::VectorXd v = oracle::random_matrix(rng, 9, 1).col(0);
    u *= 2.0 / u.norm();
    v *= 3.0 / v.norm();
    const Eigen::MatrixXd m = u * v.transpose();
    const auto svd = fit_svd(m, SvdOptions{4, 10, 2, 7});
    EXPECT_NEAR(svd.singular_values(0), 6.0, 1e-10);
    for (Eigen::Index i = 1; i < svd.singular_values.size(); ++i) {
        EXPECT_LE(std::abs(svd.singular_values(i)), 1e-10);
    }
    const Eigen::VectorXd dir = svd.components.row(0).transpose();
    EXPECT_NEAR(std::abs(dir.dot(v.normalized())), 1.0, 1e-10);
}

TEST(Svd, ClampsKToMatrixShape)
{
    const auto svd = fit_svd(Eigen::MatrixXd::Identity(2, 5), SvdOptions{100, 10, 2, 0});
    EXPECT_EQ(svd.rank(), 2u);
    EXPECT_EQ(svd.input_dimension(), 5u);
}

TEST(Svd, AllZeroMatrixIsAnError)
{
    EXPECT_THROW(fit_svd(Eigen::MatrixXd::Zero(3, 4), SvdOptions{2, 10, 2, 0}), DataError);
    EXPECT_THROW(fit_svd(Eigen::MatrixXd(0, 0), SvdOptions{2, 10, 2, 0}), DataError);
}

TEST(Svd, DeterministicInSeedAndSparseMatchesDense)
{
    Rng rng(5);
    const Eigen::MatrixXd m = oracle::random_matrix(rng, 40, 30);
    const SvdOptions opts{5, 3, 2, 11};
    const auto a = fit_svd(m, opts);
    const auto b = fit_svd(m, opts);
    EXPECT_EQ(a.components, b.components);
    EXPECT_EQ(a.singular_values, b.singular_values);
    const SparseRowMatrix sparse = m.sparseView();
    const auto c = fit_svd(sparse, opts);
    EXPECT_LE((a.components - c.components).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SvdProperty, LowRankReconstructionAndOrthonormality)
{
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const auto rows = static_cast<Eigen::Index>(2 + rng.below(30));
        const auto cols = static_cast<Eigen::Index>(2 + rng.below(30));
        const auto rank = static_cast<Eigen::Index>(1 + rng.below(static_cast<std::uint64_t>(std::min(rows, cols))));
        const Eigen::MatrixXd m = oracle::random_low_rank(rng, rows, cols, rank);
        const auto k = static_cast<std::size_t>(rank + static_cast<Eigen::Index>(rng.below(3)));
        const auto svd = fit_svd(m, SvdOptions{k, 10, 2, rng.next()});
        const Eigen::MatrixXd& v = svd.components;

        // m V^T V reproduces m when the rank is captured.
        const Eigen::MatrixXd recon = m * v.transpose() * v;
        EXPECT_LE((recon - m).norm(), 1e-8 * m.norm()) << rows << "x" << cols << " rank " << rank;

        const Eigen::MatrixXd gram = v * v.transpose();
        EXPECT_LE((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-8);
        for (Eigen::Index i = 1; i < svd.singular_values.size(); ++i) {
            EXPECT_LE(svd.singular_values(i), svd.singular_values(i - 1));
        }
    }
}

TEST(SvdProperty, SingularValuesMatchExactWhenRankFits)
{
    Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXd m = oracle::random_low_rank(rng, 25, 18, 4);
        const auto svd = fit_svd(m, SvdOptions{4, 10, 2, 3});
        const Eigen::JacobiSVD<Eigen::MatrixXd> exact(m);
        for (Eigen::Index i = 0; i < 4; ++i) {
            EXPECT_NEAR(svd.singular_values(i), exact.singularValues()(i), 1e-8);
        }
    }
}

TEST(Project, Examples)
{
    Rng rng(6);
    const Eigen::MatrixXd m = oracle::random_matrix(rng, 12, 8);
    const auto svd = fit_svd(m, SvdOptions{4, 10, 2, 1});

    EXPECT_EQ(project(svd, Eigen::VectorXd::Zero(8)), Eigen::VectorXd::Zero(4));
    for (Eigen::Index i = 0; i < 4; ++i) {
        const Eigen::VectorXd vi = svd.components.row(i).transpose();
        Eigen::VectorXd e = Eigen::VectorXd::Zero(4);
        e(i) = 1.0;
        EXPECT_LE((project(svd, vi) - e).cwiseAbs().maxCoeff(), 1e-10);
    }
    for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXd a = oracle::random_matrix(rng, 8, 1).col(0);
        const Eigen::VectorXd b = oracle::random_matrix(rng, 8, 1).col(0);
        EXPECT_LE((project(svd, Eigen::VectorXd(a + b)) - project(svd, a) - project(svd, b))
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-10);
        const Eigen::SparseVector<double> sa = a.sparseView();
        EXPECT_LE((project(svd, sa) - project(svd, a)).cwiseAbs().maxCoeff(), 1e-12);
    }
    EXPECT_THROW(project(svd, Eigen::VectorXd::Zero(7)), DataError);
}

TEST(Cosine, Examples)
{
    const Eigen::Vector2d u(1.0, 0.0);
    const Eigen::Vector2d v(1.0, 1.0);
    EXPECT_NEAR(cosine(u, v), 0.707107, 1e-6);
    EXPECT_DOUBLE_EQ(cosine(v, v), 1.0);
    EXPECT_DOUBLE_EQ(cosine(u, Eigen::Vector2d(0.0, 3.0)), 0.0);
    EXPECT_DOUBLE_EQ(cosine(u, Eigen::Vector2d(-2.0, 0.0)), -1.0);
    EXPECT_THROW(cosine(u, Eigen::Vector2d::Zero()), NumericalError);
    EXPECT_THROW(cosine(Eigen::Vector2d::Zero(), u), NumericalError);
    EXPECT_THROW(cosine(u, Eigen::Vector3d(1, 0, 0)), DataError);
}

TEST(CosineProperty, SymmetricAndBounded)
{
    Rng rng(51);
    for (int t = 0; t < 500; ++t) {
        const auto dim = static_cast<Eigen::Index>(1 + rng.below(20));
        const Eigen::VectorXd a = oracle::random_matrix(rng, dim, 1, 1.0 + 100.0 * rng.uniform()).col(0);
        const Eigen::VectorXd b = oracle::random_matrix(rng, dim, 1).col(0);
        const double ab = cosine(a, b);
        EXPECT_EQ(ab, cosine(b, a));
        EXPECT_LE(std::abs(ab), 1.0);
    }
}

namespace {

std::vector<DocVector> points2(std::initializer_list<std::pair<double, double>> xy)
{
    std::vector<DocVector> out;
    for (auto [x, y] : xy) {
        out.push_back(Eigen::Vector2d(x, y));
    }
    return out;
}

}  // namespace

TEST(Lda, TwoClassDirectionFollowsMeanDifference)
{
    // Each class has within-class scatter 2 I around its mean.
    const auto vectors = points2({{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {2, 0}, {0, 0}, {1, 1}, {1, -1}});
    const std::vector<Domain> labels(4, Domain::Mood);
    std::vector<Domain> all = labels;
    all.insert(all.end(), 4, Domain::Substance);
    const auto lda = fit_lda_2d(vectors, all);
    const Eigen::VectorXd w = lda.directions.col(0);
    EXPECT_GT(std::abs(w(0)), 0.0);
    EXPECT_LE(std::abs(w(1)) / std::abs(w(0)), 1e-6);
    EXPECT_EQ(lda.directions.col(1), Eigen::VectorXd::Zero(2));
    EXPECT_EQ(lda.classes, (std::vector<Domain>{Domain::Mood, Domain::Substance}));

    const Eigen::MatrixXd coords = transform(lda, vectors);
    EXPECT_LT(coords.col(0).head(4).mean(), coords.col(0).tail(4).mean());
}

TEST(Lda, IdenticalMeansGiveZeroCoordinates)
{
    const auto vectors = points2({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    const std::vector<Domain> labels{Domain::Mood, Domain::Mood, Domain::Appearance, Domain::Appearance};
    const Eigen::MatrixXd coords = lda_2d(vectors, labels);
    EXPECT_LE(coords.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Lda, SevenClassesUseTopTwoDiscriminants)
{
    Rng rng(61);
    std::vector<DocVector> vectors;
    std::vector<Domain> labels;
    for (auto d : kRiskDomains) {
        const Eigen::VectorXd center = oracle::random_matrix(rng, 10, 1, 5.0).col(0);
        for (int i = 0; i < 12; ++i) {
            vectors.push_back(center + oracle::random_matrix(rng, 10, 1).col(0));
            labels.push_back(d);
        }
    }
    const auto lda = fit_lda_2d(vectors, labels);
    EXPECT_EQ(lda.classes.size(), 7u);
    EXPECT_GE(lda.eigenvalues(0), lda.eigenvalues(1));
    EXPECT_GT(lda.eigenvalues(1), 0.0);
    const Eigen::MatrixXd coords = transform(lda, vectors);
    EXPECT_EQ(coords.rows(), 84);
    EXPECT_EQ(coords.cols(), 2);
}

TEST(Lda, FewerThanTwoClassesIsAnError)
{
    const auto vectors = points2({{1, 0}, {0, 1}});
    EXPECT_THROW(lda_2d(vectors, std::vector<Domain>{Domain::Mood, Domain::Mood}), DataError);
    EXPECT_THROW(lda_2d(vectors, std::vector<Domain>{Domain::Mood}), DataError);
    EXPECT_THROW(lda_2d(std::vector<DocVector>{}, std::vector<Domain>{}), DataError);
}

TEST(LdaProperty, InvariantUnderUniformScaling)
{
    Rng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<DocVector> vectors;
        std::vector<Domain> labels;
        for (std::size_t c = 0; c < 3 + rng.below(5); ++c) {
            const Eigen::VectorXd center = oracle::random_matrix(rng, 5, 1, 3.0).col(0);
            for (int i = 0; i < 15; ++i) {
                vectors.push_back(center + oracle::random_matrix(rng, 5, 1).col(0));
                labels.push_back(kRiskDomains[c]);
            }
        }
        const double scale = 0.5 + 4.0 * rng.uniform();
        std::vector<DocVector> scaled;
        for (const auto& v : vectors) {
            scaled.push_back(scale * v);
        }
        const Eigen::MatrixXd a = lda_2d(vectors, labels);
        const Eigen::MatrixXd b = lda_2d(scaled, labels);
        for (Eigen::Index axis = 0; axis < 2; ++axis) {
            const double same = (a.col(axis) - b.col(axis)).cwiseAbs().maxCoeff();
            const double flipped = (a.col(axis) + b.col(axis)).cwiseAbs().maxCoeff();
            EXPECT_LE(std::min(same, flipped), 1e-5 * std::max(1.0, a.col(axis).cwiseAbs().maxCoeff()));
        }
    }
}
