#include "psyrisk/vector_space/lda.hpp"

#include <map>

#include <Eigen/Eigenvalues>

#include "psyrisk/errors.hpp"

namespace psyrisk {

LdaProjection fit_lda_2d(std::span<const DocVector> vectors, std::span<const Domain> labels)
{
    if (vectors.size() != labels.size()) {
        throw DataError("LDA needs one label per vector");
    }
    if (vectors.empty()) {
        throw DataError("LDA needs at least two classes; got no vectors");
    }
    const Eigen::Index dim = vectors.front().size();
    if (dim == 0) {
        throw DataError("LDA vectors are empty");
    }

    std::map<Domain, std::pair<Eigen::VectorXd, std::size_t>> sums;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != dim) {
            throw DataError("LDA vectors differ in dimension");
        }
        auto [it, inserted] = sums.try_emplace(labels[i], Eigen::VectorXd::Zero(dim), 0);
        it->second.first += vectors[i];
        ++it->second.second;
        mean += vectors[i];
    }
    if (sums.size() < 2) {
        throw DataError("LDA needs at least two classes; got " + std::to_string(sums.size()));
    }
    mean /= static_cast<double>(vectors.size());

    std::map<Domain, Eigen::VectorXd> class_means;
    Eigen::MatrixXd between = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& [d, acc] : sums) {
        Eigen::VectorXd mu = acc.first / static_cast<double>(acc.second);
        const Eigen::VectorXd diff = mu - mean;
        between.noalias() += static_cast<double>(acc.second) * diff * diff.transpose();
        class_means.emplace(d, std::move(mu));
    }
    Eigen::MatrixXd within = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const Eigen::VectorXd diff = vectors[i] - class_means.at(labels[i]);
        within.noalias() += diff * diff.transpose();
    }
    within.diagonal().array() += kLdaRegularization;

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(between, within);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("LDA generalized eigenproblem did not converge");
    }

    LdaProjection lda;
    lda.mean = mean;
    lda.directions = Eigen::MatrixXd::Zero(dim, 2);
    lda.eigenvalues = Eigen::Vector2d::Zero();
    for (const auto& [d, acc] : sums) {
        lda.classes.push_back(d);
    }
    // Eigenvalues come back ascending.
    const Eigen::Index axes = std::min<Eigen::Index>(2, dim);
    for (Eigen::Index a = 0; a < axes; ++a) {
        const Eigen::Index src = dim - 1 - a;
        const double lambda = solver.eigenvalues()(src);
        lda.eigenvalues(a) = lambda;
        if (lambda <= kLdaNullEigenvalue) {
            continue;
        }
        Eigen::VectorXd w = solver.eigenvectors().col(src);
        Eigen::Index best = 0;
        w.cwiseAbs().maxCoeff(&best);
        if (w(best) < 0.0) {
            w = -w;
        }
        lda.directions.col(a) = w;
    }
    return lda;
}

Eigen::MatrixXd transform(const LdaProjection& lda, std::span<const DocVector> vectors)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(vectors.size()), 2);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != lda.mean.size()) {
            throw DataError("LDA transform dimension mismatch");
        }
        out.row(static_cast<Eigen::Index>(i)) =
            ((vectors[i] - lda.mean).transpose() * lda.directions);
    }
    return out;
}

Eigen::MatrixXd lda_2d(std::span<const DocVector> vectors, std::span<const Domain> labels)
{
    return transform(fit_lda_2d(vectors, labels), vectors);
}

}  // namespace psyrisk
