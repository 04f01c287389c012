#include "psyrisk/vector_space/svd.hpp"

#include <algorithm>
#include <string>

#include <spdlog/spdlog.h>

#include "psyrisk/errors.hpp"
#include "psyrisk/random.hpp"

namespace psyrisk {

namespace {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m)
{
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

void fix_signs(SvdProjection& p)
{
    for (Eigen::Index r = 0; r < p.components.rows(); ++r) {
        Eigen::Index best = 0;
        p.components.row(r).cwiseAbs().maxCoeff(&best);
        if (p.components(r, best) < 0.0) {
            p.components.row(r) *= -1.0;
        }
    }
}

template <typename Matrix>
SvdProjection fit_svd_impl(const Matrix& a, const SvdOptions& options)
{
    const auto rows = static_cast<std::size_t>(a.rows());
    const auto cols = static_cast<std::size_t>(a.cols());
    if (rows == 0 || cols == 0) {
        throw DataError("cannot fit SVD on an empty matrix");
    }
    if (options.k == 0) {
        throw ConfigError("SVD rank k must be at least 1");
    }
    if (a.squaredNorm() == 0.0) {
        throw DataError("cannot fit SVD on an all-zero matrix");
    }
    const std::size_t limit = std::min(rows, cols);
    std::size_t k = options.k;
    if (k > limit) {
        spdlog::warn("SVD rank {} exceeds min(N={}, V={}); clamping to {}", k, rows, cols, limit);
        k = limit;
    }
    const auto width = static_cast<Eigen::Index>(std::min(k + options.oversampling, limit));

    Rng rng(mix_seed(options.seed, 0x5fd));
    Eigen::MatrixXd omega(a.cols(), width);
    for (Eigen::Index j = 0; j < omega.cols(); ++j) {
        for (Eigen::Index i = 0; i < omega.rows(); ++i) {
            omega(i, j) = rng.normal();
        }
    }

    Eigen::MatrixXd q = orthonormal_basis(a * omega);
    for (std::size_t it = 0; it < options.power_iterations; ++it) {
        const Eigen::MatrixXd z = orthonormal_basis(a.transpose() * q);
        q = orthonormal_basis(a * z);
    }

    // B^T = A^T Q is V x width; its left singular vectors are the right
    // singular vectors of B = Q^T A.
    const Eigen::MatrixXd bt = a.transpose() * q;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(bt, Eigen::ComputeThinU);

    SvdProjection p;
    const auto kk = static_cast<Eigen::Index>(k);
    p.components = svd.matrixU().leftCols(kk).transpose();
    p.singular_values = svd.singularValues().head(kk);
    fix_signs(p);
    return p;
}

}  // namespace

SvdProjection fit_svd(const SparseRowMatrix& matrix, const SvdOptions& options)
{
    return fit_svd_impl(matrix, options);
}

SvdProjection fit_svd(const Eigen::MatrixXd& matrix, const SvdOptions& options)
{
    return fit_svd_impl(matrix, options);
}

DocVector project(const SvdProjection& projection, const Eigen::SparseVector<double>& vector)
{
    if (vector.size() != projection.components.cols()) {
        throw DataError("projection expects dimension " + std::to_string(projection.components.cols())
                        + ", got " + std::to_string(vector.size()));
    }
    DocVector out = DocVector::Zero(projection.components.rows());
    for (Eigen::SparseVector<double>::InnerIterator it(vector); it; ++it) {
        out.noalias() += it.value() * projection.components.col(it.index());
    }
    return out;
}

DocVector project(const SvdProjection& projection, const Eigen::VectorXd& vector)
{
    if (vector.size() != projection.components.cols()) {
        throw DataError("projection expects dimension " + std::to_string(projection.components.cols())
                        + ", got " + std::to_string(vector.size()));
    }
    return projection.components * vector;
}

}  // namespace psyrisk
