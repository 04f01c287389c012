#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "psyrisk/vector_space/tfidf.hpp"

namespace psyrisk {

/// Dense document representation in the reduced space.
using DocVector = Eigen::VectorXd;

/// Top right singular vectors (one per row, orthonormal) and their singular
/// values in non-increasing order.
struct SvdProjection {
    Eigen::MatrixXd components;       ///< k x V
    Eigen::VectorXd singular_values;  ///< k

    std::size_t rank() const noexcept { return static_cast<std::size_t>(components.rows()); }
    std::size_t input_dimension() const noexcept
    {
        return static_cast<std::size_t>(components.cols());
    }
};

struct SvdOptions {
    std::size_t k = 100;
    std::size_t oversampling = 10;
    std::size_t power_iterations = 2;
    std::uint64_t seed = 0;
};

/// Seeded randomized range finder followed by an exact SVD of the projected
/// block. When k + oversampling reaches min(N, V) the range is captured
/// completely and the result is the exact truncated SVD. k is clamped to
/// min(N, V) with a logged warning. Component signs are fixed so that the
/// largest-magnitude entry of each row is positive.
///
/// Throws DataError for an empty or all-zero matrix.
SvdProjection fit_svd(const SparseRowMatrix& matrix, const SvdOptions& options);
SvdProjection fit_svd(const Eigen::MatrixXd& matrix, const SvdOptions& options);

/// components * vector. Throws DataError on dimension mismatch.
DocVector project(const SvdProjection& projection, const Eigen::SparseVector<double>& vector);
DocVector project(const SvdProjection& projection, const Eigen::VectorXd& vector);

}  // namespace psyrisk
