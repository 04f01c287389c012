#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "psyrisk/domain.hpp"
#include "psyrisk/vector_space/svd.hpp"

namespace psyrisk {

/// Two-component linear discriminant projection.
struct LdaProjection {
    Eigen::VectorXd mean;           ///< overall mean, subtracted before projecting
    Eigen::MatrixXd directions;     ///< d x 2, top generalized eigenvectors of (S_b, S_w)
    Eigen::Vector2d eigenvalues;    ///< between/within variance ratio per axis
    std::vector<Domain> classes;    ///< classes present, in Domain order
};

/// Within-class scatter regularizer added to the diagonal.
inline constexpr double kLdaRegularization = 1e-6;

/// Axes whose eigenvalue is at or below this carry no class separation and
/// produce zero coordinates.
inline constexpr double kLdaNullEigenvalue = 1e-10;

/// Throws DataError with fewer than two distinct labels or mismatched sizes.
LdaProjection fit_lda_2d(std::span<const DocVector> vectors, std::span<const Domain> labels);

/// N x 2 coordinates.
Eigen::MatrixXd transform(const LdaProjection& lda, std::span<const DocVector> vectors);

/// fit_lda_2d followed by transform on the same vectors.
Eigen::MatrixXd lda_2d(std::span<const DocVector> vectors, std::span<const Domain> labels);

}  // namespace psyrisk
