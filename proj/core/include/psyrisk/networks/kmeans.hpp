#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace psyrisk {

struct KMeansOptions {
    std::size_t max_iterations = 300;
    double tolerance = 1e-6;  ///< stop once an iteration lowers inertia by less
};

struct KMeansResult {
    Eigen::MatrixXd centroids;            ///< k x d
    std::vector<std::size_t> assignment;  ///< nearest centroid per point
    double inertia = 0.0;                 ///< sum of squared distances to assigned centroids
    std::vector<double> inertia_history;  ///< inertia after each assignment step
};

/// k-means++ seeding followed by Lloyd iterations. Points are rows. Ties in
/// assignment go to the lower centroid index; an emptied cluster keeps its
/// previous centroid. Throws DataError when there are fewer points than k
/// or k is zero.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

}  // namespace psyrisk
