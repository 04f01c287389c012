#include "psyrisk/networks/kmeans.hpp"

#include <limits>
#include <string>

#include "psyrisk/errors.hpp"
#include "psyrisk/random.hpp"

namespace psyrisk {

namespace {

Eigen::MatrixXd plus_plus_seeds(const Eigen::MatrixXd& points, std::size_t k, Rng& rng)
{
    const auto n = static_cast<std::size_t>(points.rows());
    Eigen::MatrixXd centroids(static_cast<Eigen::Index>(k), points.cols());
    std::vector<bool> chosen(n, false);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());

    std::size_t pick = rng.below(n);
    for (std::size_t c = 0; c < k; ++c) {
        chosen[pick] = true;
        centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(pick));
        if (c + 1 == k) {
            break;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = (points.row(static_cast<Eigen::Index>(i))
                              - centroids.row(static_cast<Eigen::Index>(c)))
                                 .squaredNorm();
            d2[i] = std::min(d2[i], d);
            total += d2[i];
        }
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            pick = n;
            std::size_t last_positive = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (d2[i] <= 0.0) {
                    continue;
                }
                last_positive = i;
                acc += d2[i];
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {
                pick = last_positive;
            }
        } else {
            // Every point coincides with a chosen centroid.
            pick = 0;
            while (chosen[pick]) {
                ++pick;
            }
        }
    }
    return centroids;
}

double assign_points(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                     std::vector<std::size_t>& assignment)
{
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_c = 0;
        for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
            const double d = (points.row(i) - centroids.row(c)).squaredNorm();
            if (d < best) {
                best = d;
                best_c = static_cast<std::size_t>(c);
            }
        }
        assignment[static_cast<std::size_t>(i)] = best_c;
        inertia += best;
    }
    return inertia;
}

void update_centroids(const Eigen::MatrixXd& points, const std::vector<std::size_t>& assignment,
                      Eigen::MatrixXd& centroids)
{
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(centroids.rows(), centroids.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(centroids.rows()), 0);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const std::size_t c = assignment[static_cast<std::size_t>(i)];
        sums.row(static_cast<Eigen::Index>(c)) += points.row(i);
        ++counts[c];
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0) {
            centroids.row(static_cast<Eigen::Index>(c)) =
                sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
        }
    }
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options)
{
    if (k == 0) {
        throw DataError("k-means needs k >= 1");
    }
    if (static_cast<std::size_t>(points.rows()) < k) {
        throw DataError("k-means with k=" + std::to_string(k) + " needs at least " + std::to_string(k)
                        + " points, got " + std::to_string(points.rows()));
    }
    if (!points.allFinite()) {
        throw NumericalError("k-means input contains non-finite values");
    }

    Rng rng(seed);
    KMeansResult result;
    result.centroids = plus_plus_seeds(points, k, rng);
    result.assignment.assign(static_cast<std::size_t>(points.rows()), 0);
    result.inertia = assign_points(points, result.centroids, result.assignment);
    result.inertia_history.push_back(result.inertia);

    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        update_centroids(points, result.assignment, result.centroids);
        std::vector<std::size_t> next(result.assignment.size());
        const double inertia = assign_points(points, result.centroids, next);
        const double improvement = result.inertia - inertia;
        const bool unchanged = next == result.assignment;
        result.assignment = std::move(next);
        result.inertia = inertia;
        result.inertia_history.push_back(inertia);
        if (unchanged || improvement < options.tolerance) {
            break;
        }
    }
    return result;
}

}  // namespace psyrisk
