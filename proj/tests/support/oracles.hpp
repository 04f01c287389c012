#pragma once

// Independent reference computations and random generators shared by the
// unit tests and the acceptance runner. Nothing here calls into the
// library's numerical code, so agreement with it is a real check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psyrisk/networks/mlp.hpp"
#include "psyrisk/random.hpp"
#include "psyrisk/text/text.hpp"

namespace psyrisk::oracle {

// ---------------------------------------------------------------- generators

/// Random documents over a vocabulary of "t0".."t{terms-1}".
inline std::vector<TermBag> random_corpus(Rng& rng, std::size_t max_docs, std::size_t max_terms)
{
    const std::size_t docs = 1 + rng.below(max_docs);
    const std::size_t vocab = 1 + rng.below(max_terms);
    std::vector<TermBag> out(docs);
    for (auto& bag : out) {
        const std::size_t distinct = 1 + rng.below(std::min<std::size_t>(vocab, 8));
        for (std::size_t i = 0; i < distinct; ++i) {
            bag["t" + std::to_string(rng.below(vocab))] += 1 + rng.below(3);
        }
    }
    return out;
}

/// N x V matrix of exact rank `rank` (with probability one).
inline Eigen::MatrixXd random_low_rank(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                                       Eigen::Index rank)
{
    Eigen::MatrixXd a(rows, rank);
    Eigen::MatrixXd b(rank, cols);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        a.data()[i] = rng.normal();
    }
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        b.data()[i] = rng.normal();
    }
    return a * b;
}

inline Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                                     double scale = 1.0)
{
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = scale * rng.normal();
    }
    return m;
}

/// Ratings in [0, categories) for `items` x `raters`.
inline std::vector<std::vector<int>> random_ratings(Rng& rng, std::size_t items,
                                                    std::size_t raters, int categories)
{
    std::vector<std::vector<int>> t(items, std::vector<int>(raters));
    for (auto& row : t) {
        for (auto& r : row) {
            r = static_cast<int>(rng.below(static_cast<std::uint64_t>(categories)));
        }
    }
    return t;
}

// -------------------------------------------------------------------- TF-IDF

/// Term-by-term TF-IDF weights for `query` given `corpus`, straight from the
/// definition: df counts documents, idf = ln((1+N)/(1+df)) + 1, weight =
/// count * idf over known terms, then divided by the Euclidean norm.
inline std::map<std::string, double> tfidf_weights(const std::vector<TermBag>& corpus,
                                                   const TermBag& query)
{
    const double n = static_cast<double>(corpus.size());
    std::map<std::string, double> w;
    for (const auto& [term, count] : query) {
        double df = 0.0;
        for (const auto& doc : corpus) {
            if (doc.count(term) != 0) {
                df += 1.0;
            }
        }
        if (df == 0.0) {
            continue;
        }
        w[term] = static_cast<double>(count) * (std::log((1.0 + n) / (1.0 + df)) + 1.0);
    }
    double sq = 0.0;
    for (const auto& [t, x] : w) {
        sq += x * x;
    }
    if (sq > 0.0) {
        for (auto& [t, x] : w) {
            x /= std::sqrt(sq);
        }
    }
    return w;
}

// -------------------------------------------------------------------- kappas

/// Chance-corrected agreement from observed and expected agreement.
inline double kappa_from(double observed, double expected)
{
    return (observed - expected) / (1.0 - expected);
}

/// Mean over items of the share of ordered rater pairs (a != b) that agree.
inline double observed_agreement(const std::vector<std::vector<int>>& t)
{
    double total = 0.0;
    for (const auto& row : t) {
        double agree = 0.0;
        double pairs = 0.0;
        for (std::size_t a = 0; a < row.size(); ++a) {
            for (std::size_t b = 0; b < row.size(); ++b) {
                if (a != b) {
                    pairs += 1.0;
                    agree += row[a] == row[b] ? 1.0 : 0.0;
                }
            }
        }
        total += agree / pairs;
    }
    return total / static_cast<double>(t.size());
}

/// Fleiss: probability that two ratings drawn with replacement from the
/// pooled set of all ratings agree, by enumerating every pair of ratings.
inline double fleiss_expected(const std::vector<std::vector<int>>& t)
{
    std::vector<int> pool;
    for (const auto& row : t) {
        pool.insert(pool.end(), row.begin(), row.end());
    }
    double agree = 0.0;
    for (int x : pool) {
        for (int y : pool) {
            agree += x == y ? 1.0 : 0.0;
        }
    }
    const double m = static_cast<double>(pool.size());
    return agree / (m * m);
}

/// Davies-Fleiss: for each unordered rater pair, the probability that a
/// random item from rater a and an independent random item from rater b
/// agree (every item pair enumerated), averaged over rater pairs.
inline double pairwise_expected(const std::vector<std::vector<int>>& t)
{
    const std::size_t raters = t.front().size();
    const double n = static_cast<double>(t.size());
    double total = 0.0;
    double pairs = 0.0;
    for (std::size_t a = 0; a < raters; ++a) {
        for (std::size_t b = a + 1; b < raters; ++b) {
            double agree = 0.0;
            for (const auto& ri : t) {
                for (const auto& rj : t) {
                    agree += ri[a] == rj[b] ? 1.0 : 0.0;
                }
            }
            total += agree / (n * n);
            pairs += 1.0;
        }
    }
    return total / pairs;
}

inline double fleiss_kappa(const std::vector<std::vector<int>>& t)
{
    return kappa_from(observed_agreement(t), fleiss_expected(t));
}

inline double multi_kappa(const std::vector<std::vector<int>>& t)
{
    return kappa_from(observed_agreement(t), pairwise_expected(t));
}

// ------------------------------------------------------------------- k-means

struct Partition {
    double inertia = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> block;  ///< block id per point
};

/// Best partition of the rows of `points` into exactly k non-empty blocks,
/// by enumerating restricted growth strings. Exponential; keep n <= 12.
inline Partition best_partition(const Eigen::MatrixXd& points, std::size_t k)
{
    const auto n = static_cast<std::size_t>(points.rows());
    Partition best;
    std::vector<std::size_t> a(n, 0);
    std::vector<std::size_t> prefix_max(n, 0);

    auto score = [&]() {
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), points.cols());
        std::vector<double> counts(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            sums.row(static_cast<Eigen::Index>(a[i])) += points.row(static_cast<Eigen::Index>(i));
            counts[a[i]] += 1.0;
        }
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::RowVectorXd mean = sums.row(static_cast<Eigen::Index>(a[i])) / counts[a[i]];
            inertia += (points.row(static_cast<Eigen::Index>(i)) - mean).squaredNorm();
        }
        return inertia;
    };

    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
        if (used + (n - i) < k) {
            return;
        }
        if (i == n) {
            if (used == k) {
                const double s = score();
                if (s < best.inertia) {
                    best.inertia = s;
                    best.block = a;
                }
            }
            return;
        }
        for (std::size_t b = 0; b <= std::min(used, k - 1); ++b) {
            a[i] = b;
            rec(i + 1, std::max(used, b + 1));
        }
    };
    rec(0, 0);
    return best;
}

/// `pairs` tight pairs of points placed far apart; the optimal k = pairs
/// partition groups each pair.
inline Eigen::MatrixXd separated_pairs(Rng& rng, std::size_t pairs, Eigen::Index dim)
{
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(2 * pairs), dim);
    for (std::size_t p = 0; p < pairs; ++p) {
        Eigen::RowVectorXd center(dim);
        for (Eigen::Index j = 0; j < dim; ++j) {
            center(j) = 100.0 * static_cast<double>(p) + 10.0 * rng.normal();
        }
        for (std::size_t q = 0; q < 2; ++q) {
            Eigen::RowVectorXd jitter(dim);
            for (Eigen::Index j = 0; j < dim; ++j) {
                jitter(j) = 0.5 * rng.normal();
            }
            pts.row(static_cast<Eigen::Index>(2 * p + q)) = center + jitter;
        }
    }
    return pts;
}

// --------------------------------------------------------- finite differences

/// |a - n| / max(|a|, |n|, floor)
inline double relative_error(double analytic, double numeric, double floor = 1e-6)
{
    return std::abs(analytic - numeric)
           / std::max({std::abs(analytic), std::abs(numeric), floor});
}

/// Largest relative error between `analytic` and central differences of
/// `loss` around `params` with step h.
inline double max_gradient_error(const std::function<double(const std::vector<double>&)>& loss,
                                 std::vector<double> params, const std::vector<double>& analytic,
                                 double h = 1e-5)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + h;
        const double up = loss(params);
        params[i] = saved - h;
        const double down = loss(params);
        params[i] = saved;
        worst = std::max(worst, relative_error(analytic[i], (up - down) / (2.0 * h)));
    }
    return worst;
}

/// Smallest |pre-activation| over both hidden ReLU layers for inputs x.
inline double min_abs_preactivation(const MlpModel& m, const Eigen::MatrixXd& x)
{
    const Eigen::MatrixXd z1 = (x * m.layers[0].weights.transpose()).rowwise()
                               + m.layers[0].bias.transpose();
    const Eigen::MatrixXd z2 = (z1.cwiseMax(0.0) * m.layers[1].weights.transpose()).rowwise()
                               + m.layers[1].bias.transpose();
    return std::min(z1.cwiseAbs().minCoeff(), z2.cwiseAbs().minCoeff());
}

}  // namespace psyrisk::oracle
