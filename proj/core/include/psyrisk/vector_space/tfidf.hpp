#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Sparse>

#include "psyrisk/text/text.hpp"

namespace psyrisk {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Terms with dense indices in lexicographic order, plus document
/// frequencies.
class Vocabulary {
  public:
    Vocabulary() = default;
    /// `terms` must be strictly increasing; every df must be at least 1.
    Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> document_frequency);

    std::size_t size() const noexcept { return m_terms.size(); }
    std::optional<std::size_t> index(std::string_view term) const;
    const std::string& term(std::size_t i) const { return m_terms.at(i); }
    std::size_t document_frequency(std::size_t i) const { return m_df.at(i); }
    std::span<const std::string> terms() const noexcept { return m_terms; }
    std::span<const std::size_t> document_frequencies() const noexcept { return m_df; }

  private:
    std::vector<std::string> m_terms;
    std::vector<std::size_t> m_df;
    std::unordered_map<std::string, std::size_t> m_lookup;
};

struct TfidfVector {
    Eigen::SparseVector<double> weights;
    bool all_unknown = false;  ///< no known term; weights are all zero
};

/// Smoothed inverse document frequency: ln((1 + N) / (1 + df)) + 1.
double smoothed_idf(std::size_t corpus_size, std::size_t document_frequency) noexcept;

class TfidfModel {
  public:
    TfidfModel() = default;
    /// Rebuilds a fitted model; idf values are recomputed from df and N.
    TfidfModel(Vocabulary vocabulary, std::size_t corpus_size);

    /// count(t) * idf(t) for known terms, then L2-normalized.
    TfidfVector vectorize(const TermBag& terms) const;

    const Vocabulary& vocabulary() const noexcept { return m_vocabulary; }
    std::span<const double> idf() const noexcept { return m_idf; }
    std::size_t corpus_size() const noexcept { return m_corpus_size; }
    std::size_t dimension() const noexcept { return m_vocabulary.size(); }

  private:
    Vocabulary m_vocabulary;
    std::vector<double> m_idf;
    std::size_t m_corpus_size = 0;
};

/// Throws DataError when there are no documents or no terms at all.
TfidfModel fit_tfidf(std::span<const TermBag> documents);

/// Row i is vectorize(documents[i]).
SparseRowMatrix tfidf_matrix(const TfidfModel& model, std::span<const TermBag> documents);

}  // namespace psyrisk
