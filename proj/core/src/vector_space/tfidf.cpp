#include "psyrisk/vector_space/tfidf.hpp"

#include <cmath>
#include <map>

#include "psyrisk/errors.hpp"

namespace psyrisk {

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> document_frequency)
    : m_terms(std::move(terms)), m_df(std::move(document_frequency))
{
    if (m_terms.size() != m_df.size()) {
        throw DataError("vocabulary terms and document frequencies differ in length");
    }
    m_lookup.reserve(m_terms.size());
    for (std::size_t i = 0; i < m_terms.size(); ++i) {
        if (i > 0 && !(m_terms[i - 1] < m_terms[i])) {
            throw DataError("vocabulary terms must be unique and sorted");
        }
        if (m_df[i] == 0) {
            throw DataError("vocabulary term '" + m_terms[i] + "' has zero document frequency");
        }
        m_lookup.emplace(m_terms[i], i);
    }
}

std::optional<std::size_t> Vocabulary::index(std::string_view term) const
{
    auto it = m_lookup.find(std::string(term));
    if (it == m_lookup.end()) {
        return std::nullopt;
    }
    return it->second;
}

double smoothed_idf(std::size_t corpus_size, std::size_t document_frequency) noexcept
{
    return std::log((1.0 + static_cast<double>(corpus_size))
                    / (1.0 + static_cast<double>(document_frequency)))
           + 1.0;
}

TfidfModel::TfidfModel(Vocabulary vocabulary, std::size_t corpus_size)
    : m_vocabulary(std::move(vocabulary)), m_corpus_size(corpus_size)
{
    m_idf.reserve(m_vocabulary.size());
    for (auto df : m_vocabulary.document_frequencies()) {
        if (df > corpus_size) {
            throw DataError("document frequency exceeds corpus size");
        }
        m_idf.push_back(smoothed_idf(corpus_size, df));
    }
}

TfidfVector TfidfModel::vectorize(const TermBag& terms) const
{
    TfidfVector out;
    out.weights.resize(static_cast<Eigen::Index>(dimension()));
    // TermBag iterates in lexicographic order, which is also index order.
    double norm_sq = 0.0;
    for (const auto& [term, count] : terms) {
        const auto idx = m_vocabulary.index(term);
        if (!idx) {
            continue;
        }
        const double w = static_cast<double>(count) * m_idf[*idx];
        out.weights.insertBack(static_cast<Eigen::Index>(*idx)) = w;
        norm_sq += w * w;
    }
    if (norm_sq == 0.0) {
        out.all_unknown = true;
        return out;
    }
    out.weights /= std::sqrt(norm_sq);
    return out;
}

TfidfModel fit_tfidf(std::span<const TermBag> documents)
{
    if (documents.empty()) {
        throw DataError("cannot fit TF-IDF on an empty corpus");
    }
    std::map<std::string, std::size_t> df;
    for (const auto& doc : documents) {
        for (const auto& [term, count] : doc) {
            if (count > 0) {
                ++df[term];
            }
        }
    }
    if (df.empty()) {
        throw DataError("cannot fit TF-IDF: no document contains any term");
    }
    std::vector<std::string> terms;
    std::vector<std::size_t> freqs;
    terms.reserve(df.size());
    freqs.reserve(df.size());
    for (auto& [term, n] : df) {
        terms.push_back(term);
        freqs.push_back(n);
    }
    return TfidfModel(Vocabulary(std::move(terms), std::move(freqs)), documents.size());
}

SparseRowMatrix tfidf_matrix(const TfidfModel& model, std::span<const TermBag> documents)
{
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t row = 0; row < documents.size(); ++row) {
        const auto v = model.vectorize(documents[row]);
        for (Eigen::SparseVector<double>::InnerIterator it(v.weights); it; ++it) {
            triplets.emplace_back(static_cast<int>(row), static_cast<int>(it.index()), it.value());
        }
    }
    SparseRowMatrix m(static_cast<Eigen::Index>(documents.size()),
                      static_cast<Eigen::Index>(model.dimension()));
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

}  // namespace psyrisk
