#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "studymap/corpus.hpp"

namespace studymap {

/// Porter's 1980 suffix-stripping algorithm. Input must be lowercase ASCII;
/// other bytes are left alone and treated as consonants.
std::string porter_stem(std::string_view word);

/// Folds agent nouns into their verb stem: a Porter stem ending in "er" loses
/// the suffix when the remainder still has a vowel-consonant sequence
/// ("tester" -> "test", "cluster" -> "clust"). Applied to Porter output, so
/// every pair Porter conflates stays conflated.
std::string fold_agent_suffix(std::string_view porter_output);

/// Default English stopword list (articles, prepositions, conjunctions,
/// pronouns, auxiliaries).
const std::set<std::string, std::less<>>& default_stopwords();

/// One term per line, UTF-8; blank lines and lines starting with '#' are skipped.
std::set<std::string, std::less<>> load_stopwords(const std::filesystem::path& path);

enum class Weighting { tf, tfidf };

struct PipelineConfig {
    std::set<std::string, std::less<>> stopword_list = default_stopwords();
    std::size_t min_term_length = 2;
    std::size_t min_document_frequency = 2;
    Weighting weighting = Weighting::tfidf;
    std::size_t knn_k = 5;
    bool fold_agent_nouns = true;

    /// Throws InvalidArgument when knn_k or min_document_frequency is zero.
    void validate() const;
    /// Stable digest of every field, used as a cache key.
    std::string fingerprint() const;
};

/// Lowercase alphanumeric runs; bytes >= 0x80 are kept inside words.
std::vector<std::string> tokenize(std::string_view text);

/// Title, abstract and keywords joined by single spaces.
std::string study_text(const StudyRecord& study);

/// Tokenize, drop stopwords and short tokens, stem. Order is preserved.
std::vector<std::string> preprocess(const StudyRecord& study, const PipelineConfig& config);

/// Sorted (term index, weight) pairs; zero weights are not stored.
struct SparseVector {
    std::size_t dimension = 0;
    std::vector<std::pair<std::uint32_t, double>> entries;

    double get(std::size_t index) const;
    std::vector<double> dense() const;
    bool operator==(const SparseVector&) const = default;
};

class TermDocumentMatrix {
public:
    TermDocumentMatrix() = default;
    TermDocumentMatrix(std::vector<std::string> study_ids, std::vector<std::string> vocabulary,
                       std::vector<SparseVector> vectors);

    const std::vector<std::string>& study_ids() const noexcept { return study_ids_; }
    const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }
    const std::vector<SparseVector>& vectors() const noexcept { return vectors_; }
    const std::vector<double>& norms() const noexcept { return norms_; }
    std::size_t documents() const noexcept { return vectors_.size(); }
    std::size_t terms() const noexcept { return vocabulary_.size(); }

    std::size_t doc_index(std::string_view study_id) const;
    /// Weight of `term` in document `doc`; 0 when absent.
    double weight(std::size_t doc, std::string_view term) const;
    /// Cosine similarity between two documents of this matrix.
    double similarity(std::size_t a, std::size_t b) const;

    bool operator==(const TermDocumentMatrix&) const = default;

private:
    std::vector<std::string> study_ids_;
    std::vector<std::string> vocabulary_;
    std::vector<SparseVector> vectors_;
    std::vector<double> norms_;
};

/// Vocabulary = stemmed terms surviving the filters, sorted. Under tfidf the
/// weight is tf * ln(N / df). Throws InvalidArgument on an empty corpus or an
/// empty vocabulary.
TermDocumentMatrix build_matrix(const Corpus& corpus, const PipelineConfig& config);

/// dot(a, b) / (|a| |b|), clamped to [0, 1]; 0 when either norm is 0.
/// Throws InvalidArgument on a dimension mismatch.
double cosine_similarity(const SparseVector& a, const SparseVector& b);
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct Neighbor {
    std::size_t index;
    std::string id;
    double similarity;

    bool operator==(const Neighbor&) const = default;
};

/// The k most similar other documents, similarity descending, ties by
/// ascending index. Requires 1 <= k < N.
std::vector<Neighbor> knn(const TermDocumentMatrix& matrix, std::string_view doc, std::size_t k);
std::vector<Neighbor> knn(const TermDocumentMatrix& matrix, std::size_t doc, std::size_t k);

struct ExpressionHeat {
    std::string expression;
    std::vector<std::size_t> counts;  // corpus order
    std::vector<double> shade;        // 0 = black (none) .. 1 = white (max)
};

/// Case-insensitive token-sequence occurrences of `expression` in each
/// study's title, abstract and keywords. No stemming. Throws InvalidArgument
/// when the expression has no tokens.
ExpressionHeat expression_frequency(const Corpus& corpus, std::string_view expression);

}  // namespace studymap
