#include "studymap/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "studymap/hash.hpp"

namespace studymap {

const std::set<std::string, std::less<>>& default_stopwords() {
    static const std::set<std::string, std::less<>> words{
        "a",       "about",   "above",   "after",   "again",    "against", "all",     "also",    "am",
        "an",      "and",     "any",     "are",     "as",       "at",      "be",      "because", "been",
        "before",  "being",   "below",   "between", "both",     "but",     "by",      "can",     "could",
        "did",     "do",      "does",    "doing",   "down",     "during",  "each",    "either",  "et",
        "etc",     "few",     "for",     "from",    "further",  "had",     "has",     "have",    "having",
        "he",      "her",     "here",    "hers",    "herself",  "him",     "himself", "his",     "how",
        "however", "i",       "if",      "in",      "into",     "is",      "it",      "its",     "itself",
        "just",    "may",     "me",      "might",   "more",     "most",    "must",    "my",      "myself",
        "neither", "no",      "nor",     "not",     "now",      "of",      "off",     "on",      "once",
        "only",    "or",      "other",   "our",     "ours",     "ourselves", "out",   "over",    "own",
        "same",    "shall",   "she",     "should",  "so",       "some",    "such",    "than",    "that",
        "the",     "their",   "theirs",  "them",    "themselves", "then",  "there",   "therefore", "these",
        "they",    "this",    "those",   "through", "thus",     "to",      "too",     "under",   "until",
        "up",      "upon",    "us",      "very",    "via",      "was",     "we",      "were",    "what",
        "when",    "where",   "whereas", "whether", "which",    "while",   "who",     "whom",    "whose",
        "why",     "will",    "with",    "within",  "without",  "would",   "yet",     "you",     "your",
        "yours",   "yourself", "yourselves",
    };
    return words;
}

std::set<std::string, std::less<>> load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read stopword file '" + path.string() + "'");
    std::set<std::string, std::less<>> out;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto last = line.find_last_not_of(" \t\r");
        std::string term = line.substr(first, last - first + 1);
        for (auto& c : term) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out.insert(std::move(term));
    }
    return out;
}

void PipelineConfig::validate() const {
    if (knn_k < 1) throw InvalidArgument("knn_k must be at least 1");
    if (min_document_frequency < 1) throw InvalidArgument("min_document_frequency must be at least 1");
}

std::string PipelineConfig::fingerprint() const {
    std::ostringstream out;
    out << "stop:";
    for (const auto& w : stopword_list) out << w << ',';
    out << ";len:" << min_term_length << ";df:" << min_document_frequency
        << ";w:" << (weighting == Weighting::tf ? "tf" : "tfidf") << ";k:" << knn_k << ";fold:" << fold_agent_nouns;
    return to_hex(fnv1a64(out.str()));
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c >= 0x80) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string study_text(const StudyRecord& study) {
    std::string text = study.title;
    if (!study.abstract.empty()) text += ' ' + study.abstract;
    for (const auto& k : study.keywords) text += ' ' + k;
    return text;
}

std::vector<std::string> preprocess(const StudyRecord& study, const PipelineConfig& config) {
    std::vector<std::string> out;
    for (auto& token : tokenize(study_text(study))) {
        if (token.size() < config.min_term_length) continue;
        if (config.stopword_list.contains(token)) continue;
        std::string stem = porter_stem(token);
        if (config.fold_agent_nouns) stem = fold_agent_suffix(stem);
        out.push_back(std::move(stem));
    }
    return out;
}

// ---------------------------------------------------------------------------

double SparseVector::get(std::size_t index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const auto& e, std::size_t i) { return e.first < i; });
    return (it != entries.end() && it->first == index) ? it->second : 0.0;
}

std::vector<double> SparseVector::dense() const {
    std::vector<double> out(dimension, 0.0);
    for (auto [i, w] : entries) out[i] = w;
    return out;
}

namespace {

double norm_of(const SparseVector& v) {
    double sum = 0.0;
    for (auto [i, w] : v.entries) sum += w * w;
    return std::sqrt(sum);
}

double sparse_dot(const SparseVector& a, const SparseVector& b) {
    double sum = 0.0;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() && ib != b.entries.end()) {
        if (ia->first < ib->first) ++ia;
        else if (ib->first < ia->first) ++ib;
        else {
            sum += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    return sum;
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

TermDocumentMatrix::TermDocumentMatrix(std::vector<std::string> study_ids, std::vector<std::string> vocabulary,
                                       std::vector<SparseVector> vectors)
    : study_ids_(std::move(study_ids)), vocabulary_(std::move(vocabulary)), vectors_(std::move(vectors)) {
    if (study_ids_.size() != vectors_.size()) throw InvalidArgument("one vector per study is required");
    norms_.reserve(vectors_.size());
    for (const auto& v : vectors_) {
        if (v.dimension != vocabulary_.size()) throw InvalidArgument("vector dimension differs from vocabulary");
        norms_.push_back(norm_of(v));
    }
}

std::size_t TermDocumentMatrix::doc_index(std::string_view study_id) const {
    auto it = std::find(study_ids_.begin(), study_ids_.end(), study_id);
    if (it == study_ids_.end())
        throw UnknownId("unknown study id '" + std::string(study_id) + "'", {std::string(study_id)});
    return static_cast<std::size_t>(it - study_ids_.begin());
}

double TermDocumentMatrix::weight(std::size_t doc, std::string_view term) const {
    auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), term);
    if (it == vocabulary_.end() || *it != term) return 0.0;
    return vectors_.at(doc).get(static_cast<std::size_t>(it - vocabulary_.begin()));
}

double TermDocumentMatrix::similarity(std::size_t a, std::size_t b) const {
    if (norms_[a] == 0.0 || norms_[b] == 0.0) return 0.0;
    return clamp_unit(sparse_dot(vectors_[a], vectors_[b]) / (norms_[a] * norms_[b]));
}

TermDocumentMatrix build_matrix(const Corpus& corpus, const PipelineConfig& config) {
    config.validate();
    if (corpus.empty()) throw InvalidArgument("cannot build a term matrix for an empty corpus");

    std::vector<std::map<std::string, std::size_t>> counts(corpus.size());
    std::map<std::string, std::size_t> df;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        for (auto& t : preprocess(corpus[d], config)) ++counts[d][std::move(t)];
        for (const auto& [t, c] : counts[d]) ++df[t];
    }

    std::vector<std::string> vocabulary;
    std::map<std::string, std::uint32_t> term_index;
    for (const auto& [t, f] : df) {
        if (f < config.min_document_frequency) continue;
        term_index.emplace(t, static_cast<std::uint32_t>(vocabulary.size()));
        vocabulary.push_back(t);
    }
    if (vocabulary.empty()) {
        throw InvalidArgument(
            "vocabulary is empty after filtering; lower min_document_frequency or min_term_length, or use a "
            "smaller stopword list");
    }

    const double n = static_cast<double>(corpus.size());
    std::vector<SparseVector> vectors(corpus.size());
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        auto& v = vectors[d];
        v.dimension = vocabulary.size();
        for (const auto& [t, tf] : counts[d]) {
            auto it = term_index.find(t);
            if (it == term_index.end()) continue;
            double w = static_cast<double>(tf);
            if (config.weighting == Weighting::tfidf) w *= std::log(n / static_cast<double>(df.at(t)));
            if (w > 0.0) v.entries.emplace_back(it->second, w);
        }
    }
    return TermDocumentMatrix(corpus.ids(), std::move(vocabulary), std::move(vectors));
}

double cosine_similarity(const SparseVector& a, const SparseVector& b) {
    if (a.dimension != b.dimension)
        throw InvalidArgument("cosine_similarity: dimension mismatch (" + std::to_string(a.dimension) + " vs " +
                              std::to_string(b.dimension) + ")");
    const double na = norm_of(a);
    const double nb = norm_of(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return clamp_unit(sparse_dot(a, b) / (na * nb));
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw InvalidArgument("cosine_similarity: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    double dot = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0) return 0.0;
    return clamp_unit(dot / (std::sqrt(aa) * std::sqrt(bb)));
}

std::vector<Neighbor> knn(const TermDocumentMatrix& matrix, std::string_view doc, std::size_t k) {
    return knn(matrix, matrix.doc_index(doc), k);
}

std::vector<Neighbor> knn(const TermDocumentMatrix& matrix, std::size_t doc, std::size_t k) {
    const std::size_t n = matrix.documents();
    if (doc >= n) throw UnknownId("document index out of range", {std::to_string(doc)});
    if (k < 1 || k >= n)
        throw InvalidArgument("knn: k must satisfy 1 <= k < " + std::to_string(n) + " (got " + std::to_string(k) + ")");

    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
        if (j != doc) scored.emplace_back(matrix.similarity(doc, j), j);
    auto order = [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; };
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(), order);

    std::vector<Neighbor> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        out.push_back({scored[i].second, matrix.study_ids()[scored[i].second], scored[i].first});
    return out;
}

ExpressionHeat expression_frequency(const Corpus& corpus, std::string_view expression) {
    const auto query = tokenize(expression);
    if (query.empty()) throw InvalidArgument("expression is empty");

    ExpressionHeat heat;
    for (std::size_t i = 0; i < query.size(); ++i) heat.expression += (i ? " " : "") + query[i];
    heat.counts.reserve(corpus.size());
    for (const auto& study : corpus.studies()) {
        const auto tokens = tokenize(study_text(study));
        std::size_t count = 0;
        if (tokens.size() >= query.size()) {
            for (std::size_t i = 0; i + query.size() <= tokens.size(); ++i)
                if (std::equal(query.begin(), query.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) ++count;
        }
        heat.counts.push_back(count);
    }
    const std::size_t max_count = heat.counts.empty() ? 0 : *std::max_element(heat.counts.begin(), heat.counts.end());
    heat.shade.reserve(heat.counts.size());
    for (std::size_t c : heat.counts)
        heat.shade.push_back(max_count > 0 ? static_cast<double>(c) / static_cast<double>(max_count) : 0.0);
    return heat;
}

}  // namespace studymap
