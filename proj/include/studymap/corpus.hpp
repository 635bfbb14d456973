#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "studymap/error.hpp"

namespace studymap {

/// One candidate primary study read from a bibtex entry.
struct StudyRecord {
    std::string id;  // citation key
    std::string entry_type;
    std::string title;
    std::string abstract;
    std::vector<std::string> keywords;
    std::vector<std::string> references;
    std::map<std::string, std::string> raw_fields;  // every other field, lowercase names

    bool operator==(const StudyRecord&) const = default;
};

struct Provenance {
    std::vector<std::filesystem::path> sources;
    std::optional<std::chrono::system_clock::time_point> loaded_at;
};

/// Ordered, id-unique collection of studies. Order follows the input.
class Corpus {
public:
    Corpus() = default;
    /// Throws DuplicateKeyError / InvalidArgument when the invariants do not hold.
    explicit Corpus(std::vector<StudyRecord> studies, Provenance provenance = {});

    const std::vector<StudyRecord>& studies() const noexcept { return studies_; }
    const Provenance& provenance() const noexcept { return provenance_; }
    std::size_t size() const noexcept { return studies_.size(); }
    bool empty() const noexcept { return studies_.empty(); }
    const StudyRecord& operator[](std::size_t i) const { return studies_[i]; }

    std::optional<std::size_t> index_of(std::string_view id) const;
    /// Like index_of but throws UnknownId.
    std::size_t require_index(std::string_view id) const;
    std::vector<std::string> ids() const;

    /// Stable FNV-1a digest over the serialized studies (provenance excluded).
    std::uint64_t content_hash() const;
    std::string content_hash_hex() const;

    /// Field-for-field comparison of the studies; provenance is ignored.
    bool same_studies(const Corpus& other) const { return studies_ == other.studies_; }

private:
    std::vector<StudyRecord> studies_;
    Provenance provenance_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

struct IngestOptions {
    /// Separator between reference strings inside the `references` field.
    /// Empty selects the default: a semicolon or a blank line.
    std::string reference_delimiter;
};

struct ParseResult {
    Corpus corpus;
    Diagnostics warnings;
};

/// Parses `@type{key, field = {value} | "value" | bare, ...}` entries.
/// @comment, @preamble and @string blocks are skipped. Throws ParseError on
/// malformed entries and DuplicateKeyError on repeated citation keys.
ParseResult parse_bibtex(std::string_view text, const IngestOptions& options = {});

/// Reads and concatenates the given files, then parses them.
ParseResult load_bibtex_files(std::span<const std::filesystem::path> paths,
                              const IngestOptions& options = {});

/// Writes the corpus back as bibtex. parse_bibtex(serialize_bibtex(c)) yields
/// the same studies for any corpus produced by parse_bibtex.
std::string serialize_bibtex(const Corpus& corpus, const IngestOptions& options = {});

/// Lowercases and collapses every non-alphanumeric run into a single space.
/// Bytes >= 0x80 count as alphanumeric so UTF-8 words survive intact.
std::string normalize_reference(std::string_view raw);

/// Distinct whitespace-separated tokens of an already normalized string.
std::vector<std::string> token_set(std::string_view normalized);

/// |a ∩ b| / |a ∪ b| over sorted, deduplicated token lists. 1.0 when both are empty.
double jaccard(std::span<const std::string> a, std::span<const std::string> b);

struct ReferenceOccurrence {
    std::string study_id;
    std::size_t index = 0;  // position in the study's reference list

    bool operator==(const ReferenceOccurrence&) const = default;
    auto operator<=>(const ReferenceOccurrence&) const = default;
};

struct CanonicalReference {
    std::string ref_id;
    std::string normalized_text;  // normalized form of the first occurrence
    std::vector<ReferenceOccurrence> aliases;
    std::optional<std::string> matched_study;
};

struct CanonicalizeOptions {
    double jaccard_threshold = 0.8;
};

/// Groups raw references that denote the same work: equal normalized text or
/// token-set Jaccard >= threshold, closed transitively with a union-find.
/// Groups are ordered by first occurrence (study order, then list order).
std::vector<CanonicalReference> canonicalize_references(const Corpus& corpus,
                                                        const CanonicalizeOptions& options = {});

struct CitationLinks {
    struct Edge {
        std::string citing;
        std::string cited;

        bool operator==(const Edge&) const = default;
        auto operator<=>(const Edge&) const = default;
    };

    std::vector<Edge> edges;              // sorted by (citing index, cited index)
    std::vector<std::size_t> cited_counts;  // aligned with corpus order

    std::size_t cited_count(const Corpus& corpus, std::string_view id) const;
};

struct ResolveOptions {
    double title_jaccard_threshold = 0.8;
};

struct ResolvedCitations {
    CitationLinks links;
    std::vector<CanonicalReference> references;  // input with matched_study filled in
    Diagnostics warnings;
};

/// Matches canonical references against study titles and emits citing -> cited
/// edges. A reference matching two or more studies is reported and left unmatched.
ResolvedCitations resolve_citations(const Corpus& corpus, std::span<const CanonicalReference> refs,
                                    const ResolveOptions& options = {});

}  // namespace studymap
