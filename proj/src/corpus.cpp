#include "studymap/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "studymap/hash.hpp"

namespace studymap {

std::string Diagnostic::to_string() const {
    std::ostringstream out;
    out << "entry=" << (entry_id.empty() ? "-" : entry_id) << " offset=" << offset << ": " << message;
    return out.str();
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::vector<StudyRecord> studies, Provenance provenance)
    : studies_(std::move(studies)), provenance_(std::move(provenance)) {
    for (std::size_t i = 0; i < studies_.size(); ++i) {
        const auto& s = studies_[i];
        if (s.id.empty()) throw InvalidArgument("study #" + std::to_string(i) + " has an empty id");
        if (s.title.empty())
            throw InvalidArgument("study '" + s.id + "' has an empty title");
        auto [it, inserted] = index_.emplace(s.id, i);
        if (!inserted) {
            throw DuplicateKeyError("duplicate citation key '" + s.id + "' in entries " +
                                        std::to_string(it->second) + " and " + std::to_string(i),
                                    0, it->second, i);
        }
    }
}

std::optional<std::size_t> Corpus::index_of(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Corpus::require_index(std::string_view id) const {
    if (auto i = index_of(id)) return *i;
    throw UnknownId("unknown study id '" + std::string(id) + "'", {std::string(id)});
}

std::vector<std::string> Corpus::ids() const {
    std::vector<std::string> out;
    out.reserve(studies_.size());
    for (const auto& s : studies_) out.push_back(s.id);
    return out;
}

std::uint64_t Corpus::content_hash() const { return fnv1a64(serialize_bibtex(*this)); }

std::string Corpus::content_hash_hex() const { return to_hex(content_hash()); }

std::size_t CitationLinks::cited_count(const Corpus& corpus, std::string_view id) const {
    return cited_counts.at(corpus.require_index(id));
}

// ---------------------------------------------------------------------------
// bibtex parsing

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' || c == '.' ||
           c == '+' || c == '/';
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Drops brace delimiters and collapses whitespace. Idempotent.
std::string clean_text(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (c == '{' || c == '}') continue;
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

std::vector<std::string> split_cleaned(std::string_view raw, auto&& is_boundary) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= raw.size();) {
        std::size_t skip = i < raw.size() ? is_boundary(raw, i) : 1;
        if (i == raw.size() || skip > 0) {
            auto piece = clean_text(raw.substr(start, i - start));
            if (!piece.empty()) out.push_back(std::move(piece));
            i += skip;
            start = i;
        } else {
            ++i;
        }
    }
    return out;
}

std::vector<std::string> split_keywords(std::string_view raw) {
    return split_cleaned(raw, [](std::string_view s, std::size_t i) -> std::size_t {
        return (s[i] == ',' || s[i] == ';') ? 1 : 0;
    });
}

std::vector<std::string> split_references(std::string_view raw, const IngestOptions& options) {
    if (!options.reference_delimiter.empty()) {
        const std::string& d = options.reference_delimiter;
        return split_cleaned(raw, [&d](std::string_view s, std::size_t i) -> std::size_t {
            return s.substr(i, d.size()) == d ? d.size() : 0;
        });
    }
    // semicolon, or a newline followed by a whitespace-only line
    return split_cleaned(raw, [](std::string_view s, std::size_t i) -> std::size_t {
        if (s[i] == ';') return 1;
        if (s[i] != '\n') return 0;
        std::size_t j = i + 1;
        while (j < s.size() && (s[j] == ' ' || s[j] == '\t' || s[j] == '\r')) ++j;
        return (j < s.size() && s[j] == '\n') ? j + 1 - i : 0;
    });
}

class BibtexParser {
public:
    BibtexParser(std::string_view text, const IngestOptions& options) : text_(text), options_(options) {}

    ParseResult run() {
        std::vector<StudyRecord> studies;
        std::map<std::string, std::size_t, std::less<>> seen;
        Diagnostics warnings;

        while (true) {
            std::size_t at = text_.find('@', pos_);
            if (at == std::string_view::npos) break;
            pos_ = at + 1;
            std::size_t type_start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            std::string type = to_lower(text_.substr(type_start, pos_ - type_start));
            skip_space();
            if (type.empty() || pos_ >= text_.size() || (text_[pos_] != '{' && text_[pos_] != '(')) {
                // stray '@' in free text between entries
                continue;
            }
            const char close = text_[pos_] == '{' ? '}' : ')';
            if (type == "comment" || type == "preamble" || type == "string") {
                skip_block(at, close);
                continue;
            }
            ++pos_;
            entry_start_ = at;
            StudyRecord record = parse_entry(type, close, warnings);
            if (auto it = seen.find(record.id); it != seen.end()) {
                throw DuplicateKeyError("duplicate citation key '" + record.id + "' in entries " +
                                            std::to_string(it->second) + " and " + std::to_string(entry_index_),
                                        at, it->second, entry_index_);
            }
            seen.emplace(record.id, entry_index_);
            studies.push_back(std::move(record));
            ++entry_index_;
        }
        return {Corpus(std::move(studies)), std::move(warnings)};
    }

private:
    [[noreturn]] void fail(const std::string& what, std::size_t offset) const {
        throw ParseError("entry " + std::to_string(entry_index_) + " at byte " + std::to_string(offset) + ": " +
                             what,
                         offset, entry_index_);
    }

    void skip_space() {
        while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    }

    bool at_end() const { return pos_ >= text_.size(); }

    void skip_block(std::size_t at, char close) {
        const char open = text_[pos_];
        int depth = 0;
        for (; pos_ < text_.size(); ++pos_) {
            char c = text_[pos_];
            if (c == open) ++depth;
            else if (c == close) {
                if (--depth == 0) {
                    ++pos_;
                    return;
                }
            }
        }
        fail("unbalanced delimiters in @-block", at);
    }

    // Reads a braced value starting at '{'; returns its inner text.
    std::string read_braced() {
        const std::size_t start = pos_;
        int depth = 0;
        for (; pos_ < text_.size(); ++pos_) {
            char c = text_[pos_];
            if (c == '{') ++depth;
            else if (c == '}' && --depth == 0) {
                ++pos_;
                return std::string(text_.substr(start + 1, pos_ - start - 2));
            }
        }
        fail("unbalanced braces in field value", start);
    }

    std::string read_quoted() {
        const std::size_t start = pos_++;
        int depth = 0;
        for (; pos_ < text_.size(); ++pos_) {
            char c = text_[pos_];
            if (c == '{') ++depth;
            else if (c == '}') {
                if (--depth < 0) fail("unbalanced braces in quoted value", pos_);
            } else if (c == '"' && depth == 0) {
                ++pos_;
                return std::string(text_.substr(start + 1, pos_ - start - 2));
            }
        }
        fail("unterminated quoted value", start);
    }

    std::string read_value(char close) {
        std::string value;
        while (true) {
            skip_space();
            if (at_end()) fail("unexpected end of input in field value", entry_start_);
            const char c = text_[pos_];
            if (c == '{') {
                value += read_braced();
            } else if (c == '"') {
                value += read_quoted();
            } else {
                const std::size_t start = pos_;
                while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != ',' &&
                       text_[pos_] != '#' && text_[pos_] != close && text_[pos_] != '}')
                    ++pos_;
                if (pos_ == start) fail("expected a field value", start);
                value += text_.substr(start, pos_ - start);
            }
            skip_space();
            if (!at_end() && text_[pos_] == '#') {
                ++pos_;
                continue;
            }
            return value;
        }
    }

    StudyRecord parse_entry(const std::string& type, char close, Diagnostics& warnings) {
        StudyRecord record;
        record.entry_type = type;

        skip_space();
        const std::size_t key_start = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != ',' && text_[pos_] != close &&
               text_[pos_] != '=' && text_[pos_] != '{' && text_[pos_] != '}')
            ++pos_;
        record.id = std::string(text_.substr(key_start, pos_ - key_start));
        skip_space();
        if (at_end()) fail("unexpected end of input after citation key", entry_start_);
        if (record.id.empty() || text_[pos_] == '=') fail("missing citation key", key_start);

        std::set<std::string> fields_seen;
        bool has_title = false, has_abstract = false, has_keywords = false, has_references = false;

        if (text_[pos_] == close) {
            ++pos_;
        } else if (text_[pos_] != ',') {
            fail("expected ',' after citation key", pos_);
        } else {
            ++pos_;
            while (true) {
                skip_space();
                if (at_end()) fail("unbalanced delimiters: entry is not closed", entry_start_);
                if (text_[pos_] == close) {
                    ++pos_;
                    break;
                }
                const std::size_t name_start = pos_;
                while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
                if (pos_ == name_start) fail("expected a field name", name_start);
                std::string name = to_lower(text_.substr(name_start, pos_ - name_start));
                skip_space();
                if (at_end() || text_[pos_] != '=') fail("expected '=' after field '" + name + "'", pos_);
                ++pos_;
                std::string value = read_value(close);

                if (name == "keyword") name = "keywords";
                if (!fields_seen.insert(name).second) {
                    warnings.push_back({record.id, name_start, "duplicate field '" + name + "' ignored"});
                } else if (name == "title") {
                    record.title = clean_text(value);
                    has_title = true;
                } else if (name == "abstract") {
                    record.abstract = clean_text(value);
                    has_abstract = true;
                } else if (name == "keywords") {
                    record.keywords = split_keywords(value);
                    has_keywords = true;
                } else if (name == "references") {
                    record.references = split_references(value, options_);
                    has_references = true;
                } else {
                    record.raw_fields.emplace(std::move(name), std::move(value));
                }

                skip_space();
                if (at_end()) fail("unbalanced delimiters: entry is not closed", entry_start_);
                if (text_[pos_] == ',') {
                    ++pos_;
                } else if (text_[pos_] != close) {
                    fail("expected ',' or end of entry", pos_);
                }
            }
        }

        if (!has_title || record.title.empty()) fail("entry '" + record.id + "' has no title", entry_start_);
        auto note = [&](bool present, bool empty, const char* field) {
            if (!present) warnings.push_back({record.id, entry_start_, std::string("missing field '") + field + "'"});
            else if (empty) warnings.push_back({record.id, entry_start_, std::string("empty field '") + field + "'"});
        };
        note(has_abstract, record.abstract.empty(), "abstract");
        note(has_keywords, record.keywords.empty(), "keywords");
        note(has_references, record.references.empty(), "references");
        return record;
    }

    std::string_view text_;
    const IngestOptions& options_;
    std::size_t pos_ = 0;
    std::size_t entry_index_ = 0;
    std::size_t entry_start_ = 0;
};

}  // namespace

ParseResult parse_bibtex(std::string_view text, const IngestOptions& options) {
    return BibtexParser(text, options).run();
}

ParseResult load_bibtex_files(std::span<const std::filesystem::path> paths, const IngestOptions& options) {
    std::vector<StudyRecord> studies;
    Diagnostics warnings;
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw InvalidArgument("cannot read '" + path.string() + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        ParseResult part = [&] {
            try {
                return parse_bibtex(buf.str(), options);
            } catch (const DuplicateKeyError& e) {
                throw DuplicateKeyError(path.string() + ": " + e.what(), e.offset(), e.first_entry(),
                                        e.entry_index());
            } catch (const ParseError& e) {
                throw ParseError(path.string() + ": " + e.what(), e.offset(), e.entry_index());
            }
        }();
        for (const auto& s : part.corpus.studies()) studies.push_back(s);
        for (auto& w : part.warnings) warnings.push_back(std::move(w));
    }
    Provenance provenance{{paths.begin(), paths.end()}, std::chrono::system_clock::now()};
    return {Corpus(std::move(studies), std::move(provenance)), std::move(warnings)};
}

std::string serialize_bibtex(const Corpus& corpus, const IngestOptions& options) {
    const std::string delimiter = options.reference_delimiter.empty() ? "; " : options.reference_delimiter;
    auto join = [](const std::vector<std::string>& parts, std::string_view sep) {
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out += sep;
            out += parts[i];
        }
        return out;
    };
    std::string out;
    for (const auto& s : corpus.studies()) {
        out += '@';
        out += s.entry_type.empty() ? "article" : s.entry_type;
        out += '{' + s.id + ",\n";
        out += "  title = {" + s.title + "}";
        if (!s.abstract.empty()) out += ",\n  abstract = {" + s.abstract + "}";
        if (!s.keywords.empty()) out += ",\n  keywords = {" + join(s.keywords, "; ") + "}";
        if (!s.references.empty()) out += ",\n  references = {" + join(s.references, delimiter) + "}";
        for (const auto& [name, value] : s.raw_fields) out += ",\n  " + name + " = {" + value + "}";
        out += "\n}\n\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// reference normalization and canonicalization

std::string normalize_reference(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char ch : raw) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c >= 0x80) {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(std::tolower(c)));
        } else {
            pending_space = !out.empty();
        }
    }
    return out;
}

std::vector<std::string> token_set(std::string_view normalized) {
    std::vector<std::string> tokens;
    std::size_t start = 0;
    while (start < normalized.size()) {
        std::size_t end = normalized.find(' ', start);
        if (end == std::string_view::npos) end = normalized.size();
        if (end > start) tokens.emplace_back(normalized.substr(start, end - start));
        start = end + 1;
    }
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

double jaccard(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t common = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else {
            ++common;
            ++ia;
            ++ib;
        }
    }
    return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // the smaller root wins so group representatives follow first occurrence
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<CanonicalReference> canonicalize_references(const Corpus& corpus, const CanonicalizeOptions& options) {
    if (!(options.jaccard_threshold > 0.0 && options.jaccard_threshold <= 1.0))
        throw InvalidArgument("jaccard_threshold must lie in (0, 1]");

    // distinct normalized texts, in first-occurrence order
    std::vector<std::string> texts;
    std::map<std::string, std::size_t, std::less<>> text_index;
    std::vector<std::pair<ReferenceOccurrence, std::size_t>> occurrences;
    for (const auto& study : corpus.studies()) {
        for (std::size_t j = 0; j < study.references.size(); ++j) {
            std::string norm = normalize_reference(study.references[j]);
            auto [it, inserted] = text_index.emplace(norm, texts.size());
            if (inserted) texts.push_back(std::move(norm));
            occurrences.push_back({{study.id, j}, it->second});
        }
    }

    std::vector<std::vector<std::string>> tokens(texts.size());
    std::map<std::string, std::vector<std::size_t>, std::less<>> postings;
    for (std::size_t t = 0; t < texts.size(); ++t) {
        tokens[t] = token_set(texts[t]);
        for (const auto& tok : tokens[t]) postings[tok].push_back(t);
    }

    UnionFind groups(texts.size());
    std::vector<std::size_t> checked_for(texts.size(), texts.size());
    for (std::size_t a = 0; a < texts.size(); ++a) {
        for (const auto& tok : tokens[a]) {
            for (std::size_t b : postings[tok]) {
                if (b <= a || checked_for[b] == a) continue;
                checked_for[b] = a;
                const double small = static_cast<double>(std::min(tokens[a].size(), tokens[b].size()));
                const double large = static_cast<double>(std::max(tokens[a].size(), tokens[b].size()));
                if (small / large < options.jaccard_threshold) continue;
                if (jaccard(tokens[a], tokens[b]) >= options.jaccard_threshold) groups.unite(a, b);
            }
        }
    }

    std::vector<CanonicalReference> out;
    std::map<std::size_t, std::size_t> root_to_group;
    for (auto& [occ, text] : occurrences) {
        const std::size_t root = groups.find(text);
        auto [it, inserted] = root_to_group.emplace(root, out.size());
        if (inserted) {
            CanonicalReference ref;
            ref.ref_id = "ref#" + std::to_string(out.size() + 1);
            ref.normalized_text = texts[text];
            out.push_back(std::move(ref));
        }
        out[it->second].aliases.push_back(std::move(occ));
    }
    return out;
}

// ---------------------------------------------------------------------------
// citation resolution

ResolvedCitations resolve_citations(const Corpus& corpus, std::span<const CanonicalReference> refs,
                                    const ResolveOptions& options) {
    ResolvedCitations result;
    result.references.assign(refs.begin(), refs.end());
    result.links.cited_counts.assign(corpus.size(), 0);

    struct TitleKey {
        std::string padded;
        std::vector<std::string> tokens;
    };
    std::vector<TitleKey> titles;
    titles.reserve(corpus.size());
    for (const auto& s : corpus.studies()) {
        std::string norm = normalize_reference(s.title);
        titles.push_back({" " + norm + " ", token_set(norm)});
    }

    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (auto& ref : result.references) {
        ref.matched_study.reset();
        const std::string padded = " " + ref.normalized_text + " ";
        const auto ref_tokens = token_set(ref.normalized_text);

        std::vector<std::size_t> by_substring, by_jaccard;
        for (std::size_t s = 0; s < titles.size(); ++s) {
            if (titles[s].tokens.empty()) continue;
            if (padded.find(titles[s].padded) != std::string::npos) by_substring.push_back(s);
            else if (jaccard(titles[s].tokens, ref_tokens) >= options.title_jaccard_threshold)
                by_jaccard.push_back(s);
        }
        // a title contained in a longer matching title is not a separate match
        std::vector<std::size_t> matches;
        for (std::size_t s : by_substring) {
            bool dominated = std::any_of(by_substring.begin(), by_substring.end(), [&](std::size_t o) {
                return o != s && titles[o].padded.size() > titles[s].padded.size() &&
                       titles[o].padded.find(titles[s].padded) != std::string::npos;
            });
            if (!dominated) matches.push_back(s);
        }
        matches.insert(matches.end(), by_jaccard.begin(), by_jaccard.end());

        if (matches.empty()) continue;
        if (matches.size() > 1) {
            std::string names;
            for (std::size_t s : matches) names += (names.empty() ? "" : ", ") + corpus[s].id;
            result.warnings.push_back({ref.aliases.empty() ? std::string() : ref.aliases.front().study_id, 0,
                                       "reference " + ref.ref_id + " matches several studies (" + names +
                                           "); citation omitted"});
            continue;
        }
        const std::size_t cited = matches.front();
        ref.matched_study = corpus[cited].id;
        for (const auto& alias : ref.aliases) {
            const std::size_t citing = corpus.require_index(alias.study_id);
            if (citing != cited) edges.emplace(citing, cited);
        }
    }

    for (auto [citing, cited] : edges) {
        result.links.edges.push_back({corpus[citing].id, corpus[cited].id});
        ++result.links.cited_counts[cited];
    }
    return result;
}

}  // namespace studymap
