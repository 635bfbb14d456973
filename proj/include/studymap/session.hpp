#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "studymap/corpus.hpp"

namespace studymap {

using Timestamp = std::chrono::sys_seconds;

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_timestamp(Timestamp t);
/// Accepts the format above, with or without the trailing 'Z'. Throws InvalidArgument.
Timestamp parse_timestamp(std::string_view text);

enum class Status { undecided, included, excluded };

std::string_view to_string(Status s);
/// "undecided" | "included" | "excluded". Throws InvalidArgument.
Status parse_status(std::string_view text);

struct Decision {
    Status status = Status::undecided;
    std::optional<Timestamp> at;  // present iff status != undecided
    std::string by;

    bool operator==(const Decision&) const = default;
};

struct LogEvent {
    Timestamp at;
    std::string study;
    Status from = Status::undecided;
    Status to = Status::undecided;
    std::string reviewer;

    bool operator==(const LogEvent&) const = default;
};

/// Payload broadcast to every attached view after a selection change.
struct SelectionEvent {
    std::vector<std::string> ids;  // corpus order
};

class ReviewSession {
public:
    ReviewSession(std::vector<std::string> ids, std::vector<std::string> titles, std::string corpus_hash,
                  Timestamp started_at);
    static ReviewSession for_corpus(const Corpus& corpus, Timestamp started_at);

    /// Last write wins; every call is logged, including re-setting the same
    /// status. Throws UnknownId, or TimeRegression when `at` precedes the last
    /// logged event or the session start.
    void set_decision(std::string_view study, Status status, std::string_view reviewer, Timestamp at);

    /// Replaces the selection. Throws UnknownId listing every unknown id.
    SelectionEvent select(std::span<const std::string> ids);

    /// Rebuilds a session from its log, starting from all-undecided.
    static ReviewSession replay(std::vector<std::string> ids, std::vector<std::string> titles,
                                std::string corpus_hash, Timestamp started_at, std::span<const LogEvent> log);

    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::vector<std::string>& titles() const noexcept { return titles_; }
    const std::string& corpus_hash() const noexcept { return corpus_hash_; }
    Timestamp started_at() const noexcept { return started_at_; }
    const std::vector<Decision>& decisions() const noexcept { return decisions_; }
    const Decision& decision(std::string_view study) const;
    const std::vector<std::string>& selection() const noexcept { return selection_; }
    const std::vector<LogEvent>& log() const noexcept { return log_; }
    std::size_t size() const noexcept { return ids_.size(); }
    std::optional<std::size_t> index_of(std::string_view id) const;

private:
    std::vector<std::string> ids_;
    std::vector<std::string> titles_;
    std::string corpus_hash_;
    Timestamp started_at_;
    std::vector<Decision> decisions_;
    std::vector<std::string> selection_;
    std::vector<LogEvent> log_;
};

/// Expert include set; everything else in the corpus is excluded.
struct GoldStandard {
    std::set<std::string> included;
    std::set<std::string> excluded;

    /// Throws UnknownId when an included id is not in `corpus_ids`.
    static GoldStandard from_included(std::span<const std::string> corpus_ids, std::span<const std::string> included);
};

/// One study id per line; blank lines and '#' comments are skipped.
std::vector<std::string> parse_gold_file(std::string_view text);

struct SessionMetrics {
    std::size_t correct = 0;
    std::size_t incorrect = 0;
    std::size_t false_negatives = 0;  // gold-included, marked excluded
    std::size_t false_positives = 0;  // gold-excluded, marked included
    std::size_t undecided = 0;
    double elapsed_minutes = 0.0;  // session start to last logged decision

    bool operator==(const SessionMetrics&) const = default;
};

/// Throws InvalidArgument when the gold standard does not partition the session's studies.
SessionMetrics compute_metrics(const ReviewSession& session, const GoldStandard& gold);

std::string metrics_to_json(const SessionMetrics& m);
std::string metrics_to_csv(const SessionMetrics& m);

// --- decision table (CSV, RFC 4180) ---------------------------------------

struct DecisionRow {
    std::string study_id;
    std::string title;
    std::string status;
    std::string decided_at;
    std::string reviewer;

    bool operator==(const DecisionRow&) const = default;
};

inline constexpr std::string_view kDecisionTableHeader = "study_id,title,status,decided_at,reviewer";

std::vector<DecisionRow> decision_rows(const ReviewSession& session);
std::string format_decision_table(std::span<const DecisionRow> rows);
/// Throws InvalidArgument on a wrong header or malformed quoting.
std::vector<DecisionRow> parse_decision_table(std::string_view csv);
std::string export_decision_table(const ReviewSession& session);

// --- JSON-lines persistence -------------------------------------------------

/// Header line: corpus hash, start time, study ids and titles.
std::string session_header_line(const ReviewSession& session);
std::string log_event_line(const LogEvent& event);
/// Header followed by every log event, one JSON object per line.
std::string write_session_log(const ReviewSession& session);
/// Parses and replays a log. Throws InvalidArgument when an event's `from`
/// status disagrees with the replayed state.
ReviewSession read_session_log(std::string_view text);

/// Serializes writers and hands out immutable snapshots to readers.
class SessionStore {
public:
    using EventSink = std::function<void(const LogEvent&)>;

    explicit SessionStore(ReviewSession initial, EventSink sink = {});

    std::shared_ptr<const ReviewSession> snapshot() const;
    std::shared_ptr<const ReviewSession> set_decision(std::string_view study, Status status,
                                                      std::string_view reviewer, Timestamp at);
    SelectionEvent select(std::span<const std::string> ids);

private:
    mutable std::mutex read_mutex_;
    std::mutex write_mutex_;
    std::shared_ptr<const ReviewSession> current_;
    EventSink sink_;
};

}  // namespace studymap
