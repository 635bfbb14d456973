#include "studymap/session.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

namespace studymap {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// timestamps

namespace {

// days since 1970-01-01 for a proleptic Gregorian date
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2);
}

}  // namespace

std::string format_timestamp(Timestamp t) {
    const std::int64_t secs = t.time_since_epoch().count();
    std::int64_t days = secs / 86400;
    std::int64_t rem = secs % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<long long>(y), m, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

Timestamp parse_timestamp(std::string_view text) {
    auto bad = [&] { return InvalidArgument("invalid timestamp '" + std::string(text) + "' (want YYYY-MM-DDTHH:MM:SSZ)"); };
    if (!text.empty() && text.back() == 'Z') text.remove_suffix(1);
    if (text.size() != 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
        text[13] != ':' || text[16] != ':')
        throw bad();
    auto num = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (text[i] < '0' || text[i] > '9') throw bad();
            v = v * 10 + (text[i] - '0');
        }
        return v;
    };
    const int y = num(0, 4), mo = num(5, 2), d = num(8, 2), h = num(11, 2), mi = num(14, 2), s = num(17, 2);
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60) throw bad();
    const std::int64_t days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
    return Timestamp(std::chrono::seconds(days * 86400 + h * 3600 + mi * 60 + s));
}

std::string_view to_string(Status s) {
    switch (s) {
        case Status::included: return "included";
        case Status::excluded: return "excluded";
        case Status::undecided: break;
    }
    return "undecided";
}

Status parse_status(std::string_view text) {
    if (text == "included") return Status::included;
    if (text == "excluded") return Status::excluded;
    if (text == "undecided") return Status::undecided;
    throw InvalidArgument("unknown status '" + std::string(text) + "' (want included, excluded or undecided)");
}

// ---------------------------------------------------------------------------
// session

ReviewSession::ReviewSession(std::vector<std::string> ids, std::vector<std::string> titles, std::string corpus_hash,
                             Timestamp started_at)
    : ids_(std::move(ids)), titles_(std::move(titles)), corpus_hash_(std::move(corpus_hash)), started_at_(started_at) {
    if (titles_.size() != ids_.size()) throw InvalidArgument("one title per study is required");
    decisions_.assign(ids_.size(), Decision{});
}

ReviewSession ReviewSession::for_corpus(const Corpus& corpus, Timestamp started_at) {
    std::vector<std::string> titles;
    for (const auto& s : corpus.studies()) titles.push_back(s.title);
    return ReviewSession(corpus.ids(), std::move(titles), corpus.content_hash_hex(), started_at);
}

std::optional<std::size_t> ReviewSession::index_of(std::string_view id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - ids_.begin());
}

const Decision& ReviewSession::decision(std::string_view study) const {
    auto i = index_of(study);
    if (!i) throw UnknownId("unknown study id '" + std::string(study) + "'", {std::string(study)});
    return decisions_[*i];
}

void ReviewSession::set_decision(std::string_view study, Status status, std::string_view reviewer, Timestamp at) {
    auto i = index_of(study);
    if (!i) throw UnknownId("unknown study id '" + std::string(study) + "'", {std::string(study)});
    const Timestamp floor = log_.empty() ? started_at_ : log_.back().at;
    if (at < floor) {
        throw TimeRegression("decision time " + format_timestamp(at) + " precedes " +
                             (log_.empty() ? "the session start " : "the last decision at ") + format_timestamp(floor));
    }
    Decision& d = decisions_[*i];
    log_.push_back({at, std::string(study), d.status, status, std::string(reviewer)});
    d.status = status;
    if (status == Status::undecided) {
        d.at.reset();
        d.by.clear();
    } else {
        d.at = at;
        d.by = reviewer;
    }
}

SelectionEvent ReviewSession::select(std::span<const std::string> ids) {
    std::vector<bool> chosen(ids_.size(), false);
    std::vector<std::string> unknown;
    for (const auto& id : ids) {
        if (auto i = index_of(id)) chosen[*i] = true;
        else unknown.push_back(id);
    }
    if (!unknown.empty()) {
        std::string list;
        for (const auto& u : unknown) list += (list.empty() ? "" : ", ") + u;
        throw UnknownId("unknown study ids in selection: " + list, unknown);
    }
    selection_.clear();
    for (std::size_t i = 0; i < ids_.size(); ++i)
        if (chosen[i]) selection_.push_back(ids_[i]);
    return {selection_};
}

ReviewSession ReviewSession::replay(std::vector<std::string> ids, std::vector<std::string> titles,
                                    std::string corpus_hash, Timestamp started_at, std::span<const LogEvent> log) {
    ReviewSession session(std::move(ids), std::move(titles), std::move(corpus_hash), started_at);
    for (const auto& e : log) {
        const auto& current = session.decision(e.study);
        if (current.status != e.from) {
            throw InvalidArgument("log event for '" + e.study + "' at " + format_timestamp(e.at) + " expects status " +
                                  std::string(to_string(e.from)) + " but replay has " +
                                  std::string(to_string(current.status)));
        }
        session.set_decision(e.study, e.to, e.reviewer, e.at);
    }
    return session;
}

// ---------------------------------------------------------------------------
// gold standard and metrics

GoldStandard GoldStandard::from_included(std::span<const std::string> corpus_ids, std::span<const std::string> included) {
    GoldStandard gold;
    std::set<std::string> universe(corpus_ids.begin(), corpus_ids.end());
    std::vector<std::string> unknown;
    for (const auto& id : included) {
        if (universe.contains(id)) gold.included.insert(id);
        else unknown.push_back(id);
    }
    if (!unknown.empty()) {
        std::string list;
        for (const auto& u : unknown) list += (list.empty() ? "" : ", ") + u;
        throw UnknownId("gold standard names studies outside the corpus: " + list, unknown);
    }
    for (const auto& id : universe)
        if (!gold.included.contains(id)) gold.excluded.insert(id);
    return gold;
}

std::vector<std::string> parse_gold_file(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto last = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(first, last - first + 1));
    }
    return out;
}

SessionMetrics compute_metrics(const ReviewSession& session, const GoldStandard& gold) {
    std::set<std::string> ids(session.ids().begin(), session.ids().end());
    std::set<std::string> covered;
    for (const auto& id : gold.included) covered.insert(id);
    for (const auto& id : gold.excluded) {
        if (gold.included.contains(id)) throw InvalidArgument("gold standard lists '" + id + "' as both included and excluded");
        covered.insert(id);
    }
    if (covered != ids) throw InvalidArgument("gold standard does not match the session's corpus");

    SessionMetrics m;
    for (std::size_t i = 0; i < session.size(); ++i) {
        const Status s = session.decisions()[i].status;
        if (s == Status::undecided) {
            ++m.undecided;
            continue;
        }
        const bool relevant = gold.included.contains(session.ids()[i]);
        if ((s == Status::included) == relevant) {
            ++m.correct;
        } else {
            ++m.incorrect;
            if (relevant) ++m.false_negatives;
            else ++m.false_positives;
        }
    }
    if (!session.log().empty()) {
        const auto secs = (session.log().back().at - session.started_at()).count();
        m.elapsed_minutes = static_cast<double>(secs) / 60.0;
    }
    return m;
}

std::string metrics_to_json(const SessionMetrics& m) {
    json j;
    j["correct"] = m.correct;
    j["incorrect"] = m.incorrect;
    j["false_negatives"] = m.false_negatives;
    j["false_positives"] = m.false_positives;
    j["undecided"] = m.undecided;
    j["elapsed_minutes"] = m.elapsed_minutes;
    return j.dump();
}

std::string metrics_to_csv(const SessionMetrics& m) {
    std::ostringstream out;
    out << "correct,incorrect,false_negatives,false_positives,undecided,elapsed_minutes\r\n"
        << m.correct << ',' << m.incorrect << ',' << m.false_negatives << ',' << m.false_positives << ','
        << m.undecided << ',' << m.elapsed_minutes << "\r\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// decision table

std::vector<DecisionRow> decision_rows(const ReviewSession& session) {
    std::vector<DecisionRow> rows;
    rows.reserve(session.size());
    for (std::size_t i = 0; i < session.size(); ++i) {
        const auto& d = session.decisions()[i];
        rows.push_back({session.ids()[i], session.titles()[i], std::string(to_string(d.status)),
                        d.at ? format_timestamp(*d.at) : std::string(), d.by});
    }
    return rows;
}

namespace {

void write_field(std::string& out, std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

}  // namespace

std::string format_decision_table(std::span<const DecisionRow> rows) {
    std::string out(kDecisionTableHeader);
    out += "\r\n";
    for (const auto& r : rows) {
        for (const std::string* f : {&r.study_id, &r.title, &r.status, &r.decided_at, &r.reviewer}) {
            if (f != &r.study_id) out += ',';
            write_field(out, *f);
        }
        out += "\r\n";
    }
    return out;
}

std::vector<DecisionRow> parse_decision_table(std::string_view csv) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, field_started = false;
    std::size_t i = 0;
    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };
    while (i < csv.size()) {
        const char c = csv[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < csv.size() && csv[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                if (i < csv.size() && csv[i] != ',' && csv[i] != '\r' && csv[i] != '\n')
                    throw InvalidArgument("malformed CSV: text after closing quote at byte " + std::to_string(i));
                continue;
            }
            field += c;
            ++i;
            continue;
        }
        if (c == '"' && !field_started && field.empty()) {
            quoted = true;
            field_started = true;
            ++i;
        } else if (c == ',') {
            end_field();
            ++i;
        } else if (c == '\r' || c == '\n') {
            end_record();
            i += (c == '\r' && i + 1 < csv.size() && csv[i + 1] == '\n') ? 2 : 1;
        } else {
            field += c;
            field_started = true;
            ++i;
        }
    }
    if (quoted) throw InvalidArgument("malformed CSV: unterminated quoted field");
    if (field_started || !record.empty()) end_record();

    if (records.empty()) throw InvalidArgument("decision table is empty (missing header)");
    std::string header;
    for (std::size_t f = 0; f < records[0].size(); ++f) header += (f ? "," : "") + records[0][f];
    if (header != kDecisionTableHeader) throw InvalidArgument("unexpected decision table header '" + header + "'");

    std::vector<DecisionRow> rows;
    for (std::size_t r = 1; r < records.size(); ++r) {
        auto& f = records[r];
        if (f.size() != 5)
            throw InvalidArgument("decision table row " + std::to_string(r) + " has " + std::to_string(f.size()) +
                                  " fields, want 5");
        rows.push_back({std::move(f[0]), std::move(f[1]), std::move(f[2]), std::move(f[3]), std::move(f[4])});
    }
    return rows;
}

std::string export_decision_table(const ReviewSession& session) {
    return format_decision_table(decision_rows(session));
}

// ---------------------------------------------------------------------------
// JSON-lines log

std::string session_header_line(const ReviewSession& session) {
    json j;
    j["type"] = "session";
    j["corpus_hash"] = session.corpus_hash();
    j["started_at"] = format_timestamp(session.started_at());
    json studies = json::array();
    for (std::size_t i = 0; i < session.size(); ++i)
        studies.push_back({{"id", session.ids()[i]}, {"title", session.titles()[i]}});
    j["studies"] = std::move(studies);
    return j.dump();
}

std::string log_event_line(const LogEvent& e) {
    json j;
    j["type"] = "decision";
    j["at"] = format_timestamp(e.at);
    j["study"] = e.study;
    j["from"] = to_string(e.from);
    j["to"] = to_string(e.to);
    j["reviewer"] = e.reviewer;
    return j.dump();
}

std::string write_session_log(const ReviewSession& session) {
    std::string out = session_header_line(session) + "\n";
    for (const auto& e : session.log()) out += log_event_line(e) + "\n";
    return out;
}

ReviewSession read_session_log(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::optional<json> header;
    std::vector<LogEvent> events;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw InvalidArgument("session log line " + std::to_string(line_no) + ": " + e.what());
        }
        const std::string type = j.value("type", "");
        try {
            if (type == "session") {
                if (header) throw InvalidArgument("second session header");
                header = std::move(j);
            } else if (type == "decision") {
                if (!header) throw InvalidArgument("decision before the session header");
                events.push_back({parse_timestamp(j.at("at").get<std::string>()), j.at("study").get<std::string>(),
                                  parse_status(j.at("from").get<std::string>()),
                                  parse_status(j.at("to").get<std::string>()), j.value("reviewer", "")});
            } else {
                throw InvalidArgument("unknown record type '" + type + "'");
            }
        } catch (const json::exception& e) {
            throw InvalidArgument("session log line " + std::to_string(line_no) + ": " + e.what());
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("session log line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!header) throw InvalidArgument("session log has no header line");
    std::vector<std::string> ids, titles;
    for (const auto& s : header->at("studies")) {
        ids.push_back(s.at("id").get<std::string>());
        titles.push_back(s.value("title", ""));
    }
    return ReviewSession::replay(std::move(ids), std::move(titles), header->value("corpus_hash", ""),
                                 parse_timestamp(header->at("started_at").get<std::string>()), events);
}

// ---------------------------------------------------------------------------
// store

SessionStore::SessionStore(ReviewSession initial, EventSink sink)
    : current_(std::make_shared<const ReviewSession>(std::move(initial))), sink_(std::move(sink)) {}

std::shared_ptr<const ReviewSession> SessionStore::snapshot() const {
    std::lock_guard lock(read_mutex_);
    return current_;
}

std::shared_ptr<const ReviewSession> SessionStore::set_decision(std::string_view study, Status status,
                                                                std::string_view reviewer, Timestamp at) {
    std::lock_guard writer(write_mutex_);
    auto next = std::make_shared<ReviewSession>(*snapshot());
    next->set_decision(study, status, reviewer, at);
    if (sink_) sink_(next->log().back());
    std::shared_ptr<const ReviewSession> published = std::move(next);
    {
        std::lock_guard lock(read_mutex_);
        current_ = published;
    }
    return published;
}

SelectionEvent SessionStore::select(std::span<const std::string> ids) {
    std::lock_guard writer(write_mutex_);
    auto next = std::make_shared<ReviewSession>(*snapshot());
    SelectionEvent event = next->select(ids);
    {
        std::lock_guard lock(read_mutex_);
        current_ = std::move(next);
    }
    return event;
}

}  // namespace studymap
