#include "studymap/service.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <vector>

#include <httplib.h>

#include "studymap/export.hpp"

namespace studymap {

namespace {

HttpResponse json_response(int status, const Json& body) { return {status, body.dump(), "application/json"}; }

HttpResponse error_response(int status, std::string message, Json extra = Json::object()) {
    Json body = {{"error", std::move(message)}};
    for (auto& [k, v] : extra.items()) body[k] = v;
    return json_response(status, body);
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/') ++i;
        const std::size_t start = i;
        while (i < path.size() && path[i] != '/') ++i;
        if (i > start) parts.push_back(httplib::detail::decode_url(std::string(path.substr(start, i - start)), false));
    }
    return parts;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Error("cannot write '" + path.string() + "'");
}

bool looks_like_json(std::string_view body) {
    const auto first = body.find_first_not_of(" \t\r\n");
    return first != std::string_view::npos && body[first] == '{';
}

template <class T>
T get_number(const Json& value, std::string_view name) {
    if (!value.is_number()) throw InvalidArgument("config." + std::string(name) + " must be a number");
    if constexpr (std::is_integral_v<T>) {
        if (!value.is_number_unsigned()) throw InvalidArgument("config." + std::string(name) + " must be a non-negative integer");
    }
    return value.get<T>();
}

/// Project options from a create request: {seed, reference_delimiter, config: {...}}.
struct ProjectOptions {
    WorkbenchConfig workbench;
    IngestOptions ingest;
};

ProjectOptions parse_options(const Json& request, const WorkbenchConfig& defaults) {
    ProjectOptions out{defaults, {}};
    auto& wb = out.workbench;
    if (request.contains("seed")) wb.with_seed(get_number<std::uint64_t>(request["seed"], "seed"));
    if (request.contains("reference_delimiter")) {
        if (!request["reference_delimiter"].is_string()) throw InvalidArgument("reference_delimiter must be a string");
        out.ingest.reference_delimiter = request["reference_delimiter"].get<std::string>();
    }
    if (!request.contains("config")) return out;
    const auto& cfg = request["config"];
    if (!cfg.is_object()) throw InvalidArgument("config must be an object");
    for (const auto& [name, value] : cfg.items()) {
        if (name == "knn_k") wb.pipeline.knn_k = get_number<std::size_t>(value, name);
        else if (name == "min_document_frequency") wb.pipeline.min_document_frequency = get_number<std::size_t>(value, name);
        else if (name == "min_term_length") wb.pipeline.min_term_length = get_number<std::size_t>(value, name);
        else if (name == "weighting") {
            const auto w = value.is_string() ? value.get<std::string>() : "";
            if (w != "tf" && w != "tfidf") throw InvalidArgument("config.weighting must be \"tf\" or \"tfidf\"");
            wb.pipeline.weighting = w == "tf" ? Weighting::tf : Weighting::tfidf;
        } else if (name == "control_count") wb.projection.control_count = get_number<std::size_t>(value, name);
        else if (name == "neighborhood_k") wb.projection.neighborhood_k = get_number<std::size_t>(value, name);
        else if (name == "cluster_count") wb.cluster_count = get_number<std::size_t>(value, name);
        else if (name == "topic_terms") wb.topic_terms = get_number<std::size_t>(value, name);
        else if (name == "leaf_cap") wb.leaf_cap = get_number<std::size_t>(value, name);
        else if (name == "beta") wb.bundles.beta = get_number<double>(value, name);
        else if (name == "samples_per_edge") wb.bundles.samples_per_edge = get_number<std::size_t>(value, name);
        else if (name == "iterations") wb.force.iterations = get_number<std::size_t>(value, name);
        else if (name == "weighted") {
            if (!value.is_boolean()) throw InvalidArgument("config.weighted must be a boolean");
            wb.force.weighted = value.get<bool>();
        } else {
            throw InvalidArgument("unknown config field '" + name + "'");
        }
    }
    wb.validate();
    return out;
}

Json parse_json_body(std::string_view body) {
    try {
        return Json::parse(body);
    } catch (const Json::parse_error& e) {
        throw InvalidArgument(std::string("request body is not valid JSON: ") + e.what());
    }
}

const Json* field(const Json& body, std::string_view name) {
    if (!body.is_object()) throw InvalidArgument("request body must be a JSON object");
    auto it = body.find(name);
    return it == body.end() ? nullptr : &*it;
}

std::string required_string(const Json& body, std::string_view name) {
    const Json* v = field(body, name);
    if (!v || !v->is_string()) throw InvalidArgument("field '" + std::string(name) + "' must be a string");
    return v->get<std::string>();
}

std::vector<std::string> string_list(const Json& value, std::string_view name) {
    if (!value.is_array()) throw InvalidArgument("field '" + std::string(name) + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : value) {
        if (!v.is_string()) throw InvalidArgument("field '" + std::string(name) + "' must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::optional<std::string> query_value(const HttpRequest& request, const std::string& name) {
    auto it = request.query.find(name);
    if (it == request.query.end()) return std::nullopt;
    return it->second;
}

double parse_double(const std::string& text, std::string_view name) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw InvalidArgument(std::string(name) + " must be a number");
    return v;
}

std::size_t parse_count(const std::string& text, std::string_view name) {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
        text.size() > 9) {
        throw InvalidArgument(std::string(name) + " must be a non-negative integer");
    }
    return std::stoul(text);
}

}  // namespace

struct Service::Project {
    Project(std::string id_, Corpus corpus, WorkbenchConfig config, ReviewSession session, Diagnostics warnings_,
            SessionStore::EventSink sink)
        : id(std::move(id_)),
          bench(std::move(corpus), std::move(config)),
          store(std::move(session), std::move(sink)),
          warnings(std::move(warnings_)) {}

    std::string id;
    Workbench bench;
    SessionStore store;
    Diagnostics warnings;
    std::mutex gold_mutex;
    std::optional<GoldStandard> gold;
    std::optional<std::filesystem::path> dir;
};

Service::Service(ServiceConfig config) : config_(std::move(config)) {
    if (!config_.clock) {
        config_.clock = [] { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); };
    }
    if (config_.data_dir) load_projects();
}

Service::~Service() = default;

Timestamp Service::now() const { return config_.clock(); }

std::shared_ptr<Service::Project> Service::find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = projects_.find(id);
    return it == projects_.end() ? nullptr : it->second;
}

std::shared_ptr<Service::Project> Service::install(std::string id, Corpus corpus, WorkbenchConfig config,
                                                   ReviewSession session, Diagnostics warnings) {
    std::optional<std::filesystem::path> dir;
    SessionStore::EventSink sink;
    if (config_.data_dir) {
        dir = *config_.data_dir / id;
        sink = [log = *dir / "session.jsonl"](const LogEvent& e) {
            std::ofstream out(log, std::ios::binary | std::ios::app);
            out << log_event_line(e) << '\n';
        };
    }
    auto project = std::make_shared<Project>(id, std::move(corpus), std::move(config), std::move(session),
                                             std::move(warnings), std::move(sink));
    project->dir = dir;
    projects_.emplace(std::move(id), project);
    return project;
}

void Service::load_projects() {
    std::filesystem::create_directories(*config_.data_dir);
    std::vector<std::filesystem::path> dirs;
    for (const auto& entry : std::filesystem::directory_iterator(*config_.data_dir)) {
        if (entry.is_directory()) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
        const auto name = dir.filename().string();
        try {
            const auto options = parse_options(parse_json_body(read_file(dir / "options.json")), config_.workbench);
            auto parsed = parse_bibtex(read_file(dir / "corpus.bib"), options.ingest);
            auto session = read_session_log(read_file(dir / "session.jsonl"));
            auto project = install(name, std::move(parsed.corpus), options.workbench, std::move(session),
                                   std::move(parsed.warnings));
            if (std::filesystem::exists(dir / "gold.txt")) {
                auto ids = project->bench.corpus().ids();
                project->gold = GoldStandard::from_included(ids, parse_gold_file(read_file(dir / "gold.txt")));
            }
            if (name.size() > 1 && name[0] == 'p' && std::all_of(name.begin() + 1, name.end(), [](unsigned char c) { return std::isdigit(c) != 0; })) {
                next_id_ = std::max(next_id_, std::stoul(name.substr(1)) + 1);
            }
        } catch (const std::exception& e) {
            std::cerr << "skipping stored project " << name << ": " << e.what() << '\n';
        }
    }
}

HttpResponse Service::create_project(const HttpRequest& request) {
    Json options_json = Json::object();
    std::string bibtex;
    std::optional<Timestamp> started_at;
    if (looks_like_json(request.body)) {
        const auto body = parse_json_body(request.body);
        bibtex = required_string(body, "bibtex");
        for (const char* name : {"seed", "reference_delimiter", "config"}) {
            if (body.contains(name)) options_json[name] = body[name];
        }
        if (body.contains("started_at")) started_at = parse_timestamp(required_string(body, "started_at"));
    } else {
        bibtex = request.body;
    }
    const auto options = parse_options(options_json, config_.workbench);

    ParseResult parsed;
    try {
        parsed = parse_bibtex(bibtex, options.ingest);
    } catch (const ParseError& e) {
        Json diagnostic = {{"entry_index", e.entry_index()}, {"offset", e.offset()}, {"message", e.what()}};
        return error_response(422, "bibtex payload could not be parsed", {{"diagnostics", Json::array({diagnostic})}});
    }
    if (parsed.corpus.empty()) parsed.warnings.push_back({"", 0, "payload contains no studies"});

    auto session = ReviewSession::for_corpus(parsed.corpus, started_at.value_or(now()));
    std::unique_lock lock(mutex_);
    const std::string id = "p" + std::to_string(next_id_++);
    if (config_.data_dir) {
        const auto dir = *config_.data_dir / id;
        std::filesystem::create_directories(dir);
        write_file(dir / "corpus.bib", bibtex);
        write_file(dir / "options.json", options_json.dump());
        write_file(dir / "session.jsonl", session_header_line(session) + "\n");
    }
    const auto hash = parsed.corpus.content_hash_hex();
    const auto count = parsed.corpus.size();
    auto project = install(id, std::move(parsed.corpus), options.workbench, std::move(session), parsed.warnings);
    return json_response(201, {{"project_id", id},
                               {"corpus_hash", hash},
                               {"studies", count},
                               {"warnings", diagnostics_json(project->warnings)}});
}

HttpResponse Service::handle(std::string_view method, std::string_view target, std::string_view body) {
    HttpRequest request;
    request.method = std::string(method);
    const auto q = target.find('?');
    request.path = std::string(target.substr(0, q));
    if (q != std::string_view::npos) {
        httplib::Params params;
        httplib::detail::parse_query_text(std::string(target.substr(q + 1)), params);
        for (const auto& [k, v] : params) request.query.emplace(k, v);
    }
    request.body = std::string(body);
    return handle(request);
}

HttpResponse Service::handle(const HttpRequest& request) {
    if (request.body.size() > config_.max_payload_bytes) {
        return error_response(413, "payload exceeds " + std::to_string(config_.max_payload_bytes) + " bytes",
                              {{"limit", config_.max_payload_bytes}});
    }
    const auto parts = split_path(request.path);
    const auto& method = request.method;
    auto not_allowed = [&] { return error_response(405, "method " + method + " not allowed on " + request.path); };

    try {
        if (parts.empty() || parts[0] != "projects") return error_response(404, "no route for " + request.path);

        if (parts.size() == 1) {
            if (method == "POST") return create_project(request);
            if (method != "GET") return not_allowed();
            std::shared_lock lock(mutex_);
            Json list = Json::array();
            for (const auto& [id, p] : projects_) list.push_back({{"project_id", id}, {"studies", p->bench.corpus().size()}});
            return json_response(200, {{"projects", std::move(list)}});
        }

        auto project = find(parts[1]);
        if (!project) return error_response(404, "unknown project '" + parts[1] + "'");
        const auto& corpus = project->bench.corpus();

        if (parts.size() == 2) {
            if (method != "GET") return not_allowed();
            return json_response(200, {{"project_id", project->id},
                                       {"corpus_hash", corpus.content_hash_hex()},
                                       {"studies", corpus.size()},
                                       {"warnings", diagnostics_json(project->warnings)}});
        }

        const auto& section = parts[2];
        if (section == "views" && parts.size() == 4) {
            if (method != "GET") return not_allowed();
            const auto& kind = parts[3];
            Json out = {{"project_id", project->id}, {"view", kind}};
            if (kind == "map") {
                auto map = project->bench.map();
                out["layout"] = map_json(*map);
                out["quality"] = map->quality;
            } else if (kind == "bundles") {
                auto params = project->bench.config().bundles;
                if (auto beta = query_value(request, "beta")) params.beta = parse_double(*beta, "beta");
                if (auto s = query_value(request, "samples")) params.samples_per_edge = parse_count(*s, "samples");
                out["layout"] = bundles_json(*project->bench.bundles(params));
            } else if (kind == "network") {
                out["layout"] = network_json(*project->bench.graph(), *project->bench.network());
            } else {
                return error_response(404, "unknown view '" + kind + "' (want map, bundles or network)");
            }
            const auto snapshot = project->store.snapshot();
            out["selection"] = snapshot->selection();
            if (auto overlay = query_value(request, "overlay")) {
                if (*overlay == "clusters") {
                    out["overlay"] = cluster_overlay(*project->bench.clusters(), *project->bench.map());
                } else if (*overlay == "expression") {
                    auto expr = query_value(request, "expr");
                    if (!expr || expr->empty()) return error_response(400, "overlay=expression needs an expr parameter");
                    out["overlay"] = expression_overlay(expression_frequency(corpus, *expr), corpus.ids());
                } else if (*overlay == "knn") {
                    std::size_t k = project->bench.config().pipeline.knn_k;
                    if (auto kk = query_value(request, "k")) k = parse_count(*kk, "k");
                    out["overlay"] = knn_overlay(*project->bench.matrix(), k);
                } else if (*overlay == "status") {
                    out["overlay"] = status_overlay(*snapshot);
                } else {
                    return error_response(400, "unknown overlay '" + *overlay + "' (want clusters, expression, knn or status)");
                }
            }
            return json_response(200, out);
        }

        if (section == "studies" && parts.size() == 4) {
            if (method != "GET") return not_allowed();
            const auto index = corpus.index_of(parts[3]);
            if (!index) return error_response(404, "unknown study '" + parts[3] + "'", {{"unknown_ids", {parts[3]}}});
            const auto& s = corpus[*index];
            const auto snapshot = project->store.snapshot();
            return json_response(200, {{"id", s.id},
                                       {"title", s.title},
                                       {"abstract", s.abstract},
                                       {"keywords", s.keywords},
                                       {"status", to_string(snapshot->decisions()[*index].status)}});
        }

        if (section == "gold" && parts.size() == 3) {
            if (method != "PUT") return not_allowed();
            std::vector<std::string> included;
            if (looks_like_json(request.body)) {
                const auto body = parse_json_body(request.body);
                const Json* list = field(body, "included");
                if (!list) throw InvalidArgument("field 'included' is required");
                included = string_list(*list, "included");
            } else {
                included = parse_gold_file(request.body);
            }
            const auto ids = corpus.ids();
            auto gold = GoldStandard::from_included(ids, included);
            std::lock_guard lock(project->gold_mutex);
            if (project->dir) {
                std::string text;
                for (const auto& id : gold.included) text += id + '\n';
                write_file(*project->dir / "gold.txt", text);
            }
            Json out = {{"included", gold.included.size()}, {"excluded", gold.excluded.size()}};
            project->gold = std::move(gold);
            return json_response(200, out);
        }

        if (section == "session") {
            if (parts.size() == 3) {
                if (method != "GET") return not_allowed();
                const auto snapshot = project->store.snapshot();
                Json rows = Json::array();
                for (const auto& r : decision_rows(*snapshot)) {
                    rows.push_back({{"id", r.study_id}, {"title", r.title}, {"status", r.status},
                                    {"decided_at", r.decided_at}, {"reviewer", r.reviewer}});
                }
                return json_response(200, {{"started_at", format_timestamp(snapshot->started_at())},
                                           {"decisions", std::move(rows)},
                                           {"selection", snapshot->selection()},
                                           {"log_length", snapshot->log().size()}});
            }
            const auto& what = parts[3];
            if (parts.size() != 4) return error_response(404, "no route for " + request.path);
            if (what == "decisions") {
                if (method != "POST") return not_allowed();
                const auto body = parse_json_body(request.body);
                const auto study = required_string(body, "study");
                const auto status = parse_status(required_string(body, "status"));
                std::string reviewer;
                if (const Json* r = field(body, "reviewer")) {
                    if (!r->is_string()) throw InvalidArgument("field 'reviewer' must be a string");
                    reviewer = r->get<std::string>();
                }
                const Timestamp at = field(body, "at") ? parse_timestamp(required_string(body, "at")) : now();
                auto after = project->store.set_decision(study, status, reviewer, at);
                return json_response(200, {{"study", study},
                                           {"status", to_string(status)},
                                           {"at", format_timestamp(at)},
                                           {"reviewer", reviewer},
                                           {"log_length", after->log().size()}});
            }
            if (what == "selection") {
                if (method != "POST") return not_allowed();
                const auto body = parse_json_body(request.body);
                const Json* ids = field(body, "ids");
                if (!ids) throw InvalidArgument("field 'ids' is required");
                const auto list = string_list(*ids, "ids");
                auto event = project->store.select(list);
                return json_response(200, {{"selection", event.ids}});
            }
            if (what == "metrics") {
                if (method != "GET") return not_allowed();
                std::optional<GoldStandard> gold;
                {
                    std::lock_guard lock(project->gold_mutex);
                    gold = project->gold;
                }
                if (!gold) {
                    return error_response(409, "no gold standard for this project",
                                          {{"hint", "PUT /projects/" + project->id + "/gold with the included study ids first"}});
                }
                const auto metrics = compute_metrics(*project->store.snapshot(), *gold);
                if (query_value(request, "format") == "csv") return {200, metrics_to_csv(metrics), "text/csv"};
                return {200, metrics_to_json(metrics), "application/json"};
            }
            if (what == "log") {
                if (method != "GET") return not_allowed();
                return {200, write_session_log(*project->store.snapshot()), "application/x-ndjson"};
            }
            if (what == "table") {
                if (method != "GET") return not_allowed();
                return {200, export_decision_table(*project->store.snapshot()), "text/csv"};
            }
        }
        return error_response(404, "no route for " + request.path);
    } catch (const UnknownId& e) {
        return error_response(404, e.what(), {{"unknown_ids", e.ids()}});
    } catch (const TimeRegression& e) {
        return error_response(409, e.what());
    } catch (const StateError& e) {
        return error_response(409, e.what());
    } catch (const ParseError& e) {
        return error_response(422, e.what());
    } catch (const InvalidArgument& e) {
        return error_response(400, e.what());
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
}

struct HttpServer::Impl {
    httplib::Server server;
};

HttpServer::HttpServer(Service& service, const std::string& host, int port) : impl_(std::make_unique<Impl>()) {
    auto& server = impl_->server;
    server.set_payload_max_length(service.config().max_payload_bytes);
    auto route = [&service](const httplib::Request& req, httplib::Response& res) {
        HttpRequest request{req.method, req.path, {}, req.body};
        for (const auto& [k, v] : req.params) request.query.emplace(k, v);
        auto response = service.handle(request);
        res.status = response.status;
        res.set_content(response.body, response.content_type);
    };
    server.Get(".*", route);
    server.Post(".*", route);
    server.Put(".*", route);
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) {
            res.set_content(Json{{"error", httplib::status_message(res.status)}}.dump(), "application/json");
        }
    });
    port_ = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
    if (port_ < 0) throw Error("cannot listen on " + host + ":" + std::to_string(port));
}

HttpServer::~HttpServer() = default;

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    impl_->server.wait_until_ready();
    impl_->server.stop();
}

}  // namespace studymap
