#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "studymap/session.hpp"
#include "studymap/workbench.hpp"

namespace studymap {

struct HttpRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

struct ServiceConfig {
    std::size_t max_payload_bytes = 8u << 20;
    /// Defaults for new projects; a create request may override fields.
    WorkbenchConfig workbench;
    /// Stamps decisions that carry no `at` and sessions without `started_at`.
    std::function<Timestamp()> clock;
    /// When set, projects are written below this directory and reloaded on start.
    std::optional<std::filesystem::path> data_dir;
};

/// The HTTP/JSON surface over the workbench and review sessions. handle()
/// is transport-free so it can be driven directly; serve() binds it to a socket.
class Service {
public:
    explicit Service(ServiceConfig config = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    HttpResponse handle(const HttpRequest& request);
    HttpResponse handle(std::string_view method, std::string_view target, std::string_view body = {});

    const ServiceConfig& config() const noexcept { return config_; }

private:
    struct Project;

    HttpResponse create_project(const HttpRequest& request);
    std::shared_ptr<Project> find(const std::string& id) const;
    std::shared_ptr<Project> install(std::string id, Corpus corpus, WorkbenchConfig config, ReviewSession session,
                                     Diagnostics warnings);
    Timestamp now() const;
    void load_projects();

    ServiceConfig config_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<Project>> projects_;
    std::size_t next_id_ = 1;
};

/// Binds a Service to a TCP socket.
class HttpServer {
public:
    /// Binds immediately; port 0 picks a free port. Throws Error when binding fails.
    HttpServer(Service& service, const std::string& host, int port);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    int port() const noexcept { return port_; }
    /// Serves until stop() is called from another thread.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
};

}  // namespace studymap
