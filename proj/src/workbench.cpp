#include "studymap/workbench.hpp"

#include <algorithm>
#include <sstream>

namespace studymap {

WorkbenchConfig& WorkbenchConfig::with_seed(std::uint64_t s) {
    seed = s;
    projection.seed = s;
    force.seed = s;
    return *this;
}

void WorkbenchConfig::validate() const {
    pipeline.validate();
    bundles.validate();
    force.validate();
    if (leaf_cap < 1) throw InvalidArgument("leaf_cap must be at least 1");
    if (cluster_count && *cluster_count < 1) throw InvalidArgument("cluster_count must be at least 1");
}

namespace {

std::string key(std::initializer_list<std::string> parts) {
    std::string out;
    for (const auto& p : parts) out += p + '|';
    return out;
}

std::string number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Workbench::Workbench(Corpus corpus, WorkbenchConfig config) : corpus_(std::move(corpus)), hash_(corpus_.content_hash_hex()), config_(std::move(config)) {
    config_.validate();
}

template <class T, class F>
std::shared_ptr<const T> Workbench::cached(std::map<std::string, std::shared_ptr<const T>>& slot,
                                           const std::string& k, F&& compute) {
    std::lock_guard lock(mutex_);
    if (auto it = slot.find(k); it != slot.end()) return it->second;
    auto value = std::make_shared<const T>(compute());
    ++computations_;
    slot.emplace(k, value);
    return value;
}

std::shared_ptr<const ResolvedCitations> Workbench::citations() {
    const auto k = key({hash_, number(config_.canonicalize.jaccard_threshold),
                        number(config_.resolve.title_jaccard_threshold)});
    return cached(citations_, k, [&] {
        auto refs = canonicalize_references(corpus_, config_.canonicalize);
        auto resolved = resolve_citations(corpus_, refs, config_.resolve);
        warnings_.insert(warnings_.end(), resolved.warnings.begin(), resolved.warnings.end());
        return resolved;
    });
}

std::shared_ptr<const TermDocumentMatrix> Workbench::matrix() {
    const auto k = key({hash_, config_.pipeline.fingerprint()});
    return cached(matrices_, k, [&] {
        if (corpus_.empty()) return TermDocumentMatrix{};
        try {
            return build_matrix(corpus_, config_.pipeline);
        } catch (const InvalidArgument&) {
            if (config_.pipeline.min_document_frequency <= 1) throw;
        }
        auto relaxed = config_.pipeline;
        relaxed.min_document_frequency = 1;
        try {
            auto m = build_matrix(corpus_, relaxed);
            warnings_.push_back({"", 0, "no term reaches min_document_frequency " +
                                            std::to_string(config_.pipeline.min_document_frequency) +
                                            "; using every surviving term"});
            return m;
        } catch (const InvalidArgument&) {
        }
        warnings_.push_back({"", 0, "no study has any indexable term; every study is equidistant"});
        return TermDocumentMatrix(corpus_.ids(), {}, std::vector<SparseVector>(corpus_.size()));
    });
}

std::shared_ptr<const DocumentMapLayout> Workbench::map() {
    const auto k = key({hash_, config_.pipeline.fingerprint(), config_.projection.fingerprint()});
    return cached(maps_, k, [&] {
        auto layout = project_document_map(*matrix(), config_.projection);
        warnings_.insert(warnings_.end(), layout.warnings.begin(), layout.warnings.end());
        return layout;
    });
}

std::shared_ptr<const ClusterModel> Workbench::clusters() {
    const auto k = key({hash_, config_.pipeline.fingerprint(),
                        config_.cluster_count ? std::to_string(*config_.cluster_count) : "auto",
                        std::to_string(config_.topic_terms), std::to_string(config_.seed)});
    return cached(clusters_, k, [&] {
        auto m = matrix();
        const std::size_t n = m->documents();
        if (n == 0) return ClusterModel{};
        const std::size_t want = std::min(config_.cluster_count.value_or(default_cluster_count(n)), n);
        return extract_topics(cluster(*m, want, config_.seed), *m, config_.topic_terms);
    });
}

std::shared_ptr<const HierarchyTree> Workbench::hierarchy() {
    const auto k = key({hash_, config_.pipeline.fingerprint(), config_.projection.fingerprint(),
                        std::to_string(config_.leaf_cap), std::to_string(config_.seed)});
    return cached(hierarchies_, k, [&] {
        auto m = matrix();
        if (m->documents() == 0) return HierarchyTree{};
        return build_hierarchy(*m, *map(), config_.leaf_cap, config_.seed);
    });
}

std::shared_ptr<const BundleLayout> Workbench::bundles(const BundleParams& params) {
    params.validate();
    const auto k = key({hash_, config_.pipeline.fingerprint(), config_.projection.fingerprint(),
                        std::to_string(config_.leaf_cap), std::to_string(config_.seed), params.fingerprint()});
    return cached(bundles_, k, [&] { return build_bundle_layout(*hierarchy(), citations()->links, params); });
}

std::shared_ptr<const CitationGraph> Workbench::graph() {
    const auto k = key({hash_, number(config_.canonicalize.jaccard_threshold),
                        number(config_.resolve.title_jaccard_threshold)});
    return cached(graphs_, k, [&] {
        auto resolved = citations();
        return build_citation_graph(corpus_, resolved->references, resolved->links);
    });
}

std::shared_ptr<const NetworkLayout> Workbench::network(const ForceParams& params) {
    params.validate();
    const auto k = key({hash_, number(config_.canonicalize.jaccard_threshold),
                        number(config_.resolve.title_jaccard_threshold), params.fingerprint()});
    return cached(networks_, k, [&] { return run_layout(*graph(), params); });
}

Diagnostics Workbench::warnings() const {
    std::lock_guard lock(mutex_);
    return warnings_;
}

std::size_t Workbench::computations() const {
    std::lock_guard lock(mutex_);
    return computations_;
}

}  // namespace studymap
