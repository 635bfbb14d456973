#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "studymap/bundles.hpp"
#include "studymap/clustering.hpp"
#include "studymap/corpus.hpp"
#include "studymap/network.hpp"
#include "studymap/projection.hpp"
#include "studymap/text.hpp"

namespace studymap {

struct WorkbenchConfig {
    PipelineConfig pipeline;
    ProjectionConfig projection;
    std::optional<std::size_t> cluster_count;  // default: default_cluster_count(N)
    std::size_t topic_terms = 2;
    std::size_t leaf_cap = 8;
    std::uint64_t seed = 0;  // clustering and hierarchy
    CanonicalizeOptions canonicalize;
    ResolveOptions resolve;
    BundleParams bundles;
    ForceParams force;

    /// Sets every seed (projection, clustering, hierarchy, force layout).
    WorkbenchConfig& with_seed(std::uint64_t s);
    void validate() const;
};

/// One corpus and everything computed from it. Each stage is computed on first
/// use and cached under the fingerprint of the configuration that produced it;
/// results are immutable and may be shared across threads.
class Workbench {
public:
    explicit Workbench(Corpus corpus, WorkbenchConfig config = {});

    const Corpus& corpus() const noexcept { return corpus_; }
    const WorkbenchConfig& config() const noexcept { return config_; }

    std::shared_ptr<const ResolvedCitations> citations();
    /// When the default document-frequency filter leaves no terms the matrix
    /// is rebuilt with min_document_frequency = 1 and a warning is recorded.
    std::shared_ptr<const TermDocumentMatrix> matrix();
    std::shared_ptr<const DocumentMapLayout> map();
    std::shared_ptr<const ClusterModel> clusters();
    std::shared_ptr<const HierarchyTree> hierarchy();
    std::shared_ptr<const BundleLayout> bundles(const BundleParams& params);
    std::shared_ptr<const BundleLayout> bundles() { return bundles(config_.bundles); }
    std::shared_ptr<const CitationGraph> graph();
    std::shared_ptr<const NetworkLayout> network(const ForceParams& params);
    std::shared_ptr<const NetworkLayout> network() { return network(config_.force); }

    /// Warnings from every stage computed so far, in computation order.
    Diagnostics warnings() const;
    /// Number of stage computations performed (cache misses).
    std::size_t computations() const;

private:
    template <class T, class F>
    std::shared_ptr<const T> cached(std::map<std::string, std::shared_ptr<const T>>& slot, const std::string& key,
                                    F&& compute);

    Corpus corpus_;
    std::string hash_;
    WorkbenchConfig config_;
    mutable std::recursive_mutex mutex_;
    Diagnostics warnings_;
    std::size_t computations_ = 0;

    std::map<std::string, std::shared_ptr<const ResolvedCitations>> citations_;
    std::map<std::string, std::shared_ptr<const TermDocumentMatrix>> matrices_;
    std::map<std::string, std::shared_ptr<const DocumentMapLayout>> maps_;
    std::map<std::string, std::shared_ptr<const ClusterModel>> clusters_;
    std::map<std::string, std::shared_ptr<const HierarchyTree>> hierarchies_;
    std::map<std::string, std::shared_ptr<const BundleLayout>> bundles_;
    std::map<std::string, std::shared_ptr<const CitationGraph>> graphs_;
    std::map<std::string, std::shared_ptr<const NetworkLayout>> networks_;
};

}  // namespace studymap
