// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/backend/registry.hpp"
#include "maestro/rag/pipeline.hpp"
#include "maestro/resilience/fallback.hpp"
#include "maestro/resilience/health.hpp"
#include "maestro/state/state_store.hpp"
#include "maestro/workflow/validate.hpp"

#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

namespace maestro {

struct RuntimeOptions {
    std::string fixtures_dir;
    std::shared_ptr<HttpTransport> http;
    Clock* clock = nullptr; // defaults to the system clock
    std::size_t window_size = 32;
    Millis health_window {60'000};
    std::size_t health_threshold = 5;
};

inline constexpr const char* kDefaultIndex = "default";

/// Process-wide services shared by every session: blobs, state, backends,
/// health, the workflow catalog and the named vector indexes.
class Runtime {
public:
    explicit Runtime(RuntimeOptions options = {});

    Clock& clock() { return *clock_; }
    const RuntimeOptions& options() const { return options_; }
    std::shared_ptr<BlobStore> blob_store() { return blobs_; }
    BlobStore& blobs() { return *blobs_; }
    StateStore& state() { return state_; }
    BackendRegistry& backends() { return backends_; }
    HealthMonitor& health() { return health_; }
    BindingLimiter& limiter() { return limiter_; }

    /// Adds or replaces a workflow and registers the indexes its stores declare.
    void add_workflow(WorkflowDoc doc);
    std::shared_ptr<const WorkflowDoc> workflow(const std::string& id) const;
    std::vector<std::string> workflow_ids() const;
    /// Loads every *.flow.json in dir; returns how many were loaded.
    std::size_t load_workflows_dir(const std::string& dir);
    std::vector<Diagnostic> validate(const WorkflowDoc& doc) const;

    /// Named index; created with library defaults unless a store node configured it.
    RagPipeline& index(const std::string& name);
    void configure_index(const std::string& name, RagConfig config, const std::string& embedder = "mock");
    IngestResult ingest(const std::string& index_name, std::string_view bytes, std::string_view media_type,
                        Config metadata = {});

    /// Index name a vector_store node points at.
    static std::string index_name(const NodeSpec& store);
    static RagConfig store_config(const NodeSpec& store);

private:
    RuntimeOptions options_;
    Clock* clock_;
    std::shared_ptr<BlobStore> blobs_;
    StateStore state_;
    BackendRegistry backends_;
    HealthMonitor health_;
    BindingLimiter limiter_;

    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const WorkflowDoc>> workflows_;
    std::map<std::string, std::unique_ptr<RagPipeline>> indexes_;
};

} // namespace maestro
