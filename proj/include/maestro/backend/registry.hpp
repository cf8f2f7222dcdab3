// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/backend/http_transport.hpp"
#include "maestro/backend/mock_backend.hpp"
#include "maestro/resilience/fallback.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace maestro {

/// Instantiates backends from a workflow's Backend nodes. Instances are cached
/// per (workflow id, node name); fixture sets are cached per name.
class BackendRegistry {
public:
    BackendRegistry(std::shared_ptr<BlobStore> blobs, std::shared_ptr<HttpTransport> http, std::string fixtures_dir,
                    Clock& clock);

    /// Throws UnknownBinding when the node is missing or not a backend.
    std::shared_ptr<Backend> get(const WorkflowDoc& doc, const std::string& name);
    FallbackRoute route(const WorkflowDoc& doc, const std::string& name);

    std::shared_ptr<const FixtureSet> fixture_set(const std::string& name);

    /// Replaces the backend for a binding name in every workflow (test and scenario hook).
    void override_backend(const std::string& name, std::shared_ptr<Backend> backend);

    const std::string& fixtures_dir() const { return fixtures_dir_; }
    std::shared_ptr<HttpTransport> http() const { return http_; }

private:
    std::shared_ptr<BlobStore> blobs_;
    std::shared_ptr<HttpTransport> http_;
    std::string fixtures_dir_;
    Clock& clock_;

    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Backend>> instances_;
    std::map<std::string, std::shared_ptr<Backend>> overrides_;
    std::map<std::string, std::shared_ptr<const FixtureSet>> fixtures_;
};

} // namespace maestro
