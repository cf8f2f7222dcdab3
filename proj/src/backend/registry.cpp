// SPDX-License-Identifier: Apache-2.0
#include "maestro/backend/registry.hpp"

#include "maestro/backend/wire.hpp"

namespace maestro {

BackendRegistry::BackendRegistry(std::shared_ptr<BlobStore> blobs, std::shared_ptr<HttpTransport> http,
                                 std::string fixtures_dir, Clock& clock)
    : blobs_(std::move(blobs)), http_(std::move(http)), fixtures_dir_(std::move(fixtures_dir)), clock_(clock)
{
}

std::shared_ptr<const FixtureSet> BackendRegistry::fixture_set(const std::string& name)
{
    {
        std::lock_guard lock(mutex_);
        if (auto it = fixtures_.find(name); it != fixtures_.end())
            return it->second;
    }
    auto set = std::make_shared<const FixtureSet>(FixtureSet::load(fixtures_dir_, name));
    std::lock_guard lock(mutex_);
    return fixtures_.emplace(name, std::move(set)).first->second;
}

std::shared_ptr<Backend> BackendRegistry::get(const WorkflowDoc& doc, const std::string& name)
{
    const auto key = doc.id + "/" + name;
    {
        std::lock_guard lock(mutex_);
        if (auto it = overrides_.find(name); it != overrides_.end())
            return it->second;
        if (auto it = instances_.find(key); it != instances_.end())
            return it->second;
    }
    const auto* node = doc.find(name);
    if (!node || node->kind != NodeKind::Backend)
        throw Error(Errc::UnknownBinding, name);
    auto binding = binding_from_node(*node);

    std::shared_ptr<Backend> backend;
    switch (binding.adapter) {
    case AdapterKind::Mock:
        backend = std::make_shared<MockBackend>(binding, fixture_set(binding.fixture_set), blobs_, clock_);
        break;
    case AdapterKind::ChatCompletionsWire:
        backend = std::make_shared<ChatCompletionsBackend>(binding, http_, blobs_, clock_);
        break;
    case AdapterKind::PredictionWire:
        backend = std::make_shared<PredictionBackend>(binding, http_, blobs_, clock_);
        break;
    }
    std::lock_guard lock(mutex_);
    return instances_.emplace(key, std::move(backend)).first->second;
}

FallbackRoute BackendRegistry::route(const WorkflowDoc& doc, const std::string& name)
{
    FallbackRoute r;
    r.primary = get(doc, name);
    const auto& b = r.primary->binding();
    if (b.alternate)
        r.alternate = get(doc, *b.alternate);
    r.degradation = b.degradation;
    return r;
}

void BackendRegistry::override_backend(const std::string& name, std::shared_ptr<Backend> backend)
{
    std::lock_guard lock(mutex_);
    overrides_[name] = std::move(backend);
}

} // namespace maestro
