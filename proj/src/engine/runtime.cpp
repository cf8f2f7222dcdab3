// SPDX-License-Identifier: Apache-2.0
#include "maestro/engine/runtime.hpp"

#include "maestro/error.hpp"

#include <cstdlib>
#include <filesystem>
#include <mutex>

namespace maestro {

Runtime::Runtime(RuntimeOptions options)
    : options_(std::move(options)),
      clock_(options_.clock ? options_.clock : &system_clock()),
      blobs_(std::make_shared<BlobStore>()),
      state_(blobs_),
      backends_(blobs_, options_.http, options_.fixtures_dir, *clock_),
      health_(*clock_, options_.health_window, options_.health_threshold)
{
}

std::string Runtime::index_name(const NodeSpec& store)
{
    return store.config_value("index", kDefaultIndex);
}

RagConfig Runtime::store_config(const NodeSpec& store)
{
    RagConfig c;
    auto num = [&](std::string_view key, std::size_t fallback) -> std::size_t {
        const auto raw = store.config_value(key);
        if (raw.empty())
            return fallback;
        char* end = nullptr;
        const auto v = std::strtoull(raw.c_str(), &end, 10);
        if (end != raw.c_str() + raw.size())
            throw Error(Errc::InvalidParams, store.name + ": " + std::string(key) + " is not a number");
        return static_cast<std::size_t>(v);
    };
    c.chunk_size = num("chunk_size", c.chunk_size);
    c.overlap = num("overlap", c.overlap);
    c.top_k = num("top_k", c.top_k);
    return c;
}

void Runtime::configure_index(const std::string& name, RagConfig config, const std::string& embedder)
{
    std::unique_lock lock(mutex_);
    if (indexes_.count(name))
        return; // first configuration wins; existing contents are kept
    indexes_.emplace(name, std::make_unique<RagPipeline>(make_embedder(embedder), config));
}

void Runtime::add_workflow(WorkflowDoc doc)
{
    for (const auto& n : doc.nodes)
        if (n.kind == NodeKind::VectorStore)
            configure_index(index_name(n), store_config(n), n.config_value("embedder", "mock"));
    auto shared = std::make_shared<const WorkflowDoc>(std::move(doc));
    std::unique_lock lock(mutex_);
    workflows_[shared->id] = std::move(shared);
}

std::shared_ptr<const WorkflowDoc> Runtime::workflow(const std::string& id) const
{
    std::shared_lock lock(mutex_);
    auto it = workflows_.find(id);
    return it == workflows_.end() ? nullptr : it->second;
}

std::vector<std::string> Runtime::workflow_ids() const
{
    std::shared_lock lock(mutex_);
    std::vector<std::string> ids;
    for (const auto& [id, _] : workflows_)
        ids.push_back(id);
    return ids;
}

std::size_t Runtime::load_workflows_dir(const std::string& dir)
{
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.size() > 10 && name.ends_with(".flow.json"))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
        add_workflow(load_workflow_file(f.string()));
    return files.size();
}

std::vector<Diagnostic> Runtime::validate(const WorkflowDoc& doc) const
{
    return validate_workflow(doc, [this](const std::string& id) { return workflow(id) != nullptr; });
}

RagPipeline& Runtime::index(const std::string& name)
{
    {
        std::shared_lock lock(mutex_);
        if (auto it = indexes_.find(name); it != indexes_.end())
            return *it->second;
    }
    configure_index(name, RagConfig {});
    std::shared_lock lock(mutex_);
    return *indexes_.at(name);
}

IngestResult Runtime::ingest(const std::string& index_name, std::string_view bytes, std::string_view media_type,
                             Config metadata)
{
    return index(index_name).ingest_document(bytes, media_type, std::move(metadata));
}

} // namespace maestro
