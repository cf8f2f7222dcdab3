// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/backend/backend.hpp"
#include "maestro/core/blob_store.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>

namespace maestro {

struct FixtureEntry {
    std::string kind; // request kind name, or a tool kind such as "web_search"
    std::optional<std::string> text;
    std::optional<Bytes> blob;
    std::string media_type;
};

/// digest -> canned response. File shape:
///   { "<sha256>": {"kind":"...","text"|"blob_b64":"...","media_type":"..."} }
class FixtureSet {
public:
    FixtureSet() = default;
    static FixtureSet parse(std::string_view json_text, const std::string& name = "inline");
    /// Loads <dir>/<name>.json. Throws FixtureParseError (including when the file is missing).
    static FixtureSet load(const std::string& dir, const std::string& name);

    const FixtureEntry* find(std::string_view digest, std::string_view kind) const;
    std::size_t size() const { return entries_.size(); }
    const std::string& name() const { return name_; }

private:
    std::string name_;
    std::map<std::string, FixtureEntry, std::less<>> entries_;
};

/// Digests tried in order: canonical request JSON, newest message text,
/// newest attached blob. Entries whose kind differs from the request are skipped.
std::vector<std::string> fixture_keys(const BackendRequest& req);

class MockBackend final : public Backend {
public:
    MockBackend(BackendBinding binding, std::shared_ptr<const FixtureSet> fixtures, std::shared_ptr<BlobStore> blobs,
                Clock& clock);

    bool supports(RequestKind) const override { return true; }
    BackendResponse invoke(const BackendRequest& req, const InvokeContext& ctx = {}) override;

private:
    std::shared_ptr<const FixtureSet> fixtures_;
    std::shared_ptr<BlobStore> blobs_;
    Clock& clock_;
};

} // namespace maestro
