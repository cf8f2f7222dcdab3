// SPDX-License-Identifier: Apache-2.0
#include "maestro/backend/mock_backend.hpp"

#include "maestro/core/digest.hpp"
#include "maestro/error.hpp"

#include <fstream>
#include <sstream>

namespace maestro {

FixtureSet FixtureSet::parse(std::string_view json_text, const std::string& name)
{
    FixtureSet set;
    set.name_ = name;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::FixtureParseError, name + ": " + e.what());
    }
    if (!doc.is_object())
        throw Error(Errc::FixtureParseError, name + ": top level must be an object");
    for (const auto& [digest, v] : doc.items()) {
        if (!v.is_object() || !v.contains("kind") || !v["kind"].is_string())
            throw Error(Errc::FixtureParseError, name + ": entry " + digest + " needs a string kind");
        FixtureEntry e;
        e.kind = v["kind"].get<std::string>();
        e.media_type = v.value("media_type", "text/plain");
        if (v.contains("text") && v["text"].is_string())
            e.text = v["text"].get<std::string>();
        if (v.contains("blob_b64") && v["blob_b64"].is_string()) {
            e.blob = base64_decode(v["blob_b64"].get<std::string>());
            if (!e.blob)
                throw Error(Errc::FixtureParseError, name + ": entry " + digest + " has invalid base64");
        }
        if (e.text.has_value() == e.blob.has_value())
            throw Error(Errc::FixtureParseError, name + ": entry " + digest + " needs exactly one of text, blob_b64");
        if (auto k = request_kind_from_string(e.kind); k && produces_blob(*k) != e.blob.has_value())
            throw Error(Errc::FixtureParseError, name + ": entry " + digest + " output does not fit kind " + e.kind);
        set.entries_.emplace(digest, std::move(e));
    }
    return set;
}

FixtureSet FixtureSet::load(const std::string& dir, const std::string& name)
{
    const auto path = dir + "/" + name + ".json";
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::FixtureParseError, "cannot open fixture set " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), name);
}

const FixtureEntry* FixtureSet::find(std::string_view digest, std::string_view kind) const
{
    auto it = entries_.find(digest);
    if (it == entries_.end() || it->second.kind != kind)
        return nullptr;
    return &it->second;
}

std::vector<std::string> fixture_keys(const BackendRequest& req)
{
    std::vector<std::string> keys {request_digest(req)};
    if (!req.messages.empty()) {
        std::string text;
        bool any = false;
        for (const auto& p : req.messages.back().payloads) {
            if (!p.is_text())
                continue;
            if (any)
                text += '\n';
            text += p.text();
            any = true;
        }
        if (any)
            keys.push_back(sha256_hex(text));
    }
    for (auto m = req.messages.rbegin(); m != req.messages.rend(); ++m) {
        for (auto p = m->payloads.rbegin(); p != m->payloads.rend(); ++p) {
            if (!p->is_text()) {
                keys.push_back(p->blob_ref().digest);
                return keys;
            }
        }
    }
    return keys;
}

MockBackend::MockBackend(BackendBinding binding, std::shared_ptr<const FixtureSet> fixtures,
                         std::shared_ptr<BlobStore> blobs, Clock& clock)
    : Backend(std::move(binding)), fixtures_(std::move(fixtures)), blobs_(std::move(blobs)), clock_(clock)
{
}

BackendResponse MockBackend::invoke(const BackendRequest& req, const InvokeContext&)
{
    check_request(req);
    const auto started = clock_.now();
    if (binding_.mock_delay.count() > 0)
        clock_.sleep_for(binding_.mock_delay);

    const auto digest = request_digest(req);
    const FixtureEntry* entry = nullptr;
    std::string key;
    for (const auto& k : fixture_keys(req)) {
        if ((entry = fixtures_->find(k, to_string(req.kind)))) {
            key = k;
            break;
        }
    }
    if (!entry)
        throw Error(Errc::FixtureMiss, binding_.name + ": no fixture for request " + digest);

    BackendResponse resp;
    resp.kind = req.kind;
    resp.served_by = binding_.name;
    resp.raw_digest = key;
    if (entry->text)
        resp.text = *entry->text;
    else
        resp.blob = blobs_->put(*entry->blob, entry->media_type);
    resp.latency = clock_.now() - started;
    return resp;
}

} // namespace maestro
