// SPDX-License-Identifier: Apache-2.0
#include "maestro/state/state_store.hpp"

#include "maestro/core/serialize.hpp"
#include "maestro/error.hpp"

#include <nlohmann/json.hpp>

namespace maestro {

Subscription::Subscription(std::string ns, std::string prefix, std::size_t capacity)
    : ns_(std::move(ns)), prefix_(std::move(prefix)), capacity_(capacity)
{
}

bool Subscription::matches(std::string_view ns, std::string_view key) const
{
    return ns == ns_ && key.starts_with(prefix_);
}

void Subscription::deliver(const ChangeNotification& n)
{
    {
        std::lock_guard lock(mutex_);
        if (closed_)
            return;
        if (queue_.size() >= capacity_) {
            ++dropped_;
            return;
        }
        queue_.push_back(n);
    }
    cv_.notify_one();
}

std::optional<ChangeNotification> Subscription::pop_locked()
{
    if (dropped_ > 0) {
        auto dropped = dropped_;
        dropped_ = 0;
        throw Error(Errc::SubscriberLagged, std::to_string(dropped));
    }
    if (queue_.empty())
        return std::nullopt;
    auto n = std::move(queue_.front());
    queue_.pop_front();
    return n;
}

std::optional<ChangeNotification> Subscription::try_next()
{
    std::lock_guard lock(mutex_);
    return pop_locked();
}

std::optional<ChangeNotification> Subscription::wait_next(Millis timeout)
{
    std::unique_lock lock(mutex_);
    cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || dropped_ > 0 || closed_; });
    return pop_locked();
}

std::size_t Subscription::pending() const
{
    std::lock_guard lock(mutex_);
    return queue_.size();
}

void Subscription::close()
{
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
    }
    cv_.notify_all();
}

StateStore::StateStore(std::shared_ptr<BlobStore> blobs) : blobs_(std::move(blobs)) {}

StateStore::KeyRecord& StateStore::record(const std::string& ns, const std::string& key)
{
    {
        std::shared_lock lock(map_mutex_);
        if (auto it = records_.find({ns, key}); it != records_.end())
            return *it->second;
    }
    std::unique_lock lock(map_mutex_);
    auto& slot = records_[{ns, key}];
    if (!slot)
        slot = std::make_unique<KeyRecord>();
    return *slot;
}

const StateStore::KeyRecord* StateStore::find_record(const std::string& ns, const std::string& key) const
{
    std::shared_lock lock(map_mutex_);
    auto it = records_.find({ns, key});
    return it == records_.end() ? nullptr : it->second.get();
}

StoredValue StateStore::normalize(StoredValue value)
{
    if (auto* text = std::get_if<std::string>(&value); text && blobs_ && text->size() > kBlobThreshold)
        return blobs_->put(*text, "text/plain");
    return value;
}

std::uint64_t StateStore::append_locked(KeyRecord& rec, const std::string& ns, const std::string& key,
                                        StoredValue value, const std::string& author)
{
    VersionedEntry e;
    e.ns = ns;
    e.key = key;
    e.value = std::move(value);
    e.version = rec.versions.size() + 1;
    e.created_at = utc_now_iso();
    e.author = author;
    rec.versions.push_back(e);

    // Delivered under the key lock so every subscriber sees per-key version order.
    std::vector<std::shared_ptr<Subscription>> targets;
    {
        std::lock_guard lock(subs_mutex_);
        for (auto it = subs_.begin(); it != subs_.end();) {
            if (auto sub = it->lock()) {
                if (sub->matches(ns, key))
                    targets.push_back(std::move(sub));
                ++it;
            } else {
                it = subs_.erase(it);
            }
        }
    }
    const ChangeNotification n {ns, key, e.version, author};
    for (auto& sub : targets)
        sub->deliver(n);
    return e.version;
}

std::uint64_t StateStore::put(const std::string& ns, const std::string& key, StoredValue value,
                              const std::string& author)
{
    auto normalized = normalize(std::move(value));
    auto& rec = record(ns, key);
    std::unique_lock lock(rec.mutex);
    return append_locked(rec, ns, key, std::move(normalized), author);
}

CasResult StateStore::compare_and_put(const std::string& ns, const std::string& key,
                                      std::uint64_t expected_version, StoredValue value,
                                      const std::string& author)
{
    auto normalized = normalize(std::move(value));
    auto& rec = record(ns, key);
    std::unique_lock lock(rec.mutex);
    const std::uint64_t current = rec.versions.size();
    if (current != expected_version) {
        CasResult r;
        r.version = current;
        if (current > 0)
            r.current = rec.versions.back();
        return r;
    }
    return {true, append_locked(rec, ns, key, std::move(normalized), author), std::nullopt};
}

std::uint64_t StateStore::rollback(const std::string& ns, const std::string& key, std::uint64_t to_version,
                                   const std::string& author)
{
    auto& rec = record(ns, key);
    std::unique_lock lock(rec.mutex);
    if (to_version == 0 || to_version > rec.versions.size())
        throw Error(Errc::NoSuchVersion, ns + "/" + key + "@" + std::to_string(to_version));
    auto value = rec.versions[to_version - 1].value;
    return append_locked(rec, ns, key, std::move(value), author);
}

std::optional<VersionedEntry> StateStore::get(const std::string& ns, const std::string& key) const
{
    const auto* rec = find_record(ns, key);
    if (!rec)
        return std::nullopt;
    std::shared_lock lock(rec->mutex);
    if (rec->versions.empty())
        return std::nullopt;
    return rec->versions.back();
}

std::optional<VersionedEntry> StateStore::get_version(const std::string& ns, const std::string& key,
                                                      std::uint64_t version) const
{
    const auto* rec = find_record(ns, key);
    if (!rec)
        return std::nullopt;
    std::shared_lock lock(rec->mutex);
    if (version == 0 || version > rec->versions.size())
        return std::nullopt;
    return rec->versions[version - 1];
}

std::vector<VersionedEntry> StateStore::history(const std::string& ns, const std::string& key) const
{
    const auto* rec = find_record(ns, key);
    if (!rec)
        return {};
    std::shared_lock lock(rec->mutex);
    return rec->versions;
}

std::vector<std::string> StateStore::keys(const std::string& ns, std::string_view prefix) const
{
    std::vector<std::string> out;
    std::shared_lock lock(map_mutex_);
    for (const auto& [id, rec] : records_) {
        if (id.first == ns && std::string_view(id.second).starts_with(prefix))
            out.push_back(id.second);
    }
    return out;
}

std::string StateStore::read_text(const VersionedEntry& e) const
{
    if (const auto* text = std::get_if<std::string>(&e.value))
        return *text;
    const auto& ref = std::get<BlobRef>(e.value);
    auto bytes = blobs_ ? blobs_->get(ref.digest) : nullptr;
    if (!bytes)
        throw Error(Errc::NotFound, "blob " + ref.digest);
    return to_string(*bytes);
}

std::shared_ptr<Subscription> StateStore::watch(const std::string& ns, const std::string& key_prefix,
                                                std::size_t buffer)
{
    auto sub = std::make_shared<Subscription>(ns, key_prefix, buffer);
    std::lock_guard lock(subs_mutex_);
    subs_.push_back(sub);
    return sub;
}

std::string StateStore::export_jsonl() const
{
    std::vector<const KeyRecord*> recs;
    {
        std::shared_lock lock(map_mutex_);
        for (const auto& [_, rec] : records_)
            recs.push_back(rec.get());
    }
    std::string out;
    for (const auto* rec : recs) {
        std::shared_lock lock(rec->mutex);
        for (const auto& e : rec->versions) {
            nlohmann::ordered_json j;
            j["ns"] = e.ns;
            j["key"] = e.key;
            j["version"] = e.version;
            if (const auto* text = std::get_if<std::string>(&e.value))
                j["value"] = *text;
            else
                j["value"] = to_json(std::get<BlobRef>(e.value));
            j["author"] = e.author;
            j["created_at"] = e.created_at;
            out += j.dump();
            out += '\n';
        }
    }
    return out;
}

} // namespace maestro
