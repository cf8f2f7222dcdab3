// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/blob_store.hpp"
#include "maestro/core/clock.hpp"

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

namespace maestro {

using StoredValue = std::variant<std::string, BlobRef>;

struct VersionedEntry {
    std::string ns;
    std::string key;
    StoredValue value;
    std::uint64_t version = 0;
    std::string created_at;
    std::string author;
};

struct ChangeNotification {
    std::string ns;
    std::string key;
    std::uint64_t version = 0;
    std::string author;
};

struct CasResult {
    bool ok = false;
    std::uint64_t version = 0;                 // new version on success, current version on conflict
    std::optional<VersionedEntry> current;     // populated on conflict (absent when key is unset)
};

/// Bounded per-subscriber queue. Reading after an overflow throws
/// SubscriberLagged once with the number of dropped notifications.
class Subscription {
public:
    Subscription(std::string ns, std::string prefix, std::size_t capacity);

    std::optional<ChangeNotification> try_next();
    std::optional<ChangeNotification> wait_next(Millis timeout);
    std::size_t pending() const;
    void close();

    const std::string& ns() const { return ns_; }
    const std::string& prefix() const { return prefix_; }

private:
    friend class StateStore;
    bool matches(std::string_view ns, std::string_view key) const;
    void deliver(const ChangeNotification& n);
    std::optional<ChangeNotification> pop_locked();

    std::string ns_;
    std::string prefix_;
    std::size_t capacity_;
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<ChangeNotification> queue_;
    std::uint64_t dropped_ = 0;
    bool closed_ = false;
};

/// Versioned key-value store. Versions per (ns, key) run 1..n; history is
/// append-only and rollback appends a copy of an older value.
class StateStore {
public:
    static constexpr std::size_t kBlobThreshold = 64 * 1024;
    static constexpr std::size_t kWatchBuffer = 1024;

    explicit StateStore(std::shared_ptr<BlobStore> blobs = nullptr);

    std::uint64_t put(const std::string& ns, const std::string& key, StoredValue value, const std::string& author);
    /// expected_version 0 means "key must be absent".
    CasResult compare_and_put(const std::string& ns, const std::string& key, std::uint64_t expected_version,
                              StoredValue value, const std::string& author);
    std::uint64_t rollback(const std::string& ns, const std::string& key, std::uint64_t to_version,
                           const std::string& author);

    std::optional<VersionedEntry> get(const std::string& ns, const std::string& key) const;
    std::optional<VersionedEntry> get_version(const std::string& ns, const std::string& key,
                                              std::uint64_t version) const;
    std::vector<VersionedEntry> history(const std::string& ns, const std::string& key) const;
    std::vector<std::string> keys(const std::string& ns, std::string_view prefix = {}) const;

    /// Text of an entry, fetching blob-backed values from the blob store.
    std::string read_text(const VersionedEntry& e) const;

    std::shared_ptr<Subscription> watch(const std::string& ns, const std::string& key_prefix,
                                        std::size_t buffer = kWatchBuffer);

    /// Line-delimited JSON {ns,key,version,value,author,created_at}, ordered by (ns, key, version).
    std::string export_jsonl() const;

private:
    struct KeyRecord {
        mutable std::shared_mutex mutex;
        std::vector<VersionedEntry> versions;
    };

    KeyRecord& record(const std::string& ns, const std::string& key);
    const KeyRecord* find_record(const std::string& ns, const std::string& key) const;
    StoredValue normalize(StoredValue value);
    std::uint64_t append_locked(KeyRecord& rec, const std::string& ns, const std::string& key, StoredValue value,
                                const std::string& author);

    std::shared_ptr<BlobStore> blobs_;
    mutable std::shared_mutex map_mutex_;
    std::map<std::pair<std::string, std::string>, std::unique_ptr<KeyRecord>> records_;

    std::mutex subs_mutex_;
    std::vector<std::weak_ptr<Subscription>> subs_;
};

} // namespace maestro
