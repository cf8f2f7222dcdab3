// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/digest.hpp"
#include "maestro/core/payload.hpp"

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

namespace maestro {

/// In-memory content-addressed byte store keyed by SHA-256.
class BlobStore {
public:
    BlobRef put(Bytes bytes, std::string media_type);
    BlobRef put(std::string_view bytes, std::string media_type) { return put(to_bytes(bytes), std::move(media_type)); }

    std::optional<BlobRef> find(std::string_view digest) const;
    std::shared_ptr<const Bytes> get(std::string_view digest) const;
    bool contains(std::string_view digest) const;

    /// Recomputes the digest over the stored bytes.
    bool verify(std::string_view digest) const;

    std::size_t size() const;

private:
    struct Entry {
        BlobRef ref;
        std::shared_ptr<Bytes> bytes;
    };

    mutable std::shared_mutex mutex_;
    std::map<std::string, Entry, std::less<>> blobs_;
};

} // namespace maestro
