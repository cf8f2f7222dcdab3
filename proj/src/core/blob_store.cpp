// SPDX-License-Identifier: Apache-2.0
#include "maestro/core/blob_store.hpp"

#include <mutex>

namespace maestro {

BlobRef BlobStore::put(Bytes bytes, std::string media_type)
{
    BlobRef ref {sha256_hex(bytes), std::move(media_type), bytes.size()};
    std::unique_lock lock(mutex_);
    auto [it, inserted] = blobs_.try_emplace(ref.digest);
    if (inserted)
        it->second = Entry {ref, std::make_shared<Bytes>(std::move(bytes))};
    return ref;
}

std::optional<BlobRef> BlobStore::find(std::string_view digest) const
{
    std::shared_lock lock(mutex_);
    auto it = blobs_.find(digest);
    if (it == blobs_.end())
        return std::nullopt;
    return it->second.ref;
}

std::shared_ptr<const Bytes> BlobStore::get(std::string_view digest) const
{
    std::shared_lock lock(mutex_);
    auto it = blobs_.find(digest);
    return it == blobs_.end() ? nullptr : it->second.bytes;
}

bool BlobStore::contains(std::string_view digest) const
{
    std::shared_lock lock(mutex_);
    return blobs_.contains(digest);
}

bool BlobStore::verify(std::string_view digest) const
{
    auto bytes = get(digest);
    return bytes && sha256_hex(*bytes) == digest;
}

std::size_t BlobStore::size() const
{
    std::shared_lock lock(mutex_);
    return blobs_.size();
}

} // namespace maestro
