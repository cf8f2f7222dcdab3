// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace maestro {

enum class Modality { Text, Image, Audio, Video };

std::string_view to_string(Modality m);
std::optional<Modality> modality_from_string(std::string_view s);
/// Maps an IANA media type ("image/png") onto its modality; nullopt when unsupported.
std::optional<Modality> modality_for_media_type(std::string_view media_type);

/// Content-addressed reference to bytes held in a BlobStore.
struct BlobRef {
    std::string digest; // lowercase hex SHA-256
    std::string media_type;
    std::uint64_t length = 0;

    bool operator==(const BlobRef&) const = default;
};

/// One typed unit of content. Text payloads carry inline UTF-8; everything
/// else carries exactly one blob reference.
class ModalPayload {
public:
    static ModalPayload text(std::string utf8, std::string media_type = "text/plain");
    static ModalPayload blob(Modality kind, BlobRef ref);

    Modality kind() const noexcept { return kind_; }
    const std::string& media_type() const noexcept { return media_type_; }

    bool is_text() const noexcept { return kind_ == Modality::Text; }
    const std::string& text() const; // throws unless is_text()
    const BlobRef& blob_ref() const; // throws if is_text()

    /// Original payload this one was derived from (e.g. the audio behind a transcript).
    const std::optional<BlobRef>& attachment() const noexcept { return attachment_; }
    ModalPayload with_attachment(BlobRef ref) const;

    bool operator==(const ModalPayload&) const = default;

private:
    ModalPayload() = default;

    Modality kind_ = Modality::Text;
    std::variant<std::string, BlobRef> content_;
    std::string media_type_;
    std::optional<BlobRef> attachment_;
};

} // namespace maestro
