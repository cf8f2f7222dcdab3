// SPDX-License-Identifier: Apache-2.0
#include "maestro/core/payload.hpp"

#include "maestro/error.hpp"

namespace maestro {

std::string_view to_string(Modality m)
{
    switch (m) {
    case Modality::Text: return "text";
    case Modality::Image: return "image";
    case Modality::Audio: return "audio";
    case Modality::Video: return "video";
    }
    return "text";
}

std::optional<Modality> modality_from_string(std::string_view s)
{
    if (s == "text") return Modality::Text;
    if (s == "image") return Modality::Image;
    if (s == "audio") return Modality::Audio;
    if (s == "video") return Modality::Video;
    return std::nullopt;
}

std::optional<Modality> modality_for_media_type(std::string_view media_type)
{
    if (media_type.starts_with("image/")) return Modality::Image;
    if (media_type.starts_with("audio/")) return Modality::Audio;
    if (media_type.starts_with("video/")) return Modality::Video;
    if (media_type.starts_with("text/")) return Modality::Text;
    return std::nullopt;
}

ModalPayload ModalPayload::text(std::string utf8, std::string media_type)
{
    ModalPayload p;
    p.kind_ = Modality::Text;
    p.content_ = std::move(utf8);
    p.media_type_ = std::move(media_type);
    return p;
}

ModalPayload ModalPayload::blob(Modality kind, BlobRef ref)
{
    if (kind == Modality::Text)
        throw Error(Errc::InvalidParams, "text payloads cannot reference a blob");
    if (ref.digest.size() != 64)
        throw Error(Errc::InvalidParams, "blob digest must be a hex SHA-256");
    ModalPayload p;
    p.kind_ = kind;
    p.media_type_ = ref.media_type;
    p.content_ = std::move(ref);
    return p;
}

const std::string& ModalPayload::text() const
{
    if (!is_text())
        throw Error(Errc::InvalidParams, "payload is not text");
    return std::get<std::string>(content_);
}

const BlobRef& ModalPayload::blob_ref() const
{
    if (is_text())
        throw Error(Errc::InvalidParams, "text payload has no blob reference");
    return std::get<BlobRef>(content_);
}

ModalPayload ModalPayload::with_attachment(BlobRef ref) const
{
    ModalPayload p = *this;
    p.attachment_ = std::move(ref);
    return p;
}

} // namespace maestro
