// SPDX-License-Identifier: Apache-2.0
#include "maestro/core/serialize.hpp"

#include "maestro/error.hpp"

namespace maestro {

using json = nlohmann::json;

json to_json(const BlobRef& ref)
{
    return {{"digest", ref.digest}, {"media_type", ref.media_type}, {"length", ref.length}};
}

json to_json(const ModalPayload& p)
{
    json j;
    j["kind"] = to_string(p.kind());
    j["media_type"] = p.media_type();
    if (p.is_text())
        j["text"] = p.text();
    else
        j["blob"] = to_json(p.blob_ref());
    if (p.attachment())
        j["attachment"] = to_json(*p.attachment());
    return j;
}

json to_json(const ChatMessage& m)
{
    json j;
    j["id"] = m.id;
    j["session_id"] = m.session_id;
    j["author"] = {{"role", to_string(m.author.role)}, {"name", m.author.name}};
    j["payloads"] = json::array();
    for (const auto& p : m.payloads)
        j["payloads"].push_back(to_json(p));
    j["seq"] = m.seq;
    j["created_at"] = m.created_at;
    j["degraded"] = m.degraded;
    if (m.source)
        j["source"] = to_string(*m.source);
    return j;
}

BlobRef blob_ref_from_json(const json& j)
{
    return {j.at("digest").get<std::string>(), j.at("media_type").get<std::string>(),
            j.at("length").get<std::uint64_t>()};
}

ModalPayload payload_from_json(const json& j)
{
    auto kind = modality_from_string(j.at("kind").get<std::string>());
    if (!kind)
        throw Error(Errc::InvalidRequest, "unknown payload kind");
    auto p = *kind == Modality::Text
                 ? ModalPayload::text(j.at("text").get<std::string>(), j.value("media_type", "text/plain"))
                 : ModalPayload::blob(*kind, blob_ref_from_json(j.at("blob")));
    if (j.contains("attachment"))
        p = p.with_attachment(blob_ref_from_json(j.at("attachment")));
    return p;
}

ChatMessage message_from_json(const json& j)
{
    ChatMessage m;
    m.id = j.value("id", "");
    m.session_id = j.value("session_id", "");
    const auto& a = j.at("author");
    auto role = role_from_string(a.at("role").get<std::string>());
    if (!role)
        throw Error(Errc::InvalidRequest, "unknown author role");
    m.author = Author {*role, a.value("name", "")};
    for (const auto& p : j.at("payloads"))
        m.payloads.push_back(payload_from_json(p));
    m.seq = j.value("seq", std::uint64_t {0});
    m.created_at = j.value("created_at", "");
    m.degraded = j.value("degraded", false);
    if (auto s = j.value("source", ""); !s.empty())
        m.source = s == "rag" ? AnswerSource::Rag : AnswerSource::Web;
    return m;
}

} // namespace maestro
