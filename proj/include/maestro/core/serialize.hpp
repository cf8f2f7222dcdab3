// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/message.hpp"

#include <nlohmann/json.hpp>

namespace maestro {

nlohmann::json to_json(const BlobRef& ref);
nlohmann::json to_json(const ModalPayload& p);
nlohmann::json to_json(const ChatMessage& m);

BlobRef blob_ref_from_json(const nlohmann::json& j);
ModalPayload payload_from_json(const nlohmann::json& j);
ChatMessage message_from_json(const nlohmann::json& j);

} // namespace maestro
