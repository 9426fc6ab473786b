/**************************************************************************
 * descriptor.hpp
 *
 * Copyright 2026 The muxstream Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 **************************************************************************/

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "muxstream/streaming.hpp"

namespace muxstream::descriptor {

using stream::StreamingCode;

/**
 * JSON code descriptors.
 *
 * Block codes:
 *   {"kind", "field": {"order", "reduction"}, "tv", "tu", "b", "n", "kv",
 *    "ku", "generator": [row-major hex entries]}
 * with kind single_stream, multiplexed or generic. Entries have two hex
 * digits for fields of order <= 256 and four otherwise.
 *
 * Composites keep their tree: kind "concatenation" adds "copies" and
 * "base"; kind "time_share" adds "parts": [a, b]. Stored parameters must
 * match the ones the tree implies.
 */
nlohmann::ordered_json to_json(const StreamingCode& code);

/// Rebuilds and validates a code. Throws FormatError (or the error of the
/// failed construction step).
StreamingCode from_json(const nlohmann::json& j);

/// Canonical text: to_json(code).dump(2) plus a trailing newline.
std::string serialize(const StreamingCode& code);
StreamingCode parse(std::string_view text);

StreamingCode load(const std::filesystem::path& path);
void save(const std::filesystem::path& path, const StreamingCode& code);

/// Lower-case hex SHA-256 of serialize(code).
std::string code_hash(const StreamingCode& code);

/// Hex SHA-256 of arbitrary bytes.
std::string sha256_hex(std::string_view bytes);

} // namespace muxstream::descriptor
