/**************************************************************************
 * descriptor.cpp
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

#include "muxstream/descriptor.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "muxstream/error.hpp"

namespace muxstream::descriptor {

namespace {

using codes::CodeParams;
using gf::Element;
using gf::Field;
using gf::Matrix;
using nlohmann::json;
using nlohmann::ordered_json;

int digits_for(std::uint32_t order)
{
    return order <= 256 ? 2 : 4;
}

std::string hex(Element e, int digits)
{
    char buf[8];
    std::snprintf(buf, sizeof buf, "%0*x", digits, static_cast<unsigned>(e));
    return buf;
}

std::string_view kind_name(const StreamingCode& code)
{
    switch (code.kind()) {
    case StreamingCode::Kind::block:
        return codes::to_string(code.block().kind());
    case StreamingCode::Kind::concatenation:
        return "concatenation";
    case StreamingCode::Kind::time_share:
        return "time_share";
    }
    return "";
}

template <typename T>
T get(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw FormatError(std::string("descriptor is missing \"") + key + "\"");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("descriptor field \"") + key + "\" has the wrong type");
    }
}

std::int64_t get_int64(const json& j, const char* key)
{
    const auto v = get<json>(j, key);
    if (!v.is_number_integer()) {
        throw FormatError(std::string("descriptor field \"") + key + "\" must be an integer");
    }
    return v.get<std::int64_t>();
}

int get_int(const json& j, const char* key)
{
    const std::int64_t v = get_int64(j, key);
    if (v < -(1 << 30) || v > (1 << 30)) {
        throw FormatError(std::string("descriptor field \"") + key + "\" is out of range");
    }
    return static_cast<int>(v);
}

Field read_field(const json& j)
{
    const json f = get<json>(j, "field");
    const auto order = get_int64(f, "order");
    const auto reduction = get_int64(f, "reduction");
    if (order < 2 || order > gf::kMaxOrder || reduction < 0 || reduction > 0xFFFFFFFF) {
        throw FormatError("descriptor field order/reduction out of range");
    }
    return Field::make(static_cast<std::uint32_t>(order), static_cast<std::uint32_t>(reduction));
}

CodeParams read_params(const json& j)
{
    return {get_int(j, "tv"), get_int(j, "tu"), get_int(j, "b"), get_int(j, "n"), get_int(j, "kv"), get_int(j, "ku")};
}

Matrix read_generator(const json& j, const CodeParams& p, const Field& f)
{
    const auto entries = get<std::vector<std::string>>(j, "generator");
    if (p.k() < 0 || p.n < 0 || entries.size() != static_cast<std::size_t>(p.k()) * p.n) {
        throw FormatError("generator has " + std::to_string(entries.size()) + " entries, expected k*n");
    }
    const int digits = digits_for(f.order());
    Matrix g(p.k(), p.n);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string& e = entries[i];
        Element value = 0;
        auto [ptr, ec] = std::from_chars(e.data(), e.data() + e.size(), value, 16);
        if (static_cast<int>(e.size()) != digits || ec != std::errc{} || ptr != e.data() + e.size()
            || !f.contains(value)) {
            throw FormatError("bad generator entry '" + e + "'");
        }
        g.at(i / p.n, i % p.n) = value;
    }
    return g;
}

} // namespace

ordered_json to_json(const StreamingCode& code)
{
    const CodeParams& p = code.params();
    ordered_json j;
    j["kind"] = kind_name(code);
    j["field"] = {{"order", code.field().order()}, {"reduction", code.field().reduction()}};
    j["tv"] = p.tv;
    j["tu"] = p.tu;
    j["b"] = p.b;
    j["n"] = p.n;
    j["kv"] = p.kv;
    j["ku"] = p.ku;
    switch (code.kind()) {
    case StreamingCode::Kind::block: {
        const int digits = digits_for(code.field().order());
        ordered_json g = ordered_json::array();
        for (Element e : code.block().generator().data()) {
            g.push_back(hex(e, digits));
        }
        j["generator"] = std::move(g);
        break;
    }
    case StreamingCode::Kind::concatenation:
        j["copies"] = code.copies();
        j["base"] = to_json(code.base());
        break;
    case StreamingCode::Kind::time_share:
        j["parts"] = ordered_json::array({to_json(code.first()), to_json(code.second())});
        break;
    }
    return j;
}

StreamingCode from_json(const json& j)
{
    const std::string kind = get<std::string>(j, "kind");
    const Field field = read_field(j);
    const CodeParams params = read_params(j);

    StreamingCode code = [&] {
        if (kind == "concatenation") {
            const int copies = get_int(j, "copies");
            if (copies < 2) {
                throw FormatError("concatenation needs at least two copies");
            }
            return stream::concatenate(from_json(get<json>(j, "base")), copies);
        }
        if (kind == "time_share") {
            const json parts = get<json>(j, "parts");
            if (!parts.is_array() || parts.size() != 2) {
                throw FormatError("time_share needs exactly two parts");
            }
            return stream::time_share(from_json(parts[0]), from_json(parts[1]));
        }
        if (params.n < 1 || params.n > codes::kMaxBlockLength) {
            throw FormatError("block length must lie in [1, " + std::to_string(codes::kMaxBlockLength) + "]");
        }
        Matrix g = read_generator(j, params, field);
        return stream::to_streaming(codes::restore_block_code(codes::parse_code_kind(kind), params, field, g));
    }();
    if (code.kind() != StreamingCode::Kind::block && !(code.params() == params)) {
        throw FormatError("stored parameters of the " + kind + " disagree with its parts");
    }
    if (!(code.field() == field)) {
        throw FormatError("stored field of the " + kind + " disagrees with its parts");
    }
    return code;
}

std::string serialize(const StreamingCode& code)
{
    return to_json(code).dump(2) + "\n";
}

StreamingCode parse(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("descriptor is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

StreamingCode load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot read descriptor " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str());
}

void save(const std::filesystem::path& path, const StreamingCode& code)
{
    std::ofstream out(path, std::ios::binary);
    out << serialize(code);
    if (!out) {
        throw FormatError("cannot write descriptor " + path.string());
    }
}

std::string sha256_hex(std::string_view bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 computation failed");
    }
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex(digest[i], 2);
    }
    return out;
}

std::string code_hash(const StreamingCode& code)
{
    return sha256_hex(serialize(code));
}

} // namespace muxstream::descriptor
