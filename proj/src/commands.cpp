/**************************************************************************
 * commands.cpp
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

#include "muxstream/commands.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "muxstream/channel.hpp"
#include "muxstream/descriptor.hpp"
#include "muxstream/error.hpp"
#include "muxstream/verify.hpp"

namespace muxstream::cli {

namespace {

using capacity::RatePair;
using gf::Element;
using nlohmann::ordered_json;
using stream::StreamingCode;

std::string pair_text(const RatePair& p)
{
    return "(" + to_string(p.rv) + ", " + to_string(p.ru) + ")";
}

std::string code_rates(const StreamingCode& c)
{
    return pair_text({c.params().rate_v(), c.params().rate_u()});
}

std::string regime_text(int tv, int tu, int b)
{
    return "Tv=" + std::to_string(tv) + ", Tu=" + std::to_string(tu) + ", B=" + std::to_string(b);
}

std::int64_t saturating_length(std::int64_t a, std::int64_t b)
{
    const std::int64_t cap = std::numeric_limits<std::int64_t>::max() / 4;
    if (a > cap / std::max<std::int64_t>(b, 1)) {
        return cap;
    }
    return 2 * a * b;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view what)
{
    int base = 10;
    if (text.starts_with("0x") || text.starts_with("0X")) {
        text.remove_prefix(2);
        base = 16;
    }
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, base);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw FormatError("bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

ordered_json invocation(std::string_view command, const std::vector<std::string>& argv)
{
    return {{"command", command}, {"argv", argv}};
}

// Runs a command body, mapping library errors to the usage exit code.
template <typename F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace

Design design_code(int tv, int tu, int b, const gf::Field& field, const std::optional<RatePair>& target)
{
    const capacity::CapacityRegion region = capacity::region(tv, tu, b);
    if (target) {
        const capacity::Containment in = capacity::contains(region, *target);
        if (!in.nonnegative) {
            throw RegimeError("target " + pair_text(*target) + " violates Rv >= 0, Ru >= 0");
        }
        if (in.violated) {
            std::string broken;
            for (std::size_t i = 0; i < in.slack.size(); ++i) {
                if (in.slack[i] < 0) {
                    broken += (broken.empty() ? "" : " and ") + capacity::describe(region.constraints[i]);
                }
            }
            throw RegimeError("target " + pair_text(*target) + " violates " + broken + " of the "
                              + std::string(capacity::to_string(region.tag)) + " region for "
                              + regime_text(tv, tu, b));
        }
    }
    if (region.tag != capacity::CaseTag::main_case) {
        std::string name(capacity::to_string(region.tag));
        if (!region.degenerate.empty()) {
            name += " (" + region.degenerate + ")";
        }
        throw RegimeError(regime_text(tv, tu, b) + " falls in the " + name
                          + " case; codes are constructed only for Tv > Tu + B and Tu >= B >= 1");
    }

    const StreamingCode corner = stream::to_streaming(codes::build_multiplexed(tv, tu, b, field));
    if (!target) {
        return {corner, "corner code " + code_rates(corner)};
    }

    // Pick the boundary segment that can dominate the target, then the
    // range of corner weights that do so along it.
    const RatePair k = capacity::corner(tv, tu, b);
    const RatePair t = *target;
    const bool low = t.ru <= k.ru;
    Rational lo;
    Rational hi;
    StreamingCode e0 = corner;
    std::string e0_name;
    if (low) {
        const Rational a = capacity::c_single(tv, b);
        e0 = stream::to_streaming(codes::build_single_stream(tv, b, field));
        e0_name = "Tv-axis code";
        lo = t.ru / k.ru;
        hi = (a - t.rv) / (a - k.rv);
    } else {
        const Rational c = capacity::c_single(tu, b);
        e0 = stream::to_streaming(codes::build_single_stream(tu, b, field, true));
        e0_name = "Tu-axis code";
        lo = t.rv / k.rv;
        hi = (c - t.ru) / (c - k.ru);
    }
    lo = std::max(lo, Rational(0));
    hi = std::min(hi, Rational(1));

    // Smallest dyadic m / 2^d in [lo, hi]; the weight is on the corner.
    int depth = -1;
    std::int64_t m = 0;
    for (int d = 0; d <= 40; ++d) {
        const std::int64_t scale = std::int64_t{1} << d;
        const Rational scaled = lo * Rational(scale);
        std::int64_t ceil = scaled.numerator() / scaled.denominator();
        if (ceil * scaled.denominator() < scaled.numerator()) {
            ++ceil;
        }
        if (Rational(ceil, scale) <= hi) {
            depth = d;
            m = ceil;
            break;
        }
    }
    if (depth < 0) {
        throw RegimeError("target " + pair_text(t) + " is not reachable with dyadic time sharing");
    }

    // R(m, d) = midpoint(E_x, R(m - x 2^(d-1), d - 1)) with E1 the corner,
    // R(0, d) = E0 and R(1, 0) = E1.
    std::int64_t length = 0;
    {
        std::int64_t mm = m;
        std::vector<int> xs;
        for (int d = depth; d >= 1 && mm > 0; --d) {
            const std::int64_t half = std::int64_t{1} << (d - 1);
            xs.push_back(mm >= half ? 1 : 0);
            mm -= mm >= half ? half : 0;
        }
        length = mm > 0 ? corner.params().n : e0.params().n;
        for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
            length = saturating_length(*it ? corner.params().n : e0.params().n, length);
        }
    }
    if (length > kMaxDesignLength) {
        throw RegimeError("target " + pair_text(t) + " needs weight " + std::to_string(m) + "/2^"
                          + std::to_string(depth) + ", giving block length " + std::to_string(length)
                          + " beyond the supported " + std::to_string(kMaxDesignLength));
    }

    auto build = [&](auto&& self, std::int64_t mm, int d) -> StreamingCode {
        if (mm == 0) {
            return e0;
        }
        if (d == 0) {
            return corner;
        }
        const std::int64_t half = std::int64_t{1} << (d - 1);
        const bool x = mm >= half;
        return stream::time_share(x ? corner : e0, self(self, mm - (x ? half : 0), d - 1));
    };
    const StreamingCode code = build(build, m, depth);
    return {code, "time share of the corner code and the " + e0_name + " with weight " + std::to_string(m) + "/"
                      + std::to_string(std::int64_t{1} << depth) + " on the corner, rates " + code_rates(code)};
}

gf::Field parse_field(std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw FormatError("field must be ORDER:POLY, got '" + std::string(text) + "'");
    }
    const auto order = parse_unsigned(text.substr(0, colon), "field order");
    const auto poly = parse_unsigned(text.substr(colon + 1), "field reduction");
    if (order > gf::kMaxOrder || poly > 0xFFFFFFFFu) {
        throw FieldError("field order or reduction out of range");
    }
    return gf::Field::make(static_cast<std::uint32_t>(order), static_cast<std::uint32_t>(poly));
}

Rational parse_rate(std::string_view text)
{
    auto integer = [&](std::string_view s) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || v < 0 || v > (std::int64_t{1} << 40)) {
            throw FormatError("bad rate '" + std::string(text) + "'");
        }
        return v;
    };
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto den = integer(text.substr(slash + 1));
        if (den == 0) {
            throw FormatError("rate '" + std::string(text) + "' has a zero denominator");
        }
        return {integer(text.substr(0, slash)), den};
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto frac = text.substr(dot + 1);
        if (frac.size() > 12) {
            throw FormatError("rate '" + std::string(text) + "' has too many decimals");
        }
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            scale *= 10;
        }
        const auto whole = dot == 0 ? 0 : integer(text.substr(0, dot));
        return Rational(whole) + Rational(frac.empty() ? 0 : integer(frac), scale);
    }
    return {integer(text), 1};
}

int cmd_design(const DesignOptions& opt, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (opt.target_rv.has_value() != opt.target_ru.has_value()) {
            throw FormatError("--target-rv and --target-ru must be given together");
        }
        const gf::Field field = opt.field ? parse_field(*opt.field) : gf::Field::gf256();
        std::optional<RatePair> target;
        if (opt.target_rv) {
            target = RatePair{parse_rate(*opt.target_rv), parse_rate(*opt.target_ru)};
        }
        const Design d = design_code(opt.tv, opt.tu, opt.b, field, target);
        out << descriptor::serialize(d.code);
        err << "design: " << regime_text(opt.tv, opt.tu, opt.b) << ", GF(" << field.order() << "): "
            << d.construction << ", n=" << d.code.params().n << "\n";
        return kExitOk;
    });
}

int cmd_verify(const VerifyOptions& opt, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (opt.burst < 0 || (opt.horizon && *opt.horizon < 0)) {
            throw FormatError("--burst and --horizon must be non-negative");
        }
        const StreamingCode code = descriptor::load(opt.code);
        const verify::VerificationReport r = verify::verify_code(code, opt.burst, opt.horizon, opt.workers);
        ordered_json j = invocation("verify", argv);
        j["code"] = opt.code.string();
        j.update(verify::to_json(r));
        out << j.dump(2) << "\n";
        err << verify::summary(r);
        return r.passed() ? kExitOk : kExitVerifyFailed;
    });
}

int cmd_region(const RegionOptions& opt, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (opt.format != "json" && opt.format != "csv") {
            throw FormatError("--format must be json or csv, got '" + opt.format + "'");
        }
        const capacity::CapacityRegion r = capacity::region(opt.tv, opt.tu, opt.b);
        out << (opt.format == "json" ? capacity::region_json(r) : capacity::region_csv(r));
        err << "region: " << regime_text(opt.tv, opt.tu, opt.b) << ": " << capacity::to_string(r.tag)
            << (r.degenerate.empty() ? "" : " (" + r.degenerate + ")") << ", " << r.vertices.size()
            << " vertices\n";
        for (const auto& c : r.constraints) {
            err << "  " << capacity::describe(c) << "\n";
        }
        return kExitOk;
    });
}

int cmd_simulate(const SimulateOptions& opt, const std::vector<std::string>& argv, std::ostream& out,
                 std::ostream& err)
{
    return guarded(err, [&] {
        const StreamingCode code = descriptor::load(opt.code);
        const channel::PatternSpec pattern = channel::parse_pattern(opt.pattern);
        const verify::SimulationReport r = verify::simulate(code, pattern, opt.slots, opt.seed);
        ordered_json j = invocation("simulate", argv);
        j["code"] = opt.code.string();
        j["code_hash"] = descriptor::code_hash(code);
        j["params"] = {{"tv", code.params().tv}, {"tu", code.params().tu}, {"b", code.params().b},
                       {"n", code.params().n},   {"kv", code.params().kv}, {"ku", code.params().ku}};
        j.update(verify::to_json(r));
        out << j.dump(2) << "\n";
        err << verify::summary(r);
        return r.v.wrong + r.u.wrong == 0 ? kExitOk : kExitVerifyFailed;
    });
}

int cmd_encode(const std::filesystem::path& path, std::istream& in, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const StreamingCode code = descriptor::load(path);
        const auto& p = code.params();
        const auto order = code.field().order();
        stream::StreamEncoder enc(code);
        std::string line;
        while (std::getline(in, line)) {
            const auto symbols = channel::parse_packet(line, p.kv + p.ku, order);
            if (!symbols) {
                throw FormatError("source lines cannot be erased");
            }
            stream::SourcePair src{{symbols->begin(), symbols->begin() + p.kv},
                                   {symbols->begin() + p.kv, symbols->end()}};
            const auto packet = enc.push(src);
            out << channel::format_packet(std::span<const Element>(packet), order) << "\n";
        }
        return kExitOk;
    });
}

int cmd_decode(const std::filesystem::path& path, std::istream& in, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const StreamingCode code = descriptor::load(path);
        const auto order = code.field().order();
        stream::StreamDecoder dec(code);
        auto part = [&](char name, const std::optional<std::int64_t>& slot,
                        const std::vector<std::optional<Element>>& est) {
            std::string s(1, name);
            s += ' ';
            if (!slot) {
                return s + "-";
            }
            s += std::to_string(*slot);
            for (const auto& e : est) {
                s += ' ';
                if (e) {
                    const Element one[1] = {*e};
                    s += channel::format_packet(std::span<const Element>(one), order);
                } else {
                    s += '?';
                }
            }
            return s;
        };
        std::string line;
        while (std::getline(in, line)) {
            const auto packet = channel::parse_packet(line, code.params().n, order);
            const stream::Emission e =
                packet ? dec.push(std::span<const Element>(*packet)) : dec.push(std::nullopt);
            out << e.slot << ' ' << part('v', e.v_slot, e.v) << ' ' << part('u', e.u_slot, e.u) << "\n";
        }
        return kExitOk;
    });
}

} // namespace muxstream::cli
