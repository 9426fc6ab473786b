/**************************************************************************
 * capacity.cpp
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

#include "muxstream/capacity.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "muxstream/error.hpp"

namespace muxstream::capacity {

namespace {

Rational cross(const RatePair& x, const RatePair& y)
{
    return x.rv * y.ru - x.ru * y.rv;
}

// Vertices of {a Rv + b Ru <= c} together with Rv, Ru >= 0: every pairwise
// boundary intersection that satisfies all half-planes.
std::vector<RatePair> polygon(const std::vector<Constraint>& constraints)
{
    std::vector<Constraint> all = constraints;
    all.push_back({-1, 0, 0});
    all.push_back({0, -1, 0});

    std::vector<RatePair> points;
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const auto& p = all[i];
            const auto& q = all[j];
            const Rational det = p.a * q.b - p.b * q.a;
            if (det == Rational(0)) {
                continue;
            }
            const RatePair x{(p.c * q.b - p.b * q.c) / det, (p.a * q.c - p.c * q.a) / det};
            const bool inside = std::all_of(all.begin(), all.end(),
                                            [&](const Constraint& k) { return k.a * x.rv + k.b * x.ru <= k.c; });
            if (inside && std::find(points.begin(), points.end(), x) == points.end()) {
                points.push_back(x);
            }
        }
    }
    // The origin is always a vertex; the rest sort by angle around it.
    const RatePair origin{0, 0};
    std::sort(points.begin(), points.end(), [&](const RatePair& x, const RatePair& y) {
        if (x == origin || y == origin) {
            return x == origin && !(y == origin);
        }
        return cross(x, y) > 0;
    });
    return points;
}

std::string term(const Rational& coeff, std::string_view name)
{
    if (coeff == Rational(1)) {
        return std::string(name);
    }
    if (coeff.denominator() == 1) {
        return std::to_string(coeff.numerator()) + "*" + std::string(name);
    }
    return "(" + muxstream::to_string(coeff) + ")*" + std::string(name);
}

std::string decimal(const Rational& r)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", to_double(r));
    return buf;
}

} // namespace

Rational c_single(int t, int b)
{
    if (b < 0 || t < b || t + b == 0) {
        throw RegimeError("C(T, B) needs T >= B >= 0, not both zero; got T=" + std::to_string(t) + ", B="
                          + std::to_string(b));
    }
    return {t, t + b};
}

std::string_view to_string(CaseTag tag)
{
    switch (tag) {
    case CaseTag::interior_case:
        return "interior_case";
    case CaseTag::main_case:
        return "main_case";
    case CaseTag::degenerate_single:
        return "degenerate_single";
    }
    return "";
}

CapacityRegion region(int tv, int tu, int b)
{
    if (tu < 0 || b < 0 || tv < tu) {
        throw RegimeError("region needs Tv >= Tu >= 0 and B >= 0; got Tv=" + std::to_string(tv) + ", Tu="
                          + std::to_string(tu) + ", B=" + std::to_string(b));
    }
    if (tv < b) {
        throw RegimeError("Tv=" + std::to_string(tv) + " < B=" + std::to_string(b)
                          + ": no positive rate is achievable (invalid regime)");
    }
    CapacityRegion r;
    r.tv = tv;
    r.tu = tu;
    r.b = b;
    if (b == 0) {
        r.tag = CaseTag::degenerate_single;
        r.degenerate = "noiseless";
        r.constraints = {{1, 1, 1}};
    } else if (tu < b) {
        // The urgent stream cannot carry anything.
        r.tag = CaseTag::degenerate_single;
        r.degenerate = "tu_below_b";
        r.constraints = {{0, 1, 0}, {1, 0, c_single(tv, b)}};
    } else if (tu == tv) {
        r.tag = CaseTag::degenerate_single;
        r.degenerate = "tu_equals_tv";
        r.constraints = {{1, 1, c_single(tu, b)}};
    } else if (tv <= tu + b) {
        r.tag = CaseTag::interior_case;
        r.constraints = {{1 + Rational(tu + b - tv, tu), Rational(tu + b, tu), 1}, {1, 1, c_single(tv, b)}};
    } else {
        r.tag = CaseTag::main_case;
        r.constraints = {{1, Rational(tu + b, tu), 1}, {1, 1, c_single(tv, b)}};
    }
    r.vertices = polygon(r.constraints);
    return r;
}

Containment contains(const CapacityRegion& region, const RatePair& p)
{
    Containment out;
    out.nonnegative = p.rv >= 0 && p.ru >= 0;
    for (std::size_t i = 0; i < region.constraints.size(); ++i) {
        const auto& k = region.constraints[i];
        const Rational slack = k.c - (k.a * p.rv + k.b * p.ru);
        out.slack.push_back(slack);
        if (slack < 0 && !out.violated) {
            out.violated = i;
        }
    }
    out.contained = out.nonnegative && !out.violated;
    return out;
}

RatePair corner(int tv, int tu, int b)
{
    if (b < 1 || tu < b || tv <= tu + b) {
        throw RegimeError("the corner point needs Tv > Tu + B and Tu >= B >= 1");
    }
    return {Rational(tv - tu, tv + b), Rational(tu, tv + b)};
}

std::string describe(const Constraint& c)
{
    std::string lhs;
    if (c.a != Rational(0)) {
        lhs = term(c.a, "Rv");
    }
    if (c.b != Rational(0)) {
        lhs += (lhs.empty() ? "" : " + ") + term(c.b, "Ru");
    }
    const std::string rhs = c.c.denominator() == 1 ? std::to_string(c.c.numerator()) : muxstream::to_string(c.c);
    return lhs + " <= " + rhs;
}

std::string region_json(const CapacityRegion& region)
{
    nlohmann::ordered_json j;
    j["tv"] = region.tv;
    j["tu"] = region.tu;
    j["b"] = region.b;
    j["case_tag"] = to_string(region.tag);
    if (!region.degenerate.empty()) {
        j["degenerate"] = region.degenerate;
    }
    j["constraints"] = nlohmann::ordered_json::array();
    for (const auto& c : region.constraints) {
        j["constraints"].push_back(nlohmann::ordered_json::array({muxstream::to_string(c.a), muxstream::to_string(c.b), muxstream::to_string(c.c)}));
    }
    j["vertices"] = nlohmann::ordered_json::array();
    for (const auto& v : region.vertices) {
        j["vertices"].push_back(nlohmann::ordered_json::array({muxstream::to_string(v.rv), muxstream::to_string(v.ru)}));
    }
    return j.dump(2) + "\n";
}

std::string region_csv(const CapacityRegion& region)
{
    std::string out = "index,rv_num,rv_den,ru_num,ru_den,rv,ru\n";
    for (std::size_t i = 0; i < region.vertices.size(); ++i) {
        const auto& v = region.vertices[i];
        out += std::to_string(i) + "," + std::to_string(v.rv.numerator()) + "," + std::to_string(v.rv.denominator())
               + "," + std::to_string(v.ru.numerator()) + "," + std::to_string(v.ru.denominator()) + ","
               + decimal(v.rv) + "," + decimal(v.ru) + "\n";
    }
    return out;
}

} // namespace muxstream::capacity
