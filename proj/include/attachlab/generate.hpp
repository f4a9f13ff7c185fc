// generate.hpp — the two attachment processes and the colour projection.
//
// uniform:      vertex 1 receives m self-loops; every later vertex v draws m
//               targets independently and uniformly (with repetition) from
//               [v-1].
// preferential: the m-out graph is the m-block collapse of the degree-driven
//               single-edge process run for m*n steps. Step t picks an
//               endpoint with probability deg/(2t-1) and itself with
//               probability 1/(2t-1). Implemented with a flat endpoint-slot
//               array: all 2(t-1) endpoints of earlier edges are stored once,
//               a uniform draw from 2t-1 slots either copies a stored
//               endpoint or takes the new half-edge (self-loop). O(1) per
//               edge, and exactly the stated distribution because a vertex
//               owns deg-many slots.
//
// When a blue/red split is requested, the first m1 edges of every vertex are
// blue and the last m2 red. Identical GenParams give bit-identical graphs.
#pragma once

#include <cstdint>
#include <stdexcept>

#include "core.hpp"
#include "rng.hpp"

namespace attachlab {

struct GenParams {
    Model model = Model::uniform;
    std::uint32_t n = 1;
    std::uint32_t m1 = 1;
    std::uint32_t m2 = 0;
    bool coloured = false;
    std::uint64_t seed = 0;

    std::uint32_t m() const { return m1 + m2; }
};

namespace detail {

inline void check_gen_params(const GenParams& p) {
    if (p.n < 1) throw std::invalid_argument("generate: n must be >= 1");
    if (p.m() < 1) throw std::invalid_argument("generate: m must be >= 1");
    if (!p.coloured && p.m2 != 0)
        throw std::invalid_argument("generate: m2 > 0 requires coloured records");
    if (static_cast<std::uint64_t>(p.m()) * p.n > 0x7FFFFFFFull)
        throw std::invalid_argument("generate: m*n exceeds the 31-bit step budget");
}

inline Colour colour_of(const GenParams& p, std::uint32_t ordinal) {
    if (!p.coloured) return Colour::plain;
    return ordinal <= p.m1 ? Colour::blue : Colour::red;
}

} // namespace detail

inline AttachGraph gen_uniform(const GenParams& p) {
    detail::check_gen_params(p);
    AttachGraph g;
    g.model = Model::uniform;
    g.n = p.n;
    g.m1 = p.coloured ? p.m1 : p.m();
    g.m2 = p.coloured ? p.m2 : 0;
    g.coloured = p.coloured;
    g.seed = p.seed;
    g.records.reserve(static_cast<std::size_t>(p.m()) * p.n);
    Rng rng(p.seed);
    const std::uint32_t m = p.m();
    for (std::uint32_t v = 1; v <= p.n; ++v)
        for (std::uint32_t o = 1; o <= m; ++o) {
            const std::uint32_t target = v == 1 ? 1 : rng.bounded(v - 1) + 1;
            g.records.push_back({v, target, static_cast<std::uint16_t>(o), detail::colour_of(p, o)});
        }
    return g;
}

inline AttachGraph gen_preferential(const GenParams& p) {
    detail::check_gen_params(p);
    AttachGraph g;
    g.model = Model::preferential;
    g.n = p.n;
    g.m1 = p.coloured ? p.m1 : p.m();
    g.m2 = p.coloured ? p.m2 : 0;
    g.coloured = p.coloured;
    g.seed = p.seed;
    const std::uint32_t m = p.m();
    const std::uint32_t steps = m * p.n;
    g.records.reserve(steps);
    Rng rng(p.seed);
    std::vector<std::uint32_t> slots; // endpoints (fine-grained vertex ids) of all edges so far
    slots.reserve(2ull * steps);
    for (std::uint32_t t = 1; t <= steps; ++t) {
        const std::uint32_t draw = rng.bounded(2 * t - 1);
        const std::uint32_t endpoint = draw == 2 * t - 2 ? t : slots[draw];
        slots.push_back(t);
        slots.push_back(endpoint);
        const std::uint32_t stem = (t + m - 1) / m;
        const std::uint32_t ordinal = t - (stem - 1) * m;
        g.records.push_back({stem, (endpoint + m - 1) / m, static_cast<std::uint16_t>(ordinal),
                             detail::colour_of(p, ordinal)});
    }
    return g;
}

inline AttachGraph generate(const GenParams& p) {
    return p.model == Model::uniform ? gen_uniform(p) : gen_preferential(p);
}

// Projection onto one colour class. sigma=1 keeps the blue records (result
// split m1/0), sigma=2 keeps the red records renumbered 1..m2 (split 0/m2).
inline AttachGraph project(const AttachGraph& g, int sigma) {
    if (!g.coloured) throw std::invalid_argument("project: graph carries no colour split");
    if (sigma != 1 && sigma != 2) throw std::invalid_argument("project: sigma must be 1 or 2");
    AttachGraph out;
    out.model = g.model;
    out.n = g.n;
    out.coloured = true;
    out.seed = g.seed;
    if (sigma == 1) {
        out.m1 = g.m1;
        out.m2 = 0;
    } else {
        out.m1 = 0;
        out.m2 = g.m2;
    }
    const Colour keep = sigma == 1 ? Colour::blue : Colour::red;
    out.records.reserve(static_cast<std::size_t>(out.m()) * out.n);
    for (const EdgeRecord& r : g.records)
        if (r.colour == keep) {
            EdgeRecord c = r;
            if (sigma == 2) c.ordinal = static_cast<std::uint16_t>(r.ordinal - g.m1);
            out.records.push_back(c);
        }
    return out;
}

} // namespace attachlab
