// lowerbound.hpp — structural obstructions in the m = 2 preferential model:
// lonely-vertex classification against an old/young cutoff, the graph H left
// after deleting old non-lonely vertices, sweet cherries (triples that induce
// 3-vertex components of H), the resulting Tutte-style no-perfect-matching
// certificate, and the lonely-triple Hamiltonicity obstruction.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "generate.hpp"
#include "matching.hpp"

namespace attachlab {

namespace detail {

inline void require_pref_m2(const AttachGraph& g, const char* what) {
    if (g.model != Model::preferential || g.m() != 2)
        throw std::invalid_argument(std::string(what) + ": preferential model with m = 2 required");
}

// A vertex is lonely when no later vertex ever attaches to it: no record has
// stem > v and target = v. Self-loops do not disturb loneliness.
inline std::vector<char> lonely_flags(const AttachGraph& g) {
    std::vector<char> lonely(g.n + 1, 1);
    lonely[0] = 0;
    for (const EdgeRecord& r : g.records)
        if (r.stem > r.target) lonely[r.target] = 0;
    return lonely;
}

inline std::uint32_t old_cutoff(std::uint32_t n, double c, const char* what) {
    if (!(c > 0.0) || !(c < 1.0))
        throw std::invalid_argument(std::string(what) + ": c must lie in (0, 1)");
    return static_cast<std::uint32_t>(std::floor(c * static_cast<double>(n)));
}

} // namespace detail

// Counts of the four vertex classes against the old/young cutoff floor(c*n):
// a_n young lonely with two old neighbours, b_n young lonely with exactly one
// old neighbour, c_n old lonely, d_n old non-lonely. A young vertex's "old
// neighbours" are counted over the multiset of its own two attachment
// targets.
struct LonelyStats {
    double c = 0.0;
    std::uint32_t n = 0;
    std::uint32_t a_n = 0;
    std::uint32_t b_n = 0;
    std::uint32_t c_n = 0;
    std::uint32_t d_n = 0;

    std::uint32_t old_count() const { return c_n + d_n; }
};

inline LonelyStats lonely_stats(const AttachGraph& g, double c) {
    detail::require_pref_m2(g, "lonely_stats");
    const std::uint32_t cut = detail::old_cutoff(g.n, c, "lonely_stats");
    const auto lonely = detail::lonely_flags(g);
    LonelyStats st;
    st.c = c;
    st.n = g.n;
    for (std::uint32_t v = 1; v <= g.n; ++v) {
        if (v <= cut) {
            (lonely[v] ? st.c_n : st.d_n) += 1;
            continue;
        }
        if (!lonely[v]) continue;
        const EdgeRecord& r1 = g.records[static_cast<std::size_t>(v - 1) * 2];
        const EdgeRecord& r2 = g.records[static_cast<std::size_t>(v - 1) * 2 + 1];
        const int old_nbrs = (r1.target <= cut) + (r2.target <= cut);
        if (old_nbrs == 2) ++st.a_n;
        else if (old_nbrs == 1) ++st.b_n;
    }
    return st;
}

// G with the old non-lonely vertices deleted, keeping vertex identities: the
// view spans all n labels, but removed vertices carry no edges and are
// excluded from every count derived here.
struct SurvivorGraph {
    SimpleView view;
    std::vector<char> removed; // 1-based flags; removed[v] == 1 iff v was deleted
    std::uint32_t surviving = 0;

    std::uint32_t isolated_count() const {
        std::uint32_t k = 0;
        for (std::uint32_t v = 1; v <= view.n(); ++v)
            if (!removed[v] && view.degree(v) == 0) ++k;
        return k;
    }
};

inline SurvivorGraph build_H(const AttachGraph& g, double c) {
    detail::require_pref_m2(g, "build_H");
    const std::uint32_t cut = detail::old_cutoff(g.n, c, "build_H");
    const auto lonely = detail::lonely_flags(g);
    SurvivorGraph h;
    h.removed.assign(g.n + 1, 0);
    h.surviving = g.n;
    for (std::uint32_t v = 1; v <= cut; ++v)
        if (!lonely[v]) {
            h.removed[v] = 1;
            --h.surviving;
        }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (const EdgeRecord& r : g.records) {
        if (r.loop()) continue;
        if (h.removed[r.stem] || h.removed[r.target]) continue;
        edges.emplace_back(r.stem, r.target);
    }
    h.view = SimpleView::from_edges(g.n, std::move(edges));
    return h;
}

// A sweet cherry: v4 in the last quarter is lonely with its two attachment
// targets being exactly v2 (second quarter) and v3 (third quarter), v4 is the
// unique younger neighbour of both v2 and v3, and both of v2's and v3's own
// targets land in the first quarter. Each witness induces a 3-vertex
// component {v2, v3, v4} of the survivor graph at c = 1/4, and distinct
// witnesses are vertex-disjoint (v4 determines the triple, and a shared v2 or
// v3 would have two younger neighbours).
struct CherryWitness {
    std::uint32_t v2 = 0;
    std::uint32_t v3 = 0;
    std::uint32_t v4 = 0;
};

inline std::vector<CherryWitness> sweet_cherries(const AttachGraph& g) {
    detail::require_pref_m2(g, "sweet_cherries");
    const std::uint32_t n = g.n;
    const std::uint32_t q1 = n / 4;
    const std::uint32_t q2 = n / 2;
    const std::uint32_t q3 = static_cast<std::uint32_t>(3ull * n / 4);
    const auto lonely = detail::lonely_flags(g);

    // distinct younger neighbours per vertex (0 = none, 1 = the single one
    // recorded in `single`, 2 = more than one)
    std::vector<std::uint8_t> younger_count(n + 1, 0);
    std::vector<std::uint32_t> single(n + 1, 0);
    for (const EdgeRecord& r : g.records) {
        if (r.stem <= r.target) continue;
        auto& k = younger_count[r.target];
        if (k == 0) {
            k = 1;
            single[r.target] = r.stem;
        } else if (k == 1 && single[r.target] != r.stem) {
            k = 2;
        }
    }

    auto targets_of = [&](std::uint32_t v) {
        return std::pair{g.records[static_cast<std::size_t>(v - 1) * 2].target,
                         g.records[static_cast<std::size_t>(v - 1) * 2 + 1].target};
    };

    std::vector<CherryWitness> out;
    for (std::uint32_t v4 = q3 + 1; v4 <= n; ++v4) {
        if (!lonely[v4]) continue;
        auto [a, b] = targets_of(v4);
        if (a == b) continue; // two distinct older endpoints required
        // orient as (v2 in second quarter, v3 in third quarter)
        std::uint32_t v2 = std::min(a, b), v3 = std::max(a, b);
        if (!(v2 > q1 && v2 <= q2 && v3 > q2 && v3 <= q3)) continue;
        if (younger_count[v2] != 1 || single[v2] != v4) continue;
        if (younger_count[v3] != 1 || single[v3] != v4) continue;
        auto [p, q] = targets_of(v2);
        if (p > q1 || q > q1) continue;
        auto [r, s] = targets_of(v3);
        if (r > q1 || s > q1) continue;
        out.push_back({v2, v3, v4});
    }
    return out;
}

// Tutte-style certificate: with S = the old non-lonely vertices, the
// components of G - S are exactly the components of the survivor graph; a
// witness exists iff the odd ones outnumber |S| by at least 2. Any returned
// witness is cross-validated against the exact matching solver (capped at
// n <= 2000 for runtime; beyond that the counting direction is a theorem).
inline std::optional<TutteWitness> no_pm_certificate(const AttachGraph& g, double c) {
    detail::require_pref_m2(g, "no_pm_certificate");
    const std::uint32_t cut = detail::old_cutoff(g.n, c, "no_pm_certificate");
    const auto lonely = detail::lonely_flags(g);
    std::vector<std::uint32_t> s;
    for (std::uint32_t v = 1; v <= cut; ++v)
        if (!lonely[v]) s.push_back(v);
    const SimpleView sv = simple_view(g);
    const auto witness = tutte_certificate(sv, s);
    if (witness && g.n <= 2000 && has_perfect_matching(sv))
        throw std::logic_error("no_pm_certificate: witness contradicts exact matching");
    return witness;
}

// Hamiltonicity obstruction: any vertex with three lonely neighbours (each a
// proper neighbour, reached by distinct lonely vertices whose two targets
// differ) blocks every Hamiltonian cycle — each lonely degree-2 vertex forces
// both its edges into the cycle, and three forced edges cannot meet at one
// vertex. Returns how many vertices carry the obstruction.
inline std::uint32_t lonely_triple_count(const AttachGraph& g) {
    detail::require_pref_m2(g, "lonely_triple_count");
    const auto lonely = detail::lonely_flags(g);
    std::vector<std::uint8_t> hits(g.n + 1, 0);
    for (std::uint32_t v = 1; v <= g.n; ++v) {
        if (!lonely[v]) continue;
        const EdgeRecord& r1 = g.records[static_cast<std::size_t>(v - 1) * 2];
        const EdgeRecord& r2 = g.records[static_cast<std::size_t>(v - 1) * 2 + 1];
        if (r1.target == r2.target || r1.loop() || r2.loop()) continue;
        if (hits[r1.target] < 3) ++hits[r1.target];
        if (hits[r2.target] < 3) ++hits[r2.target];
    }
    std::uint32_t count = 0;
    for (std::uint32_t v = 1; v <= g.n; ++v)
        if (hits[v] >= 3) ++count;
    return count;
}

} // namespace attachlab
