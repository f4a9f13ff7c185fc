// fixtures.hpp — small named graphs used across the test suite.
#pragma once

#include <attachlab/core.hpp>

namespace fixture {

using attachlab::SimpleView;
using Edges = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

inline SimpleView path_graph(std::uint32_t n) {
    Edges e;
    for (std::uint32_t v = 1; v < n; ++v) e.emplace_back(v, v + 1);
    return SimpleView::from_edges(n, std::move(e));
}

inline SimpleView complete_graph(std::uint32_t n) {
    Edges e;
    for (std::uint32_t v = 1; v <= n; ++v)
        for (std::uint32_t w = v + 1; w <= n; ++w) e.emplace_back(v, w);
    return SimpleView::from_edges(n, std::move(e));
}

// centre is vertex 1
inline SimpleView star_graph(std::uint32_t leaves) {
    Edges e;
    for (std::uint32_t v = 2; v <= leaves + 1; ++v) e.emplace_back(1u, v);
    return SimpleView::from_edges(leaves + 1, std::move(e));
}

inline SimpleView petersen_graph() {
    Edges e{{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1},      // outer 5-cycle
            {6, 8}, {8, 10}, {10, 7}, {7, 9}, {9, 6},    // inner pentagram
            {1, 6}, {2, 7}, {3, 8}, {4, 9}, {5, 10}};    // spokes
    return SimpleView::from_edges(10, std::move(e));
}

} // namespace fixture
