// hamilton.hpp — rotation–extension machinery for long paths and Hamiltonian
// cycles: path rotations and their breadth-first closure (END sets), the U/W
// long-path greedy with its deterministic size guarantee, a budgeted
// Hamiltonian-cycle search, an exact small-n decision procedure, and the
// two-round cycle-building replay.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "generate.hpp"
#include "rng.hpp"

namespace attachlab {

// A simple path stored as its vertex sequence. The first vertex is the
// anchor: rotations keep it fixed and only ever move the other endpoint.
struct PathState {
    std::vector<std::uint32_t> sequence;

    std::uint32_t anchor() const { return sequence.front(); }
    std::uint32_t endpoint() const { return sequence.back(); }
    std::uint32_t size() const { return static_cast<std::uint32_t>(sequence.size()); }
};

// A cyclic order of all n vertices; consecutive pairs (including the
// wraparound) must be edges.
struct HamCycle {
    std::vector<std::uint32_t> sequence;
};

inline bool is_valid_path(const SimpleView& g, const PathState& p) {
    const auto& s = p.sequence;
    if (s.empty()) return false;
    std::vector<char> seen(g.n() + 1, 0);
    for (std::uint32_t v : s) {
        if (v < 1 || v > g.n() || seen[v]) return false;
        seen[v] = 1;
    }
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (!g.has_edge(s[i], s[i + 1])) return false;
    return true;
}

inline bool is_valid_cycle(const SimpleView& g, const HamCycle& c) {
    const auto& s = c.sequence;
    if (s.size() != g.n() || s.size() < 3) return false;
    if (!is_valid_path(g, PathState{s})) return false;
    return g.has_edge(s.back(), s.front());
}

// One rotation: for P = (a, ..., x, y, ..., b) with bx an edge and x != b,
// the part of the path after x is traversed in reverse, giving
// (a, ..., x, b, ..., y). The anchor and the vertex set are unchanged.
inline PathState rotate(const SimpleView& g, const PathState& p, std::uint32_t pivot) {
    if (!is_valid_path(g, p)) throw std::invalid_argument("rotate: not a path of the graph");
    const std::uint32_t b = p.endpoint();
    if (pivot == b) throw std::invalid_argument("rotate: pivot must differ from the moving endpoint");
    if (!g.has_edge(b, pivot))
        throw std::invalid_argument("rotate: pivot is not adjacent to the moving endpoint");
    const auto it = std::find(p.sequence.begin(), p.sequence.end(), pivot);
    if (it == p.sequence.end()) throw std::invalid_argument("rotate: pivot is not on the path");
    PathState out;
    out.sequence.assign(p.sequence.begin(), it + 1);
    out.sequence.insert(out.sequence.end(), std::make_reverse_iterator(p.sequence.end()),
                        std::make_reverse_iterator(it + 1));
    return out;
}

namespace detail {

inline bool bfs_connected(const SimpleView& g) {
    if (g.n() == 0) return true;
    std::vector<char> vis(g.n() + 1, 0);
    std::vector<std::uint32_t> q{1};
    vis[1] = 1;
    for (std::size_t h = 0; h < q.size(); ++h)
        for (std::uint32_t w : g.adj(q[h]))
            if (!vis[w]) {
                vis[w] = 1;
                q.push_back(w);
            }
    return q.size() == g.n();
}

// Breadth-first closure of rotations with the anchor fixed. Every reachable
// endpoint is kept together with one witness path (stored in a flat pool:
// all witnesses share the base path's vertex set and length, so the pool is
// |endpoints| x |path| words). One witness per endpoint suffices for
// membership: the closure property only needs, for each kept witness, the
// endpoints its rotations produce — and those are all recorded.
class RotationClosure {
  public:
    struct Options {
        std::uint64_t* budget = nullptr;   // decremented once per rotation attempt
        bool stop_on_anchor_edge = false;  // stop at an endpoint adjacent to the anchor
        bool stop_on_outside_edge = false; // stop at an endpoint with a neighbour off the path
    };

    RotationClosure(const SimpleView& g, const std::vector<std::uint32_t>& base)
        : g_(g), len_(static_cast<std::uint32_t>(base.size())), seen_(g.n() + 1, 0),
          on_path_(g.n() + 1, 0), slot_(g.n() + 1, 0), pos_(g.n() + 1, 0) {
        if (base.empty()) throw std::invalid_argument("RotationClosure: empty base path");
        for (std::uint32_t v : base) on_path_[v] = 1;
        pool_.reserve(static_cast<std::size_t>(len_) * 4);
        pool_.insert(pool_.end(), base.begin(), base.end());
        // slot 0 = the base path itself
    }

    void run(const Options& opt) {
        const std::uint32_t anchor = pool_[0];
        const bool cycle_possible = len_ >= 3;
        auto admit = [&](std::uint32_t e, std::uint32_t slot) -> bool {
            seen_[e] = 1;
            slot_[e] = slot;
            endpoints_.push_back(e);
            if (opt.stop_on_anchor_edge && cycle_possible && g_.has_edge(e, anchor)) {
                cycle_endpoint_ = e;
                return true;
            }
            if (opt.stop_on_outside_edge)
                for (std::uint32_t w : g_.adj(e))
                    if (!on_path_[w]) {
                        outside_endpoint_ = e;
                        return true;
                    }
            return false;
        };
        if (admit(pool_[len_ - 1], 0)) return;
        if (len_ < 2) return; // single-vertex path: no rotations exist
        std::vector<std::uint32_t> cur(len_);
        for (std::size_t head = 0; head < endpoints_.size(); ++head) {
            const std::uint32_t e = endpoints_[head];
            // copy the witness out of the pool: materializing children below
            // reallocates the pool and would invalidate a raw pointer
            const auto base_off = static_cast<std::size_t>(slot_[e]) * len_;
            std::copy(pool_.begin() + base_off, pool_.begin() + base_off + len_, cur.begin());
            for (std::uint32_t i = 0; i < len_; ++i) pos_[cur[i]] = i;
            const std::uint32_t pred = cur[len_ - 2];
            for (std::uint32_t x : g_.adj(e)) {
                if (!on_path_[x] || x == pred) continue;
                if (opt.budget) {
                    if (*opt.budget == 0) return;
                    --(*opt.budget);
                }
                const std::uint32_t y = cur[pos_[x] + 1];
                if (seen_[y]) continue;
                // materialize the rotated witness: prefix up to x, then the
                // suffix reversed
                const std::uint32_t slot = static_cast<std::uint32_t>(pool_.size() / len_);
                pool_.resize(pool_.size() + len_);
                std::uint32_t* out = pool_.data() + static_cast<std::size_t>(slot) * len_;
                const std::uint32_t cut = pos_[x] + 1;
                std::copy(cur.begin(), cur.begin() + cut, out);
                std::reverse_copy(cur.begin() + cut, cur.end(), out + cut);
                if (admit(y, slot)) return;
            }
        }
    }

    const std::vector<std::uint32_t>& endpoints() const { return endpoints_; }
    bool contains(std::uint32_t v) const { return seen_[v] != 0; }
    std::optional<std::uint32_t> cycle_endpoint() const { return cycle_endpoint_; }
    std::optional<std::uint32_t> outside_endpoint() const { return outside_endpoint_; }

    std::vector<std::uint32_t> witness(std::uint32_t endpoint) const {
        if (!seen_[endpoint]) throw std::logic_error("RotationClosure: unknown endpoint");
        const std::uint32_t* p = pool_.data() + static_cast<std::size_t>(slot_[endpoint]) * len_;
        return {p, p + len_};
    }

  private:
    const SimpleView& g_;
    std::uint32_t len_;
    std::vector<std::uint32_t> pool_;      // concatenated witness paths, stride len_
    std::vector<std::uint32_t> endpoints_; // discovery order; endpoints_[0] = base endpoint
    std::vector<char> seen_;
    std::vector<char> on_path_;
    std::vector<std::uint32_t> slot_;
    std::vector<std::uint32_t> pos_;
    std::optional<std::uint32_t> cycle_endpoint_;
    std::optional<std::uint32_t> outside_endpoint_;
};

// Opens a non-spanning cycle into a path one vertex longer: takes the
// lowest-index vertex outside the cycle that has a neighbour on it, walks the
// cycle so that it ends at that neighbour, and appends the outside vertex.
// Requires a connected graph (otherwise no outside vertex may attach).
inline std::vector<std::uint32_t> cycle_to_longer_path(const SimpleView& g,
                                                       const std::vector<std::uint32_t>& cyc) {
    std::vector<char> on(g.n() + 1, 0);
    for (std::uint32_t v : cyc) on[v] = 1;
    for (std::uint32_t u = 1; u <= g.n(); ++u) {
        if (on[u]) continue;
        for (std::uint32_t w : g.adj(u)) {
            if (!on[w]) continue;
            const auto it = std::find(cyc.begin(), cyc.end(), w);
            std::vector<std::uint32_t> path;
            path.reserve(cyc.size() + 1);
            path.insert(path.end(), it + 1, cyc.end());
            path.insert(path.end(), cyc.begin(), it + 1);
            path.push_back(u);
            return path;
        }
    }
    throw std::logic_error("cycle_to_longer_path: no outside vertex attaches to the cycle");
}

// Deterministic improvement loop shared by the two-round replay: extend the
// endpoint while possible, otherwise rotate; close the Hamiltonian cycle when
// one exists, and turn shorter cycles into longer paths. Returns the cycle
// when found; otherwise leaves `path` at a stalled (or budget-capped) state.
inline std::optional<HamCycle> improve_path(const SimpleView& g,
                                            std::vector<std::uint32_t>& path,
                                            std::uint64_t& budget) {
    const std::uint32_t n = g.n();
    std::vector<char> on_path(n + 1, 0);
    for (std::uint32_t v : path) on_path[v] = 1;
    bool reversed_once = false;
    while (budget > 0) {
        --budget; // one extension attempt
        const std::uint32_t b = path.back();
        std::uint32_t ext = 0;
        for (std::uint32_t w : g.adj(b))
            if (!on_path[w]) {
                ext = w;
                break;
            }
        if (ext != 0) {
            path.push_back(ext);
            on_path[ext] = 1;
            reversed_once = false;
            continue;
        }
        RotationClosure cl(g, path);
        cl.run({.budget = &budget,
                .stop_on_anchor_edge = true,
                .stop_on_outside_edge = path.size() < n});
        if (cl.cycle_endpoint()) {
            auto wit = cl.witness(*cl.cycle_endpoint());
            if (wit.size() == n) {
                HamCycle hc{std::move(wit)};
                if (!is_valid_cycle(g, hc)) throw std::logic_error("improve_path: invalid cycle");
                return hc;
            }
            path = cycle_to_longer_path(g, wit);
            std::fill(on_path.begin(), on_path.end(), 0);
            for (std::uint32_t v : path) on_path[v] = 1;
            reversed_once = false;
            continue;
        }
        if (cl.outside_endpoint()) {
            path = cl.witness(*cl.outside_endpoint());
            reversed_once = false;
            continue;
        }
        if (reversed_once) return std::nullopt; // both orientations are stuck
        std::reverse(path.begin(), path.end());
        reversed_once = true;
    }
    return std::nullopt;
}

} // namespace detail

// Vertices reachable as the moving endpoint via rotation sequences with the
// anchor fixed, computed with one witness path kept per endpoint. The result
// always contains the path's own endpoint and is closed under rotating every
// kept witness; keeping a single witness can miss endpoints only reachable
// through alternative witnesses of an already-seen endpoint, so this is a
// subset of the all-sequences closure. The expansion bound used on longest
// paths holds for the computed set. Sorted.
inline std::vector<std::uint32_t> end_set(const SimpleView& g, const PathState& p) {
    if (!is_valid_path(g, p)) throw std::invalid_argument("end_set: not a path of the graph");
    detail::RotationClosure cl(g, p.sequence);
    cl.run({});
    std::vector<std::uint32_t> out = cl.endpoints();
    std::sort(out.begin(), out.end());
    return out;
}

// Result of the U/W long-path process. Writing h = path.size() and noting
// that U, W, P partition the vertices with |P| <= h at every step, U only
// ever shrinks and W only ever grows, so at the first step where |W| reaches
// ceil((n-h)/2) (a retreat, which leaves |P| <= h-1) the other side satisfies
// |U| >= n-h+1 - ceil((n-h)/2) = floor((n-h)/2) + 1. Hence
// max_min_uw >= ceil((n-h)/2) holds unconditionally at termination.
struct GreedyPathReport {
    PathState path;                 // longest path observed
    std::uint32_t max_min_uw = 0;   // best min(|U|, |W|) over all steps
};

// The U/W process: start a path at vertex 1, extend the head into U while
// possible, retreat stuck heads into W, and when the path empties restart
// from a seed-chosen vertex of U. Heads are verified to have no neighbour in
// U when they retreat; since U never grows, this certifies that no U-W edge
// ever exists.
inline GreedyPathReport longest_path_greedy(const SimpleView& g, std::uint64_t seed) {
    const std::uint32_t n = g.n();
    GreedyPathReport rep;
    if (n == 0) return rep;
    Rng rng(seed);

    std::vector<char> in_u(n + 1, 1);
    in_u[0] = 0;
    std::vector<std::uint32_t> u_list(n);
    std::vector<std::uint32_t> u_pos(n + 1, 0);
    for (std::uint32_t v = 1; v <= n; ++v) {
        u_list[v - 1] = v;
        u_pos[v] = v - 1;
    }
    auto remove_u = [&](std::uint32_t v) {
        const std::uint32_t i = u_pos[v];
        u_list[i] = u_list.back();
        u_pos[u_list[i]] = i;
        u_list.pop_back();
        in_u[v] = 0;
    };

    std::vector<std::uint32_t> cursor(n + 1, 0);
    std::vector<std::uint32_t> path;
    path.reserve(n);
    std::uint32_t w_count = 0;

    auto note_sizes = [&] {
        const auto uu = static_cast<std::uint32_t>(u_list.size());
        rep.max_min_uw = std::max(rep.max_min_uw, std::min(uu, w_count));
    };

    remove_u(1);
    path.push_back(1);
    rep.path.sequence = path;
    note_sizes();

    while (true) {
        const std::uint32_t head = path.back();
        const auto nb = g.adj(head);
        std::uint32_t& cu = cursor[head];
        // vertices never return to U, so entries skipped here stay skippable
        while (cu < nb.size() && !in_u[nb[cu]]) ++cu;
        if (cu < nb.size()) {
            const std::uint32_t w = nb[cu];
            remove_u(w);
            path.push_back(w);
            if (path.size() > rep.path.sequence.size()) rep.path.sequence = path;
        } else {
            for (std::uint32_t x : nb)
                if (in_u[x]) throw std::logic_error("longest_path_greedy: U-W separation violated");
            ++w_count;
            path.pop_back();
            if (path.empty()) {
                if (u_list.empty()) {
                    note_sizes();
                    break;
                }
                const std::uint32_t r =
                    u_list[rng.bounded(static_cast<std::uint32_t>(u_list.size()))];
                remove_u(r);
                path.push_back(r);
            }
        }
        note_sizes();
    }
    return rep;
}

// Rotation–extension search for a Hamiltonian cycle. Budget unit = one
// rotation or extension attempt. When the closure of the current path stalls
// without growing the longest path for `window` attempts (default 5n), the
// search restarts from a fresh seed-chosen vertex.
struct PosaResult {
    std::optional<HamCycle> cycle; // engaged iff a Hamiltonian cycle was found
    PathState longest;             // longest path observed
    std::uint64_t steps_used = 0;
};

inline PosaResult posa_search(const SimpleView& g, std::uint64_t budget, std::uint64_t seed,
                              std::uint64_t window = 0) {
    const std::uint32_t n = g.n();
    if (n == 0) throw std::invalid_argument("posa_search: empty graph");
    if (!detail::bfs_connected(g)) throw std::invalid_argument("posa_search: input graph is disconnected");
    if (window == 0) window = 5ull * n;
    Rng rng(seed);

    std::vector<char> on_path(n + 1, 0);
    std::vector<std::uint32_t> current;
    std::vector<std::uint32_t> scratch;
    auto set_path = [&](std::vector<std::uint32_t> s) {
        std::fill(on_path.begin(), on_path.end(), 0);
        for (std::uint32_t v : s) on_path[v] = 1;
        current = std::move(s);
    };

    set_path({1 + rng.bounded(n)});
    PosaResult res;
    res.longest.sequence = current;
    std::uint64_t used = 0, last_progress = 0;

    auto grew = [&] {
        if (current.size() > res.longest.sequence.size()) {
            res.longest.sequence = current;
            last_progress = used;
        }
    };

    while (used < budget) {
        ++used; // one extension attempt
        const std::uint32_t b = current.back();
        scratch.clear();
        for (std::uint32_t w : g.adj(b))
            if (!on_path[w]) scratch.push_back(w);
        if (!scratch.empty()) {
            const std::uint32_t w =
                scratch[rng.bounded(static_cast<std::uint32_t>(scratch.size()))];
            current.push_back(w);
            on_path[w] = 1;
            grew();
            continue;
        }
        std::uint64_t rem = budget - used;
        detail::RotationClosure cl(g, current);
        cl.run({.budget = &rem,
                .stop_on_anchor_edge = true,
                .stop_on_outside_edge = current.size() < n});
        used = budget - rem;
        if (cl.cycle_endpoint()) {
            auto wit = cl.witness(*cl.cycle_endpoint());
            if (wit.size() == n) {
                HamCycle hc{std::move(wit)};
                if (!is_valid_cycle(g, hc)) throw std::logic_error("posa_search: invalid cycle");
                res.longest.sequence = hc.sequence;
                res.cycle = std::move(hc);
                res.steps_used = used;
                return res;
            }
            set_path(detail::cycle_to_longer_path(g, wit));
            grew();
            continue;
        }
        if (cl.outside_endpoint()) {
            set_path(cl.witness(*cl.outside_endpoint()));
            continue;
        }
        if (used - last_progress > window) {
            set_path({1 + rng.bounded(n)}); // reshuffled restart; best path is kept
            last_progress = used;
        } else {
            std::reverse(current.begin(), current.end()); // try the other endpoint
        }
    }
    res.steps_used = used;
    return res;
}

// Exact decision by subset dynamic programming over endpoint bitmasks.
inline bool exact_hamiltonian(const SimpleView& g) {
    const std::uint32_t n = g.n();
    if (n > 24) throw std::invalid_argument("exact_hamiltonian: supports at most 24 vertices");
    if (n == 1) return true;  // degenerate single-vertex convention
    if (n == 2) return false; // a 2-cycle would repeat its only edge
    std::vector<std::uint32_t> adj(n, 0);
    for (std::uint32_t v = 1; v <= n; ++v)
        for (std::uint32_t w : g.adj(v)) adj[v - 1] |= 1u << (w - 1);
    const std::uint32_t full = (1u << n) - 1;
    std::vector<std::uint32_t> dp(std::size_t{1} << n, 0);
    dp[1] = 1; // the path (1); cycles may be rooted at vertex 1
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        if (!(mask & 1u)) continue;
        const std::uint32_t ends = dp[mask];
        if (!ends) continue;
        std::uint32_t reach = 0;
        for (std::uint32_t e = ends; e;) {
            reach |= adj[std::countr_zero(e)];
            e &= e - 1;
        }
        for (std::uint32_t cand = reach & ~mask; cand;) {
            const int w = std::countr_zero(cand);
            cand &= cand - 1;
            dp[mask | (1u << w)] |= 1u << w;
        }
    }
    return (dp[full] & adj[0]) != 0;
}

// ---- two-round replay ------------------------------------------------------

enum class HamSimStatus { found, exhausted };

struct HamStep {
    std::uint32_t v;        // vertex whose second-round edges were revealed
    std::uint32_t a_size;   // endpoints of longest-known paths before the reveal
    std::uint32_t b_size;   // endpoints reachable with v anchored (|B(v)|)
    bool hit;               // the longest-path length grew or the cycle closed
    std::uint32_t path_len; // longest-path length after the reveal (n when found)
};

struct HamTrace {
    std::vector<HamStep> steps;
    HamSimStatus status = HamSimStatus::exhausted;
    std::uint32_t final_path_len = 0;
    std::optional<HamCycle> cycle;
};

// Replays the second round of a two-round exposure against the cycle
// machinery: the first-round (blue) graph must be connected; the current
// path is improved to a stall, then repeatedly the youngest endpoint v
// reachable on some known longest path is charged, its anchored endpoint set
// B(v) is computed, its red edges are revealed, and the improvement the new
// edges enable is realized. A step is a hit when the longest-path length
// grows or a Hamiltonian cycle closes. The budget caps the total number of
// rotation/extension attempts across the whole replay.
inline HamTrace two_round_hamilton_sim(const AttachGraph& g, std::uint64_t budget) {
    if (!g.coloured || g.m1 == 0 || g.m2 == 0)
        throw std::invalid_argument("two_round_hamilton_sim: coloured graph with m1, m2 >= 1 required");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::vector<std::uint32_t>> red(g.n + 1);
    for (const EdgeRecord& r : g.records) {
        if (r.loop()) continue;
        if (r.colour == Colour::blue)
            edges.emplace_back(r.stem, r.target);
        else
            red[r.stem].push_back(r.target);
    }
    const std::uint32_t n = g.n;
    SimpleView sv = SimpleView::from_edges(n, edges);
    if (!detail::bfs_connected(sv))
        throw std::invalid_argument("two_round_hamilton_sim: blue graph is disconnected");

    HamTrace tr;
    std::vector<char> revealed(n + 1, 0);
    std::vector<char> in_b(n + 1, 0);
    std::vector<std::uint32_t> path{1};

    auto finish_found = [&](HamCycle hc) {
        tr.status = HamSimStatus::found;
        tr.final_path_len = n;
        tr.cycle = std::move(hc);
    };

    // settle the blue graph first: a Hamiltonian first round ends the replay
    // before any exposure
    if (auto hc = detail::improve_path(sv, path, budget)) {
        finish_found(std::move(*hc));
        return tr;
    }

    while (true) {
        // endpoints achievable on the known longest path, both orientations
        detail::RotationClosure fwd(sv, path);
        fwd.run({.budget = &budget});
        std::vector<std::uint32_t> rev_base(path.rbegin(), path.rend());
        detail::RotationClosure bwd(sv, rev_base);
        bwd.run({.budget = &budget});

        std::uint32_t a_size = 0, v = 0;
        for (std::uint32_t x = 1; x <= n; ++x) {
            if (!fwd.contains(x) && !bwd.contains(x)) continue;
            ++a_size;
            if (!revealed[x]) v = std::max(v, x);
        }
        if (v == 0) {
            tr.status = HamSimStatus::exhausted;
            tr.final_path_len = static_cast<std::uint32_t>(path.size());
            break;
        }
        revealed[v] = 1;

        // B(v): anchor v by reversing a witness path that ends at v
        std::vector<std::uint32_t> wit_v =
            fwd.contains(v) ? fwd.witness(v) : bwd.witness(v);
        std::reverse(wit_v.begin(), wit_v.end());
        detail::RotationClosure anchored(sv, wit_v);
        anchored.run({.budget = &budget});
        const auto b_size = static_cast<std::uint32_t>(anchored.endpoints().size());

        const auto old_len = static_cast<std::uint32_t>(path.size());
        for (std::uint32_t w : red[v]) edges.emplace_back(v, w);
        sv = SimpleView::from_edges(n, edges);

        // realize a guaranteed improvement when a revealed edge lands in B(v)
        std::optional<HamCycle> ham;
        for (std::uint32_t w : red[v]) {
            if (w == v || !anchored.contains(w)) continue;
            auto wit = anchored.witness(w); // anchored at v, ends at w; edge wv is now present
            if (wit.size() < 3) break;
            if (wit.size() == n) {
                HamCycle hc{std::move(wit)};
                if (!is_valid_cycle(sv, hc))
                    throw std::logic_error("two_round_hamilton_sim: invalid closed cycle");
                ham = std::move(hc);
            } else {
                path = detail::cycle_to_longer_path(sv, wit);
            }
            break;
        }
        if (!ham) ham = detail::improve_path(sv, path, budget);

        const std::uint32_t new_len = ham ? n : static_cast<std::uint32_t>(path.size());
        tr.steps.push_back({v, a_size, b_size, ham.has_value() || new_len > old_len, new_len});
        if (ham) {
            finish_found(std::move(*ham));
            break;
        }
    }
    return tr;
}

} // namespace attachlab
