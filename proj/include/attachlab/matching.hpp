// matching.hpp — exact maximum matching on general graphs (blossom
// contraction), the isolatable-vertex structures A(G) and B(v), Tutte
// deficiency certificates, the closed-form second-round success rate, and the
// two-round augmentation replay.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "core.hpp"
#include "generate.hpp"

namespace attachlab {

struct Matching {
    std::vector<std::uint32_t> mate; // 1-based; mate[v] = 0 when v is unmatched
    std::uint32_t size = 0;          // number of matched pairs

    bool covers(std::uint32_t v) const { return mate[v] != 0; }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs() const {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
        for (std::uint32_t v = 1; v < mate.size(); ++v)
            if (mate[v] > v) out.emplace_back(v, mate[v]);
        return out;
    }
};

namespace detail {

// Edmonds' blossom algorithm with an optional disabled vertex (for computing
// structures of G - u without copying the graph). After solve(), the
// multi-root marking phase identifies every vertex missed by some maximum
// matching: the outer vertices of the alternating forest grown from all
// exposed roots.
class BlossomSolver {
  public:
    explicit BlossomSolver(const SimpleView& g, std::uint32_t skip = 0)
        : g_(g),
          n_(g.n()),
          skip_(skip),
          match_(n_ + 1, 0),
          p_(n_ + 1, 0),
          base_(n_ + 1, 0),
          used_(n_ + 1, 0),
          blossom_(n_ + 1, 0),
          lca_mark_(n_ + 1, 0) {}

    // Seed with a matching known to consist of edges of g (no validation).
    void warm_start(const std::vector<std::uint32_t>& mate) {
        match_ = mate;
        if (skip_ != 0 && match_[skip_] != 0) {
            match_[match_[skip_]] = 0;
            match_[skip_] = 0;
        }
    }

    void solve() {
        greedy_init();
        for (std::uint32_t v = 1; v <= n_; ++v)
            if (v != skip_ && match_[v] == 0) {
                const std::uint32_t leaf = find_path(v);
                if (leaf != 0) augment(leaf);
            }
    }

    const std::vector<std::uint32_t>& mate() const { return match_; }

    std::uint32_t matched_pairs() const {
        std::uint32_t c = 0;
        for (std::uint32_t v = 1; v <= n_; ++v) c += match_[v] != 0;
        return c / 2;
    }

    // Multi-root alternating forest from every exposed vertex; requires the
    // matching to be maximum. Returns outer flags: exactly the vertices u
    // with nu(G - u) = nu(G).
    std::vector<char> exposed_reachable() {
        reset_phase();
        std::queue<std::uint32_t> q;
        for (std::uint32_t v = 1; v <= n_; ++v)
            if (v != skip_ && match_[v] == 0) {
                used_[v] = 1;
                q.push(v);
            }
        while (!q.empty()) {
            const std::uint32_t v = q.front();
            q.pop();
            scan(v, q, /*augmenting_possible=*/false);
        }
        return used_;
    }

  private:
    void greedy_init() {
        for (std::uint32_t v = 1; v <= n_; ++v) {
            if (v == skip_ || match_[v] != 0) continue;
            for (std::uint32_t w : g_.adj(v))
                if (w != skip_ && match_[w] == 0) {
                    match_[v] = w;
                    match_[w] = v;
                    break;
                }
        }
    }

    void reset_phase() {
        std::fill(used_.begin(), used_.end(), 0);
        std::fill(p_.begin(), p_.end(), 0);
        for (std::uint32_t v = 0; v <= n_; ++v) base_[v] = v;
    }

    std::uint32_t lca(std::uint32_t a, std::uint32_t b) {
        ++tick_;
        std::uint32_t x = a;
        while (true) {
            x = base_[x];
            lca_mark_[x] = tick_;
            if (match_[x] == 0) break; // reached a root
            x = p_[match_[x]];
        }
        std::uint32_t y = b;
        while (true) {
            y = base_[y];
            if (lca_mark_[y] == tick_) return y;
            if (match_[y] == 0)
                throw std::logic_error("blossom: outer-outer edge across trees with maximum matching");
            y = p_[match_[y]];
        }
    }

    void mark_path(std::uint32_t v, std::uint32_t b, std::uint32_t child) {
        while (base_[v] != b) {
            blossom_[base_[v]] = 1;
            blossom_[base_[match_[v]]] = 1;
            p_[v] = child;
            child = match_[v];
            v = p_[match_[v]];
        }
    }

    // Scans outer vertex v; returns an exposed path endpoint when an
    // augmenting path is found (only when augmenting_possible), else 0.
    std::uint32_t scan(std::uint32_t v, std::queue<std::uint32_t>& q, bool augmenting_possible) {
        for (std::uint32_t to : g_.adj(v)) {
            if (to == skip_) continue;
            if (base_[v] == base_[to] || match_[v] == to) continue;
            if (used_[to]) {
                // both endpoints outer: odd cycle through their forest lca
                const std::uint32_t cur = lca(v, to);
                std::fill(blossom_.begin(), blossom_.end(), 0);
                mark_path(v, cur, to);
                mark_path(to, cur, v);
                for (std::uint32_t i = 1; i <= n_; ++i)
                    if (blossom_[base_[i]]) {
                        base_[i] = cur;
                        if (!used_[i]) {
                            used_[i] = 1;
                            q.push(i);
                        }
                    }
            } else if (p_[to] == 0) {
                p_[to] = v;
                if (match_[to] == 0) {
                    if (!augmenting_possible)
                        throw std::logic_error("blossom: augmenting path found in marking phase");
                    return to;
                }
                used_[match_[to]] = 1;
                q.push(match_[to]);
            }
        }
        return 0;
    }

    std::uint32_t find_path(std::uint32_t root) {
        reset_phase();
        used_[root] = 1;
        std::queue<std::uint32_t> q;
        q.push(root);
        while (!q.empty()) {
            const std::uint32_t v = q.front();
            q.pop();
            const std::uint32_t leaf = scan(v, q, /*augmenting_possible=*/true);
            if (leaf != 0) return leaf;
        }
        return 0;
    }

    void augment(std::uint32_t to) {
        while (to != 0) {
            const std::uint32_t pv = p_[to];
            const std::uint32_t next = match_[pv];
            match_[to] = pv;
            match_[pv] = to;
            to = next;
        }
    }

    const SimpleView& g_;
    std::uint32_t n_;
    std::uint32_t skip_;
    std::vector<std::uint32_t> match_, p_, base_;
    std::vector<char> used_, blossom_;
    std::vector<std::uint32_t> lca_mark_;
    std::uint32_t tick_ = 0;
};

} // namespace detail

inline Matching max_matching(const SimpleView& g) {
    detail::BlossomSolver solver(g);
    solver.solve();
    Matching m;
    m.mate = solver.mate();
    m.size = solver.matched_pairs();
    return m;
}

// One unmatched vertex is tolerated at odd n.
inline bool has_perfect_matching(const SimpleView& g) {
    return max_matching(g).size == g.n() / 2;
}

// A(G) = {u : nu(G - u) = nu(G)}: the vertices isolated by some maximum
// matching, computed as the outer vertices of the exposed-rooted alternating
// forest. Sorted ascending.
inline std::vector<std::uint32_t> isolatable_set(const SimpleView& g) {
    detail::BlossomSolver solver(g);
    solver.solve();
    const auto marks = solver.exposed_reachable();
    std::vector<std::uint32_t> a;
    for (std::uint32_t v = 1; v <= g.n(); ++v)
        if (marks[v]) a.push_back(v);
    return a;
}

// B(u) = {w != u : nu(G - u - w) = nu(G)}; requires u in A(G).
inline std::vector<std::uint32_t> b_set(const SimpleView& g, std::uint32_t u) {
    if (u < 1 || u > g.n()) throw std::invalid_argument("b_set: vertex out of range");
    detail::BlossomSolver base(g);
    base.solve();
    const std::uint32_t nu = base.matched_pairs();
    detail::BlossomSolver dropped(g, u);
    dropped.warm_start(base.mate());
    dropped.solve();
    if (dropped.matched_pairs() != nu)
        throw std::invalid_argument("b_set: vertex is covered by every maximum matching");
    const auto marks = dropped.exposed_reachable();
    std::vector<std::uint32_t> b;
    for (std::uint32_t v = 1; v <= g.n(); ++v)
        if (v != u && marks[v]) b.push_back(v);
    return b;
}

// ---- matching-expansion verification ----------------------------------------

struct BsetCounterexample {
    std::uint32_t u = 0;
    std::vector<std::uint32_t> b;
    std::uint64_t nb_size = 0;
};

struct MatchingExpansionReport {
    bool applicable = false; // false when the graph has a perfect matching
    std::uint32_t checked = 0;
    std::uint32_t min_b_size = std::numeric_limits<std::uint32_t>::max();
    std::optional<BsetCounterexample> counterexample;
};

// For every u in A(G) with nonempty B(u), verifies |N(B(u))| < |B(u)|. A
// counterexample would contradict a theorem and signals an implementation bug.
inline MatchingExpansionReport check_matching_expansion(const SimpleView& g) {
    MatchingExpansionReport rep;
    if (has_perfect_matching(g)) return rep;
    rep.applicable = true;
    std::vector<char> stamp(g.n() + 1, 0);
    for (std::uint32_t u : isolatable_set(g)) {
        const auto b = b_set(g, u);
        if (b.empty()) continue;
        std::fill(stamp.begin(), stamp.end(), 0);
        for (auto v : b) stamp[v] = 1;
        std::uint64_t nb = 0;
        for (auto v : b)
            for (auto w : g.adj(v))
                if (!stamp[w]) {
                    stamp[w] = 1;
                    ++nb;
                }
        ++rep.checked;
        rep.min_b_size = std::min<std::uint32_t>(rep.min_b_size,
                                                 static_cast<std::uint32_t>(b.size()));
        if (nb >= b.size()) {
            rep.counterexample = BsetCounterexample{u, b, nb};
            return rep;
        }
    }
    return rep;
}

// ---- Tutte deficiency certificate ---------------------------------------------

struct TutteWitness {
    std::uint64_t odd_components = 0;
    std::uint64_t s_size = 0;
    std::uint64_t deficiency = 0; // odd_components - |S|, at least 2
};

// Counts odd components of G - S; a witness (deficiency >= 2) certifies that
// no matching of size floor(n/2) exists, regardless of n's parity.
inline std::optional<TutteWitness> tutte_certificate(const SimpleView& g,
                                                     const std::vector<std::uint32_t>& s) {
    std::vector<char> removed(g.n() + 1, 0);
    std::uint64_t s_size = 0;
    for (auto v : s) {
        if (v < 1 || v > g.n()) throw std::invalid_argument("tutte_certificate: vertex out of range");
        if (!removed[v]) {
            removed[v] = 1;
            ++s_size;
        }
    }
    std::uint64_t odd = 0;
    std::vector<char> seen(g.n() + 1, 0);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t v = 1; v <= g.n(); ++v) {
        if (removed[v] || seen[v]) continue;
        std::uint64_t comp = 0;
        stack.push_back(v);
        seen[v] = 1;
        while (!stack.empty()) {
            const std::uint32_t x = stack.back();
            stack.pop_back();
            ++comp;
            for (auto w : g.adj(x))
                if (!removed[w] && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        odd += comp % 2;
    }
    if (odd < s_size + 2) return std::nullopt;
    return TutteWitness{odd, s_size, odd - s_size};
}

// ---- second-round success rate ---------------------------------------------------

// Expected per-exposure success mass of the second round:
//   plain:  integral over (0, alpha) of 1 - (1 - (alpha - x))^m2
//   halved: integral over (0, alpha) of 1 - (1 - (alpha - x)/2)^m2
// in closed form.
inline double success_rate(double alpha, int m2, bool halved) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("success_rate: alpha in (0,1)");
    if (m2 < 1) throw std::domain_error("success_rate: m2 must be >= 1");
    const double k = m2 + 1.0;
    if (!halved) return alpha - 1.0 / k + std::pow(1.0 - alpha, k) / k;
    return alpha - 2.0 / k + 2.0 * std::pow(1.0 - alpha / 2.0, k) / k;
}

// ---- two-round augmentation replay -------------------------------------------------

struct AugStep {
    std::uint32_t v = 0;             // vertex whose second-round edges were revealed
    std::uint32_t a_size = 0;        // |A| of the graph v was drawn from
    std::uint32_t b_size = 0;        // |B(v)| in that graph
    bool hit = false;                // revealed an edge into B(v)
    std::uint32_t matching_size = 0; // maximum matching size after the reveal
};

enum class AugStatus { perfect, exhausted };

struct AugTrace {
    std::vector<AugStep> steps;
    AugStatus status = AugStatus::exhausted;
    std::uint32_t final_size = 0;
};

// Replays the two-round augmentation procedure: start from the first-round
// (blue) graph's maximum matching; repeatedly take the youngest not yet
// revealed vertex of A(G), reveal its second-round (red) stem edges, and
// re-maximise. All edges are generated upfront; the replay only changes the
// order of observation, so the reveal order never depends on unrevealed edges.
inline AugTrace two_round_matching_sim(const AttachGraph& g) {
    if (!g.coloured || g.m1 == 0 || g.m2 == 0)
        throw std::invalid_argument("two_round_matching_sim: coloured graph with m1, m2 >= 1 required");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::vector<std::uint32_t>> red(g.n + 1);
    for (const EdgeRecord& r : g.records) {
        if (r.loop()) continue;
        if (r.colour == Colour::blue)
            edges.emplace_back(r.stem, r.target);
        else
            red[r.stem].push_back(r.target);
    }

    AugTrace tr;
    std::vector<char> revealed(g.n + 1, 0);
    const std::uint32_t want = g.n / 2;

    SimpleView sv = SimpleView::from_edges(g.n, edges);
    detail::BlossomSolver first(sv);
    first.solve();
    std::vector<std::uint32_t> mate = first.mate();
    std::uint32_t nu = first.matched_pairs();

    while (true) {
        if (nu == want) {
            tr.status = AugStatus::perfect;
            break;
        }
        detail::BlossomSolver cur(sv);
        cur.warm_start(mate);
        cur.solve(); // no-op re-maximisation; keeps the marking phase valid
        const auto marks = cur.exposed_reachable();
        std::uint32_t v = 0, a_size = 0;
        for (std::uint32_t x = 1; x <= g.n; ++x)
            if (marks[x]) {
                ++a_size;
                if (!revealed[x]) v = std::max(v, x);
            }
        if (v == 0) {
            tr.status = AugStatus::exhausted;
            break;
        }
        detail::BlossomSolver dropped(sv, v);
        dropped.warm_start(mate);
        dropped.solve();
        const auto bmarks = dropped.exposed_reachable();
        std::uint32_t b_size = 0;
        for (std::uint32_t x = 1; x <= g.n; ++x) b_size += (x != v && bmarks[x]);

        revealed[v] = 1;
        for (std::uint32_t t : red[v]) edges.emplace_back(v, t);
        sv = SimpleView::from_edges(g.n, edges);
        detail::BlossomSolver next(sv);
        next.warm_start(mate);
        next.solve();
        const std::uint32_t nu2 = next.matched_pairs();
        tr.steps.push_back({v, a_size, b_size, nu2 == nu + 1, nu2});
        mate = next.mate();
        nu = nu2;
    }
    tr.final_size = nu;
    return tr;
}

} // namespace attachlab
