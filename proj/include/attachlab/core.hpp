// core.hpp — edge-record graphs produced by the attachment processes, their
// loop-free simple view, and the canonical on-disk edge-list format.
//
// Vertices are 1-based everywhere. A graph on n vertices with m edges per
// vertex holds exactly m*n records, sorted by (stem, ordinal); record
// (stem=v, ordinal=o) is the o-th edge created at v's arrival.
#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace attachlab {

enum class Model : std::uint8_t { uniform, preferential };
enum class Colour : std::uint8_t { blue, red, plain };

struct EdgeRecord {
    std::uint32_t stem;    // vertex whose arrival created the edge
    std::uint32_t target;  // endpoint among the older vertices (== stem for a self-loop)
    std::uint16_t ordinal; // 1..m within the stem
    Colour colour;

    // Creation time; attachment edges are created exactly when their stem arrives.
    std::uint32_t time() const { return stem; }
    bool loop() const { return stem == target; }
};

struct AttachGraph {
    Model model = Model::uniform;
    std::uint32_t n = 0;
    std::uint32_t m1 = 0;
    std::uint32_t m2 = 0;
    bool coloured = false; // false => every record is plain (requires m2 == 0)
    std::uint64_t seed = 0;
    std::vector<EdgeRecord> records;

    std::uint32_t m() const { return m1 + m2; }

    // Throws std::invalid_argument on any structural defect.
    void validate() const {
        if (n < 1) throw std::invalid_argument("AttachGraph: n must be >= 1");
        const std::uint64_t expect = static_cast<std::uint64_t>(m()) * n;
        if (records.size() != expect)
            throw std::invalid_argument("AttachGraph: record count != m*n");
        if (!coloured && m2 != 0)
            throw std::invalid_argument("AttachGraph: plain graph requires m2 == 0");
        std::size_t i = 0;
        for (std::uint32_t v = 1; v <= n; ++v) {
            for (std::uint32_t o = 1; o <= m(); ++o, ++i) {
                const EdgeRecord& r = records[i];
                if (r.stem != v || r.ordinal != o)
                    throw std::invalid_argument("AttachGraph: records not in (stem, ordinal) order");
                if (r.target < 1) throw std::invalid_argument("AttachGraph: target < 1");
                if (v == 1) {
                    if (r.target != 1)
                        throw std::invalid_argument("AttachGraph: vertex 1 must self-loop");
                } else {
                    const std::uint32_t cap = model == Model::uniform ? v - 1 : v;
                    if (r.target > cap)
                        throw std::invalid_argument("AttachGraph: target exceeds model cap");
                }
                const Colour want =
                    !coloured ? Colour::plain : (o <= m1 ? Colour::blue : Colour::red);
                if (r.colour != want)
                    throw std::invalid_argument("AttachGraph: colour inconsistent with ordinal split");
            }
        }
    }
};

// Multigraph degree of s in the prefix graph at time t (self-loops add 2).
inline std::uint64_t degree_at_time(const AttachGraph& g, std::uint32_t s, std::uint32_t t) {
    if (s < 1 || s > t || t > g.n) throw std::out_of_range("degree_at_time: need 1 <= s <= t <= n");
    std::uint64_t d = 0;
    const std::size_t upto = static_cast<std::size_t>(t) * g.m();
    for (std::size_t i = 0; i < upto; ++i) {
        const EdgeRecord& r = g.records[i];
        d += (r.stem == s) + (r.target == s);
    }
    return d;
}

// Loop-free deduplicated undirected view, CSR storage, sorted adjacency.
class SimpleView {
  public:
    SimpleView() = default;

    static SimpleView from_edges(std::uint32_t n,
                                 std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
        SimpleView sv;
        sv.n_ = n;
        for (auto& [a, b] : edges) {
            if (a < 1 || a > n || b < 1 || b > n)
                throw std::invalid_argument("SimpleView: endpoint out of range");
            if (a > b) std::swap(a, b);
        }
        std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
        std::vector<std::uint32_t> cnt(n + 2, 0);
        for (const auto& [a, b] : edges) {
            ++cnt[a + 1];
            ++cnt[b + 1];
        }
        sv.offsets_.assign(n + 2, 0);
        for (std::uint32_t v = 1; v <= n + 1; ++v) sv.offsets_[v] = sv.offsets_[v - 1] + cnt[v];
        sv.nbrs_.resize(sv.offsets_[n + 1]);
        std::vector<std::uint32_t> fill(sv.offsets_.begin(), sv.offsets_.end());
        for (const auto& [a, b] : edges) {
            sv.nbrs_[fill[a]++] = b;
            sv.nbrs_[fill[b]++] = a;
        }
        // per-vertex sort + dedup, then compact
        std::size_t w = 0;
        std::vector<std::uint32_t> tight(n + 2, 0);
        for (std::uint32_t v = 1; v <= n; ++v) {
            auto first = sv.nbrs_.begin() + sv.offsets_[v];
            auto last = sv.nbrs_.begin() + sv.offsets_[v + 1];
            std::sort(first, last);
            auto stop = std::unique(first, last);
            tight[v] = static_cast<std::uint32_t>(w);
            for (auto it = first; it != stop; ++it) sv.nbrs_[w++] = *it;
        }
        tight[0] = 0;
        tight[n + 1] = static_cast<std::uint32_t>(w);
        sv.nbrs_.resize(w);
        sv.nbrs_.shrink_to_fit();
        sv.offsets_ = std::move(tight);
        return sv;
    }

    std::uint32_t n() const { return n_; }

    std::span<const std::uint32_t> adj(std::uint32_t v) const {
        return {nbrs_.data() + offsets_[v], nbrs_.data() + offsets_[v + 1]};
    }

    std::uint32_t degree(std::uint32_t v) const { return offsets_[v + 1] - offsets_[v]; }

    bool has_edge(std::uint32_t u, std::uint32_t v) const {
        auto a = adj(u);
        return std::binary_search(a.begin(), a.end(), v);
    }

    std::size_t edge_count() const { return nbrs_.size() / 2; }

  private:
    std::uint32_t n_ = 0;
    std::vector<std::uint32_t> offsets_{0, 0};
    std::vector<std::uint32_t> nbrs_;
};

inline SimpleView simple_view(const AttachGraph& g) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(g.records.size());
    for (const EdgeRecord& r : g.records)
        if (!r.loop()) edges.emplace_back(r.stem, r.target);
    return SimpleView::from_edges(g.n, std::move(edges));
}

// N(C): all vertices adjacent to C but not in C themselves; sorted.
inline std::vector<std::uint32_t> neighbourhood(const SimpleView& g,
                                                std::span<const std::uint32_t> c) {
    std::vector<char> in_c(g.n() + 1, 0);
    for (std::uint32_t v : c) {
        if (v < 1 || v > g.n()) throw std::out_of_range("neighbourhood: vertex out of range");
        in_c[v] = 1;
    }
    std::vector<std::uint32_t> out;
    for (std::uint32_t v : c)
        for (std::uint32_t w : g.adj(v))
            if (!in_c[w]) out.push_back(w);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline SimpleView cycle_graph(std::uint32_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    for (std::uint32_t v = 1; v < n; ++v) e.emplace_back(v, v + 1);
    if (n >= 3) e.emplace_back(n, 1u);
    return SimpleView::from_edges(n, std::move(e));
}

// ---- canonical edge-list file format ------------------------------------
//
//   #attachgraph v1 model=<ua|pa> n=<n> m1=<m1> m2=<m2> seed=<u64>
//   <stem>\t<ordinal>\t<target>\t<b|r|p>
//
// Writer output is byte-deterministic; write(read(x)) == x.

inline std::string to_edge_list(const AttachGraph& g) {
    g.validate();
    std::string out;
    out.reserve(32 + g.records.size() * 16);
    out += "#attachgraph v1 model=";
    out += g.model == Model::uniform ? "ua" : "pa";
    out += " n=" + std::to_string(g.n);
    out += " m1=" + std::to_string(g.m1);
    out += " m2=" + std::to_string(g.m2);
    out += " seed=" + std::to_string(g.seed);
    out += '\n';
    char buf[32];
    auto put = [&](std::uint64_t x, char sep) {
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
        out.append(buf, p);
        out += sep;
    };
    for (const EdgeRecord& r : g.records) {
        put(r.stem, '\t');
        put(r.ordinal, '\t');
        put(r.target, '\t');
        out += r.colour == Colour::blue ? 'b' : r.colour == Colour::red ? 'r' : 'p';
        out += '\n';
    }
    return out;
}

inline AttachGraph parse_edge_list(std::string_view text) {
    auto fail = [](const std::string& why) -> AttachGraph {
        throw std::runtime_error("edge list parse: " + why);
    };
    auto next_line = [&text]() -> std::string_view {
        const std::size_t nl = text.find('\n');
        if (nl == std::string_view::npos) {
            auto line = text;
            text = {};
            return line;
        }
        auto line = text.substr(0, nl);
        text.remove_prefix(nl + 1);
        return line;
    };

    std::string_view header = next_line();
    constexpr std::string_view magic = "#attachgraph v1 ";
    if (!header.starts_with(magic)) return fail("bad magic");
    header.remove_prefix(magic.size());

    AttachGraph g;
    auto take_field = [&](std::string_view key) -> std::string_view {
        if (!header.starts_with(key)) fail("expected field " + std::string(key));
        header.remove_prefix(key.size());
        const std::size_t sp = header.find(' ');
        auto val = header.substr(0, sp);
        header.remove_prefix(sp == std::string_view::npos ? header.size() : sp + 1);
        return val;
    };
    auto model = take_field("model=");
    if (model == "ua")
        g.model = Model::uniform;
    else if (model == "pa")
        g.model = Model::preferential;
    else
        fail("unknown model");
    auto num = [&fail](std::string_view s, std::uint64_t& out) {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc{} || p != s.data() + s.size()) fail("bad number");
    };
    std::uint64_t x;
    num(take_field("n="), x);
    g.n = static_cast<std::uint32_t>(x);
    num(take_field("m1="), x);
    g.m1 = static_cast<std::uint32_t>(x);
    num(take_field("m2="), x);
    g.m2 = static_cast<std::uint32_t>(x);
    num(take_field("seed="), g.seed);

    g.records.reserve(static_cast<std::size_t>(g.m()) * g.n);
    bool any_colour = false;
    while (!text.empty()) {
        std::string_view line = next_line();
        if (line.empty()) continue;
        EdgeRecord r{};
        std::uint64_t v[3];
        for (int f = 0; f < 3; ++f) {
            const std::size_t tab = line.find('\t');
            if (tab == std::string_view::npos) fail("missing field");
            num(line.substr(0, tab), v[f]);
            line.remove_prefix(tab + 1);
        }
        if (line.size() != 1) fail("bad colour field");
        r.stem = static_cast<std::uint32_t>(v[0]);
        r.ordinal = static_cast<std::uint16_t>(v[1]);
        r.target = static_cast<std::uint32_t>(v[2]);
        switch (line[0]) {
            case 'b': r.colour = Colour::blue; any_colour = true; break;
            case 'r': r.colour = Colour::red; any_colour = true; break;
            case 'p': r.colour = Colour::plain; break;
            default: fail("bad colour letter");
        }
        g.records.push_back(r);
    }
    g.coloured = any_colour;
    g.validate();
    return g;
}

inline void write_edge_list(const AttachGraph& g, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    const std::string text = to_edge_list(g);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline AttachGraph read_edge_list(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for read: " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_edge_list(text);
}

} // namespace attachlab
