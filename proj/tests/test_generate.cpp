#include <catch2/catch_amalgamated.hpp>

#include <attachlab/generate.hpp>

#include <map>

#include "oracles.hpp"

using namespace attachlab;

TEST_CASE("uniform: founding loops and target ranges", "[generate]") {
    GenParams p;
    p.n = 1;
    p.m1 = 3;
    p.seed = 5;
    AttachGraph g = gen_uniform(p);
    REQUIRE(g.records.size() == 3);
    for (const auto& r : g.records) {
        REQUIRE(r.stem == 1);
        REQUIRE(r.target == 1);
    }

    p.n = 200;
    p.m1 = 4;
    g = gen_uniform(p);
    REQUIRE(g.records.size() == 800);
    REQUIRE_NOTHROW(g.validate());
    for (const auto& r : g.records)
        if (r.stem > 1) {
            REQUIRE(r.target >= 1);
            REQUIRE(r.target <= r.stem - 1);
        }
}

TEST_CASE("preferential: handshake is exact and loops allowed", "[generate]") {
    GenParams p;
    p.model = Model::preferential;
    p.n = 1;
    p.m1 = 1;
    p.seed = 0;
    AttachGraph g = gen_preferential(p);
    REQUIRE(g.records.size() == 1);
    REQUIRE(g.records[0].loop());

    p.n = 300;
    p.m1 = 3;
    p.seed = 17;
    g = gen_preferential(p);
    REQUIRE_NOTHROW(g.validate());
    std::vector<std::uint64_t> deg(p.n + 1, 0);
    for (const auto& r : g.records) {
        REQUIRE(r.target <= r.stem);
        deg[r.stem] += 1;
        deg[r.target] += 1;
    }
    std::uint64_t total = 0;
    for (auto d : deg) total += d;
    REQUIRE(total == 2ull * g.m() * g.n);
}

TEST_CASE("identical params give bit-identical graphs", "[generate]") {
    for (auto model : {Model::uniform, Model::preferential}) {
        GenParams p;
        p.model = model;
        p.n = 500;
        p.m1 = 2;
        p.m2 = 2;
        p.coloured = true;
        p.seed = 0xABCDEF;
        AttachGraph a = generate(p);
        AttachGraph b = generate(p);
        REQUIRE(to_edge_list(a) == to_edge_list(b));
        p.seed += 1;
        AttachGraph c = generate(p);
        REQUIRE(to_edge_list(a) != to_edge_list(c));
    }
}

namespace {

// Exact distribution of the preferential process by explicit enumeration,
// tracking degrees directly (no slot array): outcome = targets per step.
void enumerate_pa(std::uint32_t n, std::uint32_t t, std::vector<std::uint32_t>& deg,
                  std::vector<std::uint32_t>& picks, double prob,
                  std::map<std::vector<std::uint32_t>, double>& out) {
    if (t > n) {
        out[picks] += prob;
        return;
    }
    const double denom = 2.0 * t - 1.0;
    for (std::uint32_t s = 1; s <= t; ++s) {
        const double pr = s == t ? 1.0 / denom : deg[s] / denom;
        if (pr == 0) continue;
        auto save = deg;
        if (s == t)
            deg[t] += 2;
        else {
            deg[t] += 1;
            deg[s] += 1;
        }
        picks.push_back(s);
        enumerate_pa(n, t + 1, deg, picks, prob * pr, out);
        picks.pop_back();
        deg = save;
    }
}

} // namespace

TEST_CASE("preferential m=1 small-n distribution matches exact enumeration", "[generate]") {
    const std::uint32_t n = 3;
    std::map<std::vector<std::uint32_t>, double> exact;
    std::vector<std::uint32_t> deg(n + 1, 0);
    std::vector<std::uint32_t> picks;
    deg[1] = 2; // founding loop is forced
    picks.push_back(1);
    enumerate_pa(n, 2, deg, picks, 1.0, exact);
    REQUIRE(exact.size() == 6);

    // sanity anchors: Pr(2 self-loops) = 1/3, Pr(2 -> 1) = 2/3
    double p_self = 0, p_one = 0;
    for (const auto& [k, v] : exact) (k[1] == 2 ? p_self : p_one) += v;
    REQUIRE_THAT(p_self, Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-12));
    REQUIRE_THAT(p_one, Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));

    const int trials = 100000;
    std::map<std::vector<std::uint32_t>, int> counts;
    GenParams p;
    p.model = Model::preferential;
    p.n = n;
    p.m1 = 1;
    for (int i = 0; i < trials; ++i) {
        p.seed = derive_seed(2024, static_cast<std::uint64_t>(i));
        AttachGraph g = gen_preferential(p);
        std::vector<std::uint32_t> key;
        for (const auto& r : g.records) key.push_back(r.target);
        ++counts[key];
    }
    std::vector<double> obs, expd;
    for (const auto& [k, pr] : exact) {
        obs.push_back(counts.count(k) ? counts[k] : 0);
        expd.push_back(pr * trials);
    }
    const double stat = oracle::chi2_stat(obs, expd);
    INFO("chi2 = " << stat);
    REQUIRE(stat < 20.515005652432878); // 0.999 quantile, df = 5
}

TEST_CASE("uniform edge-absence frequency matches the closed form", "[generate]") {
    // Pr(no edge between v and W) = (1 - |W|/(v-1))^m
    const std::uint32_t v = 10, n = 12, m = 2;
    const std::vector<std::uint32_t> w{1, 2, 3};
    const double p_exact = std::pow(1.0 - 3.0 / (v - 1.0), m);
    const int trials = 20000;
    int absent = 0;
    GenParams gp;
    gp.n = n;
    gp.m1 = m;
    for (int i = 0; i < trials; ++i) {
        gp.seed = derive_seed(77, static_cast<std::uint64_t>(i));
        AttachGraph g = gen_uniform(gp);
        bool hit = false;
        for (const auto& r : g.records)
            if (r.stem == v && std::find(w.begin(), w.end(), r.target) != w.end()) hit = true;
        absent += !hit;
    }
    const double freq = static_cast<double>(absent) / trials;
    const double sigma = std::sqrt(p_exact * (1 - p_exact) / trials);
    REQUIRE(std::abs(freq - p_exact) <= 4 * sigma);
}

TEST_CASE("projection splits records by colour", "[generate]") {
    GenParams p;
    p.model = Model::preferential;
    p.n = 80;
    p.m1 = 2;
    p.m2 = 3;
    p.coloured = true;
    p.seed = 9;
    AttachGraph g = generate(p);
    AttachGraph blue = project(g, 1);
    AttachGraph red = project(g, 2);
    REQUIRE_NOTHROW(blue.validate());
    REQUIRE_NOTHROW(red.validate());
    REQUIRE(blue.m() == 2);
    REQUIRE(red.m() == 3);
    REQUIRE(blue.records.size() + red.records.size() == g.records.size());
    // multiset of (stem, target) pairs is partitioned
    auto key = [](const AttachGraph& x) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> k;
        for (const auto& r : x.records) k.emplace_back(r.stem, r.target);
        std::sort(k.begin(), k.end());
        return k;
    };
    auto all = key(g);
    auto parts = key(blue);
    auto reds = key(red);
    parts.insert(parts.end(), reds.begin(), reds.end());
    std::sort(parts.begin(), parts.end());
    REQUIRE(parts == all);

    // m2 = 0: projection 1 is the identity on edges
    GenParams q = p;
    q.m2 = 0;
    AttachGraph h = generate(q);
    AttachGraph h1 = project(h, 1);
    REQUIRE(key(h1) == key(h));
    AttachGraph h2 = project(h, 2);
    REQUIRE(h2.records.empty());

    GenParams plain = p;
    plain.coloured = false;
    plain.m2 = 0;
    REQUIRE_THROWS_AS(project(generate(plain), 1), std::invalid_argument);
}

TEST_CASE("uniform blue projection is distributed as a fresh m1 graph", "[generate]") {
    // two-sample chi-square on the aggregate target histogram
    const std::uint32_t n = 100;
    const int trials = 10000;
    std::vector<double> ha(n, 0.0), hb(n, 0.0); // index by target
    GenParams pa;
    pa.n = n;
    pa.m1 = 2;
    pa.m2 = 1;
    pa.coloured = true;
    GenParams pb;
    pb.n = n;
    pb.m1 = 2;
    for (int i = 0; i < trials; ++i) {
        pa.seed = derive_seed(101, static_cast<std::uint64_t>(i));
        pb.seed = derive_seed(202, static_cast<std::uint64_t>(i));
        AttachGraph a = project(gen_uniform(pa), 1);
        AttachGraph b = gen_uniform(pb);
        for (const auto& r : a.records)
            if (r.stem > 1) ha[r.target] += 1;
        for (const auto& r : b.records)
            if (r.stem > 1) hb[r.target] += 1;
    }
    double stat = 0;
    int cells = 0;
    for (std::uint32_t k = 1; k < n; ++k) {
        const double tot = ha[k] + hb[k];
        if (tot == 0) continue;
        const double d = ha[k] - hb[k];
        stat += d * d / tot;
        ++cells;
    }
    INFO("two-sample chi2 = " << stat << " over " << cells << " cells");
    REQUIRE(cells == 99);
    REQUIRE(stat < 147.01035826441764); // 0.999 quantile, df = 98
}

TEST_CASE("generator preconditions", "[generate]") {
    GenParams p;
    p.n = 0;
    REQUIRE_THROWS_AS(gen_uniform(p), std::invalid_argument);
    p.n = 1;
    p.m1 = 0;
    REQUIRE_THROWS_AS(gen_uniform(p), std::invalid_argument);
    p.m1 = 1;
    p.m2 = 1; // red records without colouring
    p.coloured = false;
    REQUIRE_THROWS_AS(gen_preferential(p), std::invalid_argument);
}
