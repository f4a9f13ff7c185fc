// analysis.hpp — closed-form machinery behind the matching/Hamiltonicity
// arguments: the Chernoff rate function, the loop-probability product, the
// two root equations fixing the guaranteed path/matching sizes, the
// constant-set condition checker, and the statistical lemma checkers that run
// against generated graphs.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "generate.hpp"
#include "rng.hpp"

namespace attachlab {

// (1+x)log(1+x) - x, continuously extended to phi(-1) = 1.
inline double phi(double x) {
    if (x < -1.0) throw std::domain_error("phi: x must be >= -1");
    if (x == -1.0) return 1.0;
    return (1.0 + x) * std::log1p(x) - x;
}

// prod_{i=a+1}^{b} (2i-1)/(2i), evaluated in log space with compensation.
inline double c_product(std::uint64_t a, std::uint64_t b) {
    if (a > b) throw std::invalid_argument("c_product: need a <= b");
    double sum = 0.0, comp = 0.0;
    for (std::uint64_t i = a + 1; i <= b; ++i) {
        const double term = std::log1p(-0.5 / static_cast<double>(i));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::exp(sum);
}

namespace detail {

// Largest root of f in (lo, hi): grid scan for sign changes, then bisection
// to machine precision. Warns if the bracket is not unique.
template <class F>
double largest_root(F f, double lo, double hi, const char* what) {
    constexpr int kGrid = 4096;
    double bl = 0, bh = 0;
    int brackets = 0;
    double xp = lo, fp = f(lo);
    for (int i = 1; i <= kGrid; ++i) {
        const double x = lo + (hi - lo) * i / kGrid;
        const double fx = f(x);
        if ((fp < 0) != (fx < 0)) {
            bl = xp;
            bh = x;
            ++brackets;
        }
        xp = x;
        fp = fx;
    }
    if (brackets == 0) throw std::runtime_error(std::string(what) + ": no sign change in range");
    if (brackets > 1)
        std::fprintf(stderr, "%s: %d sign changes detected; returning the largest root\n", what,
                     brackets);
    double fl = f(bl);
    for (int it = 0; it < 200 && bh - bl > 1e-17 * std::max(1.0, bh); ++it) {
        const double mid = 0.5 * (bl + bh);
        const double fm = f(mid);
        if ((fl < 0) == (fm < 0)) {
            bl = mid;
            fl = fm;
        } else {
            bh = mid;
        }
    }
    return 0.5 * (bl + bh);
}

} // namespace detail

// Root in (0, 1/2) of 2b*log(b) + (1-2b)*log(1-2b) + b^2*m/4; needs m >= 12
// for the equation to change sign on the interval.
inline double beta_of_m(int m) {
    if (m < 12) throw std::invalid_argument("beta_of_m: m must be >= 12");
    auto f = [m](double b) {
        return 2 * b * std::log(b) + (1 - 2 * b) * std::log1p(-2 * b) + b * b * m / 4.0;
    };
    return detail::largest_root(f, 1e-9, 0.5 - 1e-9, "beta_of_m");
}

// Root in (0, 1) of g*log(g) + (1-g)*log(1-g) + g^2*m/2.
inline double gamma_of_m(int m) {
    if (m < 1) throw std::invalid_argument("gamma_of_m: m must be >= 1");
    auto f = [m](double g) {
        return g * std::log(g) + (1 - g) * std::log1p(-g) + g * g * m / 2.0;
    };
    return detail::largest_root(f, 1e-9, 1.0 - 1e-9, "gamma_of_m");
}

// ---- constant-set conditions ------------------------------------------------

struct ConstantSet {
    int m = 0;
    int ell = 1;
    double alpha = 0, x = 0, y = 0, z = 0, d = 0;
    bool primed = false;
};

struct Condition {
    std::string name;
    double lhs = 0, rhs = 0;
    bool satisfied = false;
};

struct ConditionReport {
    std::vector<Condition> conditions;
    bool overall = true;

    const Condition* find(const std::string& name) const {
        for (const auto& c : conditions)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// The four published sets: (a)/(b) close the plain-process arguments,
// (c)/(d) the split-process ones (primed conditions).
inline ConstantSet published_set(char id) {
    switch (id) {
        case 'a': return {120, 1, 0.0538, 0.22791, 0.020063, 0.851649, 0.387967, false};
        case 'b': return {2900, 2, 0.032003, 0.048929, 0.003625, 0.965269, 0.353628, false};
        case 'c': return {500, 1, 0.016801, 0.149159, 0.008856, 0.905885, 0.649188, true};
        case 'd': return {14000, 2, 0.008874, 0.026228, 0.001272, 0.980855, 0.551906, true};
        default: throw std::invalid_argument("published_set: id must be a, b, c or d");
    }
}

inline ConditionReport check_conditions(const ConstantSet& c) {
    for (double v : {c.alpha, c.x, c.y, c.z, c.d})
        if (!(v > 0.0 && v < 1.0))
            throw std::invalid_argument("check_conditions: alpha, x, y, z, d must lie in (0,1)");
    if (c.m < 1) throw std::invalid_argument("check_conditions: m must be >= 1");
    if (c.ell != 1 && c.ell != 2) throw std::invalid_argument("check_conditions: ell must be 1 or 2");

    ConditionReport rep;
    auto add = [&rep](std::string name, double lhs, double rhs, bool ok) {
        rep.conditions.push_back({std::move(name), lhs, rhs, ok});
        rep.overall = rep.overall && ok;
    };
    const double m = c.m, ell = c.ell;
    add("zrange_lower", c.y, c.z, c.y < c.z);
    const double z_cap = 1.0 - (ell + 1) / (c.d * m);
    add("zrange_upper", c.z, z_cap, c.z < z_cap);
    const double dphim = (1 - c.d) * phi(-c.x) * m - c.d;
    add("dphim", dphim, 0.0, dphim > 0.0);
    // exponent 1/dphim is meaningful only when dphim > 0; otherwise report NaN
    const double cap1 =
        dphim > 0 ? std::pow(0.99 * c.y / std::exp(1.0), 1.0 / dphim)
                  : std::numeric_limits<double>::quiet_NaN();
    add("alphabound1", c.alpha, cap1, c.alpha < cap1);
    const double cap2 = std::exp(-(ell + 1 - c.z) / ((1 - c.x) * (1 - c.d) * (c.z - c.y)));
    add("alphabound2", c.alpha, cap2, c.alpha < cap2);
    const double dz = c.d * (1 - c.z) * m;
    const double ell_log_ell = ell == 1 ? 0.0 : ell * std::log(ell);
    if (!c.primed) {
        const double cap3 = 1.0 / (ell + 1) - 1.0 / dz;
        add("alphabound3", c.alpha, cap3, c.alpha < cap3);
        const double cap4 =
            std::exp(-((1 - c.z) * m * std::log(ell + 1) + ell + 1 - ell_log_ell) /
                     (dz - ell - 1));
        add("alphabound4", c.alpha, cap4, c.alpha < cap4);
    } else {
        const double cap3 = 1.0 / (ell + 1) - (8.0 / 3.0) / dz;
        add("alphabound3_primed", c.alpha, cap3, c.alpha < cap3);
        const double w =
            std::sqrt(8.0 / m) * std::log(std::exp(1.0) * (1 + 1 / ((ell + 1) * std::pow(c.alpha, c.d))));
        const double cap4 =
            std::exp(-((1 - c.z) * m * std::log((2 + w) * (2 + w) * (ell + 1)) + ell + 1 -
                       ell_log_ell) /
                     (dz - (ell + 1)));
        add("alphabound4_primed", c.alpha, cap4, c.alpha < cap4);
    }
    return rep;
}

// ---- degree-sum trajectory ---------------------------------------------------

struct Trajectory {
    std::uint32_t t0 = 0;              // first time index (= floor(c*n))
    std::vector<std::uint64_t> y;      // y[i] = degree sum of [t0] at time t0+i
    std::vector<double> reference;     // 2*m*n*sqrt(c*t/n)
};

inline Trajectory degree_sum_trajectory(const AttachGraph& g, double c) {
    if (g.model != Model::preferential)
        throw std::invalid_argument("degree_sum_trajectory: preferential graphs only");
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("degree_sum_trajectory: c in (0,1)");
    const std::uint32_t k = static_cast<std::uint32_t>(c * g.n);
    if (k < 1) throw std::invalid_argument("degree_sum_trajectory: c*n below 1");
    Trajectory tr;
    tr.t0 = k;
    tr.y.reserve(g.n - k + 1);
    tr.reference.reserve(g.n - k + 1);
    std::uint64_t sum = 0;
    std::size_t i = 0;
    const std::uint32_t m = g.m();
    for (std::uint32_t t = 1; t <= g.n; ++t) {
        for (std::uint32_t o = 0; o < m; ++o, ++i) {
            const EdgeRecord& r = g.records[i];
            sum += (r.stem <= k) + (r.target <= k);
        }
        if (t >= k) {
            tr.y.push_back(sum);
            tr.reference.push_back(2.0 * m * g.n * std::sqrt(c * t / g.n));
        }
    }
    return tr;
}

// ---- prefix/random-set degree-sum bound --------------------------------------

struct WeightViolation {
    std::uint32_t k = 0, t = 0;
    std::uint64_t sum = 0;
    double bound = 0;
};

struct WeightReport {
    std::vector<WeightViolation> violations;
    std::uint64_t checks = 0;
    double max_ratio = 0; // sum/bound over all checked (t >= omega) pairs
};

namespace detail {

template <class Pred>
void sweep_weight(const AttachGraph& g, double A, std::uint32_t omega, std::uint32_t k,
                  std::uint32_t t_min, Pred in_w, WeightReport& rep) {
    const std::uint32_t m = g.m();
    std::uint64_t sum = 0;
    std::size_t i = 0;
    for (std::uint32_t t = 1; t <= g.n; ++t) {
        for (std::uint32_t o = 0; o < m; ++o, ++i) {
            const EdgeRecord& r = g.records[i];
            sum += in_w(r.stem) + in_w(r.target);
        }
        if (t < t_min) continue;
        double bound;
        if (t >= omega) {
            const double kt = static_cast<double>(k) * t;
            bound = (1.0 + A / (static_cast<double>(m) * k + 1)) *
                    (2.0 * m * std::sqrt(kt) +
                     std::sqrt(8.0 * m * kt) * std::log(std::exp(1.0) * t / k));
        } else {
            bound = 2.0 * static_cast<double>(m) * omega;
        }
        ++rep.checks;
        const double ratio = static_cast<double>(sum) / bound;
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (static_cast<double>(sum) > bound) rep.violations.push_back({k, t, sum, bound});
    }
}

} // namespace detail

// Checks sum_{w in W} deg(w, t) against
//   (1 + A/(mk+1)) (2m sqrt(kt) + sqrt(8mkt) log(et/k))   for t >= omega
//   2m*omega                                              for t <  omega
// for prefix sets W = [k] and a sample of random sets.
inline WeightReport oldest_degree_bound_check(const AttachGraph& g, double A, std::uint32_t omega,
                                              const std::vector<std::uint32_t>& prefix_ks = {1, 10,
                                                                                             100},
                                              std::uint32_t random_sets = 3,
                                              std::uint64_t seed = 0) {
    if (g.model != Model::preferential)
        throw std::invalid_argument("oldest_degree_bound_check: preferential graphs only");
    WeightReport rep;
    for (std::uint32_t k : prefix_ks) {
        if (k < 1 || k > g.n) continue;
        detail::sweep_weight(g, A, omega, k, k, [k](std::uint32_t v) { return v <= k; }, rep);
    }
    Rng rng(seed);
    for (std::uint32_t s = 0; s < random_sets; ++s) {
        const std::uint32_t k = 1 + rng.bounded(g.n);
        // floyd sampling of k distinct vertices
        std::vector<char> in(g.n + 1, 0);
        std::uint32_t maxv = 0;
        for (std::uint32_t j = g.n - k + 1; j <= g.n; ++j) {
            std::uint32_t v = 1 + rng.bounded(j);
            if (in[v]) v = j;
            in[v] = 1;
            maxv = std::max(maxv, v);
        }
        detail::sweep_weight(g, A, omega, k, maxv,
                             [&in](std::uint32_t v) { return static_cast<int>(in[v]); }, rep);
    }
    return rep;
}

// ---- neighbourhood expansion -------------------------------------------------

// Exhaustively tests every K with |K| <= min(alpha*n, k_max) for |N(K)| >= ell|K|,
// then tries `random_budget` greedily-shrunk random candidates up to size
// floor(alpha*n). Returns a violating set if one is found.
//
// The exhaustive stage enumerates only subsets of L_k = {v : deg(v) <= ell*k + k - 2}:
// any violating K of size k satisfies deg(v) - (k-1) <= |N(K)| <= ell*k - 1 for
// every v in K, so K is contained in L_k. This keeps dense instances cheap
// without giving up exhaustiveness.
inline std::optional<std::vector<std::uint32_t>> expansion_check(const SimpleView& g, double alpha,
                                                                 int ell, std::uint32_t k_max,
                                                                 std::uint64_t random_budget = 0,
                                                                 std::uint64_t seed = 0) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("expansion_check: alpha in (0,1)");
    if (ell < 1) throw std::invalid_argument("expansion_check: ell must be >= 1");
    const std::uint64_t cap = static_cast<std::uint64_t>(alpha * g.n());
    const std::uint32_t km = static_cast<std::uint32_t>(std::min<std::uint64_t>(cap, k_max));

    std::vector<std::uint32_t> stamp(g.n() + 1, 0);
    std::uint32_t tick = 0;
    auto nbhd_size = [&](const std::vector<std::uint32_t>& k_set) {
        ++tick;
        for (auto v : k_set) stamp[v] = tick;
        std::uint32_t cnt = 0;
        for (auto v : k_set)
            for (auto w : g.adj(v))
                if (stamp[w] != tick) {
                    stamp[w] = tick;
                    ++cnt;
                }
        return cnt;
    };

    for (std::uint32_t k = 1; k <= km; ++k) {
        std::vector<std::uint32_t> pool;
        const std::uint64_t deg_cap = static_cast<std::uint64_t>(ell) * k + k - 2;
        for (std::uint32_t v = 1; v <= g.n(); ++v)
            if (g.degree(v) <= deg_cap) pool.push_back(v);
        if (pool.size() < k) continue;
        // enumeration guard: C(|pool|, k) must stay sane
        double combos = 1;
        for (std::uint32_t i = 0; i < k; ++i) combos *= static_cast<double>(pool.size() - i) / (i + 1);
        if (combos > 1e8)
            throw std::runtime_error("expansion_check: exhaustive stage too large for this graph");
        std::vector<std::uint32_t> idx(k);
        for (std::uint32_t i = 0; i < k; ++i) idx[i] = i;
        std::vector<std::uint32_t> k_set(k);
        while (true) {
            for (std::uint32_t i = 0; i < k; ++i) k_set[i] = pool[idx[i]];
            if (nbhd_size(k_set) < static_cast<std::uint64_t>(ell) * k) return k_set;
            // next combination
            std::int64_t i = k - 1;
            while (i >= 0 && idx[i] == pool.size() - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }

    if (cap >= 1 && random_budget > 0) {
        Rng rng(seed);
        for (std::uint64_t b = 0; b < random_budget; ++b) {
            std::uint32_t k = 1 + rng.bounded(static_cast<std::uint32_t>(cap));
            std::vector<char> in(g.n() + 1, 0);
            std::vector<std::uint32_t> k_set;
            while (k_set.size() < k) {
                const std::uint32_t v = 1 + rng.bounded(g.n());
                if (!in[v]) {
                    in[v] = 1;
                    k_set.push_back(v);
                }
            }
            while (!k_set.empty()) {
                if (nbhd_size(k_set) < static_cast<std::uint64_t>(ell) * k_set.size())
                    return k_set;
                // drop the member whose removal loses the least neighbourhood
                std::size_t best_i = 0;
                std::int64_t best_score = std::numeric_limits<std::int64_t>::max();
                for (std::size_t i = 0; i < k_set.size(); ++i) {
                    auto probe = k_set;
                    probe.erase(probe.begin() + static_cast<std::ptrdiff_t>(i));
                    const std::int64_t score =
                        probe.empty() ? std::numeric_limits<std::int64_t>::max()
                                      : static_cast<std::int64_t>(nbhd_size(probe)) -
                                            static_cast<std::int64_t>(ell) *
                                                static_cast<std::int64_t>(probe.size());
                    if (score < best_score) {
                        best_score = score;
                        best_i = i;
                    }
                }
                k_set.erase(k_set.begin() + static_cast<std::ptrdiff_t>(best_i));
            }
        }
    }
    return std::nullopt;
}

// ---- good-vertex counting ------------------------------------------------------

struct GoodOldReport {
    std::uint64_t bad_count = 0; // vertices of [j] with too few future neighbours
    std::uint64_t j = 0;
    double threshold = 0;
};

// j = floor(k (n/k)^d); counts v in [j] with fewer than (1-x) m log(n/j)
// simple-view neighbours in [n] \ [j]. The caller compares against y*k.
inline GoodOldReport good_vertices_check(const AttachGraph& g, double x, double d,
                                         std::uint32_t k) {
    if (k < 1 || k > g.n) throw std::invalid_argument("good_vertices_check: k in [1, n]");
    if (!(x > 0 && x < 1) || !(d > 0 && d < 1))
        throw std::invalid_argument("good_vertices_check: x, d in (0,1)");
    GoodOldReport rep;
    rep.j = static_cast<std::uint64_t>(k * std::pow(static_cast<double>(g.n) / k, d));
    if (rep.j > g.n) rep.j = g.n;
    rep.threshold = (1 - x) * g.m() * std::log(static_cast<double>(g.n) / rep.j);
    const SimpleView sv = simple_view(g);
    for (std::uint32_t v = 1; v <= rep.j; ++v) {
        auto a = sv.adj(v);
        const auto it = std::upper_bound(a.begin(), a.end(), static_cast<std::uint32_t>(rep.j));
        const auto future = static_cast<double>(a.end() - it);
        if (future < rep.threshold) ++rep.bad_count;
    }
    return rep;
}

// ---- edge-absence frequency ------------------------------------------------------

struct EdgeAbsenceReport {
    double freq = 0;          // measured share of trials with no sigma-edge from v into W
    double exact_uniform = 0; // (1 - |W|/(v-1))^{m_sigma}
    double bound_future = 0;  // (1 - |W|/(2n))^{m_sigma}
    double bound_past = 0;    // (1 - |W|/(2v))^{m_sigma}
    std::uint32_t trials = 0;
};

// sigma = 0 counts every record, 1 only blue, 2 only red.
inline EdgeAbsenceReport edge_absence_freq(const GenParams& params, std::uint32_t v,
                                           const std::vector<std::uint32_t>& w,
                                           std::uint32_t trials, int sigma = 0) {
    if (v < 2 || v > params.n) throw std::invalid_argument("edge_absence_freq: v in [2, n]");
    if (trials < 1) throw std::invalid_argument("edge_absence_freq: trials >= 1");
    if (sigma < 0 || sigma > 2) throw std::invalid_argument("edge_absence_freq: sigma in {0,1,2}");
    std::vector<char> in_w(params.n + 1, 0);
    for (auto u : w) {
        if (u < 1 || u >= v) throw std::invalid_argument("edge_absence_freq: W must lie in [v-1]");
        if (in_w[u]) throw std::invalid_argument("edge_absence_freq: W has repeats");
        in_w[u] = 1;
    }
    const std::uint32_t m_sigma = sigma == 0 ? params.m() : sigma == 1 ? params.m1 : params.m2;
    const Colour want = sigma == 1 ? Colour::blue : Colour::red;

    std::uint32_t absent = 0;
    GenParams p = params;
    for (std::uint32_t i = 0; i < trials; ++i) {
        p.seed = derive_seed(params.seed, i);
        const AttachGraph g = generate(p);
        bool hit = false;
        const std::size_t base = static_cast<std::size_t>(v - 1) * p.m();
        for (std::uint32_t o = 0; o < p.m(); ++o) {
            const EdgeRecord& r = g.records[base + o];
            if (sigma != 0 && r.colour != want) continue;
            if (in_w[r.target]) {
                hit = true;
                break;
            }
        }
        absent += !hit;
    }
    EdgeAbsenceReport rep;
    rep.trials = trials;
    rep.freq = static_cast<double>(absent) / trials;
    const double k = static_cast<double>(w.size());
    rep.exact_uniform = std::pow(1.0 - k / (v - 1.0), m_sigma);
    rep.bound_future = std::pow(1.0 - k / (2.0 * params.n), m_sigma);
    rep.bound_past = std::pow(1.0 - k / (2.0 * v), m_sigma);
    return rep;
}

// ---- all-neighbours-in-Q bound (report only) --------------------------------------

struct ContainmentReport {
    double freq = 0;
    double bound = 0;
    std::uint32_t trials = 0;
};

// Frequency over trials that every vertex of R has all its sigma-stem targets
// inside Q, against ((1 + C/q)(2 sqrt(q/j) + sqrt(8q/(mj)) log(e(1+j/q))))^{m_sigma * r}.
inline ContainmentReport containment_freq(const GenParams& params, std::uint64_t j,
                                          const std::vector<std::uint32_t>& r_set,
                                          const std::vector<std::uint32_t>& q_set,
                                          std::uint32_t trials, int sigma, double C = 20.0) {
    if (q_set.empty()) throw std::invalid_argument("containment_freq: Q must be non-empty");
    for (auto v : r_set)
        if (v <= j || v > params.n)
            throw std::invalid_argument("containment_freq: R must lie in (j, n]");
    std::vector<char> in_q(params.n + 1, 0);
    for (auto u : q_set) in_q[u] = 1;
    std::vector<char> in_r(params.n + 1, 0);
    for (auto u : r_set) in_r[u] = 1;
    const std::uint32_t m_sigma = sigma == 0 ? params.m() : sigma == 1 ? params.m1 : params.m2;
    const Colour want = sigma == 1 ? Colour::blue : Colour::red;

    std::uint32_t all_in = 0;
    GenParams p = params;
    for (std::uint32_t i = 0; i < trials; ++i) {
        p.seed = derive_seed(params.seed, i);
        const AttachGraph g = generate(p);
        bool ok = true;
        for (const EdgeRecord& rec : g.records) {
            if (!in_r[rec.stem]) continue;
            if (sigma != 0 && rec.colour != want) continue;
            if (!in_q[rec.target]) {
                ok = false;
                break;
            }
        }
        all_in += ok;
    }
    ContainmentReport rep;
    rep.trials = trials;
    rep.freq = static_cast<double>(all_in) / trials;
    const double q = static_cast<double>(q_set.size());
    const double jm = static_cast<double>(j);
    const double base = (1.0 + C / q) * (2.0 * std::sqrt(q / jm) +
                                         std::sqrt(8.0 * q / (params.m() * jm)) *
                                             std::log(std::exp(1.0) * (1.0 + jm / q)));
    rep.bound = std::pow(base, static_cast<double>(m_sigma) * r_set.size());
    return rep;
}

} // namespace attachlab
