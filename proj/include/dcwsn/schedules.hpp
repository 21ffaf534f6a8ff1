#ifndef DCWSN_SCHEDULES_HPP
#define DCWSN_SCHEDULES_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcwsn/rng.hpp"

namespace dcwsn {

// Wake schedule: L slots per cycle, exactly d of them awake, packed into
// 64-bit words (slot k = bit k%64 of word k/64). Overlap testing is a
// word-wise AND, which is the hot operation of graph construction.
class Schedule {
public:
    Schedule() = default;
    Schedule(std::uint32_t L, std::uint32_t d)
        : L_(L), d_(d), words_((L + 63) / 64, 0) {
        if (d < 1 || d > L)
            throw std::invalid_argument("Schedule: need 1 <= d <= L");
    }

    std::uint32_t L() const { return L_; }
    std::uint32_t d() const { return d_; }

    void set(std::uint32_t slot) { words_[slot >> 6] |= 1ULL << (slot & 63); }
    void clear(std::uint32_t slot) { words_[slot >> 6] &= ~(1ULL << (slot & 63)); }
    bool awake(std::uint32_t slot) const {
        return (words_[slot >> 6] >> (slot & 63)) & 1ULL;
    }

    std::uint32_t popcount() const {
        std::uint32_t c = 0;
        for (auto w : words_) c += static_cast<std::uint32_t>(std::popcount(w));
        return c;
    }

    std::vector<std::uint32_t> slots() const {
        std::vector<std::uint32_t> out;
        out.reserve(d_);
        for (std::uint32_t k = 0; k < L_; ++k)
            if (awake(k)) out.push_back(k);
        return out;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    // Number of maximal awake runs of the cyclic bitmap. An all-awake
    // schedule has one run and no sleep transitions.
    std::uint32_t awake_runs() const {
        if (d_ == L_) return 1;
        std::uint32_t runs = 0;
        for (std::uint32_t k = 0; k < L_; ++k) {
            bool prev = awake((k + L_ - 1) % L_);
            if (awake(k) && !prev) ++runs;
        }
        return runs;
    }

    bool operator==(const Schedule& o) const {
        return L_ == o.L_ && words_ == o.words_;
    }
    bool operator<(const Schedule& o) const {
        if (L_ != o.L_) return L_ < o.L_;
        return words_ < o.words_;
    }

    // "L,d,hex" with hex nibbles most-significant first.
    std::string to_string() const {
        std::string hex;
        std::uint32_t nibbles = (L_ + 3) / 4;
        static const char* digits = "0123456789abcdef";
        for (std::uint32_t i = nibbles; i-- > 0;) {
            std::uint32_t v = 0;
            for (std::uint32_t b = 0; b < 4; ++b) {
                std::uint32_t slot = i * 4 + b;
                if (slot < L_ && awake(slot)) v |= 1u << b;
            }
            hex.push_back(digits[v]);
        }
        return std::to_string(L_) + "," + std::to_string(d_) + "," + hex;
    }

    static Schedule from_string(const std::string& s) {
        auto c1 = s.find(',');
        auto c2 = s.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::invalid_argument("Schedule::from_string: want L,d,hex");
        std::uint32_t L = static_cast<std::uint32_t>(std::stoul(s.substr(0, c1)));
        std::uint32_t d =
            static_cast<std::uint32_t>(std::stoul(s.substr(c1 + 1, c2 - c1 - 1)));
        std::string hex = s.substr(c2 + 1);
        Schedule sch(L, d);
        std::uint32_t nibbles = (L + 3) / 4;
        if (hex.size() != nibbles)
            throw std::invalid_argument("Schedule::from_string: bad hex length");
        for (std::uint32_t i = 0; i < nibbles; ++i) {
            char c = hex[nibbles - 1 - i];
            std::uint32_t v;
            if (c >= '0' && c <= '9') v = static_cast<std::uint32_t>(c - '0');
            else if (c >= 'a' && c <= 'f') v = static_cast<std::uint32_t>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') v = static_cast<std::uint32_t>(c - 'A' + 10);
            else throw std::invalid_argument("Schedule::from_string: bad hex digit");
            for (std::uint32_t b = 0; b < 4; ++b)
                if ((v >> b) & 1u) sch.set(i * 4 + b);
        }
        if (sch.popcount() != d)
            throw std::invalid_argument("Schedule::from_string: popcount != d");
        return sch;
    }

private:
    std::uint32_t L_ = 0, d_ = 0;
    std::vector<std::uint64_t> words_;
};

inline bool overlap(const Schedule& a, const Schedule& b) {
    if (a.L() != b.L())
        throw std::invalid_argument("overlap: schedules with different L");
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i)
        if (wa[i] & wb[i]) return true;
    return false;
}

inline Schedule make_schedule(std::uint32_t L, std::uint32_t d,
                              const std::vector<std::uint32_t>& slots) {
    Schedule s(L, d);
    for (auto k : slots) s.set(k);
    if (s.popcount() != d)
        throw std::invalid_argument("make_schedule: slot list does not match d");
    return s;
}

inline Schedule contiguous_from_start(std::uint32_t L, std::uint32_t d,
                                      std::uint32_t start) {
    Schedule s(L, d);
    for (std::uint32_t k = 0; k < d; ++k) s.set((start + k) % L);
    return s;
}

// Contiguous scheme: a uniform start slot, d consecutive awake slots
// (wrapping modulo L).
inline Schedule gen_contiguous(std::uint32_t L, std::uint32_t d, Pcg32& rng) {
    if (d < 1 || d > L) throw std::invalid_argument("gen_contiguous: need 1 <= d <= L");
    return contiguous_from_start(L, d, rng.below(L));
}

// Random-selection scheme: a uniform d-subset of {0..L-1} (partial
// Fisher-Yates over the slot array).
inline Schedule gen_random_selection(std::uint32_t L, std::uint32_t d, Pcg32& rng) {
    if (d < 1 || d > L)
        throw std::invalid_argument("gen_random_selection: need 1 <= d <= L");
    std::vector<std::uint32_t> slots(L);
    for (std::uint32_t i = 0; i < L; ++i) slots[i] = i;
    Schedule s(L, d);
    for (std::uint32_t i = 0; i < d; ++i) {
        std::uint32_t j = i + rng.below(L - i);
        std::swap(slots[i], slots[j]);
        s.set(slots[i]);
    }
    return s;
}

// Pairwise connection probability of the contiguous scheme, clamped at 1
// (two awake windows longer than half the cycle always intersect).
inline double gamma_contiguous(std::uint32_t d, std::uint32_t L) {
    if (d < 1 || d > L) throw std::invalid_argument("gamma_contiguous: need 1 <= d <= L");
    double g = (2.0 * d - 1.0) / L;
    return std::min(1.0, g);
}

// Working connection probability of the random-selection scheme,
// 1 - (1-d/L)^d. The exact value is hypergeometric and slightly larger;
// see gamma_random_exact. The radius corollaries are defined from this
// expression, so it is the one the radii module consumes.
inline double gamma_random(std::uint32_t d, std::uint32_t L) {
    if (d < 1 || d > L) throw std::invalid_argument("gamma_random: need 1 <= d <= L");
    double delta = static_cast<double>(d) / L;
    return 1.0 - std::pow(1.0 - delta, static_cast<double>(d));
}

// Exact P(two uniform d-subsets of L intersect) = 1 - C(L-d,d)/C(L,d).
inline double gamma_random_exact(std::uint32_t d, std::uint32_t L) {
    if (d < 1 || d > L)
        throw std::invalid_argument("gamma_random_exact: need 1 <= d <= L");
    if (2 * d > L) return 1.0;
    double ratio = 1.0; // product of (L-d-i)/(L-i)
    for (std::uint32_t i = 0; i < d; ++i)
        ratio *= static_cast<double>(L - d - i) / static_cast<double>(L - i);
    return 1.0 - ratio;
}

// P(three contiguous schedules pairwise overlap) = (3d^2-3d+1)/L^2;
// strictly above gamma^3, which is the edge-dependence witness. The
// closed form counts start-slot arcs without wraparound collisions and
// is exact iff L >= 3d-2 (checked against exhaustive enumeration); in
// the band 2d-1 <= L < 3d-2 it undercounts, so that band is rejected.
inline double triangle_prob_contiguous(std::uint32_t d, std::uint32_t L) {
    if (d < 1 || L + 2 < 3 * d)
        throw std::invalid_argument("triangle_prob_contiguous: need L >= 3d-2");
    double dd = static_cast<double>(d);
    return (3.0 * dd * dd - 3.0 * dd + 1.0) / (static_cast<double>(L) * L);
}

enum class SchemeKind { Contiguous, RandomSelection, DeterministicFamily, CustomVB };

struct SchemeSpec {
    SchemeKind kind = SchemeKind::Contiguous;
    std::uint32_t L = 100;
    std::uint32_t d = 5;

    double delta() const { return static_cast<double>(d) / L; }

    // Per-slot wake probabilities; both built-in schemes have uniform
    // time coverage d/L.
    std::vector<double> slot_wake_probabilities() const {
        return std::vector<double>(L, delta());
    }

    Schedule draw(Pcg32& rng) const {
        switch (kind) {
        case SchemeKind::Contiguous: return gen_contiguous(L, d, rng);
        case SchemeKind::RandomSelection: return gen_random_selection(L, d, rng);
        default:
            throw std::invalid_argument("SchemeSpec::draw: scheme has no standalone sampler");
        }
    }

    // Analytic connection probability used for radius selection.
    double gamma() const {
        switch (kind) {
        case SchemeKind::Contiguous: return gamma_contiguous(d, L);
        case SchemeKind::RandomSelection: return gamma_random(d, L);
        case SchemeKind::DeterministicFamily: return 1.0;
        default:
            throw std::invalid_argument("SchemeSpec::gamma: custom model carries its own gamma");
        }
    }
};

struct GammaEstimate {
    double p_hat = 0.0;
    double std_err = 0.0;
    std::uint64_t trials = 0;
};

// Monte Carlo oracle for the connection probability of any scheme.
inline GammaEstimate gamma_empirical(const SchemeSpec& scheme, std::uint64_t trials,
                                     Pcg32& rng) {
    if (trials < 1) throw std::invalid_argument("gamma_empirical: trials must be >= 1");
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Schedule a = scheme.draw(rng);
        Schedule b = scheme.draw(rng);
        if (overlap(a, b)) ++hits;
    }
    GammaEstimate e;
    e.trials = trials;
    e.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
    e.std_err = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(trials));
    return e;
}

// ---------------------------------------------------------------------------
// Vertex-based random connection models. A model supplies an independent
// mark per vertex and a symmetric predicate on mark pairs; schedule
// overlap is the special case mark = Schedule, predicate = nonempty
// intersection. Models are used as template parameters (see
// build_vb_graph); vb_connect is the predicate entry point.

template <class Model>
inline bool vb_connect(const Model& model, const typename Model::mark_type& a,
                       const typename Model::mark_type& b) {
    return model.connects(a, b);
}

// Nodes connect iff their colors differ. With k colors, gamma = 1 - 1/k;
// no k+1 mutually-in-range nodes can form a (k+1)-clique.
struct ColorModel {
    using mark_type = std::uint32_t;
    std::uint32_t colors = 3;

    mark_type sample_mark(Pcg32& rng) const { return rng.below(colors); }
    bool connects(mark_type a, mark_type b) const { return a != b; }
    double gamma() const { return 1.0 - 1.0 / static_cast<double>(colors); }
};

// Key predistribution: each node holds K keys drawn from a pool of P;
// nodes connect iff they share a key. Equivalent to the random-selection
// scheme with P slots and K awake.
struct KeyModel {
    using mark_type = Schedule;
    std::uint32_t pool = 100; // P
    std::uint32_t keys = 5;   // K

    mark_type sample_mark(Pcg32& rng) const {
        return gen_random_selection(pool, keys, rng);
    }
    bool connects(const mark_type& a, const mark_type& b) const {
        return overlap(a, b);
    }
    double gamma() const { return gamma_random_exact(keys, pool); }
};

// Duty-cycle schedules as marks.
struct ScheduleModel {
    using mark_type = Schedule;
    SchemeSpec scheme;

    mark_type sample_mark(Pcg32& rng) const { return scheme.draw(rng); }
    bool connects(const mark_type& a, const mark_type& b) const {
        return overlap(a, b);
    }
    double gamma() const { return scheme.gamma(); }
};

// Generic model hitting any target gamma exactly: marks are uniform in
// [0,1) and a pair connects iff frac(Z_u + Z_v) < gamma.
struct UniformSumModel {
    using mark_type = double;
    double target = 1.0;

    mark_type sample_mark(Pcg32& rng) const { return rng.uniform(); }
    bool connects(mark_type a, mark_type b) const {
        double s = a + b;
        if (s >= 1.0) s -= 1.0;
        return s < target;
    }
    double gamma() const { return target; }
};

template <class Model>
inline GammaEstimate gamma_empirical_vb(const Model& model, std::uint64_t trials,
                                        Pcg32& rng) {
    if (trials < 1) throw std::invalid_argument("gamma_empirical_vb: trials must be >= 1");
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        auto a = model.sample_mark(rng);
        auto b = model.sample_mark(rng);
        if (model.connects(a, b)) ++hits;
    }
    GammaEstimate e;
    e.trials = trials;
    e.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
    e.std_err = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(trials));
    return e;
}

// ---------------------------------------------------------------------------
// Support graph and the reachability condition: the distinct schedules a
// scheme can select, with an edge between every intersecting pair. The
// scheme satisfies reachability when this graph is connected by chains of
// bounded length.

struct SupportGraph {
    std::vector<Schedule> nodes;
    std::vector<std::vector<std::uint32_t>> adj;
};

inline SupportGraph support_graph_from(std::vector<Schedule> schedules) {
    std::sort(schedules.begin(), schedules.end());
    schedules.erase(std::unique(schedules.begin(), schedules.end()),
                    schedules.end());
    SupportGraph g;
    g.nodes = std::move(schedules);
    g.adj.resize(g.nodes.size());
    for (std::uint32_t i = 0; i < g.nodes.size(); ++i)
        for (std::uint32_t j = i + 1; j < g.nodes.size(); ++j)
            if (overlap(g.nodes[i], g.nodes[j])) {
                g.adj[i].push_back(j);
                g.adj[j].push_back(i);
            }
    return g;
}

inline double binomial_coefficient(std::uint32_t n, std::uint32_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double v = 1.0;
    for (std::uint32_t i = 1; i <= k; ++i)
        v *= static_cast<double>(n - k + i) / static_cast<double>(i);
    return v;
}

// Exact support when the scheme's support is small enough to enumerate
// (contiguous: L schedules; random selection: C(L,d) <= limit), otherwise
// the distinct schedules seen in sample_draws draws.
inline SupportGraph build_support(const SchemeSpec& scheme, Pcg32& rng,
                                  std::uint64_t sample_draws = 10000,
                                  double enumeration_limit = 1e6) {
    std::vector<Schedule> sch;
    if (scheme.kind == SchemeKind::Contiguous) {
        for (std::uint32_t s = 0; s < scheme.L; ++s)
            sch.push_back(contiguous_from_start(scheme.L, scheme.d, s));
    } else if (scheme.kind == SchemeKind::RandomSelection &&
               binomial_coefficient(scheme.L, scheme.d) <= enumeration_limit) {
        // enumerate d-subsets in lexicographic order
        std::vector<std::uint32_t> idx(scheme.d);
        for (std::uint32_t i = 0; i < scheme.d; ++i) idx[i] = i;
        for (;;) {
            sch.push_back(make_schedule(scheme.L, scheme.d, idx));
            std::int64_t i = scheme.d - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] ==
                                 scheme.L - scheme.d + static_cast<std::uint32_t>(i))
                --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (std::size_t j = static_cast<std::size_t>(i) + 1; j < scheme.d; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    } else {
        for (std::uint64_t t = 0; t < sample_draws; ++t)
            sch.push_back(scheme.draw(rng));
    }
    return support_graph_from(std::move(sch));
}

struct ReachabilityResult {
    bool reachable = false;
    std::int32_t k = -1; // support-graph diameter when reachable
};

// Reachable iff the support graph is connected with diameter <= max_k;
// k is the diameter (0 for a single schedule).
inline ReachabilityResult check_reachability(const SupportGraph& support,
                                             std::uint32_t max_k) {
    ReachabilityResult res;
    std::size_t n = support.nodes.size();
    if (n == 0) throw std::invalid_argument("check_reachability: empty support");
    std::vector<std::int32_t> dist(n);
    std::int32_t diameter = 0;
    for (std::uint32_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::queue<std::uint32_t> q;
        dist[s] = 0;
        q.push(s);
        std::size_t seen = 1;
        while (!q.empty()) {
            std::uint32_t u = q.front();
            q.pop();
            for (auto v : support.adj[u])
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    diameter = std::max(diameter, dist[v]);
                    ++seen;
                    q.push(v);
                }
        }
        if (seen != n) return res; // disconnected
        if (static_cast<std::uint32_t>(diameter) > max_k) return res;
    }
    res.reachable = true;
    res.k = diameter;
    return res;
}

// Per-slot empirical wake frequencies over independent draws. Uniform
// time coverage means every entry is near d/L; a zero entry is a
// coverage violation.
template <class DrawFn>
inline std::vector<double> check_time_coverage_with(std::uint32_t L,
                                                    std::uint64_t trials,
                                                    DrawFn&& draw) {
    if (trials < 1) throw std::invalid_argument("check_time_coverage: trials must be >= 1");
    std::vector<std::uint64_t> counts(L, 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
        Schedule s = draw();
        for (std::uint32_t k = 0; k < L; ++k)
            if (s.awake(k)) ++counts[k];
    }
    std::vector<double> freq(L);
    for (std::uint32_t k = 0; k < L; ++k)
        freq[k] = static_cast<double>(counts[k]) / static_cast<double>(trials);
    return freq;
}

inline std::vector<double> check_time_coverage(const SchemeSpec& scheme,
                                               std::uint64_t trials, Pcg32& rng) {
    return check_time_coverage_with(scheme.L, trials,
                                    [&]() { return scheme.draw(rng); });
}

inline bool has_full_coverage(const std::vector<double>& freqs) {
    return std::all_of(freqs.begin(), freqs.end(),
                       [](double f) { return f > 0.0; });
}

} // namespace dcwsn

#endif
