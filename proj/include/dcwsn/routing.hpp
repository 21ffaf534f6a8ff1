#ifndef DCWSN_ROUTING_HPP
#define DCWSN_ROUTING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dcwsn/geometry.hpp"
#include "dcwsn/schedules.hpp"

namespace dcwsn {

// Slot-by-slot record of one Send(M,S,D) flood.
//
// Timing model: a global slot counter t = 0,1,2,...; node u is awake in
// slot t iff bit (t mod L) of its schedule is set. A transmission in slot
// t is heard by exactly the in-range nodes awake in slot t; there are no
// collisions. A reception is qualified when the trigger predicate against
// the sender holds (strict: the receiver is strictly closer to D;
// relaxed: within relax_factor times the sender's distance); a node
// retransmits exactly once, at its first qualified reception, and ignores
// unqualified ones. A triggered node transmits in each of its awake slots
// in (t0, t0+L], i.e. d slots, and commits to the full cycle; the source
// does the same over [0, L). For an always-awake schedule (d == L) a
// transmitter uses a single slot instead, since a full cycle degenerates.
struct RoutingTrace {
    bool delivered = false;
    std::uint32_t hop_count = 0;      // trigger-chain length of first delivery
    std::uint64_t completion_slot = 0; // delivery slot, or max_slots on timeout
    std::vector<std::uint32_t> retransmitters;      // N', excludes S and D
    std::vector<std::uint32_t> tx_slot_count;       // per node
    std::vector<std::int64_t> trigger;              // trigger[v] = sender, -1 if none
    std::vector<std::uint64_t> first_rx_slot;       // per node, only valid if trigger >= 0
    std::vector<std::uint32_t> path;                // S ... D when delivered
    std::uint32_t source = 0;
    std::uint32_t destination = 0;
    double relax_factor = 1.0;

    std::uint64_t total_tx_slots() const {
        std::uint64_t s = 0;
        for (auto c : tx_slot_count) s += c;
        return s;
    }
};

inline std::uint32_t hop_lower_bound(const Deployment& d, std::uint32_t S,
                                     std::uint32_t D, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("hop_lower_bound: r must be > 0");
    return static_cast<std::uint32_t>(std::ceil(distance(d[S], d[D]) / r));
}

// Deterministic realization of "a sensor at distance 0.1 from the
// source": the node nearest to the +x axis point at that distance.
inline std::uint32_t pick_destination(const Deployment& d, const SpatialIndex& idx,
                                      std::uint32_t S, double dist = 0.1) {
    Point target{d[S].x + dist, d[S].y};
    std::uint32_t best = idx.nearest(target);
    if (best != S) return best;
    // fall back to the nearest node other than S
    double best_d2 = std::numeric_limits<double>::infinity();
    std::uint32_t pick = S;
    for (std::uint32_t i = 0; i < d.size(); ++i) {
        if (i == S) continue;
        double d2 = distance_sq(d[i], target);
        if (d2 < best_d2) {
            best_d2 = d2;
            pick = i;
        }
    }
    return pick;
}

inline RoutingTrace send_greedy(const Deployment& dep,
                                const std::vector<Schedule>& schedules, double r,
                                const SpatialIndex& idx, std::uint32_t S,
                                std::uint32_t D, double relax_factor,
                                std::uint64_t max_slots) {
    const std::size_t m = dep.size();
    if (S >= m || D >= m || S == D)
        throw std::invalid_argument("send_greedy: invalid source/destination");
    if (schedules.size() != m)
        throw std::invalid_argument("send_greedy: one schedule per node required");
    if (relax_factor < 1.0)
        throw std::invalid_argument("send_greedy: relax_factor must be >= 1");
    const std::uint32_t L = schedules[S].L();
    if (max_slots < L) throw std::invalid_argument("send_greedy: max_slots < L");

    RoutingTrace tr;
    tr.source = S;
    tr.destination = D;
    tr.relax_factor = relax_factor;
    tr.tx_slot_count.assign(m, 0);
    tr.trigger.assign(m, -1);
    tr.first_rx_slot.assign(m, 0);

    std::vector<double> dist_to_dest(m, -1.0);
    auto dd = [&](std::uint32_t u) {
        if (dist_to_dest[u] < 0.0) dist_to_dest[u] = distance(dep[u], dep[D]);
        return dist_to_dest[u];
    };

    std::vector<std::vector<std::uint32_t>> neighbor_cache(m);
    std::vector<bool> neighbors_known(m, false);
    auto neighbors = [&](std::uint32_t u) -> const std::vector<std::uint32_t>& {
        if (!neighbors_known[u]) {
            neighbor_cache[u] = idx.radius_query(u, r);
            neighbors_known[u] = true;
        }
        return neighbor_cache[u];
    };

    std::vector<std::vector<std::uint32_t>> tx_at(max_slots);
    std::vector<bool> triggered(m, false);
    std::vector<std::uint32_t> chain(m, 0);

    // Schedules node u's transmission cycle following a trigger at slot
    // t0 (the source uses t0 such that the window starts at slot 0).
    auto schedule_tx = [&](std::uint32_t u, std::int64_t t0) {
        const Schedule& s = schedules[u];
        if (s.d() == s.L()) { // always-awake convention: one slot
            std::uint64_t t = static_cast<std::uint64_t>(t0 + 1);
            if (t < max_slots) {
                tx_at[t].push_back(u);
                ++tr.tx_slot_count[u];
            }
            return;
        }
        for (std::int64_t tt = t0 + 1; tt <= t0 + static_cast<std::int64_t>(s.L());
             ++tt) {
            auto t = static_cast<std::uint64_t>(tt);
            if (t >= max_slots) break;
            if (s.awake(static_cast<std::uint32_t>(t % s.L()))) {
                tx_at[t].push_back(u);
                ++tr.tx_slot_count[u];
            }
        }
    };

    triggered[S] = true;
    schedule_tx(S, -1);

    auto qualifies = [&](std::uint32_t w, std::uint32_t snd) {
        return relax_factor <= 1.0 ? dd(w) < dd(snd)
                                   : dd(w) <= relax_factor * dd(snd);
    };

    std::vector<std::uint32_t> touched;
    std::vector<std::int64_t> best_sender(m, -1);

    for (std::uint64_t t = 0; t < max_slots; ++t) {
        if (tx_at[t].empty()) continue;
        touched.clear();
        for (std::uint32_t v : tx_at[t]) {
            for (std::uint32_t w : neighbors(v)) {
                if (triggered[w]) continue;
                if (!schedules[w].awake(static_cast<std::uint32_t>(t % schedules[w].L())))
                    continue;
                // D takes any sender; others only qualified ones
                if (w != D && !qualifies(w, v)) continue;
                if (best_sender[w] < 0) {
                    best_sender[w] = v;
                    touched.push_back(w);
                } else {
                    // tie-break: sender closest to D, then lowest index
                    auto cur = static_cast<std::uint32_t>(best_sender[w]);
                    if (dd(v) < dd(cur) || (dd(v) == dd(cur) && v < cur))
                        best_sender[w] = v;
                }
            }
        }
        if (touched.empty()) continue;
        std::sort(touched.begin(), touched.end());

        // delivery preempts everything else in the slot
        if (best_sender[D] >= 0) {
            auto snd = static_cast<std::uint32_t>(best_sender[D]);
            tr.delivered = true;
            tr.completion_slot = t;
            tr.hop_count = chain[snd] + 1;
            tr.trigger[D] = snd;
            tr.first_rx_slot[D] = t;
            std::uint32_t cur = D;
            while (true) {
                tr.path.push_back(cur);
                if (cur == S) break;
                cur = static_cast<std::uint32_t>(tr.trigger[cur]);
            }
            std::reverse(tr.path.begin(), tr.path.end());
            return tr;
        }

        for (std::uint32_t w : touched) {
            auto snd = static_cast<std::uint32_t>(best_sender[w]);
            best_sender[w] = -1;
            triggered[w] = true;
            tr.trigger[w] = snd;
            tr.first_rx_slot[w] = t;
            chain[w] = chain[snd] + 1;
            tr.retransmitters.push_back(w);
            schedule_tx(w, static_cast<std::int64_t>(t));
        }
    }

    tr.delivered = false;
    tr.completion_slot = max_slots;
    return tr;
}

} // namespace dcwsn

#endif
