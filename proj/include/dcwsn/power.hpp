#ifndef DCWSN_POWER_HPP
#define DCWSN_POWER_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dcwsn/radii.hpp"
#include "dcwsn/routing.hpp"
#include "dcwsn/schedules.hpp"

namespace dcwsn {

// Per-slot power by operating mode, in milliwatts. Defaults are the
// 2.5 V sensor estimates; the transmit figure of 50 mW is calibrated to
// the RGG radius at n = 2e5 with c(n) = log log n, and transmit power for
// any other radius scales with the square of the radius.
struct PowerProfile {
    double sleep_mw = 0.015;
    double startup_mw = 15.0;
    double shutdown_mw = 15.0;
    double awake_rx_mw = 32.0;
    double tx_ref_mw = 50.0;
    double ref_radius = 0.0;
};

inline PowerProfile default_power_profile() {
    PowerProfile p;
    p.ref_radius = rgg_radius(200000, CnPreset::loglog());
    return p;
}

// Energy units are milliwatt-slots throughout; a 100-slot window at
// 1 mW-per-slot is 100 mW-slots.

inline double tx_power(double r, const PowerProfile& profile) {
    if (!(r > 0.0)) throw std::invalid_argument("tx_power: r must be > 0");
    double ratio = r / profile.ref_radius;
    return profile.tx_ref_mw * ratio * ratio;
}

// Transitions per cycle implied by a schedule bitmap: one startup and one
// shutdown per maximal awake run; an always-awake schedule never
// transitions.
inline std::uint32_t transitions_per_cycle(const Schedule& s) {
    if (s.d() == s.L()) return 0;
    return 2 * s.awake_runs();
}

// Idle-mode energy of one node over a window of whole cycles: listening
// while awake, sleeping otherwise, plus the mode transitions.
inline double operational_power(const Schedule& schedule, std::uint64_t slots,
                                std::uint32_t transitions_per_cycle,
                                const PowerProfile& profile) {
    if (slots % schedule.L() != 0)
        throw std::invalid_argument("operational_power: slots must be a multiple of L");
    std::uint64_t cycles = slots / schedule.L();
    double awake = static_cast<double>(schedule.d()) * cycles;
    double asleep = static_cast<double>(schedule.L() - schedule.d()) * cycles;
    double transitions = static_cast<double>(transitions_per_cycle) * cycles;
    return awake * profile.awake_rx_mw + asleep * profile.sleep_mw +
           transitions * profile.startup_mw;
}

struct NodePower {
    double tx_mw_slots = 0.0;
    double operational_mw_slots = 0.0;
};

struct PowerReport {
    double tx_only_mw_slots = 0.0;
    double operational_mw_slots = 0.0;
    double total_mw_slots = 0.0;
    std::vector<NodePower> per_node;
};

namespace detail {

// Awake slots and transitions of a periodic schedule over window [0, W),
// with the steady-state convention that a transition at slot t compares
// against slot t-1 of the ongoing cycle (slot -1 wraps to L-1).
inline void window_profile(const Schedule& s, std::uint64_t W,
                           std::uint64_t& awake, std::uint64_t& transitions) {
    const std::uint32_t L = s.L();
    std::uint64_t cycles = W / L;
    std::uint32_t rem = static_cast<std::uint32_t>(W % L);
    awake = static_cast<std::uint64_t>(s.d()) * cycles;
    std::uint64_t cyc_tr = (s.d() == L) ? 0 : 2ull * s.awake_runs();
    transitions = cyc_tr * cycles;
    for (std::uint32_t t = 0; t < rem; ++t) {
        if (s.awake(t)) ++awake;
        bool prev = s.awake((t + L - 1) % L);
        if (s.awake(t) != prev) ++transitions;
    }
}

} // namespace detail

// Energy of the whole network for one Send(M,S,D) run: transmit-only
// energy of the source and retransmitters, plus the idle (operational)
// energy of every node over [0, completion_slot].
inline PowerReport task_power(const RoutingTrace& trace, double r,
                              const std::vector<Schedule>& schedules,
                              const PowerProfile& profile) {
    if (schedules.size() != trace.tx_slot_count.size())
        throw std::invalid_argument("task_power: trace/schedule size mismatch");
    PowerReport rep;
    rep.per_node.resize(schedules.size());
    double per_tx_slot = tx_power(r, profile);
    std::uint64_t window = trace.completion_slot + (trace.delivered ? 1 : 0);
    for (std::uint32_t u = 0; u < schedules.size(); ++u) {
        NodePower& np = rep.per_node[u];
        np.tx_mw_slots = trace.tx_slot_count[u] * per_tx_slot;
        std::uint64_t awake = 0, transitions = 0;
        detail::window_profile(schedules[u], window, awake, transitions);
        std::uint64_t asleep = window - awake;
        np.operational_mw_slots = awake * profile.awake_rx_mw +
                                  asleep * profile.sleep_mw +
                                  transitions * profile.startup_mw;
        rep.tx_only_mw_slots += np.tx_mw_slots;
        rep.operational_mw_slots += np.operational_mw_slots;
    }
    rep.total_mw_slots = rep.tx_only_mw_slots + rep.operational_mw_slots;
    return rep;
}

} // namespace dcwsn

#endif
