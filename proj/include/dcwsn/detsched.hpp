#ifndef DCWSN_DETSCHED_HPP
#define DCWSN_DETSCHED_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dcwsn/schedules.hpp"

namespace dcwsn {

// A family of k predefined d-over-L schedules. A family is valid when
// every pair of members intersects (so any two nodes assigned from the
// family can always communicate, making the graph radius-equivalent to
// the plain RGG) and the members jointly cover every slot (so some nodes
// are awake at every instant).
struct ScheduleFamily {
    std::vector<Schedule> schedules;
    std::uint32_t k() const { return static_cast<std::uint32_t>(schedules.size()); }
};

struct FamilyCheck {
    bool pairwise_overlap = false;
    bool full_coverage = false;
    bool valid() const { return pairwise_overlap && full_coverage; }
};

inline FamilyCheck check_family(const std::vector<Schedule>& schedules) {
    FamilyCheck res;
    if (schedules.empty()) return res;
    const std::uint32_t L = schedules[0].L();
    for (const auto& s : schedules)
        if (s.L() != L)
            throw std::invalid_argument("check_family: mixed cycle lengths");
    res.pairwise_overlap = true;
    for (std::size_t i = 0; i < schedules.size() && res.pairwise_overlap; ++i)
        for (std::size_t j = i + 1; j < schedules.size(); ++j)
            if (!overlap(schedules[i], schedules[j])) {
                res.pairwise_overlap = false;
                break;
            }
    std::vector<std::uint64_t> acc(schedules[0].words().size(), 0);
    for (const auto& s : schedules)
        for (std::size_t w = 0; w < acc.size(); ++w) acc[w] |= s.words()[w];
    std::uint32_t covered = 0;
    for (auto w : acc) covered += static_cast<std::uint32_t>(std::popcount(w));
    res.full_coverage = (covered == L);
    return res;
}

// Which properties a sampled family must satisfy to be accepted. The
// full requirement is the default; overlap-only is for connectivity
// studies, where coverage does not affect the edge set and, at small
// duty cycles, joint satisfaction by uniform sampling is out of reach
// (coverage alone forces k >= L/d, and the probability that that many
// random d-subsets pairwise intersect is negligible unless delta*d is
// large).
enum class FamilyRequirement { OverlapAndCoverage, OverlapOnly };

struct FamilySearchReport {
    std::optional<ScheduleFamily> family;
    std::uint64_t attempts = 0;
    std::uint64_t pairwise_failures = 0;
    std::uint64_t coverage_failures = 0;
    bool found() const { return family.has_value(); }
};

inline std::uint32_t default_family_k(std::uint32_t L) {
    return static_cast<std::uint32_t>(std::ceil(2.0 * std::log(static_cast<double>(L))));
}

// Rejection sampling: draw k independent uniform d-subsets, test, repeat.
inline FamilySearchReport search_family(
    std::uint32_t L, std::uint32_t d, std::uint32_t k, std::uint64_t max_attempts,
    Pcg32& rng, FamilyRequirement require = FamilyRequirement::OverlapAndCoverage) {
    if (k < 1) throw std::invalid_argument("search_family: k must be >= 1");
    if (d < 1 || d > L) throw std::invalid_argument("search_family: need 1 <= d <= L");
    FamilySearchReport rep;
    for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
        rep.attempts = attempt;
        std::vector<Schedule> cand;
        cand.reserve(k);
        for (std::uint32_t i = 0; i < k; ++i)
            cand.push_back(gen_random_selection(L, d, rng));
        FamilyCheck chk = check_family(cand);
        if (!chk.pairwise_overlap) ++rep.pairwise_failures;
        if (!chk.full_coverage) ++rep.coverage_failures;
        bool ok = require == FamilyRequirement::OverlapAndCoverage
                      ? chk.valid()
                      : chk.pairwise_overlap;
        if (ok) {
            rep.family = ScheduleFamily{std::move(cand)};
            return rep;
        }
    }
    return rep;
}

// P(all k schedules pairwise overlap) >= 1 - k(k+1)/2 * e^{-delta d},
// clamped at 0 where the bound is vacuous.
inline double bound_overlap(std::uint32_t k, double delta, std::uint32_t d) {
    double b = 1.0 - 0.5 * static_cast<double>(k) * (k + 1.0) *
                         std::exp(-delta * static_cast<double>(d));
    return b < 0.0 ? 0.0 : b;
}

// P(every slot covered by some schedule) >= 1 - L * e^{-delta k}.
inline double bound_coverage(std::uint32_t L, double delta, std::uint32_t k) {
    double b = 1.0 - static_cast<double>(L) * std::exp(-delta * static_cast<double>(k));
    return b < 0.0 ? 0.0 : b;
}

// Each node picks one of the k family members uniformly.
inline std::vector<Schedule> assign_from_family(const ScheduleFamily& family,
                                                std::size_t count, Pcg32& rng) {
    if (family.schedules.empty())
        throw std::invalid_argument("assign_from_family: empty family");
    std::vector<Schedule> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(family.schedules[rng.below(family.k())]);
    return out;
}

} // namespace dcwsn

#endif
