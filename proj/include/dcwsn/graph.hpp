#ifndef DCWSN_GRAPH_HPP
#define DCWSN_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dcwsn/geometry.hpp"
#include "dcwsn/radii.hpp"
#include "dcwsn/schedules.hpp"

namespace dcwsn {

class UnionFind {
public:
    explicit UnionFind(std::uint32_t n) : parent_(n), rank_(n, 0), size_(n, 1) {
        for (std::uint32_t i = 0; i < n; ++i) parent_[i] = i;
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

    std::uint32_t component_size(std::uint32_t x) { return size_[find(x)]; }
    std::uint32_t count() const { return static_cast<std::uint32_t>(parent_.size()); }

    std::vector<std::uint32_t> component_sizes() {
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 0; i < parent_.size(); ++i)
            if (find(i) == i) out.push_back(size_[i]);
        return out;
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
    std::vector<std::uint32_t> size_;
};

enum class ConnectionSource { Schedules, VbModel };

// Communication graph over a deployment: an edge requires both distance
// <= r and the pairwise connection predicate (schedule overlap or a
// vertex-based mark predicate).
struct DCGraph {
    const Deployment* deployment = nullptr;
    double r = 0.0;
    ConnectionSource source = ConnectionSource::Schedules;
    std::vector<std::vector<std::uint32_t>> adjacency;

    std::size_t order() const { return adjacency.size(); }

    std::size_t edge_count() const {
        std::size_t total = 0;
        for (const auto& a : adjacency) total += a.size();
        return total / 2;
    }

    template <class Fn>
    void for_each_edge(Fn&& fn) const {
        for (std::uint32_t u = 0; u < adjacency.size(); ++u)
            for (std::uint32_t v : adjacency[u])
                if (u < v) fn(u, v);
    }
};

struct ComponentStats {
    std::uint32_t component_count = 0;
    std::uint32_t largest_size = 0;
    double largest_fraction = 0.0;
    std::uint32_t second_largest_size = 0;
    std::uint32_t isolated_count = 0;
    std::uint32_t origin_component_size = 0;
};

inline ComponentStats stats_from_union_find(UnionFind& uf) {
    ComponentStats st;
    auto sizes = uf.component_sizes();
    st.component_count = static_cast<std::uint32_t>(sizes.size());
    for (auto s : sizes) {
        if (s >= st.largest_size) {
            st.second_largest_size = st.largest_size;
            st.largest_size = s;
        } else if (s > st.second_largest_size) {
            st.second_largest_size = s;
        }
        if (s == 1) ++st.isolated_count;
    }
    st.largest_fraction =
        static_cast<double>(st.largest_size) / static_cast<double>(uf.count());
    st.origin_component_size = uf.component_size(0);
    return st;
}

// Streams every qualifying edge (u < v) without materializing adjacency;
// the workhorse for large component sweeps.
template <class Pred, class Fn>
inline void stream_edges(const Deployment& d, const SpatialIndex& idx, double r,
                         Pred&& connected, Fn&& fn) {
    if (r < 0.0) throw std::invalid_argument("stream_edges: negative radius");
    for (std::uint32_t u = 0; u < d.size(); ++u) {
        idx.for_each_within(d[u], r, [&](std::uint32_t v) {
            if (v > u && connected(u, v)) fn(u, v);
        });
    }
}

inline DCGraph build_dc_graph(const Deployment& d,
                              const std::vector<Schedule>& schedules, double r,
                              const SpatialIndex& idx) {
    if (schedules.size() != d.size())
        throw std::invalid_argument("build_dc_graph: one schedule per node required");
    DCGraph g;
    g.deployment = &d;
    g.r = r;
    g.source = ConnectionSource::Schedules;
    g.adjacency.resize(d.size());
    stream_edges(
        d, idx, r,
        [&](std::uint32_t u, std::uint32_t v) {
            return overlap(schedules[u], schedules[v]);
        },
        [&](std::uint32_t u, std::uint32_t v) {
            g.adjacency[u].push_back(v);
            g.adjacency[v].push_back(u);
        });
    return g;
}

template <class Model>
inline std::vector<typename Model::mark_type>
draw_marks(const Model& model, std::size_t count, Pcg32& rng) {
    std::vector<typename Model::mark_type> marks;
    marks.reserve(count);
    for (std::size_t i = 0; i < count; ++i) marks.push_back(model.sample_mark(rng));
    return marks;
}

// Marks are drawn once per node and shared across every pairwise test;
// that shared-mark dependence is what distinguishes this model from
// independent edge thinning.
template <class Model>
inline DCGraph build_vb_graph(const Deployment& d, const Model& model, double r,
                              const SpatialIndex& idx, Pcg32& rng) {
    auto marks = draw_marks(model, d.size(), rng);
    DCGraph g;
    g.deployment = &d;
    g.r = r;
    g.source = ConnectionSource::VbModel;
    g.adjacency.resize(d.size());
    stream_edges(
        d, idx, r,
        [&](std::uint32_t u, std::uint32_t v) {
            return model.connects(marks[u], marks[v]);
        },
        [&](std::uint32_t u, std::uint32_t v) {
            g.adjacency[u].push_back(v);
            g.adjacency[v].push_back(u);
        });
    return g;
}

inline ComponentStats components(const DCGraph& g) {
    UnionFind uf(static_cast<std::uint32_t>(g.order()));
    g.for_each_edge([&](std::uint32_t u, std::uint32_t v) { uf.unite(u, v); });
    return stats_from_union_find(uf);
}

// ---------------------------------------------------------------------------
// Isolated-node trials.
//
// Two domains are supported. Disk: the deployment disk of radius 1, where
// a radius-r neighborhood holds n*r^2 points on average, so the absolute
// isolated counts carry both the area normalization of the radius
// formulas and a rim deficit. Torus: the unit-area periodic square, where
// a radius-r neighborhood holds exactly pi r^2 n points on average and
// the asymptotic law (Poisson with mean e^-c when pi r^2 gamma =
// (log n + c)/n) is observable directly at finite n.

enum class TrialDomain { Disk, Torus };

struct IsolatedTrialResult {
    std::vector<std::uint32_t> counts;
    double mean = 0.0;
    double variance = 0.0; // sample variance (n-1 denominator)
};

namespace detail {

// Flat uniform grid for fixed-radius degree counting on [0,1)^2 with or
// without wraparound.
class CellGrid {
public:
    CellGrid(const std::vector<Point>& pts, double r, bool wrap)
        : pts_(&pts), r_(r), wrap_(wrap) {
        // cell edge >= r so neighbors sit in the 3x3 block, but never
        // more cells than points can usefully fill
        auto by_radius = static_cast<double>(std::floor(1.0 / std::max(r, 1e-12)));
        double by_count = std::ceil(std::sqrt(static_cast<double>(pts.size()))) + 1.0;
        cells_per_side_ = static_cast<std::uint32_t>(
            std::max(1.0, std::min(by_radius, by_count)));
        if (!wrap) cells_per_side_ = std::max<std::uint32_t>(cells_per_side_ / 2, 1);
        head_.assign(static_cast<std::size_t>(cells_per_side_) * cells_per_side_, -1);
        next_.assign(pts.size(), -1);
        for (std::uint32_t i = 0; i < pts.size(); ++i) {
            std::uint32_t c = cell_index(pts[i]);
            next_[i] = head_[c];
            head_[c] = static_cast<std::int64_t>(i);
        }
    }

    template <class Fn>
    void for_each_within(std::uint32_t i, Fn&& fn) const {
        const Point& p = (*pts_)[i];
        double r2 = r_ * r_;
        std::int32_t cx = static_cast<std::int32_t>(coord(p.x));
        std::int32_t cy = static_cast<std::int32_t>(coord(p.y));
        std::int32_t reach = static_cast<std::int32_t>(
            std::ceil(r_ * cells_per_side_)) + 1;
        // when the reach spans the whole (wrapped) grid, visit each cell once
        std::int32_t lo_x = -reach, hi_x = reach, lo_y = -reach, hi_y = reach;
        auto side = static_cast<std::int32_t>(cells_per_side_);
        if (wrap_ && 2 * reach + 1 >= side) {
            lo_x = -cx;
            hi_x = side - 1 - cx;
            lo_y = -cy;
            hi_y = side - 1 - cy;
        }
        for (std::int32_t dx = lo_x; dx <= hi_x; ++dx) {
            for (std::int32_t dy = lo_y; dy <= hi_y; ++dy) {
                std::int32_t gx = cx + dx, gy = cy + dy;
                if (wrap_) {
                    gx = (gx % side + side) % side;
                    gy = (gy % side + side) % side;
                } else if (gx < 0 || gy < 0 || gx >= side || gy >= side) {
                    continue;
                }
                std::int64_t j = head_[static_cast<std::size_t>(gy) * cells_per_side_ +
                                       static_cast<std::size_t>(gx)];
                for (; j >= 0; j = next_[static_cast<std::size_t>(j)]) {
                    auto v = static_cast<std::uint32_t>(j);
                    if (v == i) continue;
                    if (dist_sq(p, (*pts_)[v]) <= r2) fn(v);
                }
            }
        }
    }

private:
    std::uint32_t coord(double x) const {
        double unit = wrap_ ? x : (x + 1.0) / 2.0; // disk points live in [-1,1]
        auto c = static_cast<std::int64_t>(unit * cells_per_side_);
        c = std::clamp<std::int64_t>(c, 0, cells_per_side_ - 1);
        return static_cast<std::uint32_t>(c);
    }

    std::uint32_t cell_index(const Point& p) const {
        return coord(p.y) * cells_per_side_ + coord(p.x);
    }

    double dist_sq(const Point& a, const Point& b) const {
        double dx = std::fabs(a.x - b.x);
        double dy = std::fabs(a.y - b.y);
        if (wrap_) {
            dx = std::min(dx, 1.0 - dx);
            dy = std::min(dy, 1.0 - dy);
        }
        return dx * dx + dy * dy;
    }

    const std::vector<Point>* pts_;
    double r_;
    bool wrap_;
    std::uint32_t cells_per_side_;
    std::vector<std::int64_t> head_;
    std::vector<std::int64_t> next_;
};

} // namespace detail

// Counts nodes whose component has size 1, i.e. nodes with no qualifying
// edge, over `trials` instances with connection probability gamma. Fresh
// points are sampled per trial by default; reuse_deployment keeps one
// point set for the whole batch and redraws only the marks.
inline IsolatedTrialResult isolated_node_trial(std::uint32_t n, double r,
                                               double gamma, std::uint32_t trials,
                                               Pcg32& rng,
                                               TrialDomain domain = TrialDomain::Disk,
                                               bool reuse_deployment = false) {
    if (trials < 1) throw std::invalid_argument("isolated_node_trial: trials >= 1");
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("isolated_node_trial: gamma in (0,1]");
    IsolatedTrialResult res;
    res.counts.reserve(trials);
    UniformSumModel model{gamma};
    std::vector<Point> pts;
    for (std::uint32_t t = 0; t < trials; ++t) {
        Pcg32 trial_rng(static_cast<std::uint64_t>(rng.next_u64()));
        if (pts.empty() || !reuse_deployment) {
            if (domain == TrialDomain::Disk) {
                Deployment d = sample_uniform_disk(n, trial_rng.next_u64());
                pts = std::move(d.points);
            } else {
                pts.resize(n);
                for (auto& p : pts) {
                    p.x = trial_rng.uniform();
                    p.y = trial_rng.uniform();
                }
            }
        }
        std::vector<double> marks;
        if (gamma < 1.0) {
            marks.resize(pts.size());
            for (auto& m : marks) m = model.sample_mark(trial_rng);
        }
        detail::CellGrid grid(pts, r, domain == TrialDomain::Torus);
        std::uint32_t isolated = 0;
        for (std::uint32_t i = 0; i < pts.size(); ++i) {
            bool any = false;
            grid.for_each_within(i, [&](std::uint32_t v) {
                if (!any && (gamma >= 1.0 || model.connects(marks[i], marks[v])))
                    any = true;
            });
            if (!any) ++isolated;
        }
        res.counts.push_back(isolated);
    }
    double sum = 0.0;
    for (auto c : res.counts) sum += c;
    res.mean = sum / trials;
    double ss = 0.0;
    for (auto c : res.counts) {
        double dlt = c - res.mean;
        ss += dlt * dlt;
    }
    res.variance = trials > 1 ? ss / (trials - 1) : 0.0;
    return res;
}

} // namespace dcwsn

#endif
