#ifndef DCWSN_GEOMETRY_HPP
#define DCWSN_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcwsn/rng.hpp"

namespace dcwsn {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point& p, const Point& q) {
    double dx = p.x - q.x;
    double dy = p.y - q.y;
    return std::sqrt(dx * dx + dy * dy);
}

inline double distance_sq(const Point& p, const Point& q) {
    double dx = p.x - q.x;
    double dy = p.y - q.y;
    return dx * dx + dy * dy;
}

enum class DiskSampler {
    Wedge, // random wedge angle, then uniform in the spanning triangle
    Polar, // exact inverse-CDF: radius = sqrt(u)
};

// n uniform points in the unit disk plus the origin node at index 0.
struct Deployment {
    std::vector<Point> points; // points[0] == (0,0)
    std::uint32_t n = 0;       // count excluding the origin
    std::uint64_t seed = 0;

    std::size_t size() const { return points.size(); }
    const Point& operator[](std::size_t i) const { return points[i]; }
};

inline constexpr double kDefaultWedgeAngle =
    2.0 * std::numbers::pi / 1024.0;

// Places each point uniformly in the triangle (O, A, B) where A and B sit
// on the unit circle at angles theta and theta + wedge_angle. For small
// wedge angles the triangle-vs-sector area gap is below 1e-5 relative,
// and averaging over the random theta gives the uniform disk law.
inline Deployment sample_uniform_disk(std::uint32_t n, std::uint64_t seed,
                                      double wedge_angle = kDefaultWedgeAngle,
                                      DiskSampler sampler = DiskSampler::Wedge) {
    if (n < 1) throw std::invalid_argument("sample_uniform_disk: n must be >= 1");
    if (sampler == DiskSampler::Wedge &&
        !(wedge_angle > 0.0 && wedge_angle <= std::numbers::pi / 8.0))
        throw std::invalid_argument("sample_uniform_disk: wedge_angle out of (0, pi/8]");

    Deployment d;
    d.n = n;
    d.seed = seed;
    d.points.resize(static_cast<std::size_t>(n) + 1);
    d.points[0] = Point{0.0, 0.0};

    Pcg32 rng(seed, /*stream=*/0);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::uint32_t i = 1; i <= n; ++i) {
        if (sampler == DiskSampler::Polar) {
            double r = std::sqrt(rng.uniform());
            double th = two_pi * rng.uniform();
            d.points[i] = Point{r * std::cos(th), r * std::sin(th)};
        } else {
            double theta = two_pi * rng.uniform();
            double ax = std::cos(theta), ay = std::sin(theta);
            double bx = std::cos(theta + wedge_angle),
                   by = std::sin(theta + wedge_angle);
            double s = std::sqrt(rng.uniform());
            double t = rng.uniform();
            // P = s*((1-t)A + tB); the apex is the origin
            double px = s * (ax + t * (bx - ax));
            double py = s * (ay + t * (by - ay));
            d.points[i] = Point{px, py};
        }
    }
    return d;
}

inline void write_deployment_csv(const Deployment& d, std::ostream& os) {
    os << "index,x,y\n";
    char buf[96];
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, d.points[i].x,
                      d.points[i].y);
        os << buf;
    }
}

// Static 2-d kd-tree over deployment indices. Axis-alternating median
// splits; a leaf holds at most leaf_capacity points.
class SpatialIndex {
public:
    SpatialIndex(const Deployment& d, std::uint32_t leaf_capacity = 32)
        : pts_(&d.points), leaf_capacity_(leaf_capacity) {
        if (leaf_capacity < 1)
            throw std::invalid_argument("SpatialIndex: leaf_capacity must be >= 1");
        order_.resize(pts_->size());
        for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
        nodes_.reserve(2 * order_.size() / leaf_capacity + 8);
        if (!order_.empty()) root_ = build(0, static_cast<std::uint32_t>(order_.size()), 0);
    }

    std::uint32_t leaf_capacity() const { return leaf_capacity_; }
    std::size_t size() const { return pts_->size(); }

    // Exactly { j != center : distance(points[center], points[j]) <= r }.
    std::vector<std::uint32_t> radius_query(std::uint32_t center, double r) const {
        if (center >= pts_->size())
            throw std::invalid_argument("radius_query: center index out of range");
        if (r < 0.0) throw std::invalid_argument("radius_query: negative radius");
        std::vector<std::uint32_t> out;
        query_point((*pts_)[center], r, out);
        out.erase(std::remove(out.begin(), out.end(), center), out.end());
        return out;
    }

    // All indices within r of an arbitrary point (no exclusion).
    std::vector<std::uint32_t> radius_query_point(const Point& p, double r) const {
        if (r < 0.0) throw std::invalid_argument("radius_query: negative radius");
        std::vector<std::uint32_t> out;
        query_point(p, r, out);
        return out;
    }

    template <class Fn>
    void for_each_within(const Point& p, double r, Fn&& fn) const {
        double r2 = r * r;
        walk(root_, p, r, r2, fn);
    }

    std::uint32_t nearest(const Point& p) const {
        std::uint32_t best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        nearest_walk(root_, p, best, best_d2);
        return best;
    }

    // Union of leaf contents; used by tests to check the partition property.
    std::vector<std::vector<std::uint32_t>> leaf_contents() const {
        std::vector<std::vector<std::uint32_t>> out;
        collect_leaves(root_, out);
        return out;
    }

private:
    struct Node {
        double xmin, xmax, ymin, ymax;
        std::uint32_t begin, end; // range into order_ (leaves)
        std::int32_t left = -1, right = -1;
        bool leaf = false;
    };

    std::int32_t build(std::uint32_t begin, std::uint32_t end, int axis) {
        Node nd;
        nd.xmin = nd.ymin = std::numeric_limits<double>::infinity();
        nd.xmax = nd.ymax = -std::numeric_limits<double>::infinity();
        for (std::uint32_t i = begin; i < end; ++i) {
            const Point& p = (*pts_)[order_[i]];
            nd.xmin = std::min(nd.xmin, p.x);
            nd.xmax = std::max(nd.xmax, p.x);
            nd.ymin = std::min(nd.ymin, p.y);
            nd.ymax = std::max(nd.ymax, p.y);
        }
        nd.begin = begin;
        nd.end = end;
        if (end - begin <= leaf_capacity_) {
            nd.leaf = true;
            nodes_.push_back(nd);
            return static_cast<std::int32_t>(nodes_.size() - 1);
        }
        std::uint32_t mid = begin + (end - begin) / 2;
        auto cmp_x = [this](std::uint32_t a, std::uint32_t b) {
            return (*pts_)[a].x < (*pts_)[b].x;
        };
        auto cmp_y = [this](std::uint32_t a, std::uint32_t b) {
            return (*pts_)[a].y < (*pts_)[b].y;
        };
        if (axis == 0)
            std::nth_element(order_.begin() + begin, order_.begin() + mid,
                             order_.begin() + end, cmp_x);
        else
            std::nth_element(order_.begin() + begin, order_.begin() + mid,
                             order_.begin() + end, cmp_y);
        nodes_.push_back(nd);
        std::int32_t self = static_cast<std::int32_t>(nodes_.size() - 1);
        std::int32_t l = build(begin, mid, 1 - axis);
        std::int32_t r = build(mid, end, 1 - axis);
        nodes_[self].left = l;
        nodes_[self].right = r;
        return self;
    }

    static double box_dist_sq(const Node& nd, const Point& p) {
        double dx = std::max({nd.xmin - p.x, 0.0, p.x - nd.xmax});
        double dy = std::max({nd.ymin - p.y, 0.0, p.y - nd.ymax});
        return dx * dx + dy * dy;
    }

    void query_point(const Point& p, double r,
                     std::vector<std::uint32_t>& out) const {
        double r2 = r * r;
        auto push = [&out](std::uint32_t idx) { out.push_back(idx); };
        walk(root_, p, r, r2, push);
    }

    template <class Fn>
    void walk(std::int32_t ni, const Point& p, double r, double r2, Fn& fn) const {
        if (ni < 0) return;
        const Node& nd = nodes_[static_cast<std::size_t>(ni)];
        if (box_dist_sq(nd, p) > r2) return;
        if (nd.leaf) {
            for (std::uint32_t i = nd.begin; i < nd.end; ++i) {
                std::uint32_t idx = order_[i];
                if (distance_sq((*pts_)[idx], p) <= r2) fn(idx);
            }
            return;
        }
        walk(nd.left, p, r, r2, fn);
        walk(nd.right, p, r, r2, fn);
    }

    void nearest_walk(std::int32_t ni, const Point& p, std::uint32_t& best,
                      double& best_d2) const {
        if (ni < 0) return;
        const Node& nd = nodes_[static_cast<std::size_t>(ni)];
        if (box_dist_sq(nd, p) >= best_d2) return;
        if (nd.leaf) {
            for (std::uint32_t i = nd.begin; i < nd.end; ++i) {
                std::uint32_t idx = order_[i];
                double d2 = distance_sq((*pts_)[idx], p);
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = idx;
                }
            }
            return;
        }
        nearest_walk(nd.left, p, best, best_d2);
        nearest_walk(nd.right, p, best, best_d2);
    }

    void collect_leaves(std::int32_t ni,
                        std::vector<std::vector<std::uint32_t>>& out) const {
        if (ni < 0) return;
        const Node& nd = nodes_[static_cast<std::size_t>(ni)];
        if (nd.leaf) {
            out.emplace_back(order_.begin() + nd.begin, order_.begin() + nd.end);
            return;
        }
        collect_leaves(nd.left, out);
        collect_leaves(nd.right, out);
    }

    const std::vector<Point>* pts_;
    std::uint32_t leaf_capacity_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

inline SpatialIndex build_index(const Deployment& d, std::uint32_t leaf_capacity = 32) {
    return SpatialIndex(d, leaf_capacity);
}

} // namespace dcwsn

#endif
