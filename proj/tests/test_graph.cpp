#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "dcwsn/graph.hpp"

using namespace dcwsn;

namespace {

std::vector<Schedule> draw_schedules(SchemeKind kind, std::size_t count,
                                     std::uint32_t L, std::uint32_t d,
                                     std::uint64_t seed) {
    Pcg32 rng(seed);
    std::vector<Schedule> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(kind == SchemeKind::Contiguous
                          ? gen_contiguous(L, d, rng)
                          : gen_random_selection(L, d, rng));
    return out;
}

using EdgeSet = std::set<std::pair<std::uint32_t, std::uint32_t>>;

EdgeSet edges_of(const DCGraph& g) {
    EdgeSet e;
    g.for_each_edge([&](std::uint32_t u, std::uint32_t v) { e.insert({u, v}); });
    return e;
}

// O(n^2) oracle for the duty-cycled edge rule
EdgeSet brute_force_edges(const Deployment& d, const std::vector<Schedule>& sch,
                          double r) {
    EdgeSet e;
    for (std::uint32_t u = 0; u < d.size(); ++u)
        for (std::uint32_t v = u + 1; v < d.size(); ++v)
            if (distance(d[u], d[v]) <= r && overlap(sch[u], sch[v]))
                e.insert({u, v});
    return e;
}

// BFS labeling oracle for the component decomposition
std::vector<std::uint32_t> bfs_labels(const DCGraph& g) {
    std::vector<std::uint32_t> label(g.order(), UINT32_MAX);
    std::uint32_t next = 0;
    for (std::uint32_t s = 0; s < g.order(); ++s) {
        if (label[s] != UINT32_MAX) continue;
        label[s] = next;
        std::queue<std::uint32_t> q;
        q.push(s);
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            for (auto v : g.adjacency[u])
                if (label[v] == UINT32_MAX) {
                    label[v] = next;
                    q.push(v);
                }
        }
        ++next;
    }
    return label;
}

ComponentStats stats_from_labels(const std::vector<std::uint32_t>& label) {
    std::map<std::uint32_t, std::uint32_t> sizes;
    for (auto l : label) ++sizes[l];
    ComponentStats st;
    st.component_count = static_cast<std::uint32_t>(sizes.size());
    for (auto& [l, s] : sizes) {
        if (s >= st.largest_size) {
            st.second_largest_size = st.largest_size;
            st.largest_size = s;
        } else if (s > st.second_largest_size) {
            st.second_largest_size = s;
        }
        if (s == 1) ++st.isolated_count;
    }
    st.largest_fraction =
        static_cast<double>(st.largest_size) / static_cast<double>(label.size());
    st.origin_component_size = sizes.at(label[0]);
    return st;
}

} // namespace

TEST_CASE("dc graph basics") {
    Deployment dep = sample_uniform_disk(50, 4);
    SpatialIndex idx(dep);
    auto sch = draw_schedules(SchemeKind::Contiguous, dep.size(), 100, 5, 1);
    SECTION("r = 0 gives an edgeless graph") {
        DCGraph g = build_dc_graph(dep, sch, 0.0, idx);
        CHECK(g.edge_count() == 0);
    }
    SECTION("r = 2 with identical schedules gives the complete graph") {
        std::vector<Schedule> same(dep.size(), make_schedule(10, 2, {3, 7}));
        DCGraph g = build_dc_graph(dep, same, 2.0, idx);
        CHECK(g.edge_count() == dep.size() * (dep.size() - 1) / 2);
        ComponentStats st = components(g);
        CHECK(st.component_count == 1);
        CHECK(st.largest_fraction == 1.0);
    }
    SECTION("schedule count mismatch throws") {
        std::vector<Schedule> wrong(dep.size() - 1, make_schedule(10, 2, {3, 7}));
        CHECK_THROWS_AS(build_dc_graph(dep, wrong, 0.1, idx), std::invalid_argument);
    }
}

TEST_CASE("dc graph equals the quadratic double loop") {
    Deployment dep = sample_uniform_disk(300, 11);
    SpatialIndex idx(dep);
    auto sch = draw_schedules(SchemeKind::Contiguous, dep.size(), 100, 5, 11);
    DCGraph g = build_dc_graph(dep, sch, 0.2, idx);
    CHECK(edges_of(g) == brute_force_edges(dep, sch, 0.2));
}

TEST_CASE("dc graph oracle equivalence over random instances") {
    Pcg32 rng(12);
    for (int c = 0; c < 20; ++c) {
        std::uint32_t n = 30 + rng.below(470);
        Deployment dep = sample_uniform_disk(n, rng.next_u64());
        SpatialIndex idx(dep, 1 + rng.below(48));
        auto kind = (c % 2 == 0) ? SchemeKind::Contiguous : SchemeKind::RandomSelection;
        auto sch = draw_schedules(kind, dep.size(), 20, 3, rng.next_u64());
        double r = rng.uniform() * 0.4;
        DCGraph g = build_dc_graph(dep, sch, r, idx);
        REQUIRE(edges_of(g) == brute_force_edges(dep, sch, r));
        // adjacency symmetry and the distance precondition
        for (std::uint32_t u = 0; u < g.order(); ++u)
            for (auto v : g.adjacency[u]) {
                REQUIRE(distance(dep[u], dep[v]) <= r);
                REQUIRE(u != v);
                auto& back = g.adjacency[v];
                REQUIRE(std::find(back.begin(), back.end(), u) != back.end());
            }
    }
}

TEST_CASE("components match the BFS oracle") {
    SECTION("edgeless and complete cases") {
        Deployment dep = sample_uniform_disk(40, 5);
        SpatialIndex idx(dep);
        auto sch = draw_schedules(SchemeKind::RandomSelection, dep.size(), 30, 2, 2);
        DCGraph g0 = build_dc_graph(dep, sch, 0.0, idx);
        ComponentStats st = components(g0);
        CHECK(st.component_count == dep.size());
        CHECK(st.isolated_count == dep.size());
        CHECK(st.largest_size == 1);
        CHECK(st.origin_component_size == 1);
    }
    SECTION("random instances, all stats fields") {
        Pcg32 rng(13);
        for (int c = 0; c < 100; ++c) {
            std::uint32_t n = 50 + rng.below(1950);
            Deployment dep = sample_uniform_disk(n, rng.next_u64());
            SpatialIndex idx(dep);
            auto sch = draw_schedules(SchemeKind::Contiguous, dep.size(), 25, 2,
                                      rng.next_u64());
            double r = 0.02 + rng.uniform() * 0.1;
            DCGraph g = build_dc_graph(dep, sch, r, idx);
            ComponentStats got = components(g);
            ComponentStats want = stats_from_labels(bfs_labels(g));
            REQUIRE(got.component_count == want.component_count);
            REQUIRE(got.largest_size == want.largest_size);
            REQUIRE(got.second_largest_size == want.second_largest_size);
            REQUIRE(got.isolated_count == want.isolated_count);
            REQUIRE(got.origin_component_size == want.origin_component_size);
            REQUIRE(got.largest_fraction == Catch::Approx(want.largest_fraction));
        }
    }
}

TEST_CASE("edge monotonicity in r with fixed marks") {
    Deployment dep = sample_uniform_disk(800, 21);
    SpatialIndex idx(dep);
    auto sch = draw_schedules(SchemeKind::RandomSelection, dep.size(), 100, 5, 3);
    double prev_fraction = 0.0;
    EdgeSet prev;
    for (double r : {0.02, 0.05, 0.09, 0.15, 0.3}) {
        DCGraph g = build_dc_graph(dep, sch, r, idx);
        EdgeSet cur = edges_of(g);
        CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
        double frac = components(g).largest_fraction;
        CHECK(frac >= prev_fraction);
        prev = std::move(cur);
        prev_fraction = frac;
    }
}

TEST_CASE("vb graph with gamma = 1 is the plain RGG") {
    Deployment dep = sample_uniform_disk(600, 31);
    SpatialIndex idx(dep);
    Pcg32 rng(7);
    DCGraph vb = build_vb_graph(dep, UniformSumModel{1.0}, 0.08, idx, rng);
    // RGG oracle: all-overlapping schedules
    std::vector<Schedule> same(dep.size(), make_schedule(4, 4, {0, 1, 2, 3}));
    DCGraph rgg = build_dc_graph(dep, same, 0.08, idx);
    CHECK(edges_of(vb) == edges_of(rgg));
}

TEST_CASE("key model with pool == keys is the plain RGG") {
    Deployment dep = sample_uniform_disk(400, 32);
    SpatialIndex idx(dep);
    Pcg32 rng(8);
    DCGraph vb = build_vb_graph(dep, KeyModel{6, 6}, 0.1, idx, rng);
    std::vector<Schedule> same(dep.size(), make_schedule(4, 4, {0, 1, 2, 3}));
    DCGraph rgg = build_dc_graph(dep, same, 0.1, idx);
    CHECK(edges_of(vb) == edges_of(rgg));
}

TEST_CASE("three-color graphs contain no 4-clique") {
    // sample distance-graph 4-cliques; none may survive in the color graph
    Deployment dep = sample_uniform_disk(4000, 33);
    SpatialIndex idx(dep);
    Pcg32 rng(9);
    const double r = 0.08;
    ColorModel model{3};
    auto marks = draw_marks(model, dep.size(), rng);
    DCGraph g;
    g.deployment = &dep;
    g.r = r;
    g.adjacency.resize(dep.size());
    stream_edges(
        dep, idx, r,
        [&](std::uint32_t u, std::uint32_t v) {
            return model.connects(marks[u], marks[v]);
        },
        [&](std::uint32_t u, std::uint32_t v) {
            g.adjacency[u].push_back(v);
            g.adjacency[v].push_back(u);
        });
    auto color_edge = [&](std::uint32_t a, std::uint32_t b) {
        return distance(dep[a], dep[b]) <= r && model.connects(marks[a], marks[b]);
    };
    std::uint64_t cliques_checked = 0;
    Pcg32 pick(10);
    while (cliques_checked < 10000) {
        auto u = pick.below(static_cast<std::uint32_t>(dep.size()));
        auto near = idx.radius_query(u, r / 2.0); // mutual by triangle inequality
        if (near.size() < 3) continue;
        std::uint32_t a = near[pick.below(static_cast<std::uint32_t>(near.size()))];
        std::uint32_t b = near[pick.below(static_cast<std::uint32_t>(near.size()))];
        std::uint32_t c = near[pick.below(static_cast<std::uint32_t>(near.size()))];
        if (a == b || a == c || b == c) continue;
        ++cliques_checked;
        bool full = color_edge(u, a) && color_edge(u, b) && color_edge(u, c) &&
                    color_edge(a, b) && color_edge(a, c) && color_edge(b, c);
        REQUIRE_FALSE(full);
    }
}

TEST_CASE("isolated node trial basics") {
    Pcg32 rng(61);
    SECTION("full visibility leaves nobody isolated") {
        auto res = isolated_node_trial(50, 2.0, 1.0, 20, rng, TrialDomain::Disk);
        for (auto c : res.counts) CHECK(c == 0);
    }
    SECTION("zero radius isolates everybody") {
        auto res = isolated_node_trial(50, 1e-9, 1.0, 5, rng, TrialDomain::Disk);
        for (auto c : res.counts) CHECK(c == 51);
    }
    SECTION("torus mean tracks the asymptotic law loosely at small n") {
        std::uint32_t n = 20000;
        double r = std::sqrt(std::log(n) / (std::numbers::pi * n));
        auto res = isolated_node_trial(n, r, 1.0, 80, rng, TrialDomain::Torus);
        CHECK(res.mean > 0.3);
        CHECK(res.mean < 2.2);
    }
    SECTION("torus mean follows e^-c for c = 2") {
        std::uint32_t n = 30000;
        double c = 2.0;
        double r = std::sqrt((std::log(n) + c) / (std::numbers::pi * n));
        const std::uint32_t trials = 300;
        auto res = isolated_node_trial(n, r, 1.0, trials, rng, TrialDomain::Torus);
        double want = std::exp(-c);
        double band = 3.0 * std::sqrt(want / trials); // Poisson variance = mean
        CHECK(res.mean == Catch::Approx(want).margin(band));
    }
    SECTION("reused deployment with gamma = 1 repeats the same count") {
        auto res = isolated_node_trial(2000, 0.02, 1.0, 6, rng, TrialDomain::Disk,
                                       /*reuse_deployment=*/true);
        for (auto c : res.counts) CHECK(c == res.counts[0]);
        CHECK(res.variance == 0.0);
    }
    SECTION("invalid arguments") {
        CHECK_THROWS_AS(isolated_node_trial(10, 0.1, 0.0, 5, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(isolated_node_trial(10, 0.1, 0.5, 0, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("union find counts and sizes") {
    UnionFind uf(6);
    uf.unite(0, 1);
    uf.unite(1, 2);
    uf.unite(3, 4);
    auto sizes = uf.component_sizes();
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::uint32_t>{1, 2, 3});
    CHECK(uf.component_size(2) == 3);
    ComponentStats st = stats_from_union_find(uf);
    CHECK(st.component_count == 3);
    CHECK(st.largest_size == 3);
    CHECK(st.second_largest_size == 2);
    CHECK(st.isolated_count == 1);
    CHECK(st.origin_component_size == 3);
}
