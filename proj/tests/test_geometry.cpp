#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dcwsn/geometry.hpp"

using namespace dcwsn;

namespace {

// independent oracle: exhaustive pairwise scan
std::vector<std::uint32_t> brute_force_radius(const Deployment& d,
                                              std::uint32_t center, double r) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t j = 0; j < d.size(); ++j)
        if (j != center && distance(d[center], d[j]) <= r) out.push_back(j);
    return out;
}

} // namespace

TEST_CASE("distance basics") {
    CHECK(distance({0, 0}, {0, 0}) == 0.0);
    CHECK(distance({0, 0}, {0.3, 0.4}) == Catch::Approx(0.5).margin(1e-15));
    CHECK(distance({-0.1, 0}, {0.1, 0}) == Catch::Approx(0.2).margin(1e-15));
}

TEST_CASE("deployment shape and origin") {
    Deployment d = sample_uniform_disk(1, 99);
    REQUIRE(d.size() == 2);
    CHECK(d[0].x == 0.0);
    CHECK(d[0].y == 0.0);
    CHECK_THROWS_AS(sample_uniform_disk(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_uniform_disk(5, 1, 10.0), std::invalid_argument);
}

TEST_CASE("all points inside the unit disk") {
    for (auto sampler : {DiskSampler::Wedge, DiskSampler::Polar}) {
        Deployment d = sample_uniform_disk(20000, 5, kDefaultWedgeAngle, sampler);
        for (const auto& p : d.points) CHECK(p.x * p.x + p.y * p.y <= 1.0 + 1e-12);
    }
}

TEST_CASE("uniformity: inner-disk mass and x symmetry at n=1e5, seed=42") {
    Deployment d = sample_uniform_disk(100000, 42);
    std::size_t inner = 0;
    double sum_x = 0.0;
    for (std::size_t i = 1; i < d.size(); ++i) {
        const auto& p = d.points[i];
        if (p.x * p.x + p.y * p.y <= 0.25) ++inner;
        sum_x += p.x;
    }
    double frac = static_cast<double>(inner) / 100000.0;
    CHECK(frac == Catch::Approx(0.25).margin(0.005));
    CHECK(sum_x / 100000.0 == Catch::Approx(0.0).margin(0.004));
}

TEST_CASE("uniformity: chi-square over equal-area annuli") {
    // 16 annuli of equal area; critical chi-square at df=15, alpha=0.001
    const int K = 16;
    const double crit = 37.697;
    for (auto sampler : {DiskSampler::Wedge, DiskSampler::Polar}) {
        Deployment d = sample_uniform_disk(100000, 42, kDefaultWedgeAngle, sampler);
        std::vector<double> counts(K, 0.0);
        for (std::size_t i = 1; i < d.size(); ++i) {
            double rho2 = d.points[i].x * d.points[i].x + d.points[i].y * d.points[i].y;
            int bin = std::min(K - 1, static_cast<int>(rho2 * K));
            counts[static_cast<std::size_t>(bin)] += 1.0;
        }
        double expected = 100000.0 / K;
        double chi2 = 0.0;
        for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
        INFO("sampler " << (sampler == DiskSampler::Wedge ? "wedge" : "polar")
                        << " chi2 " << chi2);
        CHECK(chi2 < crit);
    }
}

TEST_CASE("determinism: same (n, seed, wedge) reproduces bytes") {
    Deployment a = sample_uniform_disk(5000, 1234);
    Deployment b = sample_uniform_disk(5000, 1234);
    std::ostringstream sa, sb;
    write_deployment_csv(a, sa);
    write_deployment_csv(b, sb);
    CHECK(sa.str() == sb.str());
    Deployment c = sample_uniform_disk(5000, 1235);
    std::ostringstream sc;
    write_deployment_csv(c, sc);
    CHECK(sa.str() != sc.str());
}

TEST_CASE("kd-tree structure") {
    SECTION("two points fit one leaf") {
        Deployment d = sample_uniform_disk(1, 3);
        SpatialIndex idx(d, 64);
        auto leaves = idx.leaf_contents();
        REQUIRE(leaves.size() == 1);
        CHECK(leaves[0].size() == 2);
    }
    SECTION("leaf capacity respected and leaves partition the points") {
        Deployment d = sample_uniform_disk(10000, 17);
        SpatialIndex idx(d, 32);
        auto leaves = idx.leaf_contents();
        std::set<std::uint32_t> all;
        for (const auto& leaf : leaves) {
            CHECK(leaf.size() <= 32);
            for (auto i : leaf) {
                CHECK(all.insert(i).second); // no duplicates
            }
        }
        CHECK(all.size() == d.size());
    }
    SECTION("leaf_capacity must be positive") {
        Deployment d = sample_uniform_disk(4, 3);
        CHECK_THROWS_AS(SpatialIndex(d, 0), std::invalid_argument);
    }
}

TEST_CASE("radius query edge cases") {
    Deployment d = sample_uniform_disk(200, 8);
    SpatialIndex idx(d);
    CHECK(idx.radius_query(0, 0.0).empty());
    CHECK(idx.radius_query(5, 2.0).size() == d.size() - 1);
    CHECK_THROWS_AS(idx.radius_query(100000, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(idx.radius_query(0, -0.1), std::invalid_argument);
}

TEST_CASE("radius query matches brute force on the pinned case") {
    Deployment d = sample_uniform_disk(500, 7);
    SpatialIndex idx(d);
    auto got = idx.radius_query(0, 0.1);
    std::sort(got.begin(), got.end());
    CHECK(got == brute_force_radius(d, 0, 0.1));
}

TEST_CASE("radius query equals brute force over random cases") {
    Pcg32 rng(2024);
    for (int c = 0; c < 50; ++c) {
        std::uint32_t n = 50 + rng.below(1950);
        Deployment d = sample_uniform_disk(n, rng.next_u64());
        SpatialIndex idx(d, 1 + rng.below(64));
        double r = rng.uniform() * 0.3;
        std::uint32_t center = rng.below(static_cast<std::uint32_t>(d.size()));
        auto got = idx.radius_query(center, r);
        std::sort(got.begin(), got.end());
        REQUIRE(got == brute_force_radius(d, center, r));
    }
}

TEST_CASE("nearest lookup") {
    Deployment d = sample_uniform_disk(3000, 21);
    SpatialIndex idx(d);
    Pcg32 rng(5);
    for (int c = 0; c < 20; ++c) {
        Point q{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        std::uint32_t got = idx.nearest(q);
        double best = std::numeric_limits<double>::infinity();
        std::uint32_t want = 0;
        for (std::uint32_t i = 0; i < d.size(); ++i) {
            double dd = distance_sq(d[i], q);
            if (dd < best) {
                best = dd;
                want = i;
            }
        }
        CHECK(got == want);
    }
}
