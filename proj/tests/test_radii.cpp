#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dcwsn/experiments.hpp"
#include "dcwsn/radii.hpp"

using namespace dcwsn;

TEST_CASE("cn presets") {
    CHECK(CnPreset::loglog().eval(2e5) ==
          Catch::Approx(2.50193358572921744).margin(1e-12));
    CHECK(CnPreset::constant(1.0).eval(12345) == 1.0);
    CHECK(CnPreset::constant(-1.0).eval(9) == -1.0);
    CHECK(CnPreset::neg_loglog().eval(2e5) ==
          Catch::Approx(-2.50193358572921744).margin(1e-12));
    CHECK(CnPreset::neg_loglog_sq().eval(1e6) ==
          Catch::Approx(-6.89478317812759402).margin(1e-9));
    CHECK_THROWS_AS(CnPreset::loglog().eval(2), std::invalid_argument);
}

TEST_CASE("cn preset parsing and names") {
    CHECK(CnPreset::parse("loglog").name() == "loglog");
    CHECK(CnPreset::parse("const:-1").eval(5) == -1.0);
    CHECK(CnPreset::parse("neg_const:2").eval(5) == -2.0);
    CHECK(CnPreset::parse("neg_k_sqrt_log:2.5").param == 2.5);
    CHECK_THROWS_AS(CnPreset::parse("bogus"), std::invalid_argument);
}

TEST_CASE("neg_k_sqrt_log matches the reference series at the five listed n") {
    // k=2 at n=1e6 is the anchor where the series equals -2 sqrt(log n)
    CHECK(CnPreset::neg_k_sqrt_log(2).eval(1e6) ==
          Catch::Approx(-7.43384437769968).margin(1e-9));
    CHECK(CnPreset::neg_k_sqrt_log(2.5).eval(2e6) ==
          Catch::Approx(-13.14).margin(0.01));
    for (const auto& row : reference_cn_table()) {
        CHECK(CnPreset::neg_k_sqrt_log(2).eval(row.n) ==
              Catch::Approx(row.neg_2_sqrt_log).margin(0.01));
        CHECK(CnPreset::neg_k_sqrt_log(2.5).eval(row.n) ==
              Catch::Approx(row.neg_2_5_sqrt_log).margin(0.01));
        // the ln-based oracle for -(log log n)^2 sits within 0.04 of the
        // reference prints (which show -6.86 at n=1e6 vs oracle -6.895)
        CHECK(CnPreset::neg_loglog_sq().eval(row.n) ==
              Catch::Approx(row.neg_loglog_sq).margin(0.04));
    }
}

TEST_CASE("rgg radius") {
    CHECK(rgg_radius(200000, CnPreset::loglog()) ==
          Catch::Approx(0.0048382351066596).margin(1e-10));
    // frozen against the spec-level band as well
    CHECK(rgg_radius(200000, CnPreset::loglog()) ==
          Catch::Approx(0.0048382).margin(1e-6));
    SECTION("square-root scaling: fixed numerator quarters the area") {
        double c = 0.7;
        std::uint64_t n = 50000;
        double adj = c - std::log(4.0); // keeps log(4n) + adj == log n + c
        CHECK(rgg_radius(4 * n, CnPreset::constant(adj)) ==
              Catch::Approx(0.5 * rgg_radius(n, CnPreset::constant(c))).epsilon(1e-12));
    }
    SECTION("nonpositive numerator rejected") {
        CHECK_THROWS_AS(rgg_radius(1000, CnPreset::constant(-std::log(1000.0))),
                        std::invalid_argument);
        CHECK_THROWS_AS(rgg_radius(2, CnPreset::loglog()), std::invalid_argument);
    }
}

TEST_CASE("weak radius") {
    auto cn = CnPreset::loglog();
    CHECK(weak_radius(100000, 1.0, cn) == rgg_radius(100000, cn));
    CHECK(weak_radius(100000, 0.05, cn) / rgg_radius(100000, cn) ==
          Catch::Approx(4.4721359549995794).margin(1e-12));
    CHECK(weak_radius(12345, 0.25, cn) / rgg_radius(12345, cn) ==
          Catch::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(weak_radius(1000, 0.0, cn), std::invalid_argument);
    CHECK_THROWS_AS(weak_radius(1000, 1.5, cn), std::invalid_argument);
}

TEST_CASE("optimal radius") {
    auto cn = CnPreset::loglog();
    CHECK(optimal_radius(77777, 1.0, cn) == rgg_radius(77777, cn));
    CHECK(optimal_radius(77777, 0.09, cn) / rgg_radius(77777, cn) ==
          Catch::Approx(3.333).margin(1e-3));
    CHECK(optimal_radius(77777, 0.2262190625, cn) / rgg_radius(77777, cn) ==
          Catch::Approx(2.102).margin(1e-3));
    Pcg32 rng(1);
    for (int i = 0; i < 50; ++i) {
        double g = 0.01 + 0.99 * rng.uniform();
        CHECK(optimal_radius(5000, g, cn) >= rgg_radius(5000, cn));
    }
    CHECK_THROWS_AS(optimal_radius(1000, 0.0, cn), std::invalid_argument);
}

TEST_CASE("scheme-specific optimal radii") {
    auto cn = CnPreset::loglog();
    std::uint64_t n = 321321;
    SECTION("contiguous") {
        CHECK(weak_radius(n, 0.05, cn) / optimal_dcc_radius(n, 0.05, 100, cn) ==
              Catch::Approx(1.341).margin(1e-3));
        CHECK(weak_radius(n, 0.05, cn) / optimal_dcc_radius(n, 0.05, 200, cn) ==
              Catch::Approx(1.378).margin(1e-3));
        // gamma >= 1 regime falls back to the RGG radius
        CHECK(optimal_dcc_radius(n, 0.6, 100, cn) == rgg_radius(n, cn));
    }
    SECTION("random selection") {
        CHECK(weak_radius(n, 0.05, cn) / optimal_dcr_radius(n, 0.05, 5, cn) ==
              Catch::Approx(2.127).margin(1e-3));
        CHECK(optimal_dcr_radius(n, 0.05, 10, cn) / rgg_radius(n, cn) ==
              Catch::Approx(1.578).margin(1e-3));
        double ratio = optimal_dcr_radius(n, 0.5, 50, cn) / rgg_radius(n, cn);
        CHECK(ratio <= 1.005);
        CHECK(ratio == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("radius ordering over the scheme grid") {
    auto cn = CnPreset::loglog();
    std::uint64_t n = 200000;
    for (double delta : {0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5}) {
        for (std::uint32_t L : {100u, 200u}) {
            std::uint32_t d = d_from_delta(delta, L);
            double rgg = rgg_radius(n, cn);
            double weak = weak_radius(n, delta, cn);
            double opt_c = optimal_dcc_radius(n, delta, L, cn);
            double opt_r = optimal_dcr_radius(n, delta, d, cn);
            CHECK(rgg <= opt_c);
            CHECK(opt_c <= weak + 1e-15);
            CHECK(rgg <= opt_r);
            CHECK(opt_r <= weak + 1e-15);
        }
    }
}

TEST_CASE("ratio identities are independent of n and cn") {
    Pcg32 rng(9);
    for (int i = 0; i < 5; ++i) {
        std::uint64_t n = 1000 + rng.below(3000000);
        CnPreset cn = (i % 2 == 0) ? CnPreset::loglog()
                                   : CnPreset::constant(rng.uniform(0.5, 3.0));
        for (double delta : {0.05, 0.15}) {
            std::uint32_t L = 100;
            std::uint32_t d = d_from_delta(delta, L);
            double gc = gamma_contiguous(d, L);
            double gr = gamma_random(d, L);
            CHECK(weak_radius(n, delta, cn) / optimal_dcc_radius(n, delta, L, cn) ==
                  Catch::Approx(std::sqrt(gc / delta)).epsilon(1e-12));
            CHECK(optimal_dcr_radius(n, delta, d, cn) / rgg_radius(n, cn) ==
                  Catch::Approx(1.0 / std::sqrt(gr)).epsilon(1e-12));
        }
    }
}

TEST_CASE("reference tables reproduce within 0.001 outside the two anomalies") {
    TablesReport rep = reproduce_tables();
    REQUIRE(rep.entries.size() == 48);
    int anomalies = 0;
    for (const auto& e : rep.entries) {
        double diff = std::fabs(e.computed - e.printed);
        if (e.anomaly) {
            ++anomalies;
            CHECK(diff > 1e-3); // genuinely irreproducible prints
        } else {
            INFO("table " << e.table << " delta " << e.delta << " L " << e.L);
            CHECK(diff <= 1e-3);
        }
    }
    CHECK(anomalies == 2);
    CHECK(rep.within_tolerance());
    CHECK(rep.text.find("reference-print-anomaly") != std::string::npos);
}
