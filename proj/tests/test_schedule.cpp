#include "cantorft/schedule.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace cantorft;

TEST_CASE("default schedule S members and weights") {
    Schedule s = build_default_schedule(200);
    std::vector<std::int64_t> first(s.s_members().begin(), s.s_members().begin() + 5);
    CHECK(first == std::vector<std::int64_t>{8, 27, 64, 65, 125});
    CHECK(s.w_of(8) == 2);
    CHECK(s.w_of(27) == 3);
    CHECK(s.w_of(64) == 2);   // 64 = 2^6; the square-cube rule wins
    CHECK(s.w_of(65) == 2);
    CHECK(s.w_of(125) == 5);
    CHECK(s.M() == 2);
}

TEST_CASE("derived tables: w+, chi+, k*") {
    Schedule s = build_default_schedule(100);
    CHECK(s.w_plus(27) == 2);   // S cap [0,26] = {8}
    CHECK(s.chi_plus(27) == 1);
    CHECK(s.k_star(27) == 28);
    CHECK(s.k_star(0) == 0);
    // k* strictly increasing
    for (std::int64_t k = 0; k < 100; ++k) CHECK(s.k_star(k + 1) > s.k_star(k));
}

TEST_CASE("theta values") {
    Schedule s = build_default_schedule(100);
    CHECK(s.theta(8) == Dyadic::ratio(BigInt(1), 2));  // 1/4
    // j = 0 not in S: (1 - alpha_0)/2
    Dyadic expect = (Dyadic(1) - s.alpha(0)).mul_pow2(-1);
    CHECK(s.theta(0) == expect);
    CHECK(s.theta(0) > Dyadic(0));
    CHECK(s.theta(0) < Dyadic::half());
    CHECK_THROWS_AS(s.theta(101), std::out_of_range);

    Schedule cq = build_const_schedule(50, 2);
    for (std::int64_t j = 0; j <= 50; ++j) CHECK(cq.theta(j) == Dyadic::ratio(BigInt(1), 2));
}

TEST_CASE("big theta: exact, log, and the sandwich") {
    Schedule cq = build_const_schedule(40, 2);
    CHECK(*cq.big_theta_exact(0) == Dyadic(1));
    CHECK(*cq.big_theta_exact(3) == Dyadic::ratio(BigInt(1), 6));  // (1/4)^3 = 1/64

    Schedule s = build_default_schedule(200);
    CHECK(*s.big_theta_exact(0) == Dyadic(1));
    // sandwich at k = 9: 2^{-k*-1} <= Theta_9 <= 2^{-k*}
    Dyadic th9 = *s.big_theta_exact(9);
    CHECK(th9 >= Dyadic::pow2(-s.k_star(9) - 1));
    CHECK(th9 <= Dyadic::pow2(-s.k_star(9)));
    // exact vs log agree to 1e-12 relative where both exist
    for (std::int64_t k : {1, 5, 9, 20, 40}) {
        auto ex = s.big_theta_exact(k);
        REQUIRE(ex.has_value());
        double lg = s.log2_big_theta(k);
        double rel = std::fabs(std::exp2(lg - ex->floor_log2()) - ex->mul_pow2(-ex->floor_log2()).to_double());
        CHECK(rel < 1e-12);
    }
    // rigorous interval encloses the exact value
    for (std::int64_t k : {3, 9, 25}) {
        DInterval iv = s.big_theta_interval(k);
        CHECK(iv.contains(*s.big_theta_exact(k)));
    }
}

TEST_CASE("alpha chain and alphadelta hold by construction") {
    Schedule s = build_default_schedule(2000);
    for (std::int64_t j = 0; j < 2000; ++j) {
        CHECK(s.alpha_exp(j) >= 2);                      // alpha <= 1/4
        CHECK(s.alpha_exp(j + 1) >= s.alpha_exp(j) + 1); // 2 alpha_{j+1} <= alpha_j
        std::int64_t smax = (j + 1) * (j + 1) - 1;
        CHECK(s.alpha_exp(j) - 1 >= s.delta_exp(2 * smax));
    }
}

TEST_CASE("validate_schedule: default is clean, trends look right") {
    Schedule s = build_default_schedule(10000);
    ValidationReport rep = validate_schedule(s, 10000);
    for (const auto& v : rep.violations) INFO(v);
    CHECK(rep.ok());

    // Theta_k^{1/k} within 0.01 of 1/2 at k = 1e4
    REQUIRE(!rep.theta_geo.empty());
    double geo = rep.theta_geo.back().value;
    CHECK(std::fabs(geo - 0.5) < 0.01);

    // good pairs include (64,65), (729,730)
    bool has64 = false, has729 = false, has4096 = false;
    for (auto& gp : rep.good_pairs) {
        if (gp.k == 64) has64 = true;
        if (gp.k == 729) has729 = true;
        if (gp.k == 4096) has4096 = true;
    }
    CHECK(has64);
    CHECK(has729);
    CHECK(has4096);
}

TEST_CASE("validate_schedule flags exact-invariant violations") {
    // alpha_1 > alpha_0 via an override: exact violation, caught
    std::vector<std::int64_t> bad_alpha{20, 10, 40, 41, 42, 43, 44, 45, 46, 47, 48};
    Schedule s({"broken", 10, 0}, {8}, {2}, 2, builtin_delta_table(), bad_alpha);
    ValidationReport rep = validate_schedule(s, 10);
    CHECK(!rep.ok());
    bool chain_flagged = false;
    for (auto& v : rep.violations)
        if (v.find("alpha chain") != std::string::npos) chain_flagged = true;
    CHECK(chain_flagged);

    // alpha too large against the delta constraint
    std::vector<std::int64_t> loose{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    Schedule s2({"loose", 10, 0}, {8}, {2}, 2, builtin_delta_table(), loose);
    ValidationReport rep2 = validate_schedule(s2, 10);
    bool delta_flagged = false;
    for (auto& v : rep2.violations)
        if (v.find("delta") != std::string::npos || v.find("alpha_j") != std::string::npos)
            delta_flagged = true;
    CHECK(delta_flagged);
}

TEST_CASE("w+ gap property between S members") {
    Schedule s = build_default_schedule(10000);
    auto& mem = s.s_members();
    for (std::size_t i = 0; i + 1 < mem.size(); ++i)
        CHECK(s.w_plus(mem[i]) <= s.w_plus(mem[i + 1]) - 2);
}

TEST_CASE("schedule presets and kv round trip") {
    Schedule s = build_schedule({"const-quarter", 64, 0});
    CHECK(s.in_S(10));
    CHECK(s.theta_double(10) == 0.25);

    Schedule e = build_schedule({"empty-s", 64, 0});
    CHECK(e.s_members().empty());

    Schedule one = build_schedule({"single-s0", 64, 0});
    CHECK(one.in_S(0));
    CHECK(!one.in_S(1));

    KvFile f = s.to_kv();
    Schedule s2 = schedule_from_kv(f);
    CHECK(s2.spec().name == s.spec().name);
    CHECK(s2.spec().k_cap == s.spec().k_cap);

    CHECK_THROWS_AS(build_schedule({"nope", 10, 0}), std::invalid_argument);
    CHECK_THROWS_AS(build_default_schedule(Schedule::kMaxKCap + 1), std::invalid_argument);
}

TEST_CASE("good pairs for const-quarter are every consecutive pair") {
    Schedule cq = build_const_schedule(20, 2);
    auto gp = cq.good_pairs(19);
    CHECK(gp.size() == 19);
    CHECK(gp.front().k == 0);
}
