#include "cantorft/cantor.hpp"
#include "cantorft/schedule.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace cantorft;

namespace {
Dyadic dy(long long p, std::int64_t q) { return Dyadic::ratio(BigInt(p), q); }
}  // namespace

TEST_CASE("generation 0 and 1, theta_0 = 1/4") {
    Schedule cq = build_const_schedule(16, 2);
    IntervalGeneration g0 = generation(cq, 0);
    REQUIRE(g0.whites.size() == 1);
    CHECK(g0.whites[0].first == dy(-1, 1));
    CHECK(g0.whites[0].second == dy(1, 1));
    CHECK(g0.blacks[0].first == dy(-1, 2));   // B_0 = (-1/4, 1/4)
    CHECK(g0.blacks[0].second == dy(1, 2));

    IntervalGeneration g1 = generation(cq, 1);
    REQUIRE(g1.whites.size() == 2);
    CHECK(g1.whites[0].first == dy(-1, 1));
    CHECK(g1.whites[0].second == dy(-1, 2));  // [-1/2, -1/4]
    CHECK(g1.whites[1].first == dy(1, 2));    // [1/4, 1/2]
    CHECK(g1.whites[1].second == dy(1, 1));
}

TEST_CASE("construction identities are exact through k = 12") {
    for (const Schedule& s : {build_const_schedule(16, 2), build_default_schedule(40)}) {
        for (std::int64_t k = 0; k <= 12; ++k) {
            IntervalGeneration g = generation(s, k);
            REQUIRE(g.whites.size() == (std::size_t(1) << k));
            REQUIRE(g.blacks.size() == (std::size_t(1) << k));
            Dyadic th = *s.big_theta_exact(k);
            Dyadic blen = (Dyadic(1) - s.theta(k).mul_pow2(1)) * th;
            Dyadic total(0);
            for (std::size_t i = 0; i < g.whites.size(); ++i) {
                CHECK(g.whites[i].second - g.whites[i].first == th);       // |W_k| = Theta_k
                CHECK(g.blacks[i].second - g.blacks[i].first == blen);     // |B_k| = (1-2theta_k)Theta_k
                // blacks concentric with parents
                CHECK(g.blacks[i].first + g.blacks[i].second ==
                      g.whites[i].first + g.whites[i].second);
                total += g.whites[i].second - g.whites[i].first;
                if (i > 0) CHECK(g.whites[i - 1].second < g.whites[i].first);  // disjoint, sorted
            }
            CHECK(total == th.mul_pow2(k));  // sum = 2^k Theta_k exactly
        }
    }
}

TEST_CASE("nesting: union of W_{k+1} inside union of W_k") {
    Schedule s = build_default_schedule(40);
    for (std::int64_t k = 0; k < 8; ++k) {
        IntervalGeneration g = generation(s, k);
        IntervalGeneration h = generation(s, k + 1);
        for (std::size_t i = 0; i < h.whites.size(); ++i) {
            auto& parent = g.whites[i / 2];
            CHECK(h.whites[i].first >= parent.first);
            CHECK(h.whites[i].second <= parent.second);
        }
    }
}

TEST_CASE("black midpoints: closed form equals recursion, exactly") {
    SECTION("k = 0") {
        Schedule cq = build_const_schedule(16, 2);
        auto mids = black_midpoints(cq, 0);
        REQUIRE(mids.size() == 1);
        CHECK(mids[0] == Dyadic(0));
    }
    SECTION("theta = 1/4, small k") {
        Schedule cq = build_const_schedule(16, 2);
        auto m1 = black_midpoints(cq, 1);
        CHECK(m1 == std::vector<Dyadic>{dy(-3, 3), dy(3, 3)});
        auto m2 = black_midpoints(cq, 2);
        CHECK(m2 == std::vector<Dyadic>{dy(-15, 5), dy(-9, 5), dy(9, 5), dy(15, 5)});
    }
    SECTION("formula vs recursion, k <= 12, both schedules") {
        for (const Schedule& s : {build_const_schedule(16, 2), build_default_schedule(40)}) {
            for (std::int64_t k = 0; k <= 12; ++k) {
                auto mids = black_midpoints(s, k);
                IntervalGeneration g = generation(s, k);
                REQUIRE(mids.size() == g.blacks.size());
                for (std::size_t i = 0; i < mids.size(); ++i)
                    CHECK(mids[i] == (g.blacks[i].first + g.blacks[i].second).mul_pow2(-1));
            }
        }
    }
}

TEST_CASE("measure decay: 2^k Theta_k nonincreasing") {
    Schedule s = build_default_schedule(200);
    for (std::int64_t k = 0; k < 200; ++k)
        CHECK(s.log2_big_theta(k + 1) + 1.0 <= s.log2_big_theta(k) + 1e-12);
}

TEST_CASE("point membership: endpoints survive forever") {
    Schedule s = build_default_schedule(1000);
    CantorVerdict v = in_cantor_1d(s, dy(1, 1), 1000);
    CHECK(v.kind == CantorKind::inside);
    CHECK(in_cantor_1d(s, dy(-1, 1), 1000).kind == CantorKind::inside);
}

TEST_CASE("point membership: x = 0 is in B_0") {
    for (const Schedule& s : {build_default_schedule(100), build_const_schedule(100, 2)}) {
        CantorVerdict v = in_cantor_1d(s, Dyadic(0), 50);
        CHECK(v.kind == CantorKind::in_black);
        CHECK(v.k == 0);
        CHECK(v.parity == +1);
    }
}

TEST_CASE("points at and inside B_1 with theta = 1/4") {
    // with theta = 1/4: W_1 = [1/4, 1/2], B_1 = (5/16, 7/16)
    Schedule cq = build_const_schedule(100, 2);
    CHECK(in_cantor_1d(cq, dy(5, 4), 1).kind == CantorKind::inside);  // 5/16 in [1/4, 1/2]
    // 5/16 is the open endpoint of B_1 and the right endpoint of W_2 = [1/4, 5/16]:
    // ties resolve to inside, at every depth
    CHECK(in_cantor_1d(cq, dy(5, 4), 2).kind == CantorKind::inside);
    CHECK(in_cantor_1d(cq, dy(5, 4), 60).kind == CantorKind::inside);
    // an interior point of B_1
    CantorVerdict v = in_cantor_1d(cq, dy(11, 5), 2);  // 11/32
    CHECK(v.kind == CantorKind::in_black);
    CHECK(v.k == 1);
    CHECK(v.parity == -1);
    CHECK(v.k_in_S);
}

TEST_CASE("point membership agrees with materialized generations") {
    Schedule s = build_default_schedule(40);
    IntervalGeneration g = generation(s, 6);
    // probe midpoints of whites (inside) and blacks (outside)
    for (std::size_t i = 0; i < g.whites.size(); i += 7) {
        Dyadic mid = (g.whites[i].first + g.whites[i].second).mul_pow2(-1);
        CantorVerdict v = in_cantor_1d(s, mid, 6);
        CHECK(v.kind == CantorKind::inside);
    }
    for (std::size_t i = 0; i < g.blacks.size(); i += 5) {
        Dyadic mid = (g.blacks[i].first + g.blacks[i].second).mul_pow2(-1);
        CantorVerdict v = in_cantor_1d(s, mid, 7);
        CHECK(v.kind == CantorKind::in_black);
        CHECK(v.k == 6);
    }
}

TEST_CASE("outside the root interval") {
    Schedule s = build_default_schedule(40);
    CHECK(in_cantor_1d(s, Dyadic(1), 10).kind == CantorKind::outside_domain);
    CHECK(in_cantor_1d(s, Dyadic(-2), 10).kind == CantorKind::outside_domain);
}

TEST_CASE("deep descent for the right endpoint under the default schedule") {
    Schedule s = build_default_schedule(1000);
    // 1/2 stays inside at depth 1000 even though exact tables stop early
    CHECK(in_cantor_1d(s, dy(1, 1), 1000).kind == CantorKind::inside);
    // 0 resolves at generation 0 regardless of depth
    CHECK(in_cantor_1d(s, Dyadic(0), 1000).k == 0);
}

TEST_CASE("tensor membership in E") {
    Schedule s = build_default_schedule(50);
    std::vector<Dyadic> p1{dy(1, 1), Dyadic(0)};
    CHECK(in_E(s, p1, 20).inside);  // first coordinate in E^(1)
    std::vector<Dyadic> p2{Dyadic(0), Dyadic(0)};
    CHECK(!in_E(s, p2, 20).inside);  // both coordinates fall into B_0
    std::vector<Dyadic> p3{Dyadic(1), dy(1, 1)};
    CHECK(!in_E(s, p3, 20).inside);  // outside the cube
    // d = 1 reduces to in_cantor_1d
    std::vector<Dyadic> p4{dy(1, 1)};
    CHECK(in_E(s, p4, 20).inside == (in_cantor_1d(s, dy(1, 1), 20).kind == CantorKind::inside));
}

TEST_CASE("generation budget errors") {
    Schedule s = build_default_schedule(100);
    CHECK_THROWS_AS(generation(s, 30, 1 << 10), std::invalid_argument);
    CHECK_THROWS_AS(generation(s, 101), std::out_of_range);
}
