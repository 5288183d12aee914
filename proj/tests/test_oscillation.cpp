#include "cantorft/oscillation.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace cantorft;

namespace {
Dyadic dy(long long p, std::int64_t q) { return Dyadic::ratio(BigInt(p), q); }
}  // namespace

TEST_CASE("g1 pointwise values") {
    Schedule cq = build_const_schedule(100, 2);   // S = all, theta = 1/4
    Schedule es = build_empty_schedule(100);      // S = {}

    CHECK(g1_eval(cq, Dyadic(0), 50) == G1Value::plus_one);   // B_0, 0 in S
    CHECK(g1_eval(es, Dyadic(0), 50) == G1Value::zero);       // 0 not in S
    CHECK(g1_eval(cq, dy(3, 3), 50) == G1Value::minus_one);   // 3/8 interior to B_1
    CHECK(g1_eval(cq, dy(1, 1), 50) == G1Value::undetermined);  // 1/2 survives
    CHECK(g1_eval(cq, Dyadic(2), 50) == G1Value::zero);       // outside the root
}

TEST_CASE("g1 with empty S is zero wherever it resolves") {
    Schedule es = build_empty_schedule(100);
    for (long long p = -7; p <= 7; ++p) {
        G1Value v = g1_eval(es, dy(p, 4), 60);
        CHECK((v == G1Value::zero || v == G1Value::undetermined));
    }
}

TEST_CASE("g tensor products") {
    Schedule cq = build_const_schedule(100, 2);
    std::vector<Dyadic> both_plus{Dyadic(0), Dyadic(0)};  // B_0 x B_0, parities +,+
    CHECK(g_eval(cq, both_plus, 50) == G1Value::plus_one);
    std::vector<Dyadic> mixed{Dyadic(0), dy(3, 3)};       // + times -
    CHECK(g_eval(cq, mixed, 50) == G1Value::minus_one);
    std::vector<Dyadic> with_zero{Dyadic(2), dy(1, 1)};   // zero factor wins
    CHECK(g_eval(cq, with_zero, 50) == G1Value::zero);
    std::vector<Dyadic> one{dy(3, 3)};
    CHECK(g_eval(cq, one, 50) == g1_eval(cq, dy(3, 3), 50));  // d = 1 reduction
}

TEST_CASE("white average: constant quarter gives a_0 = 1/3") {
    Schedule cq = build_const_schedule(100, 2);
    WhiteAverage wa = white_average(cq, 0, 60);
    REQUIRE(wa.exact_partial.has_value());
    double v = wa.exact_partial->to_double();
    CHECK(std::fabs(v - 1.0 / 3.0) < std::exp2(-60.0));
    CHECK(wa.tail <= Dyadic::pow2(-59));
}

TEST_CASE("white average: empty S is exactly zero") {
    Schedule es = build_empty_schedule(100);
    WhiteAverage wa = white_average(es, 0, 80);
    REQUIRE(wa.exact_partial.has_value());
    CHECK(*wa.exact_partial == Dyadic(0));
    CHECK(wa.partial.lo == Dyadic(0));
    CHECK(wa.partial.hi == Dyadic(0));
}

TEST_CASE("average independence: quadrature over every white matches") {
    // piecewise-exact integration of g^(1) over each white of generation k
    // (sum of signed black lengths inside), divided by |W_k|
    for (const Schedule& s : {build_const_schedule(40, 2), build_default_schedule(40)}) {
        const std::int64_t kmax_gen = 8, jmax = 16;
        for (std::int64_t k = 0; k <= kmax_gen; ++k) {
            WhiteAverage wa = white_average(s, k, jmax);
            REQUIRE(wa.exact_partial.has_value());
            IntervalGeneration gk = generation(s, k);
            std::vector<IntervalGeneration> gens;
            for (std::int64_t j = k; j <= jmax; ++j) gens.push_back(generation(s, j));
            Dyadic th_k = *s.big_theta_exact(k);
            for (std::size_t wi = 0; wi < gk.whites.size(); wi += 13) {
                const auto& W = gk.whites[wi];
                Dyadic integral(0);
                for (std::int64_t j = k; j <= jmax; ++j) {
                    if (!s.in_S(j)) continue;
                    Dyadic len(0);
                    for (const auto& B : gens[static_cast<std::size_t>(j - k)].blacks)
                        if (B.first >= W.first && B.second <= W.second)
                            len += B.second - B.first;
                    integral += (j % 2 == 0) ? len : -len;
                }
                // average = integral / Theta_k; compare integral == a_k * Theta_k
                CHECK(integral == *wa.exact_partial * th_k);
            }
        }
    }
}

TEST_CASE("recursion consistency between consecutive averages") {
    Schedule s = build_default_schedule(300);
    AverageTable table(s, 200);
    unsigned prec = 192;
    for (std::int64_t k = 0; k < 200; ++k) {
        // a_k - 2 theta_k a_{k+1} - [k in S](-1)^k (1-2 theta_k) contains 0
        DInterval lhs = table.at(k);
        DInterval rhs;
        if (s.in_S(k)) {
            int w = s.w_of(k);
            rhs = imul(table.at(k + 1), DInterval::exact(Dyadic::pow2(1 - w)), prec);
            Dyadic c = Dyadic(1) - Dyadic::pow2(1 - w);
            rhs = iadd(rhs, DInterval::exact(k % 2 == 0 ? c : -c), prec);
        } else {
            rhs = imul(table.at(k + 1), s.one_minus_alpha_interval(k, prec), prec);
        }
        DInterval diff = isub(lhs, rhs, prec);
        CHECK(diff.lo <= Dyadic(0));
        CHECK(diff.hi >= Dyadic(0));
    }
}

TEST_CASE("white_average agrees with the recursion table") {
    Schedule s = build_default_schedule(1200);
    AverageTable table(s, 1100);
    for (std::int64_t k : {0, 8, 27, 64, 65, 125, 729, 730}) {
        WhiteAverage wa = white_average(s, k, 1100);
        // the two enclosures must overlap
        CHECK(wa.full.lo <= table.at(k).hi);
        CHECK(wa.full.hi >= table.at(k).lo);
    }
}

TEST_CASE("oscillation gap: constant quarter") {
    Schedule cq = build_const_schedule(200, 2);
    AverageTable table(cq, 150);
    OscillationGap g0 = oscillation_gap(cq, 0, table);
    CHECK(g0.lower_bound == Dyadic::half());  // 2 (1/2)(1/2)
    CHECK(std::fabs(g0.gap.mid_double() - 2.0 / 3.0) < 1e-12);  // |1/3 - (-1/3)|
    CHECK(g0.certified);
    for (std::int64_t k = 0; k <= 10; ++k) CHECK(oscillation_gap(cq, k, table).certified);
}

TEST_CASE("oscillation gap: default schedule pair (64, 65)") {
    Schedule s = build_default_schedule(1000);
    AverageTable table(s, 999);
    OscillationGap g = oscillation_gap(s, 64, table);
    CHECK(g.lower_bound == Dyadic::half());
    CHECK(g.gap.lo >= Dyadic::half());
    CHECK(g.certified);
    // measured values near the series predictions
    CHECK(std::fabs(table.at(64).mid_double() - 0.0302886) < 1e-4);
    CHECK(std::fabs(table.at(65).mid_double() + 0.9394227) < 1e-4);

    // rejects pairs not fully inside S
    CHECK_THROWS_AS(oscillation_gap(s, 8, table), std::invalid_argument);   // 9 not in S
    CHECK_THROWS_AS(oscillation_gap(s, 10, table), std::invalid_argument);  // neither in S
}

TEST_CASE("sign pattern of consecutive averages on S pairs") {
    Schedule cq = build_const_schedule(100, 2);
    AverageTable table(cq, 80);
    for (std::int64_t k = 0; k < 40; ++k) {
        // (-1)^k (a_k - a_{k+1}) >= 2 (1-2theta_k)(1-2theta_{k+1}) = 1/2
        DInterval diff = isub(table.at(k), table.at(k + 1), 192);
        DInterval signed_diff = (k % 2 == 0) ? diff : diff.neg();
        CHECK(signed_diff.lo >= Dyadic::half());
    }
}

TEST_CASE("divergence witness: d = 1, x = 1/2, constant quarter") {
    Schedule cq = build_const_schedule(64, 2);
    std::vector<Dyadic> x{dy(1, 1)};
    DivergenceWitness w = divergence_witness(cq, x, dy(1, 3), 3);  // eps = 1/8
    REQUIRE(w.pairs.size() == 3);
    for (const auto& rec : w.pairs) {
        CHECK(rec.gap_lower > dy(1, 3) * dy(1, 3) * Dyadic(8));  // > 8 eps^2 = 1/8
        CHECK(rec.threshold == Dyadic(8) * dy(1, 3) * dy(1, 3));
        CHECK(rec.eccentricity <= 4.0 + 1e-12);
        // boxes contain x
        CHECK(rec.q_even.corner_lo[0].lo <= x[0]);
        CHECK(rec.q_even.corner_hi[0].hi >= x[0]);
    }
    // successive pairs shrink
    for (std::size_t i = 1; i < w.pairs.size(); ++i)
        CHECK(std::min(w.pairs[i].k, w.pairs[i].kp) > std::min(w.pairs[i - 1].k, w.pairs[i - 1].kp));
}

TEST_CASE("divergence witness: d = 2, x = (1/2, 1/2)") {
    Schedule cq = build_const_schedule(64, 2);
    std::vector<Dyadic> x{dy(1, 1), dy(1, 1)};
    DivergenceWitness w = divergence_witness(cq, x, dy(1, 3), 2);
    REQUIRE(w.pairs.size() == 2);
    for (const auto& rec : w.pairs) {
        // gap > 2^5 eps^4
        CHECK(rec.threshold == Dyadic(32) * dy(1, 3) * dy(1, 3) * dy(1, 3) * dy(1, 3));
        CHECK(rec.gap_lower > rec.threshold);
        REQUIRE(rec.q_even.corner_lo.size() == 2);
        REQUIRE(rec.q_odd.corner_lo.size() == 2);
    }
}

TEST_CASE("divergence witness rejections") {
    Schedule cq = build_const_schedule(64, 2);
    // no coordinate in E^(1): (0,0) sits in B_0 x B_0, an open cell of the complement
    std::vector<Dyadic> interior{Dyadic(0), Dyadic(0)};
    CHECK_THROWS_AS(divergence_witness(cq, interior, dy(1, 3), 1), BadPoint);

    // coordinate outside the cube
    std::vector<Dyadic> outside{Dyadic(1), dy(1, 1)};
    CHECK_THROWS_AS(divergence_witness(cq, outside, dy(1, 3), 1), BadPoint);

    // eps out of range
    std::vector<Dyadic> x{dy(1, 1)};
    CHECK_THROWS_AS(divergence_witness(cq, x, dy(1, 1), 1), std::invalid_argument);

    // more pairs than the horizon holds
    CHECK_THROWS_AS(divergence_witness(cq, x, dy(1, 3), 1000), InsufficientGoodPairs);

    // default schedule: a coordinate inside a non-S black (x_2 in B_0, 0 not
    // in S) makes g vanish nearby
    Schedule dflt = build_default_schedule(200);
    std::vector<Dyadic> bad{dy(1, 1), Dyadic(0)};
    CHECK_THROWS_AS(divergence_witness(dflt, bad, dy(1, 3), 1), BadPoint);
}

TEST_CASE("divergence witness: default schedule needs orientation flips") {
    Schedule s = build_default_schedule(1000);
    std::vector<Dyadic> x{dy(1, 1)};
    DivergenceWitness w = divergence_witness(s, x, dy(1, 3), 2);
    REQUIRE(w.pairs.size() == 2);
    // |a_64| ~ 0.03 < 4 eps^2 = 1/16, so the witness must pick k(a) = 65
    CHECK(w.pairs[0].k == 65);
    CHECK(w.pairs[0].kp == 64);
    CHECK(w.pairs[1].k == 730);
    CHECK(w.pairs[1].kp == 729);
    for (const auto& rec : w.pairs) CHECK(rec.gap_lower > Dyadic(8) * dy(1, 3) * dy(1, 3));
}
