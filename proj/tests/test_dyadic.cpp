#include "cantorft/dyadic.hpp"
#include "cantorft/prng.hpp"
#include "cantorft/signed_log.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace cantorft;

TEST_CASE("dyadic basic arithmetic") {
    Dyadic a = Dyadic::ratio(BigInt(3), 3);   // 3/8
    Dyadic b = Dyadic::ratio(BigInt(1), 2);   // 1/4
    CHECK(a + b == Dyadic::ratio(BigInt(5), 3));
    CHECK(a - b == Dyadic::ratio(BigInt(1), 3));
    CHECK(a * b == Dyadic::ratio(BigInt(3), 5));
    CHECK((-a).sign() == -1);
    CHECK(a.mul_pow2(3) == Dyadic(3));
    CHECK(Dyadic(0).is_zero());
    CHECK(Dyadic::one_minus_pow2(2) == Dyadic::ratio(BigInt(3), 2));
}

TEST_CASE("dyadic ordering and normalization") {
    CHECK(Dyadic(BigInt(4), -3) == Dyadic::half());  // 4/8 normalizes
    CHECK(Dyadic::half() < Dyadic(1));
    CHECK(Dyadic::ratio(BigInt(-1), 1) < Dyadic(0));
    CHECK(Dyadic::pow2(-100) > Dyadic(0));
    CHECK(Dyadic::pow2(-100).floor_log2() == -100);
    CHECK(Dyadic(12).floor_log2() == 3);
}

TEST_CASE("dyadic to_double and directed rounding") {
    CHECK(Dyadic::ratio(BigInt(3), 3).to_double() == 0.375);
    CHECK(Dyadic::pow2(-1074).to_double() > 0.0);
    CHECK(Dyadic::pow2(-1100).to_double() == 0.0);

    Dyadic big = Dyadic::one_minus_pow2(500);  // needs 500 bits
    Dyadic down = big.round_down(64), up = big.round_up(64);
    CHECK(down <= big);
    CHECK(up >= big);
    CHECK(down.bit_size() <= 64);
    CHECK(up.bit_size() <= 64 + 1);
    CHECK((up - down) <= Dyadic::pow2(-60));
}

TEST_CASE("dyadic parse/print round trip") {
    Prng rng(7);
    for (int i = 0; i < 200; ++i) {
        std::int64_t m = static_cast<std::int64_t>(rng.next_u64() >> 16);
        if (rng.next_u64() & 1) m = -m;
        std::int64_t q = static_cast<std::int64_t>(rng.next_below(200));
        Dyadic d(BigInt(m), -q);
        CHECK(Dyadic::parse(d.to_string()) == d);
    }
    CHECK(Dyadic::parse("9/2^5") == Dyadic::ratio(BigInt(9), 5));
    CHECK(Dyadic::parse("-3") == Dyadic(-3));
    CHECK_THROWS_AS(Dyadic::parse("3/7"), std::invalid_argument);
    CHECK_THROWS_AS(Dyadic::parse("x"), std::invalid_argument);
}

TEST_CASE("interval arithmetic encloses") {
    Prng rng(11);
    unsigned prec = 48;
    for (int i = 0; i < 300; ++i) {
        double a = rng.next_signed_unit(), b = rng.next_signed_unit();
        Dyadic da = Dyadic(BigInt(static_cast<std::int64_t>(a * (1 << 20))), -20);
        Dyadic db = Dyadic(BigInt(static_cast<std::int64_t>(b * (1 << 20))), -20);
        DInterval ia = DInterval::exact(da), ib = DInterval::exact(db);
        CHECK(iadd(ia, ib, prec).contains(da + db));
        CHECK(isub(ia, ib, prec).contains(da - db));
        CHECK(imul(ia, ib, prec).contains(da * db));
    }
    // widths stay small after rounding
    DInterval x = DInterval::exact(Dyadic::one_minus_pow2(100));
    DInterval y = imul(x, x, 64);
    CHECK(y.width() <= Dyadic::pow2(-60));
    CHECK(y.contains(Dyadic::one_minus_pow2(100) * Dyadic::one_minus_pow2(100)));
}

TEST_CASE("directed rounding keeps the sign of negative values") {
    // regression: raw cpp_int >> on certain negative values flips the sign
    Dyadic v = -(Dyadic::one_minus_pow2(99) * Dyadic::one_minus_pow2(192));
    CHECK(v.sign() == -1);
    CHECK(v.round_down(192).sign() == -1);
    CHECK(v.round_up(192).sign() == -1);
    CHECK(v.round_down(192) <= v);
    CHECK(v.round_up(192) >= v);
    DInterval prod = imul(DInterval{v, v}, DInterval{Dyadic::one_minus_pow2(192), Dyadic(1)}, 192);
    CHECK(prod.hi.sign() == -1);
    CHECK(prod.contains(v * Dyadic::one_minus_pow2(192)));
}

TEST_CASE("signed log round trips") {
    SignedLog s = SignedLog::from_double(-0.375);
    CHECK(s.sign == -1);
    CHECK(s.to_double() == Catch::Approx(-0.375).epsilon(1e-14));
    CHECK(SignedLog::from_double(0.0).is_zero());

    SignedLog d = SignedLog::from_dyadic(Dyadic::ratio(BigInt(3), 3));
    CHECK(d.to_double() == Catch::Approx(0.375).epsilon(1e-14));

    // huge magnitudes survive in log domain
    SignedLog t = SignedLog::from_pow2(1, 5000.0);
    t *= SignedLog::from_pow2(1, -5000.0);
    CHECK(t.to_double() == Catch::Approx(1.0));
}
