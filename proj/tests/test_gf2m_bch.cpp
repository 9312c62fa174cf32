#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "pufkit/bch.hpp"
#include "pufkit/errors.hpp"
#include "pufkit/gf2m.hpp"
#include "pufkit/rng.hpp"

using namespace pufkit;

namespace {

// Independent oracle: smallest-degree monic binary polynomial with alpha^i as
// a root, found by exhaustive search instead of the product-over-coset route.
uint64_t brute_minpoly(const Gf2m& f, int i) {
    for (int deg = 1; deg <= f.m(); ++deg) {
        for (uint64_t low = 0; low < (uint64_t{1} << deg); ++low) {
            uint64_t poly = (uint64_t{1} << deg) | low;
            int v = 0;
            for (int b = 0; b <= deg; ++b)
                if ((poly >> b) & 1) v ^= f.alpha_pow(i * b);
            if (v == 0) return poly;
        }
    }
    return 0;
}

unsigned __int128 mul_gf2_poly(unsigned __int128 a, uint64_t b) {
    unsigned __int128 r = 0;
    for (int i = 0; i < 64; ++i)
        if ((b >> i) & 1) r ^= a << i;
    return r;
}

// lcm of the minimal polynomials of alpha^1..alpha^2t (they are distinct or
// equal, so deduplicating by value and multiplying gives the lcm).
unsigned __int128 brute_generator(int n, int t) {
    Gf2m f(n == 15 ? 4 : n == 63 ? 6 : 7);
    std::set<uint64_t> parts;
    for (int i = 1; i <= 2 * t; ++i) parts.insert(brute_minpoly(f, i));
    unsigned __int128 g = 1;
    for (uint64_t p : parts) g = mul_gf2_poly(g, p);
    return g;
}

void check_generator_matches_oracle(const BchCode& code) {
    unsigned __int128 g = brute_generator(code.n(), code.t());
    const BitVec& gen = code.generator();
    REQUIRE(gen.size() == size_t(code.n() - code.k() + 1));
    for (size_t i = 0; i < gen.size(); ++i)
        CHECK(gen.get(i) == bool((g >> i) & 1));
    CHECK((g >> gen.size()) == 0);
}

BitVec random_word(int n, Rng& rng) {
    BitVec v{size_t(n)};
    for (int i = 0; i < n; ++i) v.set(size_t(i), rng.uniform() < 0.5);
    return v;
}

BitVec random_error(int n, int w, Rng& rng) {
    BitVec e{size_t(n)};
    int placed = 0;
    while (placed < w) {
        size_t i = rng.next_u64() % n;
        if (!e.get(i)) {
            e.set(i, true);
            ++placed;
        }
    }
    return e;
}

}  // namespace

TEST_CASE("published primitive polynomials back the field tables") {
    CHECK(Gf2m::primitive_poly_for(4) == 0x13u);
    CHECK(Gf2m::primitive_poly_for(6) == 0x43u);
    CHECK(Gf2m::primitive_poly_for(7) == 0x89u);
    CHECK(Gf2m::primitive_poly_for(8) == 0x11Du);
    CHECK_THROWS_AS(Gf2m::primitive_poly_for(11), ParameterError);
}

TEST_CASE("GF(2^6) satisfies the field laws") {
    Gf2m f(6);
    CHECK(f.order() == 63);
    for (int a = 1; a < 64; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
    for (int a = 1; a < 64; ++a) CHECK(f.alpha_pow(f.log(a)) == a);
    CHECK(f.alpha_pow(63) == 1);
    CHECK(f.alpha_pow(-1) == f.inv(f.alpha_pow(1)));
    Rng rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
        int a = int(rng.next_u64() % 64), b = int(rng.next_u64() % 64),
            c = int(rng.next_u64() % 64);
        CHECK(f.mul(a, b) == f.mul(b, a));
        CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
        CHECK(f.mul(a, b ^ c) == (f.mul(a, b) ^ f.mul(a, c)));  // GF(2): + is xor
    }
    CHECK(f.mul(0, 17) == 0);
    CHECK_THROWS_AS(f.inv(0), ParameterError);
    CHECK_THROWS_AS(f.log(0), ParameterError);
}

TEST_CASE("generator polynomials match the exhaustive-search oracle") {
    BchCode small(15, 7, 2);
    // x^8 + x^7 + x^6 + x^4 + 1
    const uint32_t expected = 0x1D1;
    for (size_t i = 0; i < small.generator().size(); ++i)
        CHECK(small.generator().get(i) == bool((expected >> i) & 1));
    check_generator_matches_oracle(small);
    check_generator_matches_oracle(BchCode(63, 16, 11));
    check_generator_matches_oracle(BchCode(127, 15, 27));
}

TEST_CASE("the generator vanishes on the designed roots") {
    for (CodeSpec spec : {CodeSpec{63, 10, 13}, CodeSpec{127, 22, 23}}) {
        BchCode code(spec);
        const Gf2m& f = code.field();
        for (int i = 1; i <= 2 * spec.t; ++i) {
            int v = 0;
            for (size_t b = 0; b < code.generator().size(); ++b)
                if (code.generator().get(b)) v ^= f.alpha_pow(i * int(b));
            CHECK(v == 0);
        }
    }
}

TEST_CASE("catalog lists every (k, max t) code and nothing else") {
    const std::vector<CodeSpec> expected = {
        {63, 57, 1},   {63, 51, 2},   {63, 45, 3},  {63, 39, 4},  {63, 36, 5},
        {63, 30, 6},   {63, 24, 7},   {63, 18, 10}, {63, 16, 11}, {63, 10, 13},
        {63, 7, 15},   {63, 1, 31},   {127, 120, 1}, {127, 113, 2}, {127, 106, 3},
        {127, 99, 4},  {127, 92, 5},  {127, 85, 6}, {127, 78, 7}, {127, 71, 9},
        {127, 64, 10}, {127, 57, 11}, {127, 50, 13}, {127, 43, 14}, {127, 36, 15},
        {127, 29, 21}, {127, 22, 23}, {127, 15, 27}, {127, 8, 31}, {127, 1, 63},
        {15, 7, 2},
    };
    auto got = BchCode::catalog();
    REQUIRE(got.size() == expected.size());
    for (size_t i = 0; i < got.size(); ++i) {
        CAPTURE(i);
        CHECK(got[i] == expected[i]);
    }
    for (const auto& spec : got) {
        BchCode code(spec);  // every entry constructs
        CHECK(int(code.generator().size()) == spec.n - spec.k + 1);
    }
}

TEST_CASE("impossible parameter triples are rejected") {
    CHECK_THROWS_AS(BchCode(63, 20, 11), ParameterError);
    CHECK_THROWS_AS(BchCode(63, 16, 10), ParameterError);
    CHECK_THROWS_AS(BchCode(64, 16, 11), ParameterError);
    CHECK_THROWS_AS(BchCode(63, 0, 11), ParameterError);
    CHECK_THROWS_AS(BchCode(63, 16, 0), ParameterError);
    CHECK_THROWS_AS(BchCode(63, 16, 32), ParameterError);
}

TEST_CASE("syndromes are linear and vanish on codewords") {
    BchCode code(63, 16, 11);
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        BitVec a = random_word(63, rng), b = random_word(63, rng);
        CHECK(code.gen_syndrome(a ^ b) == (code.gen_syndrome(a) ^ code.gen_syndrome(b)));
    }
    for (int trial = 0; trial < 50; ++trial) {
        BitVec msg = random_word(16, rng);
        BitVec cw = code.encode(msg);
        CHECK(cw.slice(47, 16) == msg);  // systematic: message in the top coefficients
        CHECK(code.gen_syndrome(cw).popcount() == 0);
    }
    BitVec wrong(62);
    CHECK_THROWS_AS(code.gen_syndrome(wrong), ParameterError);
}

TEST_CASE("decode recovers any word from <= t flips around any base word") {
    Rng rng(99);
    for (CodeSpec spec : {CodeSpec{15, 7, 2}, CodeSpec{63, 16, 11}, CodeSpec{127, 15, 27}}) {
        BchCode code(spec);
        for (int w = 0; w <= spec.t; ++w) {
            int trials = w == 0 ? 5 : 60;
            for (int trial = 0; trial < trials; ++trial) {
                BitVec r = random_word(spec.n, rng);
                BitVec p = code.gen_syndrome(r);
                BitVec noisy = r ^ random_error(spec.n, w, rng);
                auto got = code.decode_syndrome(noisy, p);
                REQUIRE(got.has_value());
                CHECK(*got == r);
            }
        }
    }
}

TEST_CASE("t+1 flips never silently return the original word") {
    Rng rng(12345);
    BchCode code(63, 16, 11);
    int aliased = 0, refused = 0;
    for (int trial = 0; trial < 300; ++trial) {
        BitVec r = random_word(63, rng);
        BitVec p = code.gen_syndrome(r);
        BitVec noisy = r ^ random_error(63, code.t() + 1, rng);
        auto got = code.decode_syndrome(noisy, p);
        if (!got.has_value()) {
            ++refused;
            continue;
        }
        ++aliased;
        CHECK_FALSE(*got == r);  // true word is at distance t+1, unreachable
        CHECK(code.gen_syndrome(*got) == p);
        CHECK(got->hamming(noisy) <= size_t(code.t()));
    }
    CHECK(aliased + refused == 300);
    CHECK(refused > 0);  // overwhelmingly the common outcome at t+1
}

TEST_CASE("decode against an unrelated syndrome stays inside the contract") {
    Rng rng(777);
    BchCode code(63, 16, 11);
    for (int trial = 0; trial < 100; ++trial) {
        BitVec noisy = random_word(63, rng);
        BitVec p = random_word(47, rng);
        auto got = code.decode_syndrome(noisy, p);
        if (got.has_value()) {
            CHECK(code.gen_syndrome(*got) == p);
            CHECK(got->hamming(noisy) <= size_t(code.t()));
        }
    }
    CHECK_THROWS_AS(code.decode_syndrome(random_word(62, rng), random_word(47, rng)),
                    ParameterError);
    CHECK_THROWS_AS(code.decode_syndrome(random_word(63, rng), random_word(46, rng)),
                    ParameterError);
}

TEST_CASE("zero additional noise decodes to the base word immediately") {
    BchCode code(127, 15, 27);
    Rng rng(31);
    BitVec r = random_word(127, rng);
    auto got = code.decode_syndrome(r, code.gen_syndrome(r));
    REQUIRE(got.has_value());
    CHECK(*got == r);
}
