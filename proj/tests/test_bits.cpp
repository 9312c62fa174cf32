#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "pufkit/bits.hpp"
#include "pufkit/errors.hpp"
#include "pufkit/rng.hpp"

using namespace pufkit;

namespace {
BitVec random_bits(size_t n, uint64_t seed) {
    Rng rng(seed);
    BitVec v(n);
    for (size_t i = 0; i < n; ++i) v.set(i, rng.uniform() < 0.5);
    return v;
}
}  // namespace

TEST_CASE("set/get/flip against a plain bool-vector model") {
    Rng rng(42);
    BitVec v(300);
    std::vector<bool> model(300, false);
    for (int step = 0; step < 5000; ++step) {
        size_t i = rng.next_u64() % 300;
        switch (rng.next_u64() % 3) {
            case 0: {
                bool b = rng.uniform() < 0.5;
                v.set(i, b);
                model[i] = b;
                break;
            }
            case 1:
                v.flip(i);
                model[i] = !model[i];
                break;
            default:
                CHECK(v.get(i) == model[i]);
        }
    }
    size_t pc = 0;
    for (size_t i = 0; i < model.size(); ++i) {
        CHECK(v.get(i) == model[i]);
        pc += model[i];
    }
    CHECK(v.popcount() == pc);
}

TEST_CASE("push_back grows one bit at a time") {
    BitVec v;
    std::vector<bool> model;
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        bool b = rng.uniform() < 0.3;
        v.push_back(b);
        model.push_back(b);
        CHECK(v.size() == model.size());
    }
    for (size_t i = 0; i < model.size(); ++i) CHECK(v.get(i) == model[i]);
}

TEST_CASE("xor and hamming agree with the model") {
    BitVec a = random_bits(193, 1), b = random_bits(193, 2);
    size_t hd = 0;
    for (size_t i = 0; i < a.size(); ++i) hd += a.get(i) != b.get(i);
    CHECK(a.hamming(b) == hd);
    BitVec x = a ^ b;
    CHECK(x.popcount() == hd);
    for (size_t i = 0; i < a.size(); ++i) CHECK(x.get(i) == (a.get(i) != b.get(i)));
    CHECK((x ^ b) == a);

    BitVec shorter(192);
    CHECK_THROWS_AS(a.hamming(shorter), ParameterError);
    CHECK_THROWS_AS(a ^= shorter, ParameterError);
}

TEST_CASE("slice extracts the addressed window") {
    BitVec v = random_bits(130, 3);
    BitVec s = v.slice(63, 66);
    REQUIRE(s.size() == 66);
    for (size_t i = 0; i < 66; ++i) CHECK(s.get(i) == v.get(63 + i));
    CHECK_THROWS_AS(v.slice(100, 31), ParameterError);
    CHECK(v.slice(130, 0).size() == 0);
}

TEST_CASE("lsb byte packing puts bit i into byte i/8, position i%8") {
    BitVec v(11);
    // 0b01011001 in the first byte, 0b101 in the second
    for (size_t i : {0u, 3u, 4u, 6u, 8u, 10u}) v.set(i, true);
    auto bytes = v.to_bytes_lsb();
    REQUIRE(bytes.size() == 2);
    CHECK(bytes[0] == 0x59);
    CHECK(bytes[1] == 0x05);
    CHECK(BitVec::from_bytes_lsb(bytes.data(), 11) == v);
}

TEST_CASE("msb-first polynomial packing streams the top coefficient first") {
    // 10 coefficients c9..c0; stream bit j carries coefficient 9-j.
    BitVec v(10);
    for (size_t i : {9u, 7u, 2u, 1u}) v.set(i, true);  // c9 c7 c2 c1
    auto bytes = v.to_bytes_poly_msb();
    REQUIRE(bytes.size() == 2);
    CHECK(bytes[0] == 0xA1);  // c9 c8 c7 c6 c5 c4 c3 c2 = 1 0 1 0 0 0 0 1
    CHECK(bytes[1] == 0x80);  // c1 c0 then zero padding = 1 0 ...
    CHECK(BitVec::from_bytes_poly_msb(bytes.data(), 10) == v);
}

TEST_CASE("byte packings round-trip at awkward lengths") {
    for (size_t n : {0u, 1u, 7u, 8u, 9u, 63u, 64u, 65u, 127u, 128u, 300u}) {
        BitVec v = random_bits(n, 100 + n);
        auto lsb = v.to_bytes_lsb();
        CHECK(lsb.size() == (n + 7) / 8);
        CHECK(BitVec::from_bytes_lsb(lsb.data(), n) == v);
        auto msb = v.to_bytes_poly_msb();
        CHECK(msb.size() == (n + 7) / 8);
        CHECK(BitVec::from_bytes_poly_msb(msb.data(), n) == v);
    }
}

TEST_CASE("unused high bits stay zero so equality is well defined") {
    BitVec a(70);
    a.set(69, true);
    a.flip(69);
    BitVec b(70);
    CHECK(a == b);
    CHECK(a.words().back() == 0);
}
