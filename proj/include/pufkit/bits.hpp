#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <vector>

#include "pufkit/errors.hpp"

namespace pufkit {

// Dynamic bit vector over 64-bit words. Bit index 0 is the least significant
// bit of word 0; unused high bits of the last word are kept zero.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    size_t size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }

    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(size_t i, bool v) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) words_[i >> 6] |= m; else words_[i >> 6] &= ~m;
    }
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

    void push_back(bool v) {
        if (nbits_ % 64 == 0) words_.push_back(0);
        ++nbits_;
        set(nbits_ - 1, v);
    }

    size_t popcount() const {
        size_t c = 0;
        for (uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    BitVec slice(size_t offset, size_t len) const {
        if (offset + len > nbits_) throw ParameterError("BitVec::slice out of range");
        BitVec out(len);
        for (size_t i = 0; i < len; ++i) out.set(i, get(offset + i));
        return out;
    }

    BitVec& operator^=(const BitVec& o) {
        if (o.nbits_ != nbits_) throw ParameterError("BitVec xor length mismatch");
        for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { a ^= b; return a; }

    bool operator==(const BitVec& o) const {
        return nbits_ == o.nbits_ && words_ == o.words_;
    }

    size_t hamming(const BitVec& o) const {
        if (o.nbits_ != nbits_) throw ParameterError("BitVec hamming length mismatch");
        size_t c = 0;
        for (size_t i = 0; i < words_.size(); ++i) c += std::popcount(words_[i] ^ o.words_[i]);
        return c;
    }

    // Byte packing, least-significant-bit-first: bit i lands in byte i/8, bit i%8.
    // This is the raw dataset layout and the hash-input layout.
    std::vector<uint8_t> to_bytes_lsb() const;
    static BitVec from_bytes_lsb(const uint8_t* data, size_t nbits);

    // Polynomial wire packing, most-significant coefficient first: stream bit j
    // (from the top bit of the first byte) holds coefficient nbits-1-j.
    // Used for syndrome blocks in helper-data serialization.
    std::vector<uint8_t> to_bytes_poly_msb() const;
    static BitVec from_bytes_poly_msb(const uint8_t* data, size_t nbits);

    const std::vector<uint64_t>& words() const { return words_; }

private:
    size_t nbits_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace pufkit
