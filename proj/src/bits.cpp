#include "pufkit/bits.hpp"

namespace pufkit {

std::vector<uint8_t> BitVec::to_bytes_lsb() const {
    std::vector<uint8_t> out((nbits_ + 7) / 8, 0);
    for (size_t i = 0; i < nbits_; ++i)
        if (get(i)) out[i >> 3] |= uint8_t(1u << (i & 7));
    return out;
}

BitVec BitVec::from_bytes_lsb(const uint8_t* data, size_t nbits) {
    BitVec out(nbits);
    for (size_t i = 0; i < nbits; ++i)
        if ((data[i >> 3] >> (i & 7)) & 1u) out.set(i, true);
    return out;
}

std::vector<uint8_t> BitVec::to_bytes_poly_msb() const {
    std::vector<uint8_t> out((nbits_ + 7) / 8, 0);
    for (size_t j = 0; j < nbits_; ++j)
        if (get(nbits_ - 1 - j)) out[j >> 3] |= uint8_t(0x80u >> (j & 7));
    return out;
}

BitVec BitVec::from_bytes_poly_msb(const uint8_t* data, size_t nbits) {
    BitVec out(nbits);
    for (size_t j = 0; j < nbits; ++j)
        if ((data[j >> 3] >> (7 - (j & 7))) & 1u) out.set(nbits - 1 - j, true);
    return out;
}

}  // namespace pufkit
