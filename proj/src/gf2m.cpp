#include "pufkit/gf2m.hpp"

namespace pufkit {

uint32_t Gf2m::primitive_poly_for(int m) {
    // Standard table of primitive polynomials over GF(2), degrees 3..10.
    switch (m) {
        case 3: return 0x0B;    // x^3 + x + 1
        case 4: return 0x13;    // x^4 + x + 1
        case 5: return 0x25;    // x^5 + x^2 + 1
        case 6: return 0x43;    // x^6 + x + 1
        case 7: return 0x89;    // x^7 + x^3 + 1
        case 8: return 0x11D;   // x^8 + x^4 + x^3 + x^2 + 1
        case 9: return 0x211;   // x^9 + x^4 + 1
        case 10: return 0x409;  // x^10 + x^3 + 1
        default:
            throw ParameterError("Gf2m: field degree must be in [3, 10]");
    }
}

Gf2m::Gf2m(int m) : m_(m), n_((1 << m) - 1), prim_(primitive_poly_for(m)) {
    exp_.resize(2 * n_);
    log_.resize(size_t(1) << m);
    uint32_t x = 1;
    for (int i = 0; i < n_; ++i) {
        exp_[i] = uint16_t(x);
        log_[x] = uint16_t(i);
        x <<= 1;
        if (x >> m) x ^= prim_;
    }
    if (x != 1)
        throw ParameterError("Gf2m: polynomial is not primitive");
    for (int i = 0; i < n_; ++i) exp_[n_ + i] = exp_[i];
}

}  // namespace pufkit
