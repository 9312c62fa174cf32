#pragma once

#include <cstdint>
#include <vector>

#include "pufkit/errors.hpp"

namespace pufkit {

// GF(2^m) arithmetic with log/antilog tables, 3 <= m <= 10.
// Elements are bit-polynomials in the primitive element alpha, stored as ints.
class Gf2m {
public:
    explicit Gf2m(int m);

    int m() const { return m_; }
    int order() const { return n_; }  // multiplicative order, 2^m - 1
    uint32_t primitive_poly() const { return prim_; }

    int mul(int a, int b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    int inv(int a) const {
        if (a == 0) throw ParameterError("Gf2m::inv of zero");
        return exp_[n_ - log_[a]];
    }
    int alpha_pow(int e) const {  // alpha^e, any integer exponent
        e %= n_;
        if (e < 0) e += n_;
        return exp_[e];
    }
    int log(int a) const {
        if (a == 0) throw ParameterError("Gf2m::log of zero");
        return log_[a];
    }

    // Published primitive polynomial for the given degree.
    static uint32_t primitive_poly_for(int m);

private:
    int m_, n_;
    uint32_t prim_;
    std::vector<uint16_t> exp_;  // exp_[i] = alpha^i, i in [0, 2n)
    std::vector<uint16_t> log_;  // log_[x] for x in [1, 2^m)
};

}  // namespace pufkit
