#pragma once

#include <optional>
#include <vector>

#include "pufkit/bits.hpp"
#include "pufkit/gf2m.hpp"

namespace pufkit {

struct CodeSpec {
    int n, k, t;
    bool operator==(const CodeSpec&) const = default;
};

// Narrow-sense primitive binary BCH code. The generator polynomial is the LCM
// of the minimal polynomials of alpha^1..alpha^2t; construction rejects any
// (n,k,t) whose generator degree differs from n-k.
class BchCode {
public:
    BchCode(int n, int k, int t);
    explicit BchCode(const CodeSpec& s) : BchCode(s.n, s.k, s.t) {}

    int n() const { return n_; }
    int k() const { return k_; }
    int t() const { return t_; }
    int m() const { return field_.m(); }
    CodeSpec spec() const { return {n_, k_, t_}; }
    const Gf2m& field() const { return field_; }
    const BitVec& generator() const { return gen_; }  // bit i = coeff of x^i

    // Helper data for one block: p = r(x) mod g(x), n-k bits.
    BitVec gen_syndrome(const BitVec& r_block) const;

    // Recover the unique word r with gen_syndrome(r) = p within Hamming
    // distance t of r_prime; nullopt when no such word is found.
    std::optional<BitVec> decode_syndrome(const BitVec& r_prime, const BitVec& p) const;

    // Systematic encoder (message in the high k coefficients); test support.
    BitVec encode(const BitVec& message) const;

    // All (k, max t) narrow-sense codes for m in {6,7}, plus (15,7,2).
    static std::vector<CodeSpec> catalog();

private:
    BitVec mod_generator(BitVec work) const;

    int n_, k_, t_;
    Gf2m field_;
    BitVec gen_;
};

}  // namespace pufkit
