#include "pufkit/bch.hpp"

#include <array>
#include <map>

#include "pufkit/errors.hpp"

namespace pufkit {
namespace {

int field_degree_for(int n) {
    for (int m = 3; m <= 10; ++m)
        if ((1 << m) - 1 == n) return m;
    throw ParameterError("BCH length must be 2^m - 1 with 3 <= m <= 10");
}

std::vector<int> cyclotomic_coset(int base, int n) {
    std::vector<int> coset;
    int j = base % n;
    do {
        coset.push_back(j);
        j = (2 * j) % n;
    } while (j != base % n);
    return coset;
}

// Minimal polynomial of alpha^base over GF(2), as a bit-polynomial.
uint64_t minimal_poly(const Gf2m& f, const std::vector<int>& coset) {
    std::vector<int> poly{1};  // field coefficients, poly[i] = coeff of x^i
    for (int j : coset) {
        int root = f.alpha_pow(j);
        std::vector<int> next(poly.size() + 1, 0);
        for (size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] ^= poly[i];
            next[i] ^= f.mul(poly[i], root);
        }
        poly = std::move(next);
    }
    uint64_t bits = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
        if (poly[i] != 0 && poly[i] != 1)
            throw ParameterError("minimal polynomial has a non-binary coefficient");
        if (poly[i]) bits |= uint64_t{1} << i;
    }
    return bits;
}

// Degree of lcm of minimal polynomials of alpha^1..alpha^2t: the size of the
// union of the corresponding cyclotomic cosets.
int generator_degree(int n, int t) {
    std::vector<char> seen(n, 0);
    int deg = 0;
    for (int i = 1; i <= 2 * t; ++i) {
        if (seen[i % n]) continue;
        for (int j : cyclotomic_coset(i, n)) {
            if (!seen[j]) {
                seen[j] = 1;
                ++deg;
            }
        }
    }
    return deg;
}

}  // namespace

BchCode::BchCode(int n, int k, int t)
    : n_(n), k_(k), t_(t), field_(field_degree_for(n)) {
    if (k < 1 || k >= n) throw ParameterError("BCH dimension out of range");
    if (t < 1 || 2 * t >= n) throw ParameterError("BCH correction capability out of range");

    // g = lcm of the minimal polynomials of alpha^1..alpha^2t, built over GF(2).
    std::vector<uint64_t> g{1};
    int deg = 0;
    std::vector<char> seen(n, 0);
    for (int i = 1; i <= 2 * t; ++i) {
        if (seen[i % n]) continue;
        auto coset = cyclotomic_coset(i, n);
        for (int j : coset) seen[j] = 1;
        uint64_t mp = minimal_poly(field_, coset);
        int mdeg = static_cast<int>(coset.size());
        std::vector<uint64_t> prod((deg + mdeg) / 64 + 1, 0);
        for (int b = 0; b <= mdeg; ++b) {
            if (!((mp >> b) & 1)) continue;
            for (size_t w = 0; w < g.size(); ++w) {
                prod[w + (b >> 6)] ^= g[w] << (b & 63);
                if ((b & 63) && w + (b >> 6) + 1 < prod.size())
                    prod[w + (b >> 6) + 1] ^= g[w] >> (64 - (b & 63));
            }
        }
        g = std::move(prod);
        deg += mdeg;
    }
    if (deg != n - k)
        throw ParameterError("no narrow-sense BCH code with these (n,k,t)");

    gen_ = BitVec(deg + 1);
    for (int i = 0; i <= deg; ++i)
        gen_.set(i, (g[i >> 6] >> (i & 63)) & 1);
}

BitVec BchCode::mod_generator(BitVec work) const {
    const int deg = n_ - k_;
    std::array<uint64_t, 3> w{};
    for (size_t i = 0; i < work.words().size() && i < 3; ++i) w[i] = work.words()[i];
    const auto& gw = gen_.words();
    std::array<uint64_t, 2> g{gw[0], gw.size() > 1 ? gw[1] : 0};
    for (int i = n_ - 1; i >= deg; --i) {
        if (!((w[i >> 6] >> (i & 63)) & 1)) continue;
        int sh = i - deg;
        int base = sh >> 6, s = sh & 63;
        if (s == 0) {
            w[base] ^= g[0];
            if (base + 1 < 3) w[base + 1] ^= g[1];
        } else {
            w[base] ^= g[0] << s;
            if (base + 1 < 3) w[base + 1] ^= (g[0] >> (64 - s)) ^ (g[1] << s);
            if (base + 2 < 3) w[base + 2] ^= g[1] >> (64 - s);
        }
    }
    BitVec out(deg);
    for (int i = 0; i < deg; ++i)
        out.set(i, (w[i >> 6] >> (i & 63)) & 1);
    return out;
}

BitVec BchCode::gen_syndrome(const BitVec& r_block) const {
    if (static_cast<int>(r_block.size()) != n_)
        throw ParameterError("gen_syndrome: block length mismatch");
    return mod_generator(r_block);
}

std::optional<BitVec> BchCode::decode_syndrome(const BitVec& r_prime, const BitVec& p) const {
    if (static_cast<int>(r_prime.size()) != n_)
        throw ParameterError("decode_syndrome: block length mismatch");
    if (static_cast<int>(p.size()) != n_ - k_)
        throw ParameterError("decode_syndrome: syndrome length mismatch");

    BitVec srem = gen_syndrome(r_prime);
    srem ^= p;
    if (srem.popcount() == 0) return r_prime;

    // Power sums of the error pattern: s_rem(alpha^i) equals e(alpha^i) for
    // i = 1..2t because g(alpha^i) = 0 there. Even indices via Frobenius.
    const int two_t = 2 * t_;
    std::vector<int> setpos;
    for (int j = 0; j < n_ - k_; ++j)
        if (srem.get(j)) setpos.push_back(j);
    std::vector<int> S(two_t + 1, 0);
    for (int i = 1; i <= two_t; i += 2) {
        int acc = 0;
        for (int j : setpos) acc ^= field_.alpha_pow(i * j);
        S[i] = acc;
    }
    for (int i = 2; i <= two_t; i += 2) S[i] = field_.mul(S[i / 2], S[i / 2]);

    // Berlekamp-Massey for the error locator C(x).
    std::vector<int> C(two_t + 2, 0), B(two_t + 2, 0), T;
    C[0] = B[0] = 1;
    int L = 0, shift = 1, b = 1;
    for (int r = 0; r < two_t; ++r) {
        int d = S[r + 1];
        for (int i = 1; i <= L; ++i)
            if (C[i]) d ^= field_.mul(C[i], S[r + 1 - i]);
        if (d == 0) {
            ++shift;
            continue;
        }
        int coef = field_.mul(d, field_.inv(b));
        if (2 * L <= r) {
            T = C;
            for (int i = 0; i + shift <= two_t + 1; ++i)
                if (B[i]) C[i + shift] ^= field_.mul(coef, B[i]);
            L = r + 1 - L;
            B = std::move(T);
            b = d;
            shift = 1;
        } else {
            for (int i = 0; i + shift <= two_t + 1; ++i)
                if (B[i]) C[i + shift] ^= field_.mul(coef, B[i]);
            ++shift;
        }
    }
    if (L > t_ || C[L] == 0) return std::nullopt;

    // Chien search: C has roots alpha^-pos, so a root at alpha^j marks an
    // error at position (n - j) mod n.
    std::vector<int> errpos;
    for (int j = 0; j < n_ && static_cast<int>(errpos.size()) <= L; ++j) {
        int v = C[0];
        for (int i = 1; i <= L; ++i)
            if (C[i]) v ^= field_.mul(C[i], field_.alpha_pow(i * j));
        if (v == 0) errpos.push_back((n_ - j) % n_);
    }
    if (static_cast<int>(errpos.size()) != L) return std::nullopt;

    BitVec r = r_prime;
    for (int idx : errpos) r.flip(idx);
    if (!(gen_syndrome(r) == p)) return std::nullopt;
    return r;
}

BitVec BchCode::encode(const BitVec& message) const {
    if (static_cast<int>(message.size()) != k_)
        throw ParameterError("encode: message length mismatch");
    BitVec cw(n_);
    const int deg = n_ - k_;
    for (int i = 0; i < k_; ++i) cw.set(deg + i, message.get(i));
    BitVec rem = mod_generator(cw);
    for (int i = 0; i < deg; ++i)
        if (rem.get(i)) cw.set(i, true);
    return cw;
}

std::vector<CodeSpec> BchCode::catalog() {
    std::vector<CodeSpec> out;
    for (int m : {6, 7}) {
        int n = (1 << m) - 1;
        std::map<int, int, std::greater<>> best;  // k -> max t
        for (int t = 1; 2 * t < n; ++t) {
            int k = n - generator_degree(n, t);
            if (k < 1) break;
            auto [it, fresh] = best.try_emplace(k, t);
            if (!fresh && t > it->second) it->second = t;
        }
        for (auto [k, t] : best) out.push_back({n, k, t});
    }
    out.push_back({15, 7, 2});
    return out;
}

}  // namespace pufkit
