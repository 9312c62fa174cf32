#include "pufkit/keygen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "pufkit/errors.hpp"

namespace pufkit {
namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'P', 'K', 'H', '1'};

void push_u16le(std::vector<uint8_t>& out, unsigned v) {
    out.push_back(uint8_t(v & 0xff));
    out.push_back(uint8_t((v >> 8) & 0xff));
}

SecretKey derive_sk(const BitVec& used_bits) {
    return SecretKey{hash128(used_bits.to_bytes_lsb())};
}

std::array<uint8_t, 16> compute_tag(const SecretKey& sk, const HelperData& helper) {
    return hash128(tag_input(sk, helper));
}

void check_helper_shape(const HelperData& h) {
    if (h.blocks.empty()) throw ProtocolError("helper has no blocks");
    const size_t synd = size_t(h.code.n - h.code.k);
    for (const auto& b : h.blocks)
        if (b.size() != synd) throw ProtocolError("helper block length mismatch");
}

std::string hex_encode(const std::vector<uint8_t>& data) {
    static const char* d = "0123456789abcdef";
    std::string s;
    s.reserve(data.size() * 2);
    for (uint8_t b : data) {
        s += d[b >> 4];
        s += d[b & 15];
    }
    return s;
}

std::vector<uint8_t> hex_decode(const std::string& s) {
    if (s.size() % 2) throw FormatError("hex string has odd length");
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw FormatError("invalid hex character");
    };
    std::vector<uint8_t> out(s.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = uint8_t(nib(s[2 * i]) << 4 | nib(s[2 * i + 1]));
    return out;
}

// Decode every block of helper against the first L*n bits of `bits`;
// nullopt as soon as one block fails.
std::optional<BitVec> decode_all_blocks(const BchCode& code, const HelperData& helper,
                                        const BitVec& bits) {
    const size_t n = size_t(code.n());
    BitVec recovered(helper.blocks.size() * n);
    for (size_t b = 0; b < helper.blocks.size(); ++b) {
        auto r = code.decode_syndrome(bits.slice(b * n, n), helper.blocks[b]);
        if (!r) return std::nullopt;
        for (size_t i = 0; i < n; ++i) recovered.set(b * n + i, r->get(i));
    }
    return recovered;
}

}  // namespace

std::vector<uint8_t> tag_input(const SecretKey& sk, const HelperData& helper) {
    std::vector<uint8_t> buf(sk.bytes.begin(), sk.bytes.end());
    push_u16le(buf, unsigned(helper.code.n));
    push_u16le(buf, unsigned(helper.code.k));
    push_u16le(buf, unsigned(helper.code.t));
    push_u16le(buf, unsigned(helper.blocks.size()));
    for (const auto& b : helper.blocks) {
        push_u16le(buf, unsigned(b.size()));
        auto bytes = b.to_bytes_poly_msb();
        buf.insert(buf.end(), bytes.begin(), bytes.end());
    }
    return buf;
}

TokenOutput token_generate(const BitVec& response, const BchCode& code, int key_bits) {
    if (key_bits != 128) throw ParameterError("key_bits must be 128");
    const int L = (key_bits + code.k() - 1) / code.k();
    const size_t used = size_t(L) * size_t(code.n());
    if (response.size() < used)
        throw ParameterError("response too short: need " + std::to_string(used) + " bits, have " +
                             std::to_string(response.size()));

    TokenOutput out;
    out.helper.code = code.spec();
    BitVec used_bits = response.slice(0, used);
    for (int b = 0; b < L; ++b)
        out.helper.blocks.push_back(code.gen_syndrome(used_bits.slice(size_t(b) * code.n(), code.n())));
    out.sk = derive_sk(used_bits);
    out.helper.tag_u = compute_tag(out.sk, out.helper);
    return out;
}

RecoveryResult server_recover(const HelperData& helper, const EnrollmentRecord& record,
                              std::optional<double> ambient_temperature_c) {
    check_helper_shape(helper);
    auto cat = BchCode::catalog();
    if (std::find(cat.begin(), cat.end(), helper.code) == cat.end())
        throw ProtocolError("helper names a code outside the catalog");
    BchCode code(helper.code);
    const size_t used = helper.blocks.size() * size_t(code.n());
    if (record.references.empty()) throw ProtocolError("record has no references");
    for (const auto& r : record.references)
        if (r.bits.size() < used)
            throw ProtocolError("record references shorter than the helper needs");

    std::vector<size_t> order(record.references.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (ambient_temperature_c) {
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return std::abs(record.references[a].temperature_c - *ambient_temperature_c) <
                   std::abs(record.references[b].temperature_c - *ambient_temperature_c);
        });
    }

    RecoveryResult res;
    for (size_t j : order) {
        ++res.attempts;
        auto recovered = decode_all_blocks(code, helper, record.references[j].bits.slice(0, used));
        if (!recovered) continue;
        SecretKey sk = derive_sk(*recovered);
        if (compute_tag(sk, helper) == helper.tag_u) {
            res.success = true;
            res.sk = sk;
            res.used_reference_index = j;
            return res;
        }
    }
    return res;
}

std::pair<HelperData, SecretKey> fe_enroll(const BitVec& reference, const BchCode& code,
                                           int key_bits) {
    TokenOutput out = token_generate(reference, code, key_bits);
    return {std::move(out.helper), out.sk};
}

std::optional<SecretKey> fe_reproduce(const BitVec& response, const HelperData& helper) {
    check_helper_shape(helper);
    BchCode code(helper.code);
    const size_t used = helper.blocks.size() * size_t(code.n());
    if (response.size() < used) throw ParameterError("response too short for helper");
    auto recovered = decode_all_blocks(code, helper, response.slice(0, used));
    if (!recovered) return std::nullopt;
    SecretKey sk = derive_sk(*recovered);
    if (compute_tag(sk, helper) != helper.tag_u) return std::nullopt;
    return sk;
}

std::vector<uint8_t> helper_to_wire(const HelperData& helper) {
    check_helper_shape(helper);
    std::vector<uint8_t> out(kMagic, kMagic + 4);
    push_u16le(out, unsigned(helper.code.n));
    push_u16le(out, unsigned(helper.code.k));
    push_u16le(out, unsigned(helper.code.t));
    push_u16le(out, unsigned(helper.blocks.size()));
    for (const auto& b : helper.blocks) {
        auto bytes = b.to_bytes_poly_msb();
        out.insert(out.end(), bytes.begin(), bytes.end());
    }
    out.insert(out.end(), helper.tag_u.begin(), helper.tag_u.end());
    return out;
}

HelperData helper_from_wire(const std::vector<uint8_t>& wire) {
    auto u16 = [&](size_t off) { return unsigned(wire[off]) | unsigned(wire[off + 1]) << 8; };
    if (wire.size() < 12 || !std::equal(kMagic, kMagic + 4, wire.begin()))
        throw ProtocolError("helper wire: bad magic or truncated header");
    HelperData h;
    h.code = {int(u16(4)), int(u16(6)), int(u16(8))};
    unsigned L = u16(10);
    if (h.code.n <= 0 || h.code.k <= 0 || h.code.t <= 0 || h.code.k >= h.code.n || L == 0)
        throw ProtocolError("helper wire: invalid code or block count");
    const size_t synd = size_t(h.code.n - h.code.k);
    const size_t bstride = (synd + 7) / 8;
    const size_t expect = 12 + L * bstride + 16;
    if (wire.size() != expect)
        throw ProtocolError("helper wire: expected " + std::to_string(expect) + " bytes, got " +
                            std::to_string(wire.size()));
    size_t off = 12;
    for (unsigned b = 0; b < L; ++b, off += bstride)
        h.blocks.push_back(BitVec::from_bytes_poly_msb(wire.data() + off, synd));
    std::copy(wire.begin() + off, wire.begin() + off + 16, h.tag_u.begin());
    return h;
}

void save_helper(const HelperData& helper, const std::filesystem::path& path) {
    auto wire = helper_to_wire(helper);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write helper file: " + path.string());
    out.write(reinterpret_cast<const char*>(wire.data()), std::streamsize(wire.size()));
}

HelperData load_helper(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open helper file: " + path.string());
    std::vector<uint8_t> wire((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    return helper_from_wire(wire);
}

std::string helper_to_json(const HelperData& helper) {
    check_helper_shape(helper);
    json blocks = json::array();
    for (const auto& b : helper.blocks) blocks.push_back(hex_encode(b.to_bytes_poly_msb()));
    json j{{"format_version", 1},
           {"code", {{"n", helper.code.n}, {"k", helper.code.k}, {"t", helper.code.t}}},
           {"L", helper.blocks.size()},
           {"blocks_hex", blocks},
           {"tag_u_hex",
            hex_encode(std::vector<uint8_t>(helper.tag_u.begin(), helper.tag_u.end()))}};
    return j.dump(2);
}

HelperData helper_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("helper JSON invalid: ") + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != 1)
            throw FormatError("unsupported helper format_version");
        HelperData h;
        h.code = {j.at("code").at("n").get<int>(), j.at("code").at("k").get<int>(),
                  j.at("code").at("t").get<int>()};
        if (h.code.n <= 0 || h.code.k <= 0 || h.code.k >= h.code.n || h.code.t <= 0)
            throw ProtocolError("helper JSON: invalid code");
        const size_t synd = size_t(h.code.n - h.code.k);
        for (const auto& bj : j.at("blocks_hex")) {
            auto bytes = hex_decode(bj.get<std::string>());
            if (bytes.size() != (synd + 7) / 8)
                throw ProtocolError("helper JSON: block length mismatch");
            h.blocks.push_back(BitVec::from_bytes_poly_msb(bytes.data(), synd));
        }
        if (h.blocks.empty() || h.blocks.size() != j.at("L").get<size_t>())
            throw ProtocolError("helper JSON: block count mismatch");
        auto tag = hex_decode(j.at("tag_u_hex").get<std::string>());
        if (tag.size() != 16) throw ProtocolError("helper JSON: tag length mismatch");
        std::copy(tag.begin(), tag.end(), h.tag_u.begin());
        return h;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad helper JSON field: ") + e.what());
    }
}

}  // namespace pufkit
