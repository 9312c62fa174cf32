#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pufkit/bch.hpp"
#include "pufkit/bits.hpp"
#include "pufkit/blake2s.hpp"
#include "pufkit/enrollment.hpp"

namespace pufkit {

struct SecretKey {
    std::array<uint8_t, 16> bytes{};
    bool operator==(const SecretKey&) const = default;
};

// Public helper artifact: carries no response or key bits.
struct HelperData {
    CodeSpec code;
    std::vector<BitVec> blocks;  // L syndromes, n-k bits each
    std::array<uint8_t, 16> tag_u{};
    int L() const { return static_cast<int>(blocks.size()); }
};

struct TokenOutput {
    HelperData helper;
    SecretKey sk;  // stays on the token, never serialized with the helper
};

struct RecoveryResult {
    bool success = false;
    SecretKey sk{};
    size_t used_reference_index = 0;  // index into record.references when success
    size_t attempts = 0;              // references tried, <= J
};

// Splits the first L*n response bits (L = ceil(key_bits/k)) into consecutive
// blocks, computes one syndrome per block, sk = hash128 of the used bits
// (packed LSB-first), and tag_u = hash128(sk || serialized helper).
TokenOutput token_generate(const BitVec& response, const BchCode& code, int key_bits = 128);

// Tries each reference in server-chosen order: nearest-temperature first when
// the token reported its ambient temperature out-of-band, else enrollment
// order. A reference succeeds when every block decodes and the recomputed tag
// matches. Record/helper shape mismatches raise ProtocolError.
RecoveryResult server_recover(const HelperData& helper, const EnrollmentRecord& record,
                              std::optional<double> ambient_temperature_c = std::nullopt);

// Classic (non-reversed) fuzzy extractor baseline: Gen at enrollment,
// Rep on the token against a single reference.
std::pair<HelperData, SecretKey> fe_enroll(const BitVec& reference, const BchCode& code,
                                           int key_bits = 128);
std::optional<SecretKey> fe_reproduce(const BitVec& response, const HelperData& helper);

// Tag preimage: sk || u16le(n,k,t) || u16le(L) || per block u16le bit-length
// followed by the syndrome packed most-significant coefficient first.
std::vector<uint8_t> tag_input(const SecretKey& sk, const HelperData& helper);

// Versioned binary wire form: magic "PKH1", u16le n,k,t,L, packed blocks
// (each byte-padded, MSB-coefficient-first), 16-byte tag.
std::vector<uint8_t> helper_to_wire(const HelperData& helper);
HelperData helper_from_wire(const std::vector<uint8_t>& wire);  // ProtocolError on mismatch
void save_helper(const HelperData& helper, const std::filesystem::path& path);
HelperData load_helper(const std::filesystem::path& path);

// JSON debug form (hex fields); round-trips.
std::string helper_to_json(const HelperData& helper);
HelperData helper_from_json(const std::string& text);

}  // namespace pufkit
