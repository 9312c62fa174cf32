#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pufkit/bits.hpp"
#include "pufkit/puf_model.hpp"

namespace pufkit {

// strategy records how the bits were produced:
//   none      single raw measurement
//   mv        majority vote, no preselection mask
//   presel    the agreed bits of the preselection itself
//   presel+mv majority vote restricted to the preselection mask
struct ReferenceResponse {
    BitVec bits;
    std::string condition_label;
    double temperature_c = 25.0;  // kept for nearest-condition recovery ordering
    std::string strategy;
};

struct DebiasMeta {
    std::string method;
    std::vector<uint32_t> kept;  // indices into the challenge mask
};

// Server-side secret record. The public challenge (mask only) is a separate
// artifact; see Challenge below.
struct EnrollmentRecord {
    std::string chip_id;
    size_t num_cells = 0;
    std::vector<uint32_t> challenge_mask;        // ascending cell addresses
    std::vector<ReferenceResponse> references;   // [0] is the enrollment reference
    std::optional<DebiasMeta> debias_meta;
};

// Per-bit majority over an odd number of equally long repeats.
BitVec majority_vote(const std::vector<BitVec>& repeats);

struct Preselection {
    std::vector<uint32_t> mask;  // positions where all repeats agree, ascending
    BitVec bits;                 // the agreed values, in mask order
};
Preselection preselect(const std::vector<BitVec>& repeats);  // needs >= 2 repeats

struct EnrollPlan {
    std::string reference_condition;
    int presel_repeats = 10;  // 0 disables preselection (mask = every cell)
    std::vector<std::string> other_conditions;
    int mv_repeats = 9;  // odd; 1 = single measurement
};

// Builds the mask from preselection at the reference condition (repeats
// [0, presel_repeats)), then one reference per condition; non-reference
// references majority-vote repeats [0, mv_repeats) restricted to the mask.
// Repeats beyond those indices stay untouched for held-out evaluation.
EnrollmentRecord enroll(const PufDataset& dataset, const EnrollPlan& plan);

struct Challenge {
    size_t num_cells = 0;
    std::vector<uint32_t> mask;
};
Challenge challenge_of(const EnrollmentRecord& record);

// Extracts the masked bits of one full-array measurement, in mask order.
BitVec apply_mask(const BitVec& measurement, const std::vector<uint32_t>& mask);

void save_record(const EnrollmentRecord& record, const std::filesystem::path& path);
EnrollmentRecord load_record(const std::filesystem::path& path);
void save_challenge(const Challenge& challenge, const std::filesystem::path& path);
Challenge load_challenge(const std::filesystem::path& path);

}  // namespace pufkit
