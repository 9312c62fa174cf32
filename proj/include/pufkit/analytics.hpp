#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pufkit/bch.hpp"
#include "pufkit/bits.hpp"
#include "pufkit/enrollment.hpp"
#include "pufkit/puf_model.hpp"

namespace pufkit {

// P(more than t of n i.i.d. bits flip at rate ber); log-space tail sum,
// relative error < 1e-9 down to ~1e-12.
double block_failure(int n, int t, double ber);

// 1 - (1 - p1)^L, stable for small p1.
double key_failure_L(double p1, int L);

// Conservative multi-reference failure rate: min over the per-reference rates.
double key_failure_mrr(const std::vector<double>& p2_list);

struct FailureBudget {
    std::vector<double> per_reference_ber;
    CodeSpec code;
    int L = 0;
    std::vector<double> p1, p2;
    double p_fail = 1.0;
};
FailureBudget make_budget(const CodeSpec& code, int L, const std::vector<double>& per_reference_ber);

struct Plan {
    CodeSpec code;
    int L = 0;
    FailureBudget budget;
    double encode_cost = 0.0;  // L * n * (n-k) bit operations
};

// Cheapest catalog code whose budget beats target_pfail, with L = ceil(key_bits/k);
// ties break toward smaller n, then smaller t. PlanningError when infeasible.
Plan plan_code(double target_pfail, int key_bits, const std::vector<double>& per_reference_ber,
               const std::vector<CodeSpec>& catalog);

struct MonteCarloResult {
    size_t trials = 0;
    size_t failures = 0;
    double rate = 0.0;
    double ci_low = 0.0, ci_high = 1.0;  // Wilson score interval
};

// Called once per trial, in trial order, after all workers finish.
using TrialSink = std::function<void(size_t trial, const std::string& condition, bool success,
                                     size_t attempts)>;

struct MonteCarloOptions {
    size_t trials = 1000;
    uint64_t seed = 1;
    int key_bits = 128;
    double wilson_z = 3.0;
    unsigned threads = 0;  // 0 = hardware concurrency
    std::optional<double> ambient_temperature_c;  // forwarded to the server
    TrialSink sink;
};

// Each trial powers the chip up once at `condition`, masks it with the record's
// challenge, runs token_generate + server_recover; failure = recovery failure.
MonteCarloResult montecarlo_failure(const EnrollmentRecord& record, const CodeSpec& code,
                                    const std::vector<CellModel>& cells,
                                    const Condition& condition, const MonteCarloOptions& opts);

// Same loop, but the token response is the record's first reference with
// i.i.d. bit flips at rate ber (analytic-model cross-check).
MonteCarloResult montecarlo_failure_injected(const EnrollmentRecord& record, const CodeSpec& code,
                                             double ber, const MonteCarloOptions& opts);

double wilson_low(size_t failures, size_t trials, double z);
double wilson_high(size_t failures, size_t trials, double z);

struct EntropyReport {
    int response_bits = 0;
    int helper_bits = 0;
    double bias = 0.5;
    double min_entropy_in = 0.0;        // response_bits * -log2(max(bias, 1-bias))
    double residual_min_entropy = 0.0;  // max(0, min_entropy_in - helper_bits)
    int key_bits = 0;
    bool entropy_flag = false;  // residual < key_bits
    bool bias_flag = false;     // bias outside [0.42, 0.58]
};
EntropyReport entropy_report(int response_bits, int helper_bits, double bias, int key_bits);

struct CvnResult {
    BitVec out;
    std::vector<uint32_t> kept_pairs;  // indices of emitting pairs
    bool dropped_odd_bit = false;
};
// Classic von Neumann: 01 -> 0, 10 -> 1, equal pairs discarded.
CvnResult debias_cvn(const BitVec& bits);

struct PairVnResult {
    BitVec out;     // same length as the (even-truncated) input
    BitVec erased;  // 1 = erasure mark at that position
    std::vector<uint32_t> kept_pairs;
    bool dropped_odd_bit = false;
};
// Pair-output von Neumann with erasures: unequal pairs emit both bits in
// place, equal pairs leave two erasure-marked positions. Deterministic, so
// the enrollment-time selection mask is reusable across protocol runs.
PairVnResult debias_pair_output_vn(const BitVec& bits);

struct HwResult {
    BitVec out;  // kept blocks, concatenated
    std::vector<uint32_t> kept_blocks;
    int width = 0;
};
// Keeps width-w blocks whose Hamming weight is within delta of w/2; a trailing
// partial block is dropped.
HwResult debias_hw(const BitVec& bits, int width, double delta);

}  // namespace pufkit
