#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pufkit/bits.hpp"

namespace pufkit {

struct Condition {
    std::string label;
    double temperature_c = 25.0;
};

// Frozen population defaults; recorded in docs/model_config.json. One-probability
// of a cell at temperature T is Phi((latent_skew + temp_sensitivity*(T - nominal))
// / noise_sigma). Latent skew is Gaussian; temperature sensitivity has a random
// sign and a log-normal magnitude, which gives a heavy upper tail (a minority of
// cells start flipping close to the nominal temperature while most stay quiet).
struct ModelParams {
    double latent_sigma = 1.0;
    double noise_sigma = 0.10;
    double drift_magnitude_median = 0.005;  // |sensitivity| median, per degree C
    double drift_log_sigma = 1.0;
    double nominal_temperature_c = 25.0;
};

struct CellModel {
    double latent_skew;
    double temp_sensitivity;
    double noise_sigma;
};

struct PufDataset {
    std::string chip_id;
    size_t num_cells = 0;
    std::vector<Condition> conditions;
    // measurements[c][r] is repeat r under conditions[c]; num_cells bits each.
    std::vector<std::vector<BitVec>> measurements;

    size_t condition_index(const std::string& label) const;  // LookupError if absent
};

struct QualityReport {
    double bias = 0.0;
    double intra_hd = 0.0;
    std::optional<double> inter_hd;  // multi-chip only
    std::vector<double> per_cell_flip_prob;
};

// Independent per-cell draws: skew ~ N(0, latent_sigma), sensitivity =
// sign * drift_magnitude_median * exp(drift_log_sigma * N(0,1)) with a fair
// random sign, noise_sigma copied from params. Deterministic for a fixed seed.
std::vector<CellModel> sample_chip(size_t num_cells, const ModelParams& params, uint64_t seed);

// Analytic probability that the cell powers up as 1 at this temperature.
// Clamped to [1e-15, 1 - 1e-15] so it is always strictly inside (0,1).
double one_probability(const CellModel& cell, double temperature_c,
                       double nominal_temperature_c = 25.0);

// One noisy power-up of the whole array; deterministic per (seed, condition).
BitVec power_up(const std::vector<CellModel>& cells, const Condition& condition, uint64_t seed);

// bias: fraction of ones over every measurement in the dataset.
// per_cell_flip_prob: disagreement rate of every measurement against the
// per-cell majority taken at the reference condition (ties -> first repeat).
// intra_hd: mean normalized HD between that majority and every measurement.
QualityReport measure_quality(const PufDataset& dataset, const std::string& reference_condition);

// Population variant: per-chip metrics averaged, plus inter_hd = mean pairwise
// normalized HD between the chips' reference-condition majority responses.
QualityReport measure_quality(const std::vector<PufDataset>& chips,
                              const std::string& reference_condition);

// Mean normalized Hamming distance between `reference` and each repeat at
// `condition`, restricted to the masked cell addresses.
double compute_ber(const BitVec& reference, const std::vector<uint32_t>& mask,
                   const PufDataset& dataset, const std::string& condition);

PufDataset load_dataset(const std::filesystem::path& manifest_path);
std::filesystem::path save_dataset(const PufDataset& dataset, const std::filesystem::path& dir);

struct SimCondition {
    std::string label;
    double temperature_c = 25.0;
    int repeats = 1;
};

// Samples one chip and measures it `repeats` times under each condition.
PufDataset simulate_dataset(const std::string& chip_id, size_t num_cells,
                            const std::vector<SimCondition>& conditions,
                            const ModelParams& params, uint64_t seed);

}  // namespace pufkit
