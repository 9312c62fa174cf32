#include "pufkit/puf_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <json.hpp>

#include "pufkit/errors.hpp"
#include "pufkit/rng.hpp"

namespace pufkit {
namespace {

using nlohmann::json;

constexpr double kTempMin = -55.0, kTempMax = 125.0;
constexpr double kProbClamp = 1e-15;

void check_condition(const std::string& label, double temperature_c) {
    if (label.empty()) throw ParameterError("condition label must be non-empty");
    if (!(temperature_c >= kTempMin && temperature_c <= kTempMax))
        throw ParameterError("temperature out of range [-55, 125]: " + label);
}

uint64_t condition_stream(uint64_t seed, const Condition& c) {
    uint64_t s = derive_seed(seed, fnv1a64(c.label));
    return derive_seed(s, std::bit_cast<uint64_t>(c.temperature_c));
}

// Per-cell majority over the reference condition's repeats; ties keep the
// first repeat's bit.
BitVec reference_majority(const PufDataset& ds, size_t ci) {
    const auto& reps = ds.measurements[ci];
    BitVec maj(ds.num_cells);
    for (size_t i = 0; i < ds.num_cells; ++i) {
        size_t ones = 0;
        for (const auto& r : reps) ones += r.get(i);
        if (2 * ones > reps.size()) maj.set(i, true);
        else if (2 * ones == reps.size()) maj.set(i, reps.front().get(i));
    }
    return maj;
}

}  // namespace

size_t PufDataset::condition_index(const std::string& label) const {
    for (size_t i = 0; i < conditions.size(); ++i)
        if (conditions[i].label == label) return i;
    throw LookupError("unknown condition label: " + label);
}

std::vector<CellModel> sample_chip(size_t num_cells, const ModelParams& params, uint64_t seed) {
    if (num_cells < 1) throw ParameterError("num_cells must be >= 1");
    if (!(params.latent_sigma > 0)) throw ParameterError("latent_sigma must be > 0");
    if (!(params.noise_sigma > 0)) throw ParameterError("noise_sigma must be > 0");
    if (!(params.drift_magnitude_median > 0))
        throw ParameterError("drift_magnitude_median must be > 0");
    if (!(params.drift_log_sigma > 0)) throw ParameterError("drift_log_sigma must be > 0");

    Rng rng(derive_seed(seed, fnv1a64("cells")));
    std::vector<CellModel> cells(num_cells);
    for (auto& c : cells) {
        c.latent_skew = params.latent_sigma * rng.gauss();
        double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        c.temp_sensitivity =
            sign * params.drift_magnitude_median * std::exp(params.drift_log_sigma * rng.gauss());
        c.noise_sigma = params.noise_sigma;
    }
    return cells;
}

double one_probability(const CellModel& cell, double temperature_c,
                       double nominal_temperature_c) {
    double z = (cell.latent_skew +
                cell.temp_sensitivity * (temperature_c - nominal_temperature_c)) /
               cell.noise_sigma;
    double p = normal_cdf(z);
    return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

BitVec power_up(const std::vector<CellModel>& cells, const Condition& condition, uint64_t seed) {
    if (cells.empty()) throw ParameterError("power_up: no cells");
    check_condition(condition.label, condition.temperature_c);
    Rng rng(condition_stream(seed, condition));
    BitVec out(cells.size());
    for (size_t i = 0; i < cells.size(); ++i)
        out.set(i, rng.uniform() < one_probability(cells[i], condition.temperature_c));
    return out;
}

QualityReport measure_quality(const PufDataset& ds, const std::string& reference_condition) {
    size_t ref = ds.condition_index(reference_condition);
    if (ds.num_cells == 0) throw ParameterError("dataset has no cells");

    BitVec maj = reference_majority(ds, ref);

    QualityReport rep;
    rep.per_cell_flip_prob.assign(ds.num_cells, 0.0);
    size_t ones = 0, total_repeats = 0, flips_total = 0;
    std::vector<size_t> flips(ds.num_cells, 0);
    for (const auto& reps : ds.measurements) {
        for (const auto& r : reps) {
            ones += r.popcount();
            flips_total += r.hamming(maj);
            for (size_t i = 0; i < ds.num_cells; ++i)
                flips[i] += r.get(i) != maj.get(i);
            ++total_repeats;
        }
    }
    if (total_repeats == 0) throw ParameterError("dataset has no measurements");
    rep.bias = double(ones) / (double(total_repeats) * double(ds.num_cells));
    rep.intra_hd = double(flips_total) / (double(total_repeats) * double(ds.num_cells));
    for (size_t i = 0; i < ds.num_cells; ++i)
        rep.per_cell_flip_prob[i] = double(flips[i]) / double(total_repeats);
    return rep;
}

QualityReport measure_quality(const std::vector<PufDataset>& chips,
                              const std::string& reference_condition) {
    if (chips.empty()) throw ParameterError("no chips given");
    if (chips.size() == 1) return measure_quality(chips.front(), reference_condition);
    for (const auto& c : chips)
        if (c.num_cells != chips.front().num_cells)
            throw ParameterError("chips differ in num_cells");

    QualityReport rep;
    rep.per_cell_flip_prob.assign(chips.front().num_cells, 0.0);
    std::vector<BitVec> majorities;
    for (const auto& chip : chips) {
        QualityReport one = measure_quality(chip, reference_condition);
        rep.bias += one.bias / double(chips.size());
        rep.intra_hd += one.intra_hd / double(chips.size());
        for (size_t i = 0; i < one.per_cell_flip_prob.size(); ++i)
            rep.per_cell_flip_prob[i] += one.per_cell_flip_prob[i] / double(chips.size());
        majorities.push_back(
            reference_majority(chip, chip.condition_index(reference_condition)));
    }
    double hd_sum = 0.0;
    size_t pairs = 0;
    for (size_t a = 0; a < majorities.size(); ++a)
        for (size_t b = a + 1; b < majorities.size(); ++b, ++pairs)
            hd_sum += double(majorities[a].hamming(majorities[b])) /
                      double(chips.front().num_cells);
    rep.inter_hd = hd_sum / double(pairs);
    return rep;
}

double compute_ber(const BitVec& reference, const std::vector<uint32_t>& mask,
                   const PufDataset& ds, const std::string& condition) {
    if (mask.empty()) throw ParameterError("compute_ber: empty mask");
    if (reference.size() != mask.size())
        throw ParameterError("compute_ber: reference/mask length mismatch");
    size_t ci = ds.condition_index(condition);
    for (uint32_t a : mask)
        if (a >= ds.num_cells) throw ParameterError("compute_ber: mask address out of range");

    size_t flips = 0;
    const auto& reps = ds.measurements[ci];
    if (reps.empty()) throw ParameterError("compute_ber: condition has no repeats");
    for (const auto& r : reps)
        for (size_t i = 0; i < mask.size(); ++i)
            flips += r.get(mask[i]) != reference.get(i);
    return double(flips) / (double(reps.size()) * double(mask.size()));
}

PufDataset simulate_dataset(const std::string& chip_id, size_t num_cells,
                            const std::vector<SimCondition>& conditions,
                            const ModelParams& params, uint64_t seed) {
    if (conditions.empty()) throw ParameterError("simulate_dataset: no conditions");
    std::set<std::string> labels;
    for (const auto& c : conditions) {
        check_condition(c.label, c.temperature_c);
        if (c.repeats < 1) throw ParameterError("repeats must be >= 1: " + c.label);
        if (!labels.insert(c.label).second)
            throw ParameterError("duplicate condition label: " + c.label);
    }
    auto cells = sample_chip(num_cells, params, derive_seed(seed, fnv1a64(chip_id)));

    PufDataset ds;
    ds.chip_id = chip_id;
    ds.num_cells = num_cells;
    for (const auto& sc : conditions) {
        Condition cond{sc.label, sc.temperature_c};
        std::vector<BitVec> reps;
        reps.reserve(sc.repeats);
        for (int r = 0; r < sc.repeats; ++r)
            reps.push_back(power_up(cells, cond, derive_seed(seed, uint64_t(r))));
        ds.conditions.push_back(std::move(cond));
        ds.measurements.push_back(std::move(reps));
    }
    return ds;
}

PufDataset load_dataset(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest: " + manifest_path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != 1)
            throw FormatError("unsupported dataset format_version");
        PufDataset ds;
        ds.chip_id = j.at("chip_id").get<std::string>();
        ds.num_cells = j.at("num_cells").get<size_t>();
        if (ds.num_cells < 1) throw FormatError("num_cells must be >= 1");
        size_t stride = (ds.num_cells + 7) / 8;
        std::set<std::string> labels;
        for (const auto& cj : j.at("conditions")) {
            Condition cond{cj.at("label").get<std::string>(),
                           cj.at("temperature_c").get<double>()};
            if (!labels.insert(cond.label).second)
                throw FormatError("duplicate condition label: " + cond.label);
            if (!(cond.temperature_c >= kTempMin && cond.temperature_c <= kTempMax))
                throw FormatError("temperature out of range: " + cond.label);
            size_t repeats = cj.at("repeats").get<size_t>();
            if (repeats < 1) throw FormatError("repeats must be >= 1: " + cond.label);
            auto file = manifest_path.parent_path() / cj.at("file").get<std::string>();

            std::ifstream raw(file, std::ios::binary);
            if (!raw) throw IoError("cannot open raw file: " + file.string());
            std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(raw)),
                                       std::istreambuf_iterator<char>());
            if (bytes.size() != repeats * stride)
                throw FormatError("raw file " + file.string() + ": expected " +
                                  std::to_string(repeats * stride) + " bytes, got " +
                                  std::to_string(bytes.size()));
            std::vector<BitVec> reps;
            reps.reserve(repeats);
            for (size_t r = 0; r < repeats; ++r)
                reps.push_back(BitVec::from_bytes_lsb(bytes.data() + r * stride, ds.num_cells));
            ds.conditions.push_back(std::move(cond));
            ds.measurements.push_back(std::move(reps));
        }
        return ds;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad manifest field: ") + e.what());
    }
}

std::filesystem::path save_dataset(const PufDataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    json conds = json::array();
    for (size_t c = 0; c < ds.conditions.size(); ++c) {
        std::string fname = "cond_" + std::to_string(c) + ".bin";
        std::ofstream raw(dir / fname, std::ios::binary);
        if (!raw) throw IoError("cannot write raw file: " + (dir / fname).string());
        for (const auto& r : ds.measurements[c]) {
            auto bytes = r.to_bytes_lsb();
            raw.write(reinterpret_cast<const char*>(bytes.data()),
                      static_cast<std::streamsize>(bytes.size()));
        }
        conds.push_back({{"label", ds.conditions[c].label},
                         {"temperature_c", ds.conditions[c].temperature_c},
                         {"repeats", ds.measurements[c].size()},
                         {"file", fname}});
    }
    json j{{"format_version", 1},
           {"chip_id", ds.chip_id},
           {"num_cells", ds.num_cells},
           {"conditions", conds}};
    auto path = dir / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest: " + path.string());
    out << j.dump(2) << '\n';
    return path;
}

}  // namespace pufkit
