#include "pufkit/enrollment.hpp"

#include <fstream>
#include <numeric>
#include <set>
#include <json.hpp>

#include "pufkit/base64.hpp"
#include "pufkit/errors.hpp"

namespace pufkit {
namespace {

using nlohmann::json;

void check_equal_lengths(const std::vector<BitVec>& repeats) {
    for (const auto& r : repeats)
        if (r.size() != repeats.front().size())
            throw ParameterError("repeats have different lengths");
}

std::vector<BitVec> masked_repeats(const std::vector<BitVec>& reps, size_t count,
                                   const std::vector<uint32_t>& mask) {
    std::vector<BitVec> out;
    out.reserve(count);
    for (size_t r = 0; r < count; ++r) out.push_back(apply_mask(reps[r], mask));
    return out;
}

json record_to_json(const EnrollmentRecord& rec) {
    json refs = json::array();
    for (const auto& r : rec.references)
        refs.push_back({{"condition_label", r.condition_label},
                        {"temperature_c", r.temperature_c},
                        {"strategy", r.strategy},
                        {"bits_b64", base64_encode(r.bits.to_bytes_lsb())}});
    json j{{"format_version", 1},
           {"chip_id", rec.chip_id},
           {"num_cells", rec.num_cells},
           {"challenge_mask", rec.challenge_mask},
           {"references", refs}};
    if (rec.debias_meta)
        j["debias_meta"] = {{"method", rec.debias_meta->method},
                            {"kept", rec.debias_meta->kept}};
    return j;
}

void validate_record(const EnrollmentRecord& rec) {
    if (rec.references.empty()) throw FormatError("record has no references");
    if (rec.challenge_mask.empty()) throw FormatError("record has an empty challenge mask");
    uint32_t prev = 0;
    bool first = true;
    for (uint32_t a : rec.challenge_mask) {
        if (a >= rec.num_cells) throw FormatError("mask address out of range");
        if (!first && a <= prev) throw FormatError("mask addresses not strictly increasing");
        prev = a;
        first = false;
    }
    std::set<std::string> labels;
    static const std::set<std::string> kStrategies{"none", "mv", "presel", "presel+mv"};
    for (const auto& r : rec.references) {
        if (r.bits.size() != rec.challenge_mask.size())
            throw FormatError("reference length differs from mask size");
        if (!labels.insert(r.condition_label).second)
            throw FormatError("duplicate reference condition label: " + r.condition_label);
        if (!kStrategies.count(r.strategy))
            throw FormatError("unknown reference strategy: " + r.strategy);
    }
    if (rec.debias_meta)
        for (uint32_t i : rec.debias_meta->kept)
            if (i >= rec.challenge_mask.size())
                throw FormatError("debias_meta index out of range");
}

json parse_json_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot open ") + what + ": " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(std::string(what) + " is not valid JSON: " + e.what());
    }
}

void write_json_file(const json& j, const std::filesystem::path& path, const char* what) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(std::string("cannot write ") + what + ": " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace

BitVec majority_vote(const std::vector<BitVec>& repeats) {
    if (repeats.empty() || repeats.size() % 2 == 0)
        throw ParameterError("majority_vote needs an odd number of repeats");
    check_equal_lengths(repeats);
    const size_t nbits = repeats.front().size();
    const size_t need = (repeats.size() + 1) / 2;
    BitVec out(nbits);
    for (size_t i = 0; i < nbits; ++i) {
        size_t ones = 0;
        for (const auto& r : repeats) ones += r.get(i);
        if (ones >= need) out.set(i, true);
    }
    return out;
}

Preselection preselect(const std::vector<BitVec>& repeats) {
    if (repeats.size() < 2) throw ParameterError("preselect needs at least 2 repeats");
    check_equal_lengths(repeats);
    const size_t nbits = repeats.front().size();
    Preselection out;
    for (size_t i = 0; i < nbits; ++i) {
        bool v = repeats.front().get(i);
        bool agree = true;
        for (size_t r = 1; agree && r < repeats.size(); ++r) agree = repeats[r].get(i) == v;
        if (agree) {
            out.mask.push_back(static_cast<uint32_t>(i));
            out.bits.push_back(v);
        }
    }
    return out;
}

BitVec apply_mask(const BitVec& measurement, const std::vector<uint32_t>& mask) {
    BitVec out(mask.size());
    for (size_t j = 0; j < mask.size(); ++j) {
        if (mask[j] >= measurement.size())
            throw ParameterError("mask address out of range");
        out.set(j, measurement.get(mask[j]));
    }
    return out;
}

EnrollmentRecord enroll(const PufDataset& ds, const EnrollPlan& plan) {
    if (plan.mv_repeats < 1 || plan.mv_repeats % 2 == 0)
        throw ParameterError("mv_repeats must be odd and >= 1");
    if (plan.presel_repeats != 0 && plan.presel_repeats < 2)
        throw ParameterError("presel_repeats must be 0 or >= 2");
    std::set<std::string> labels{plan.reference_condition};
    for (const auto& c : plan.other_conditions)
        if (!labels.insert(c).second)
            throw ParameterError("enrollment conditions must be pairwise distinct");

    const size_t ref_ci = ds.condition_index(plan.reference_condition);
    const auto& ref_reps = ds.measurements[ref_ci];
    const bool presel_on = plan.presel_repeats >= 2;

    EnrollmentRecord rec;
    rec.chip_id = ds.chip_id;
    rec.num_cells = ds.num_cells;

    ReferenceResponse ref;
    ref.condition_label = ds.conditions[ref_ci].label;
    ref.temperature_c = ds.conditions[ref_ci].temperature_c;
    if (presel_on) {
        if (ref_reps.size() < size_t(plan.presel_repeats))
            throw ParameterError("insufficient repeats for preselection at " +
                                 plan.reference_condition);
        auto ps = preselect(std::vector<BitVec>(ref_reps.begin(),
                                                ref_reps.begin() + plan.presel_repeats));
        if (ps.mask.empty()) throw ParameterError("preselection left no cells");
        rec.challenge_mask = std::move(ps.mask);
        ref.bits = std::move(ps.bits);
        ref.strategy = "presel";
    } else {
        if (ref_reps.size() < size_t(plan.mv_repeats))
            throw ParameterError("insufficient repeats at " + plan.reference_condition);
        rec.challenge_mask.resize(ds.num_cells);
        std::iota(rec.challenge_mask.begin(), rec.challenge_mask.end(), 0);
        if (plan.mv_repeats == 1) {
            ref.bits = ref_reps.front();
            ref.strategy = "none";
        } else {
            ref.bits = majority_vote(std::vector<BitVec>(
                ref_reps.begin(), ref_reps.begin() + plan.mv_repeats));
            ref.strategy = "mv";
        }
    }
    rec.references.push_back(std::move(ref));

    for (const auto& label : plan.other_conditions) {
        const size_t ci = ds.condition_index(label);
        const auto& reps = ds.measurements[ci];
        if (reps.size() < size_t(plan.mv_repeats))
            throw ParameterError("insufficient repeats at " + label);
        ReferenceResponse rr;
        rr.condition_label = ds.conditions[ci].label;
        rr.temperature_c = ds.conditions[ci].temperature_c;
        auto masked = masked_repeats(reps, size_t(plan.mv_repeats), rec.challenge_mask);
        rr.bits = plan.mv_repeats == 1 ? masked.front() : majority_vote(masked);
        if (presel_on) rr.strategy = "presel+mv";
        else rr.strategy = plan.mv_repeats == 1 ? "none" : "mv";
        rec.references.push_back(std::move(rr));
    }
    return rec;
}

Challenge challenge_of(const EnrollmentRecord& record) {
    return {record.num_cells, record.challenge_mask};
}

void save_record(const EnrollmentRecord& rec, const std::filesystem::path& path) {
    validate_record(rec);
    write_json_file(record_to_json(rec), path, "enrollment record");
}

EnrollmentRecord load_record(const std::filesystem::path& path) {
    json j = parse_json_file(path, "enrollment record");
    try {
        if (j.at("format_version").get<int>() != 1)
            throw FormatError("unsupported enrollment record format_version");
        EnrollmentRecord rec;
        rec.chip_id = j.at("chip_id").get<std::string>();
        rec.num_cells = j.at("num_cells").get<size_t>();
        rec.challenge_mask = j.at("challenge_mask").get<std::vector<uint32_t>>();
        for (const auto& rj : j.at("references")) {
            ReferenceResponse r;
            r.condition_label = rj.at("condition_label").get<std::string>();
            r.temperature_c = rj.at("temperature_c").get<double>();
            r.strategy = rj.at("strategy").get<std::string>();
            auto bytes = base64_decode(rj.at("bits_b64").get<std::string>());
            size_t nbits = rec.challenge_mask.size();
            if (bytes.size() != (nbits + 7) / 8)
                throw FormatError("reference bit field has wrong length");
            r.bits = BitVec::from_bytes_lsb(bytes.data(), nbits);
            rec.references.push_back(std::move(r));
        }
        if (j.contains("debias_meta")) {
            DebiasMeta dm;
            dm.method = j["debias_meta"].at("method").get<std::string>();
            dm.kept = j["debias_meta"].at("kept").get<std::vector<uint32_t>>();
            rec.debias_meta = std::move(dm);
        }
        validate_record(rec);
        return rec;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad enrollment record field: ") + e.what());
    }
}

void save_challenge(const Challenge& ch, const std::filesystem::path& path) {
    json j{{"format_version", 1}, {"num_cells", ch.num_cells}, {"challenge_mask", ch.mask}};
    write_json_file(j, path, "challenge");
}

Challenge load_challenge(const std::filesystem::path& path) {
    json j = parse_json_file(path, "challenge");
    try {
        if (j.at("format_version").get<int>() != 1)
            throw FormatError("unsupported challenge format_version");
        Challenge ch;
        ch.num_cells = j.at("num_cells").get<size_t>();
        ch.mask = j.at("challenge_mask").get<std::vector<uint32_t>>();
        uint32_t prev = 0;
        bool first = true;
        for (uint32_t a : ch.mask) {
            if (a >= ch.num_cells) throw FormatError("mask address out of range");
            if (!first && a <= prev) throw FormatError("mask addresses not strictly increasing");
            prev = a;
            first = false;
        }
        return ch;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad challenge field: ") + e.what());
    }
}

}  // namespace pufkit
