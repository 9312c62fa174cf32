#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pufkit/analytics.hpp"
#include "pufkit/bch.hpp"
#include "pufkit/blake2s.hpp"
#include "pufkit/enrollment.hpp"
#include "pufkit/errors.hpp"
#include "pufkit/keygen.hpp"
#include "pufkit/puf_model.hpp"
#include "pufkit/rng.hpp"

namespace {

using namespace pufkit;
using nlohmann::json;

// JSON config file support: top-level keys for global options, nested objects
// for subcommand sections. Explicit command-line flags always win.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            j = json::parse(input);
        } catch (const json::exception& e) {
            throw CLI::FileError(std::string("config is not valid JSON: ") + e.what());
        }
        std::vector<CLI::ConfigItem> out;
        flatten({}, j, out);
        return out;
    }

  private:
    static void flatten(const std::vector<std::string>& parents, const json& j,
                        std::vector<CLI::ConfigItem>& out) {
        if (!j.is_object()) throw CLI::FileError("config must be a JSON object");
        for (auto it = j.begin(); it != j.end(); ++it) {
            const json& v = it.value();
            if (v.is_object()) {
                auto p = parents;
                p.push_back(it.key());
                flatten(p, v, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (v.is_array())
                for (const auto& e : v) item.inputs.push_back(scalar(e));
            else
                item.inputs.push_back(scalar(v));
            out.push_back(std::move(item));
        }
    }
    static std::string scalar(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }
};

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t comma = s.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, comma - start));
        start = comma + 1;
    }
    if (out.size() == 1 && out.front().empty()) out.clear();
    return out;
}

std::vector<double> parse_doubles(const std::string& csv, const char* what) {
    std::vector<double> out;
    for (const auto& tok : split_csv(csv)) {
        size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw ParameterError(std::string("bad number in ") + what + ": '" + tok + "'");
        }
        if (pos != tok.size())
            throw ParameterError(std::string("bad number in ") + what + ": '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ParameterError(std::string(what) + " is empty");
    return out;
}

CodeSpec parse_code(const std::string& s) {
    auto v = parse_doubles(s, "--code");
    if (v.size() != 3) throw ParameterError("--code expects n,k,t");
    return {int(v[0]), int(v[1]), int(v[2])};
}

std::string label_for_temp(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%gC", t);
    return buf;
}

std::string hex_of(const uint8_t* p, size_t n) {
    static const char* d = "0123456789abcdef";
    std::string s;
    for (size_t i = 0; i < n; ++i) {
        s += d[p[i] >> 4];
        s += d[p[i] & 15];
    }
    return s;
}

std::string sk_fingerprint(const SecretKey& sk) {
    auto h = hash128(sk.bytes.data(), sk.bytes.size());
    return hex_of(h.data(), 8);
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

json code_json(const CodeSpec& c) { return {{"n", c.n}, {"k", c.k}, {"t", c.t}}; }

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
    size_t cells = 16384;
    int repeats = 100;
    std::string temps = "25";
    uint64_t seed = 1;
    std::string out;
    std::string chip_id = "chip0";
    std::string quality_ref;
    ModelParams mp;
};

int cmd_simulate(const SimulateOpts& o) {
    std::vector<SimCondition> conds;
    for (double t : parse_doubles(o.temps, "--temps"))
        conds.push_back({label_for_temp(t), t, o.repeats});
    PufDataset ds = simulate_dataset(o.chip_id, o.cells, conds, o.mp, o.seed);
    auto manifest = save_dataset(ds, o.out);

    std::string ref = o.quality_ref;
    if (ref.empty()) {
        size_t best = 0;
        for (size_t i = 1; i < ds.conditions.size(); ++i)
            if (std::abs(ds.conditions[i].temperature_c - o.mp.nominal_temperature_c) <
                std::abs(ds.conditions[best].temperature_c - o.mp.nominal_temperature_c))
                best = i;
        ref = ds.conditions[best].label;
    }
    QualityReport q = measure_quality(ds, ref);
    json labels = json::array();
    for (const auto& c : ds.conditions) labels.push_back(c.label);
    emit({{"manifest", manifest.string()},
          {"chip_id", ds.chip_id},
          {"num_cells", ds.num_cells},
          {"conditions", labels},
          {"quality_reference", ref},
          {"bias", q.bias},
          {"intra_hd", q.intra_hd}});
    return 0;
}

// ------------------------------------------------------------------ enroll

struct EnrollOpts {
    std::string dataset;
    std::string ref = "25C";
    std::string strategy = "presel";
    std::string others;
    int presel = 10;
    int mv = 9;
    std::string out;
    std::string challenge_out;
};

int cmd_enroll(const EnrollOpts& o) {
    PufDataset ds = load_dataset(o.dataset);
    EnrollPlan plan;
    plan.reference_condition = o.ref;
    if (o.strategy == "presel") {
        plan.presel_repeats = o.presel;
        plan.other_conditions = split_csv(o.others);
        plan.mv_repeats = o.mv;
    } else if (o.strategy == "mrr") {
        plan.presel_repeats = o.presel;
        plan.other_conditions = split_csv(o.others);
        plan.mv_repeats = o.mv;
        if (plan.other_conditions.empty())
            throw ParameterError("--strategy mrr needs --others");
    } else if (o.strategy == "mv") {
        plan.presel_repeats = 0;
        plan.other_conditions = split_csv(o.others);
        plan.mv_repeats = o.mv;
    } else if (o.strategy == "none") {
        plan.presel_repeats = 0;
        plan.other_conditions = split_csv(o.others);
        plan.mv_repeats = 1;
    } else {
        throw ParameterError("unknown --strategy (use presel|mrr|mv|none)");
    }

    EnrollmentRecord rec = enroll(ds, plan);
    save_record(rec, o.out);
    if (!o.challenge_out.empty()) save_challenge(challenge_of(rec), o.challenge_out);

    json refs = json::array();
    for (size_t j = 0; j < rec.references.size(); ++j) {
        const auto& rr = rec.references[j];
        size_t ci = ds.condition_index(rr.condition_label);
        size_t used = j == 0 ? size_t(plan.presel_repeats >= 2 ? plan.presel_repeats
                                                               : plan.mv_repeats)
                             : size_t(plan.mv_repeats);
        const auto& reps = ds.measurements[ci];
        json ber = nullptr;
        if (reps.size() > used) {
            size_t flips = 0, count = 0;
            for (size_t r = used; r < reps.size(); ++r, ++count)
                flips += apply_mask(reps[r], rec.challenge_mask).hamming(rr.bits);
            ber = double(flips) / (double(count) * double(rec.challenge_mask.size()));
        }
        refs.push_back({{"label", rr.condition_label},
                        {"temperature_c", rr.temperature_c},
                        {"strategy", rr.strategy},
                        {"heldout_ber", ber}});
    }
    emit({{"record", o.out},
          {"challenge", o.challenge_out.empty() ? json(nullptr) : json(o.challenge_out)},
          {"J", rec.references.size()},
          {"mask_size", rec.challenge_mask.size()},
          {"num_cells", rec.num_cells},
          {"kept_fraction", double(rec.challenge_mask.size()) / double(rec.num_cells)},
          {"references", refs}});
    return 0;
}

// ------------------------------------------------------------------- token

struct TokenOpts {
    std::string challenge;
    std::string dataset;
    std::string condition;
    int repeat = 0;
    uint64_t live_seed = 1;
    std::string live_chip_id = "chip0";
    double live_temp = 25.0;
    uint64_t live_noise_seed = 0;
    std::string live_label = "live";
    std::string code = "63,16,11";
    int key_bits = 128;
    std::string helper_out;
    std::string key_out;
    std::string json_out;
    bool live = false;
};

int cmd_token(const TokenOpts& o) {
    Challenge ch = load_challenge(o.challenge);
    BitVec full;
    if (!o.dataset.empty()) {
        PufDataset ds = load_dataset(o.dataset);
        if (ds.num_cells != ch.num_cells)
            throw ProtocolError("challenge and dataset disagree on num_cells");
        if (o.condition.empty()) throw ParameterError("--condition required with --dataset");
        size_t ci = ds.condition_index(o.condition);
        if (o.repeat < 0 || size_t(o.repeat) >= ds.measurements[ci].size())
            throw ParameterError("--repeat out of range");
        full = ds.measurements[ci][size_t(o.repeat)];
    } else if (o.live) {
        auto cells = sample_chip(ch.num_cells, ModelParams{},
                                 derive_seed(o.live_seed, fnv1a64(o.live_chip_id)));
        full = power_up(cells, {o.live_label, o.live_temp},
                        derive_seed(o.live_seed, o.live_noise_seed));
    } else {
        throw ParameterError("token needs a response source: --dataset or --live");
    }
    BitVec resp = apply_mask(full, ch.mask);
    BchCode code(parse_code(o.code));
    TokenOutput tok = token_generate(resp, code, o.key_bits);
    save_helper(tok.helper, o.helper_out);
    if (!o.key_out.empty()) {
        std::ofstream kf(o.key_out, std::ios::binary);
        if (!kf) throw IoError("cannot write key file: " + o.key_out);
        kf << hex_of(tok.sk.bytes.data(), tok.sk.bytes.size()) << '\n';
    }
    if (!o.json_out.empty()) {
        std::ofstream jf(o.json_out, std::ios::binary);
        if (!jf) throw IoError("cannot write helper JSON: " + o.json_out);
        jf << helper_to_json(tok.helper) << '\n';
    }
    emit({{"helper", o.helper_out},
          {"code", code_json(tok.helper.code)},
          {"L", tok.helper.L()},
          {"helper_bits", size_t(tok.helper.L()) * size_t(tok.helper.code.n - tok.helper.code.k)},
          {"response_bits_used", size_t(tok.helper.L()) * size_t(tok.helper.code.n)},
          {"sk_fingerprint", sk_fingerprint(tok.sk)}});
    return 0;
}

// ------------------------------------------------------------------ server

struct ServerOpts {
    std::string record;
    std::string helper;
    double ambient = 0.0;
    bool has_ambient = false;
};

int cmd_server(const ServerOpts& o) {
    EnrollmentRecord rec = load_record(o.record);
    HelperData helper = load_helper(o.helper);
    std::optional<double> ambient;
    if (o.has_ambient) ambient = o.ambient;
    RecoveryResult rr = server_recover(helper, rec, ambient);
    json j{{"success", rr.success}, {"attempts", rr.attempts}};
    if (rr.success) {
        j["used_reference_index"] = rr.used_reference_index;
        j["used_reference"] = rec.references[rr.used_reference_index].condition_label;
        j["sk_fingerprint"] = sk_fingerprint(rr.sk);
    }
    emit(j);
    return rr.success ? 0 : 1;
}

// -------------------------------------------------------------------- plan

struct PlanOpts {
    double target = 1e-6;
    int key_bits = 128;
    std::string ber;
    std::string dataset;
    std::string record;
    int holdout_start = 0;
};

int cmd_plan(const PlanOpts& o) {
    std::vector<double> profile;
    json matrix;
    if (!o.ber.empty()) {
        profile = parse_doubles(o.ber, "--ber");
    } else if (!o.dataset.empty() && !o.record.empty()) {
        PufDataset ds = load_dataset(o.dataset);
        EnrollmentRecord rec = load_record(o.record);
        if (o.holdout_start > 0) {
            for (auto& reps : ds.measurements) {
                if (reps.size() <= size_t(o.holdout_start))
                    throw ParameterError("--holdout-start leaves no repeats");
                reps.erase(reps.begin(), reps.begin() + o.holdout_start);
            }
        }
        // Effective profile: at each condition the best reference wins; plan
        // for the worst condition of that best-reference error rate.
        double worst_best = 0.0;
        for (const auto& cond : ds.conditions) {
            double best = 1.0;
            for (const auto& rr : rec.references) {
                double b = compute_ber(rr.bits, rec.challenge_mask, ds, cond.label);
                matrix[rr.condition_label][cond.label] = b;
                best = std::min(best, b);
            }
            worst_best = std::max(worst_best, best);
        }
        profile = {worst_best};
    } else {
        throw ParameterError("plan needs --ber or both --dataset and --record");
    }

    try {
        Plan plan = plan_code(o.target, o.key_bits, profile, BchCode::catalog());
        json j{{"feasible", true},
               {"target_pfail", o.target},
               {"key_bits", o.key_bits},
               {"code", code_json(plan.code)},
               {"L", plan.L},
               {"encode_cost", plan.encode_cost},
               {"p_fail", plan.budget.p_fail},
               {"per_reference_ber", plan.budget.per_reference_ber},
               {"p1", plan.budget.p1},
               {"p2", plan.budget.p2}};
        if (!matrix.is_null()) j["ber_matrix"] = matrix;
        emit(j);
        return 0;
    } catch (const PlanningError& e) {
        emit({{"feasible", false},
              {"target_pfail", o.target},
              {"key_bits", o.key_bits},
              {"per_reference_ber", profile},
              {"best_code", json{{"n", e.best_n}, {"k", e.best_k}, {"t", e.best_t}}},
              {"best_achievable", e.best_achievable},
              {"error", e.what()}});
        return 1;
    }
}

// ----------------------------------------------------------------- analyze

struct AnalyzeOpts {
    int response_bits = -1;
    int helper_bits = -1;
    double bias = 0.5;
    bool has_bias = false;
    int key_bits = 128;
    std::string helper;
    std::string dataset;
    std::string quality_ref;
};

int cmd_analyze(const AnalyzeOpts& o) {
    int response_bits = o.response_bits, helper_bits = o.helper_bits;
    double bias = o.bias;
    if (!o.helper.empty()) {
        HelperData h = load_helper(o.helper);
        if (response_bits < 0) response_bits = h.L() * h.code.n;
        if (helper_bits < 0) helper_bits = h.L() * (h.code.n - h.code.k);
    }
    if (!o.dataset.empty() && !o.has_bias) {
        PufDataset ds = load_dataset(o.dataset);
        std::string ref = o.quality_ref.empty() ? ds.conditions.front().label : o.quality_ref;
        bias = measure_quality(ds, ref).bias;
    }
    if (response_bits < 0 || helper_bits < 0)
        throw ParameterError("analyze needs --response-bits and --helper-bits (or --helper)");
    EntropyReport r = entropy_report(response_bits, helper_bits, bias, o.key_bits);
    emit({{"response_bits", r.response_bits},
          {"helper_bits", r.helper_bits},
          {"bias", r.bias},
          {"min_entropy_in", r.min_entropy_in},
          {"residual_min_entropy", r.residual_min_entropy},
          {"key_bits", r.key_bits},
          {"entropy_flag", r.entropy_flag},
          {"bias_flag", r.bias_flag}});
    return 0;
}

// -------------------------------------------------------------- montecarlo

struct MonteCarloOpts {
    std::string record;
    std::string code;
    size_t trials = 1000;
    uint64_t seed = 1;
    double z = 3.0;
    unsigned threads = 0;
    int key_bits = 128;
    std::string csv;
    double inject_ber = -1.0;
    uint64_t chip_seed = 1;
    std::string chip_id = "chip0";
    double temp = 25.0;
    std::string label;
    double ambient = 0.0;
    bool has_ambient = false;
};

int cmd_montecarlo(const MonteCarloOpts& o) {
    EnrollmentRecord rec = load_record(o.record);
    CodeSpec code = parse_code(o.code);

    MonteCarloOptions opts;
    opts.trials = o.trials;
    opts.seed = o.seed;
    opts.key_bits = o.key_bits;
    opts.wilson_z = o.z;
    opts.threads = o.threads;
    if (o.has_ambient) opts.ambient_temperature_c = o.ambient;

    std::ofstream csv;
    if (!o.csv.empty()) {
        csv.open(o.csv, std::ios::binary);
        if (!csv) throw IoError("cannot write CSV: " + o.csv);
        csv << "trial,condition,success,attempts\n";
        opts.sink = [&csv](size_t trial, const std::string& cond, bool ok, size_t attempts) {
            csv << trial << ',' << cond << ',' << (ok ? 1 : 0) << ',' << attempts << '\n';
        };
    }

    MonteCarloResult res;
    json j;
    if (o.inject_ber >= 0.0) {
        res = montecarlo_failure_injected(rec, code, o.inject_ber, opts);
        int L = (o.key_bits + code.k - 1) / code.k;
        double p2 = key_failure_L(block_failure(code.n, code.t, o.inject_ber), L);
        j["mode"] = "injected";
        j["inject_ber"] = o.inject_ber;
        j["analytic_p2"] = p2;
        j["L"] = L;
    } else {
        auto cells = sample_chip(rec.num_cells, ModelParams{},
                                 derive_seed(o.chip_seed, fnv1a64(o.chip_id)));
        std::string label = o.label.empty() ? label_for_temp(o.temp) : o.label;
        res = montecarlo_failure(rec, code, cells, {label, o.temp}, opts);
        j["mode"] = "simulated";
        j["condition"] = label;
        j["temperature_c"] = o.temp;
    }
    j["code"] = code_json(code);
    j["trials"] = res.trials;
    j["failures"] = res.failures;
    j["rate"] = res.rate;
    j["wilson_low"] = res.ci_low;
    j["wilson_high"] = res.ci_high;
    j["z"] = o.z;
    emit(j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SRAM PUF key-generation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "JSON config file; explicit flags win");
    app.config_formatter(std::make_shared<JsonConfig>());

    SimulateOpts so;
    auto* sim = app.add_subcommand("simulate", "Sample a chip model and write a dataset");
    sim->configurable(true);
    sim->add_option("--cells", so.cells, "Number of SRAM cells");
    sim->add_option("--repeats", so.repeats, "Power-up repeats per condition");
    sim->add_option("--temps", so.temps, "Comma-separated temperatures in Celsius");
    sim->add_option("--seed", so.seed, "Simulation seed");
    sim->add_option("-o,--out", so.out, "Output dataset directory")->required();
    sim->add_option("--chip-id", so.chip_id, "Chip identifier");
    sim->add_option("--quality-ref", so.quality_ref, "Condition for the quality report");
    sim->add_option("--latent-sigma", so.mp.latent_sigma, "Latent skew sigma");
    sim->add_option("--noise-sigma", so.mp.noise_sigma, "Per-measurement noise sigma");
    sim->add_option("--drift-median", so.mp.drift_magnitude_median,
                    "Median |temperature sensitivity| per degree");
    sim->add_option("--drift-log-sigma", so.mp.drift_log_sigma,
                    "Log-sigma of the sensitivity magnitude");

    EnrollOpts eo;
    auto* enr = app.add_subcommand("enroll", "Build an enrollment record from a dataset");
    enr->configurable(true);
    enr->add_option("--dataset", eo.dataset, "Dataset manifest path")->required();
    enr->add_option("--ref", eo.ref, "Reference condition label");
    enr->add_option("--strategy", eo.strategy, "presel | mrr | mv | none");
    enr->add_option("--others", eo.others, "Comma-separated extra reference conditions");
    enr->add_option("--presel", eo.presel, "Preselection repeats");
    enr->add_option("--mv", eo.mv, "Majority-vote repeats (odd)");
    enr->add_option("-o,--out", eo.out, "Record output path")->required();
    enr->add_option("--challenge-out", eo.challenge_out, "Public challenge output path");

    TokenOpts to;
    auto* tok = app.add_subcommand("token", "Token role: fresh response -> helper + local key");
    tok->configurable(true);
    tok->add_option("--challenge", to.challenge, "Public challenge file")->required();
    tok->add_option("--dataset", to.dataset, "Response source dataset manifest");
    tok->add_option("--condition", to.condition, "Condition label in the dataset");
    tok->add_option("--repeat", to.repeat, "Repeat index in the dataset");
    tok->add_flag("--live", to.live, "Simulate a live power-up instead of reading a dataset");
    tok->add_option("--live-seed", to.live_seed, "Chip seed for --live");
    tok->add_option("--live-chip-id", to.live_chip_id, "Chip id for --live");
    tok->add_option("--live-temp", to.live_temp, "Ambient temperature for --live");
    tok->add_option("--live-noise-seed", to.live_noise_seed, "Noise stream index for --live");
    tok->add_option("--code", to.code, "BCH code as n,k,t");
    tok->add_option("--key-bits", to.key_bits, "Key length in bits");
    tok->add_option("--helper-out", to.helper_out, "Helper artifact output path")->required();
    tok->add_option("--key-out", to.key_out, "Local secret key output path");
    tok->add_option("--json-out", to.json_out, "Helper JSON debug output path");

    ServerOpts vo;
    auto* srv = app.add_subcommand("server", "Server role: recover the key from helper + record");
    srv->configurable(true);
    srv->add_option("--record", vo.record, "Enrollment record path")->required();
    srv->add_option("--helper", vo.helper, "Helper artifact path")->required();
    auto* amb = srv->add_option("--ambient", vo.ambient,
                                "Token-reported ambient temperature (ordering hint)");

    PlanOpts po;
    auto* pln = app.add_subcommand("plan", "Pick the cheapest feasible BCH code");
    pln->configurable(true);
    pln->add_option("--target", po.target, "Key failure-rate target");
    pln->add_option("--key-bits", po.key_bits, "Key length in bits");
    pln->add_option("--ber", po.ber, "Comma-separated per-reference BER profile");
    pln->add_option("--dataset", po.dataset, "Dataset manifest (with --record)");
    pln->add_option("--record", po.record, "Enrollment record (with --dataset)");
    pln->add_option("--holdout-start", po.holdout_start,
                    "Skip this many leading repeats per condition when measuring BER");

    AnalyzeOpts ao;
    auto* ana = app.add_subcommand("analyze", "Entropy accounting for a configuration");
    ana->configurable(true);
    ana->add_option("--response-bits", ao.response_bits, "Response bits feeding the key");
    ana->add_option("--helper-bits", ao.helper_bits, "Helper bits exposed");
    auto* bias_opt = ana->add_option("--bias", ao.bias, "Response one-probability");
    ana->add_option("--key-bits", ao.key_bits, "Key length in bits");
    ana->add_option("--helper", ao.helper, "Derive bit counts from this helper artifact");
    ana->add_option("--dataset", ao.dataset, "Measure bias from this dataset");
    ana->add_option("--quality-ref", ao.quality_ref, "Reference condition for bias measurement");

    MonteCarloOpts mo;
    auto* mc = app.add_subcommand("montecarlo", "Empirical failure-rate campaign");
    mc->configurable(true);
    mc->add_option("--record", mo.record, "Enrollment record path")->required();
    mc->add_option("--code", mo.code, "BCH code as n,k,t")->required();
    mc->add_option("--trials", mo.trials, "Number of trials");
    mc->add_option("--seed", mo.seed, "Campaign seed");
    mc->add_option("--z", mo.z, "Wilson interval z");
    mc->add_option("--threads", mo.threads, "Worker threads (0 = auto)");
    mc->add_option("--key-bits", mo.key_bits, "Key length in bits");
    mc->add_option("--csv", mo.csv, "Per-trial CSV output path");
    mc->add_option("--inject-ber", mo.inject_ber, "Use an i.i.d. flip injector at this BER");
    mc->add_option("--chip-seed", mo.chip_seed, "Chip seed for simulated responses");
    mc->add_option("--chip-id", mo.chip_id, "Chip id for simulated responses");
    mc->add_option("--temp", mo.temp, "Evaluation temperature");
    mc->add_option("--label", mo.label, "Condition label (defaults from --temp)");
    auto* mamb = mc->add_option("--ambient", mo.ambient, "Ambient hint forwarded to the server");

    int rc = 0;
    sim->callback([&] { rc = cmd_simulate(so); });
    enr->callback([&] { rc = cmd_enroll(eo); });
    tok->callback([&] { rc = cmd_token(to); });
    srv->callback([&] {
        vo.has_ambient = amb->count() > 0;
        rc = cmd_server(vo);
    });
    pln->callback([&] { rc = cmd_plan(po); });
    ana->callback([&] {
        ao.has_bias = bias_opt->count() > 0;
        rc = cmd_analyze(ao);
    });
    mc->callback([&] {
        mo.has_ambient = mamb->count() > 0;
        rc = cmd_montecarlo(mo);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const PlanningError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ProtocolError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return rc;
}
