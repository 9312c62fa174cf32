#include "pufkit/analytics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "pufkit/errors.hpp"
#include "pufkit/keygen.hpp"
#include "pufkit/rng.hpp"

namespace pufkit {
namespace {

void kahan_add(double& sum, double& comp, double x) {
    double y = x - comp;
    double z = sum + y;
    comp = (z - sum) - y;
    sum = z;
}

MonteCarloResult run_mc(const EnrollmentRecord& record, const CodeSpec& codespec,
                        const std::string& condition_label,
                        const std::function<BitVec(size_t trial)>& sample_response,
                        const MonteCarloOptions& opts) {
    if (opts.trials < 1) throw ParameterError("montecarlo: trials must be >= 1");
    const BchCode code(codespec);

    unsigned nthreads = opts.threads ? opts.threads
                                     : std::max(1u, std::thread::hardware_concurrency());
    nthreads = unsigned(std::min<size_t>(nthreads, opts.trials));

    const bool keep_rows = bool(opts.sink);
    std::vector<uint8_t> row_success(keep_rows ? opts.trials : 0);
    std::vector<uint8_t> row_attempts(keep_rows ? opts.trials : 0);
    std::atomic<size_t> failures{0};
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;

    auto worker = [&] {
        size_t local_fail = 0;
        try {
            for (;;) {
                size_t begin = next.fetch_add(256);
                if (begin >= opts.trials) break;
                size_t end = std::min(opts.trials, begin + 256);
                for (size_t tr = begin; tr < end; ++tr) {
                    BitVec resp = sample_response(tr);
                    TokenOutput tok = token_generate(resp, code, opts.key_bits);
                    RecoveryResult rr =
                        server_recover(tok.helper, record, opts.ambient_temperature_c);
                    bool ok = rr.success && rr.sk == tok.sk;
                    if (!ok) ++local_fail;
                    if (keep_rows) {
                        row_success[tr] = ok;
                        row_attempts[tr] = uint8_t(std::min<size_t>(rr.attempts, 255));
                    }
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lk(error_mu);
            if (!first_error) first_error = std::current_exception();
        }
        failures += local_fail;
    };

    std::vector<std::thread> pool;
    for (unsigned i = 0; i + 1 < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    MonteCarloResult res;
    res.trials = opts.trials;
    res.failures = failures.load();
    res.rate = double(res.failures) / double(res.trials);
    res.ci_low = wilson_low(res.failures, res.trials, opts.wilson_z);
    res.ci_high = wilson_high(res.failures, res.trials, opts.wilson_z);
    if (keep_rows)
        for (size_t tr = 0; tr < opts.trials; ++tr)
            opts.sink(tr, condition_label, row_success[tr], row_attempts[tr]);
    return res;
}

}  // namespace

double block_failure(int n, int t, double ber) {
    if (n < 1 || t < 0 || t >= n) throw ParameterError("block_failure: need 0 <= t < n");
    if (!(ber >= 0.0 && ber <= 1.0)) throw ParameterError("block_failure: ber must be in [0,1]");
    if (ber == 0.0) return 0.0;
    if (ber == 1.0) return 1.0;

    const double lb = std::log(ber);
    const double l1b = std::log1p(-ber);
    const double lgn = std::lgamma(double(n) + 1.0);
    auto log_term = [&](int i) {
        return lgn - std::lgamma(double(i) + 1.0) - std::lgamma(double(n - i) + 1.0) +
               double(i) * lb + double(n - i) * l1b;
    };
    // Sum whichever tail is the small one, smallest terms first.
    double sum = 0.0, comp = 0.0;
    if (double(t) + 1.0 > double(n) * ber) {
        for (int i = n; i >= t + 1; --i) kahan_add(sum, comp, std::exp(log_term(i)));
        return std::min(sum, 1.0);
    }
    for (int i = 0; i <= t; ++i) kahan_add(sum, comp, std::exp(log_term(i)));
    return std::clamp(1.0 - sum, 0.0, 1.0);
}

double key_failure_L(double p1, int L) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw ParameterError("key_failure_L: p1 must be in [0,1]");
    if (L < 1) throw ParameterError("key_failure_L: L must be >= 1");
    if (p1 == 1.0) return 1.0;
    return -std::expm1(double(L) * std::log1p(-p1));
}

double key_failure_mrr(const std::vector<double>& p2_list) {
    if (p2_list.empty()) throw ParameterError("key_failure_mrr: empty list");
    double best = 1.0;
    for (double p : p2_list) {
        if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("key_failure_mrr: value outside [0,1]");
        best = std::min(best, p);
    }
    return best;
}

FailureBudget make_budget(const CodeSpec& code, int L,
                          const std::vector<double>& per_reference_ber) {
    if (per_reference_ber.empty()) throw ParameterError("make_budget: no reference BERs");
    if (L < 1) throw ParameterError("make_budget: L must be >= 1");
    FailureBudget fb;
    fb.per_reference_ber = per_reference_ber;
    fb.code = code;
    fb.L = L;
    for (double b : per_reference_ber) {
        double p1 = block_failure(code.n, code.t, b);
        fb.p1.push_back(p1);
        fb.p2.push_back(key_failure_L(p1, L));
    }
    fb.p_fail = key_failure_mrr(fb.p2);
    return fb;
}

Plan plan_code(double target_pfail, int key_bits, const std::vector<double>& per_reference_ber,
               const std::vector<CodeSpec>& catalog) {
    if (!(target_pfail > 0.0 && target_pfail < 1.0))
        throw ParameterError("plan_code: target must be in (0,1)");
    if (key_bits < 1) throw ParameterError("plan_code: key_bits must be >= 1");
    if (catalog.empty()) throw ParameterError("plan_code: empty catalog");
    if (per_reference_ber.empty()) throw ParameterError("plan_code: no reference BERs");

    std::optional<Plan> best;
    double closest_pf = 2.0;
    CodeSpec closest{};
    for (const auto& cs : catalog) {
        int L = (key_bits + cs.k - 1) / cs.k;
        FailureBudget fb = make_budget(cs, L, per_reference_ber);
        if (fb.p_fail < closest_pf) {
            closest_pf = fb.p_fail;
            closest = cs;
        }
        if (!(fb.p_fail < target_pfail)) continue;
        double cost = double(L) * double(cs.n) * double(cs.n - cs.k);
        bool better = !best || cost < best->encode_cost ||
                      (cost == best->encode_cost &&
                       (cs.n < best->code.n || (cs.n == best->code.n && cs.t < best->code.t)));
        if (better) best = Plan{cs, L, std::move(fb), cost};
    }
    if (!best)
        throw PlanningError("no catalog code reaches the failure-rate target", closest.n,
                            closest.k, closest.t, closest_pf);
    return *best;
}

MonteCarloResult montecarlo_failure(const EnrollmentRecord& record, const CodeSpec& code,
                                    const std::vector<CellModel>& cells,
                                    const Condition& condition, const MonteCarloOptions& opts) {
    auto sample = [&](size_t trial) {
        BitVec full = power_up(cells, condition, derive_seed(opts.seed, trial));
        return apply_mask(full, record.challenge_mask);
    };
    return run_mc(record, code, condition.label, sample, opts);
}

MonteCarloResult montecarlo_failure_injected(const EnrollmentRecord& record, const CodeSpec& code,
                                             double ber, const MonteCarloOptions& opts) {
    if (!(ber >= 0.0 && ber <= 1.0))
        throw ParameterError("montecarlo: ber must be in [0,1]");
    if (record.references.empty()) throw ParameterError("montecarlo: record has no references");
    const BitVec& base = record.references.front().bits;
    auto sample = [&, ber](size_t trial) {
        Rng rng(derive_seed(opts.seed, trial));
        BitVec r = base;
        for (size_t i = 0; i < r.size(); ++i)
            if (rng.uniform() < ber) r.flip(i);
        return r;
    };
    return run_mc(record, code, "injected", sample, opts);
}

static void wilson_bounds(size_t failures, size_t trials, double z, double& lo, double& hi) {
    if (trials < 1) throw ParameterError("wilson: trials must be >= 1");
    if (!(z > 0.0)) throw ParameterError("wilson: z must be > 0");
    double n = double(trials);
    double phat = double(failures) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    lo = std::max(0.0, center - half);
    hi = std::min(1.0, center + half);
}

double wilson_low(size_t failures, size_t trials, double z) {
    double lo, hi;
    wilson_bounds(failures, trials, z, lo, hi);
    return lo;
}

double wilson_high(size_t failures, size_t trials, double z) {
    double lo, hi;
    wilson_bounds(failures, trials, z, lo, hi);
    return hi;
}

EntropyReport entropy_report(int response_bits, int helper_bits, double bias, int key_bits) {
    if (!(bias > 0.0 && bias < 1.0))
        throw ParameterError("entropy_report: bias must be strictly inside (0,1)");
    if (response_bits < 0 || helper_bits < 0 || key_bits < 0)
        throw ParameterError("entropy_report: negative bit count");
    EntropyReport r;
    r.response_bits = response_bits;
    r.helper_bits = helper_bits;
    r.bias = bias;
    r.key_bits = key_bits;
    r.min_entropy_in = double(response_bits) * -std::log2(std::max(bias, 1.0 - bias));
    r.residual_min_entropy = std::max(0.0, r.min_entropy_in - double(helper_bits));
    r.entropy_flag = r.residual_min_entropy < double(key_bits);
    r.bias_flag = bias < 0.42 || bias > 0.58;
    return r;
}

CvnResult debias_cvn(const BitVec& bits) {
    CvnResult r;
    r.dropped_odd_bit = bits.size() % 2 != 0;
    const size_t pairs = bits.size() / 2;
    for (size_t p = 0; p < pairs; ++p) {
        bool a = bits.get(2 * p), b = bits.get(2 * p + 1);
        if (a != b) {
            r.out.push_back(a);
            r.kept_pairs.push_back(uint32_t(p));
        }
    }
    return r;
}

PairVnResult debias_pair_output_vn(const BitVec& bits) {
    PairVnResult r;
    r.dropped_odd_bit = bits.size() % 2 != 0;
    const size_t pairs = bits.size() / 2;
    r.out = BitVec(2 * pairs);
    r.erased = BitVec(2 * pairs);
    for (size_t p = 0; p < pairs; ++p) {
        bool a = bits.get(2 * p), b = bits.get(2 * p + 1);
        if (a != b) {
            r.out.set(2 * p, a);
            r.out.set(2 * p + 1, b);
            r.kept_pairs.push_back(uint32_t(p));
        } else {
            r.erased.set(2 * p, true);
            r.erased.set(2 * p + 1, true);
        }
    }
    return r;
}

HwResult debias_hw(const BitVec& bits, int width, double delta) {
    if (width < 2) throw ParameterError("debias_hw: width must be >= 2");
    if (!(delta >= 0.0 && delta <= width / 2.0))
        throw ParameterError("debias_hw: delta must be in [0, width/2]");
    HwResult r;
    r.width = width;
    const size_t nblocks = bits.size() / size_t(width);
    for (size_t b = 0; b < nblocks; ++b) {
        int wt = 0;
        for (int i = 0; i < width; ++i) wt += bits.get(b * width + i);
        if (std::abs(double(wt) - width / 2.0) <= delta + 1e-12) {
            r.kept_blocks.push_back(uint32_t(b));
            for (int i = 0; i < width; ++i) r.out.push_back(bits.get(b * width + i));
        }
    }
    return r;
}

}  // namespace pufkit
