#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <tuple>
#include <vector>

#include "pufkit/analytics.hpp"
#include "pufkit/bch.hpp"
#include "pufkit/enrollment.hpp"
#include "pufkit/errors.hpp"
#include "pufkit/keygen.hpp"
#include "pufkit/puf_model.hpp"
#include "pufkit/rng.hpp"
#include "support/exact_tail.hpp"

using namespace pufkit;
using doctest::Approx;

namespace {

BitVec random_word(size_t n, uint64_t seed) {
    Rng rng(seed);
    BitVec v(n);
    for (size_t i = 0; i < n; ++i) v.set(i, rng.uniform() < 0.5);
    return v;
}

EnrollmentRecord record_for(const BitVec& reference, const std::string& label, double temp) {
    EnrollmentRecord rec;
    rec.chip_id = "synthetic";
    rec.num_cells = reference.size();
    rec.challenge_mask.resize(reference.size());
    for (size_t i = 0; i < reference.size(); ++i) rec.challenge_mask[i] = uint32_t(i);
    rec.references.push_back({reference, label, temp, "none"});
    return rec;
}

BitVec biased_word(size_t n, double one_prob, uint64_t seed) {
    Rng rng(seed);
    BitVec v(n);
    for (size_t i = 0; i < n; ++i) v.set(i, rng.uniform() < one_prob);
    return v;
}

double mean_bit(const BitVec& v) {
    return v.size() ? double(v.popcount()) / double(v.size()) : 0.0;
}

}  // namespace

TEST_CASE("block failure matches an exact big-rational tail across the operating range") {
    const double bers[] = {0.001, 0.005, 0.01, 0.02, 0.05, 0.068, 0.1, 0.15};
    for (int n : {63, 127})
        for (int t : {0, 11, 27})
            for (double ber : bers) {
                double got = block_failure(n, t, ber);
                CHECK(exact_tail::rel_err(got, exact_tail::binom_tail(n, t, ber)) < 1e-9);
            }
}

TEST_CASE("block failure reproduces frozen reference tails") {
    CHECK(block_failure(63, 11, 0.05) == Approx(5.9678331689937256e-05).epsilon(1e-9));
    CHECK(block_failure(63, 11, 0.027) == Approx(1.1114014860910812e-07).epsilon(1e-9));
    CHECK(block_failure(63, 11, 0.045) == Approx(2.1472457505054881e-05).epsilon(1e-9));
    CHECK(block_failure(63, 11, 0.151) == Approx(2.3567439317174205e-01).epsilon(1e-9));
    CHECK(block_failure(127, 27, 0.068) == Approx(2.6896027713515647e-08).epsilon(1e-9));
    CHECK(block_failure(127, 27, 0.1) == Approx(4.9624674243181711e-05).epsilon(1e-9));
}

TEST_CASE("block failure edge cases and validation") {
    CHECK(block_failure(63, 11, 0.0) == 0.0);
    CHECK(block_failure(63, 11, 1.0) == 1.0);
    // P(all 15 flip at 1/2) = 2^-15, exactly representable.
    CHECK(block_failure(15, 14, 0.5) == Approx(3.0517578125e-05).epsilon(1e-12));
    // t = 0 degenerates to 1 - (1-p)^n.
    CHECK(block_failure(63, 0, 0.01) == Approx(-std::expm1(63.0 * std::log1p(-0.01))).epsilon(1e-12));

    CHECK_THROWS_AS(block_failure(0, 0, 0.1), ParameterError);
    CHECK_THROWS_AS(block_failure(63, -1, 0.1), ParameterError);
    CHECK_THROWS_AS(block_failure(63, 63, 0.1), ParameterError);
    CHECK_THROWS_AS(block_failure(63, 11, -0.1), ParameterError);
    CHECK_THROWS_AS(block_failure(63, 11, 1.5), ParameterError);
    CHECK_THROWS_AS(block_failure(63, 11, std::nan("")), ParameterError);
}

TEST_CASE("key failure across L blocks is stable for tiny block rates") {
    CHECK(key_failure_L(0.0, 5) == 0.0);
    CHECK(key_failure_L(1.0, 3) == 1.0);
    CHECK(key_failure_L(0.37, 1) == Approx(0.37).epsilon(1e-14));

    double p1 = block_failure(63, 11, 0.06);
    CHECK(p1 == Approx(3.2724473930918139e-04).epsilon(1e-9));
    double p2 = key_failure_L(p1, 8);
    CHECK(p2 == Approx(0.0026149613808111945).epsilon(1e-9));
    CHECK(exact_tail::rel_err(p2, exact_tail::key_failure(exact_tail::binom_tail(63, 11, 0.06), 8)) <
          1e-9);

    // Naive 1-(1-p)^L would lose everything here.
    CHECK(key_failure_L(1e-15, 1000000) == Approx(1e-9).epsilon(1e-6));

    CHECK_THROWS_AS(key_failure_L(-0.1, 8), ParameterError);
    CHECK_THROWS_AS(key_failure_L(1.1, 8), ParameterError);
    CHECK_THROWS_AS(key_failure_L(0.1, 0), ParameterError);
}

TEST_CASE("multi-reference failure takes the best reference") {
    CHECK(key_failure_mrr({0.3, 0.1, 0.2}) == 0.1);
    CHECK(key_failure_mrr({0.7}) == 0.7);
    CHECK(key_failure_mrr({1.0, 1.0}) == 1.0);
    CHECK(key_failure_mrr({0.0, 0.9}) == 0.0);
    CHECK_THROWS_AS(key_failure_mrr({}), ParameterError);
    CHECK_THROWS_AS(key_failure_mrr({0.5, -0.1}), ParameterError);
    CHECK_THROWS_AS(key_failure_mrr({0.5, 1.0001}), ParameterError);
}

TEST_CASE("budget assembly composes the per-reference chain") {
    FailureBudget fb = make_budget({63, 16, 11}, 8, {0.05, 0.027});
    CHECK(fb.code == CodeSpec{63, 16, 11});
    CHECK(fb.L == 8);
    REQUIRE(fb.p1.size() == 2);
    REQUIRE(fb.p2.size() == 2);
    CHECK(fb.per_reference_ber == std::vector<double>{0.05, 0.027});
    CHECK(fb.p1[0] == block_failure(63, 11, 0.05));
    CHECK(fb.p1[1] == block_failure(63, 11, 0.027));
    CHECK(fb.p2[0] == key_failure_L(fb.p1[0], 8));
    CHECK(fb.p2[1] == key_failure_L(fb.p1[1], 8));
    CHECK(fb.p_fail == std::min(fb.p2[0], fb.p2[1]));
    CHECK(fb.p_fail == fb.p2[1]);

    CHECK_THROWS_AS(make_budget({63, 16, 11}, 8, {}), ParameterError);
    CHECK_THROWS_AS(make_budget({63, 16, 11}, 0, {0.05}), ParameterError);
}

TEST_CASE("planner picks the published operating points") {
    const auto cat = BchCode::catalog();

    Plan single = plan_code(1e-6, 128, {0.065}, cat);
    CHECK(single.code == CodeSpec{127, 15, 27});
    CHECK(single.L == 9);
    CHECK(single.encode_cost == 128016.0);
    CHECK(single.budget.p_fail < 1e-6);
    CHECK(exact_tail::rel_err(single.budget.p_fail,
                              exact_tail::key_failure(exact_tail::binom_tail(127, 27, 0.065), 9)) <
          1e-9);

    Plan hot = plan_code(1e-6, 128, {0.0668}, cat);
    CHECK(hot.code == CodeSpec{127, 15, 27});
    CHECK(hot.L == 9);
    CHECK(hot.budget.p_fail == Approx(1.66e-7).epsilon(1e-3));

    Plan mild = plan_code(1e-6, 128, {0.025}, cat);
    CHECK(mild.code == CodeSpec{63, 16, 11});
    CHECK(mild.L == 8);
    CHECK(mild.encode_cost == 23688.0);

    Plan edge = plan_code(1e-6, 128, {0.02726}, cat);
    CHECK(edge.code == CodeSpec{63, 16, 11});
    CHECK(edge.budget.p_fail == Approx(9.85e-7).epsilon(1e-3));
    CHECK(edge.budget.p_fail < 1e-6);
}

TEST_CASE("planner tracks the noise envelope across code transitions") {
    const auto cat = BchCode::catalog();
    struct Point {
        double ber;
        CodeSpec code;
        int L;
        double cost;
    };
    const Point points[] = {
        {0.021, {63, 18, 10}, 8, 22680.0},
        {0.025, {63, 16, 11}, 8, 23688.0},
        {0.037, {63, 10, 13}, 13, 43407.0},
        {0.038, {127, 29, 21}, 5, 62230.0},
    };
    double prev_cost = 0.0;
    for (const Point& pt : points) {
        Plan p = plan_code(1e-6, 128, {pt.ber}, cat);
        CAPTURE(pt.ber);
        CHECK(p.code == pt.code);
        CHECK(p.L == pt.L);
        CHECK(p.encode_cost == pt.cost);
        CHECK(p.budget.p_fail < 1e-6);
        CHECK(exact_tail::rel_err(
                  p.budget.p_fail,
                  exact_tail::key_failure(exact_tail::binom_tail(pt.code.n, pt.code.t, pt.ber),
                                          pt.L)) < 1e-9);
        CHECK(p.encode_cost > prev_cost);  // worse noise never gets cheaper
        prev_cost = p.encode_cost;
    }
}

TEST_CASE("planner with multiple references keeps the best one and never regrets an extra") {
    const auto cat = BchCode::catalog();

    Plan p = plan_code(1e-6, 128, {0.151, 0.045}, cat);
    CHECK(p.code == CodeSpec{127, 29, 21});
    CHECK(p.L == 5);
    CHECK(p.encode_cost == 62230.0);
    REQUIRE(p.budget.p2.size() == 2);
    CHECK(p.budget.p2[1] < p.budget.p2[0]);
    CHECK(p.budget.p_fail == p.budget.p2[1]);

    Plan lone = plan_code(1e-6, 128, {0.065}, cat);
    Plan extra = plan_code(1e-6, 128, {0.065, 0.03}, cat);
    CHECK(extra.code == CodeSpec{63, 10, 13});
    CHECK(extra.encode_cost == 43407.0);
    CHECK(extra.encode_cost <= lone.encode_cost);
}

TEST_CASE("planner scales the block count with the key length") {
    const auto cat = BchCode::catalog();
    Plan p = plan_code(1e-6, 256, {0.025}, cat);
    CHECK(p.code == CodeSpec{63, 16, 11});
    CHECK(p.L == 16);
    CHECK(p.encode_cost == 47376.0);
    CHECK(p.budget.p_fail < 1e-6);
}

TEST_CASE("infeasible targets raise a planning error carrying the nearest miss") {
    const auto cat = BchCode::catalog();
    try {
        plan_code(1e-6, 128, {0.4}, cat);
        FAIL("expected PlanningError");
    } catch (const PlanningError& e) {
        CHECK(e.best_achievable > 0.0);
        CHECK(e.best_achievable < 1.0);
        bool in_catalog = false;
        for (const auto& cs : cat)
            if (cs == CodeSpec{e.best_n, e.best_k, e.best_t}) in_catalog = true;
        CHECK(in_catalog);
        CHECK(exact_tail::rel_err(
                  e.best_achievable,
                  exact_tail::key_failure(exact_tail::binom_tail(e.best_n, e.best_t, 0.4),
                                          (128 + e.best_k - 1) / e.best_k)) < 1e-9);
        CHECK(std::string(e.what()).find("target") != std::string::npos);
    }

    CHECK_THROWS_AS(plan_code(0.0, 128, {0.05}, cat), ParameterError);
    CHECK_THROWS_AS(plan_code(1.0, 128, {0.05}, cat), ParameterError);
    CHECK_THROWS_AS(plan_code(1e-6, 0, {0.05}, cat), ParameterError);
    CHECK_THROWS_AS(plan_code(1e-6, 128, {}, cat), ParameterError);
    CHECK_THROWS_AS(plan_code(1e-6, 128, {0.05}, {}), ParameterError);
}

TEST_CASE("wilson interval brackets the sample rate and pins a frozen point") {
    CHECK(wilson_low(0, 1000, 3.0) == 0.0);
    CHECK(wilson_high(1000, 1000, 3.0) == 1.0);
    CHECK(wilson_low(5, 1000, 3.0) == Approx(0.0014233815327756531).epsilon(1e-12));
    CHECK(wilson_high(5, 1000, 3.0) == Approx(0.017407143739771425).epsilon(1e-12));

    for (size_t f : {size_t(0), size_t(1), size_t(5), size_t(50), size_t(999), size_t(1000)})
        for (double z : {1.0, 2.0, 3.0}) {
            double phat = double(f) / 1000.0;
            CHECK(wilson_low(f, 1000, z) <= phat);
            CHECK(wilson_high(f, 1000, z) >= phat);
        }

    // Wider z, wider interval.
    CHECK(wilson_low(50, 1000, 3.0) < wilson_low(50, 1000, 2.0));
    CHECK(wilson_high(50, 1000, 3.0) > wilson_high(50, 1000, 2.0));

    CHECK_THROWS_AS(wilson_low(0, 0, 3.0), ParameterError);
    CHECK_THROWS_AS(wilson_high(0, 10, 0.0), ParameterError);
    CHECK_THROWS_AS(wilson_high(0, 10, -1.0), ParameterError);
}

TEST_CASE("injected-noise monte carlo is thread-deterministic and matches the analytic budget") {
    BitVec reference = random_word(504, 7);
    EnrollmentRecord rec = record_for(reference, "25C", 25.0);
    CodeSpec code{63, 16, 11};

    MonteCarloOptions opts;
    opts.trials = 20000;
    opts.seed = 42;
    opts.wilson_z = 4.0;
    opts.threads = 1;
    MonteCarloResult serial = montecarlo_failure_injected(rec, code, 0.06, opts);

    opts.threads = 4;
    std::vector<std::tuple<size_t, std::string, bool, size_t>> rows;
    opts.sink = [&](size_t trial, const std::string& cond, bool success, size_t attempts) {
        rows.emplace_back(trial, cond, success, attempts);
    };
    MonteCarloResult parallel = montecarlo_failure_injected(rec, code, 0.06, opts);

    CHECK(serial.failures == parallel.failures);
    CHECK(serial.trials == 20000);
    CHECK(serial.rate == double(serial.failures) / 20000.0);

    REQUIRE(rows.size() == 20000);
    size_t sink_failures = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(std::get<0>(rows[i]) == i);
        CHECK(std::get<1>(rows[i]) == "injected");
        if (!std::get<2>(rows[i])) ++sink_failures;
    }
    CHECK(sink_failures == parallel.failures);

    // Analytic key-failure rate for this exact configuration.
    const double analytic = 0.0026149613808111945;
    CHECK(serial.ci_low <= analytic);
    CHECK(serial.ci_high >= analytic);
    CHECK(serial.ci_low <= serial.rate);
    CHECK(serial.ci_high >= serial.rate);
}

TEST_CASE("injected-noise monte carlo edge cases") {
    BitVec reference = random_word(504, 9);
    EnrollmentRecord rec = record_for(reference, "25C", 25.0);
    CodeSpec code{63, 16, 11};

    MonteCarloOptions opts;
    opts.trials = 100;
    opts.seed = 3;
    std::vector<size_t> attempts;
    opts.sink = [&](size_t, const std::string&, bool, size_t a) { attempts.push_back(a); };
    MonteCarloResult clean = montecarlo_failure_injected(rec, code, 0.0, opts);
    CHECK(clean.failures == 0);
    CHECK(clean.rate == 0.0);
    for (size_t a : attempts) CHECK(a == 1);

    opts.sink = nullptr;
    MonteCarloResult hopeless = montecarlo_failure_injected(rec, code, 0.5, opts);
    CHECK(hopeless.failures == 100);

    opts.trials = 0;
    CHECK_THROWS_AS(montecarlo_failure_injected(rec, code, 0.06, opts), ParameterError);
    opts.trials = 10;
    CHECK_THROWS_AS(montecarlo_failure_injected(rec, code, -0.1, opts), ParameterError);
    CHECK_THROWS_AS(montecarlo_failure_injected(rec, code, 1.1, opts), ParameterError);
    EnrollmentRecord empty;
    CHECK_THROWS_AS(montecarlo_failure_injected(empty, code, 0.06, opts), ParameterError);
}

TEST_CASE("model-based monte carlo recovers reliably at the enrollment condition") {
    ModelParams params;
    auto cells = sample_chip(700, params, 99);
    Condition nominal{"25C", 25.0};

    std::vector<BitVec> reps;
    for (uint64_t r = 0; r < 9; ++r) reps.push_back(power_up(cells, nominal, derive_seed(4, r)));
    EnrollmentRecord rec;
    rec.chip_id = "mc-chip";
    rec.num_cells = 700;
    rec.challenge_mask.resize(700);
    for (size_t i = 0; i < 700; ++i) rec.challenge_mask[i] = uint32_t(i);
    rec.references.push_back({majority_vote(reps), "25C", 25.0, "mv"});

    MonteCarloOptions opts;
    opts.trials = 300;
    opts.seed = 11;
    opts.threads = 3;
    MonteCarloResult r = montecarlo_failure(rec, {63, 16, 11}, cells, nominal, opts);
    CHECK(r.trials == 300);
    CHECK(r.failures == 0);

    opts.threads = 1;
    MonteCarloResult again = montecarlo_failure(rec, {63, 16, 11}, cells, nominal, opts);
    CHECK(again.failures == r.failures);
}

TEST_CASE("entropy report accounts for helper leakage and bias") {
    EntropyReport ok = entropy_report(1143, 1008, 0.4987, 128);
    CHECK(ok.response_bits == 1143);
    CHECK(ok.helper_bits == 1008);
    CHECK(ok.key_bits == 128);
    CHECK(ok.min_entropy_in == Approx(1138.7181628568012).epsilon(1e-12));
    CHECK(ok.residual_min_entropy == Approx(130.7181628568012).epsilon(1e-12));
    CHECK(ok.residual_min_entropy >= 128.0);
    CHECK_FALSE(ok.entropy_flag);
    CHECK_FALSE(ok.bias_flag);

    EntropyReport skewed = entropy_report(1143, 1008, 0.70, 128);
    CHECK(skewed.min_entropy_in == Approx(588.15713654441379).epsilon(1e-12));
    CHECK(skewed.residual_min_entropy == 0.0);
    CHECK(skewed.entropy_flag);
    CHECK(skewed.bias_flag);

    // Exactly at the budget boundary: 504 - 376 = 128 is still enough.
    EntropyReport boundary = entropy_report(504, 376, 0.5, 128);
    CHECK(boundary.min_entropy_in == 504.0);
    CHECK(boundary.residual_min_entropy == 128.0);
    CHECK_FALSE(boundary.entropy_flag);
    EntropyReport short_one = entropy_report(504, 377, 0.5, 128);
    CHECK(short_one.residual_min_entropy == 127.0);
    CHECK(short_one.entropy_flag);

    // Bias gate is inclusive at the published window edges.
    CHECK_FALSE(entropy_report(100, 0, 0.42, 0).bias_flag);
    CHECK_FALSE(entropy_report(100, 0, 0.58, 0).bias_flag);
    CHECK(entropy_report(100, 0, 0.4199, 0).bias_flag);
    CHECK(entropy_report(100, 0, 0.5801, 0).bias_flag);

    CHECK_THROWS_AS(entropy_report(100, 0, 0.0, 0), ParameterError);
    CHECK_THROWS_AS(entropy_report(100, 0, 1.0, 0), ParameterError);
    CHECK_THROWS_AS(entropy_report(-1, 0, 0.5, 0), ParameterError);
    CHECK_THROWS_AS(entropy_report(100, -1, 0.5, 0), ParameterError);
    CHECK_THROWS_AS(entropy_report(100, 0, 0.5, -1), ParameterError);
}

TEST_CASE("classic von Neumann debiasing") {
    BitVec in(10);
    // pairs: 01 10 11 00 10
    in.set(1, true);
    in.set(2, true);
    in.set(4, true);
    in.set(5, true);
    in.set(8, true);
    CvnResult r = debias_cvn(in);
    REQUIRE(r.out.size() == 3);
    CHECK_FALSE(r.out.get(0));
    CHECK(r.out.get(1));
    CHECK(r.out.get(2));
    CHECK(r.kept_pairs == std::vector<uint32_t>{0, 1, 4});
    CHECK_FALSE(r.dropped_odd_bit);

    CvnResult odd = debias_cvn(random_word(7, 1));
    CHECK(odd.dropped_odd_bit);

    CvnResult empty = debias_cvn(BitVec(0));
    CHECK(empty.out.size() == 0);
    CHECK_FALSE(empty.dropped_odd_bit);

    // Law: the output bit is the first of each unequal pair.
    BitVec w = random_word(2000, 5);
    CvnResult rw = debias_cvn(w);
    size_t k = 0;
    for (size_t p = 0; p < 1000; ++p) {
        bool a = w.get(2 * p), b = w.get(2 * p + 1);
        if (a != b) {
            REQUIRE(k < rw.kept_pairs.size());
            CHECK(rw.kept_pairs[k] == p);
            CHECK(rw.out.get(k) == a);
            ++k;
        }
    }
    CHECK(k == rw.kept_pairs.size());

    // Heavily biased input comes out unbiased.
    BitVec biased = biased_word(1000000, 0.7, 77);
    CvnResult rb = debias_cvn(biased);
    double n_out = double(rb.out.size());
    CHECK(n_out > 150000);  // ~2 * 0.7 * 0.3 per pair
    CHECK(std::fabs(mean_bit(rb.out) - 0.5) < 3.0 * 0.5 / std::sqrt(n_out));
}

TEST_CASE("pair-output von Neumann marks erasures in place") {
    BitVec in(11);
    in.set(1, true);
    in.set(2, true);
    in.set(4, true);
    in.set(5, true);
    in.set(8, true);
    in.set(10, true);  // odd leftover, dropped
    PairVnResult r = debias_pair_output_vn(in);
    CHECK(r.dropped_odd_bit);
    REQUIRE(r.out.size() == 10);
    REQUIRE(r.erased.size() == 10);
    CHECK(r.kept_pairs == std::vector<uint32_t>{0, 1, 4});
    for (size_t p = 0; p < 5; ++p) {
        bool kept = std::find(r.kept_pairs.begin(), r.kept_pairs.end(), uint32_t(p)) !=
                    r.kept_pairs.end();
        CHECK(r.erased.get(2 * p) == !kept);
        CHECK(r.erased.get(2 * p + 1) == !kept);
        if (kept) {
            CHECK(r.out.get(2 * p) == in.get(2 * p));
            CHECK(r.out.get(2 * p + 1) == in.get(2 * p + 1));
        } else {
            CHECK_FALSE(r.out.get(2 * p));
            CHECK_FALSE(r.out.get(2 * p + 1));
        }
    }

    // Deterministic, so the erasure mask doubles as a reusable selection mask.
    BitVec w = random_word(5000, 21);
    PairVnResult a = debias_pair_output_vn(w);
    PairVnResult b = debias_pair_output_vn(w);
    CHECK(a.out == b.out);
    CHECK(a.erased == b.erased);
    CHECK(a.kept_pairs == b.kept_pairs);
    for (size_t p = 0; p < w.size() / 2; ++p)
        CHECK(a.erased.get(2 * p) == (w.get(2 * p) == w.get(2 * p + 1)));
}

TEST_CASE("hamming-weight block filter keeps near-balanced blocks") {
    // blocks of 4: 1100 | 1110 | 0000 | 0110, trailing 11 dropped
    BitVec in(18);
    in.set(0, true);
    in.set(1, true);
    in.set(4, true);
    in.set(5, true);
    in.set(6, true);
    in.set(13, true);
    in.set(14, true);
    in.set(16, true);
    in.set(17, true);

    HwResult strict = debias_hw(in, 4, 0.0);
    CHECK(strict.width == 4);
    CHECK(strict.kept_blocks == std::vector<uint32_t>{0, 3});
    REQUIRE(strict.out.size() == 8);
    CHECK(strict.out.get(0));
    CHECK(strict.out.get(1));
    CHECK_FALSE(strict.out.get(2));
    CHECK_FALSE(strict.out.get(3));
    CHECK_FALSE(strict.out.get(4));
    CHECK(strict.out.get(5));
    CHECK(strict.out.get(6));
    CHECK_FALSE(strict.out.get(7));

    HwResult loose = debias_hw(in, 4, 1.0);
    CHECK(loose.kept_blocks == std::vector<uint32_t>{0, 1, 3});

    HwResult all = debias_hw(in, 4, 2.0);
    CHECK(all.kept_blocks == std::vector<uint32_t>{0, 1, 2, 3});
    CHECK(all.out.size() == 16);

    CHECK_THROWS_AS(debias_hw(in, 1, 0.0), ParameterError);
    CHECK_THROWS_AS(debias_hw(in, 0, 0.0), ParameterError);
    CHECK_THROWS_AS(debias_hw(in, 4, -0.1), ParameterError);
    CHECK_THROWS_AS(debias_hw(in, 4, 2.5), ParameterError);

    BitVec biased = biased_word(200000, 0.7, 31);
    HwResult filtered = debias_hw(biased, 8, 1.0);
    CHECK(filtered.out.size() > 10000);
    double out_skew = std::fabs(mean_bit(filtered.out) - 0.5);
    CHECK(out_skew < 0.1);
    CHECK(out_skew < std::fabs(mean_bit(biased) - 0.5));
}
