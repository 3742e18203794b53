/*
 * Copyright 2026 The stancegp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "stancegp/hyperopt.hpp"

using namespace stancegp;

namespace {

// Two features: the first decides the label, the second is noise.
BinaryDataset separable(std::size_t n, std::uint64_t seed, std::size_t tasks = 1, bool anti = false) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    BinaryDataset d;
    d.dims = 2;
    d.num_tasks = tasks;
    for (std::size_t i = 0; i < n; ++i) {
        const double signal = nd(rng);
        const std::vector<double> x = {signal, nd(rng)};
        const auto task = static_cast<std::uint32_t>(i % tasks);
        d.inputs.push_back({SparseFeatureVector::from_dense(x), task});
        double y = signal > 0 ? 1.0 : -1.0;
        if (anti && task == 1) y = -y;
        d.targets.push_back(y);
    }
    return d;
}

OptimizerConfig small_config() {
    OptimizerConfig cfg;
    cfg.restarts = 2;
    cfg.max_evals = 60;
    cfg.seed = 42;
    return cfg;
}

double best_in_trace(const OptimizationResult& r) {
    double best = -INFINITY;
    for (const auto& e : r.trace) {
        if (!e.failed) best = std::max(best, e.log_evidence);
    }
    return best;
}

void check_bounds(const KernelParams& p, const OptimizerConfig& cfg) {
    const double lo = std::exp(cfg.log_bounds.lo);
    const double hi = std::exp(cfg.log_bounds.hi);
    CHECK(p.data.variance >= lo);
    CHECK(p.data.variance <= hi);
    for (double a : p.data.ard_variances) {
        CHECK(a >= lo);
        CHECK(a <= hi);
    }
    if (p.coreg) {
        for (double k : p.coreg->kappa) {
            CHECK(k >= lo);
            CHECK(k <= hi);
        }
        for (double v : p.coreg->v) {
            CHECK(v >= cfg.v_bounds.lo);
            CHECK(v <= cfg.v_bounds.hi);
        }
    }
}

}  // namespace

TEST_CASE("family names") {
    for (auto f : {KernelFamily::Linear, KernelFamily::LinearArd, KernelFamily::Icm, KernelFamily::IcmArd}) {
        CHECK(parse_family(family_name(f)) == f);
    }
    CHECK_FALSE(parse_family("rbf").has_value());
}

TEST_CASE("config and dataset validation") {
    OptimizerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.restarts = 0;
    CHECK_THROWS_AS(cfg.validate(), UsageError);
    cfg = {};
    cfg.log_bounds = {1.0, 1.0};
    CHECK_THROWS_AS(cfg.validate(), UsageError);
    cfg = {};
    cfg.tolerance = 0.0;
    CHECK_THROWS_AS(cfg.validate(), UsageError);

    BinaryDataset d;
    d.dims = 1;
    CHECK_THROWS_AS(d.validate(), UsageError);
    d.inputs.push_back({SparseFeatureVector(1), 1});
    d.targets.push_back(1.0);
    CHECK_THROWS_AS(d.validate(), UsageError);
    d.inputs[0].task = 0;
    d.targets[0] = 0.0;
    CHECK_THROWS_AS(d.validate(), UsageError);
}

TEST_CASE("single point evidence is flat at one half") {
    BinaryDataset d;
    d.dims = 1;
    d.inputs.push_back({SparseFeatureVector::from_dense(std::vector<double>{1.0}), 0});
    d.targets.push_back(1.0);
    const auto cfg = small_config();
    const auto r = optimize_evidence(d, KernelFamily::Linear, cfg);
    CHECK(r.log_evidence == doctest::Approx(std::log(0.5)).epsilon(1e-6));
    check_bounds(r.params, cfg);
    for (const auto& e : r.trace) CHECK(e.log_evidence == doctest::Approx(std::log(0.5)).epsilon(1e-6));
}

TEST_CASE("result is the trace maximum and respects bounds") {
    const auto cfg = small_config();
    for (auto family : {KernelFamily::Linear, KernelFamily::LinearArd, KernelFamily::Icm, KernelFamily::IcmArd}) {
        CAPTURE(family_name(family));
        const auto d = separable(30, 3, family_is_icm(family) ? 2 : 1);
        const auto r = optimize_evidence(d, family, cfg);
        CHECK(r.log_evidence == best_in_trace(r));
        check_bounds(r.params, cfg);
        CHECK(r.params.data.is_ard() == family_is_ard(family));
        CHECK(r.params.coreg.has_value() == family_is_icm(family));
        for (std::size_t i = 0; i < r.trace.size(); ++i) CHECK(r.trace[i].index == i);

        // The reported evidence is what a fixed fit at those parameters gives.
        const auto fit = fit_fixed(d, r.params, cfg.ep);
        CHECK(fit.approx.log_evidence == doctest::Approx(r.log_evidence).epsilon(1e-12));
    }
}

TEST_CASE("determinism and monotone restarts") {
    const auto d = separable(40, 8, 2);
    auto cfg = small_config();
    const auto a = optimize_evidence(d, KernelFamily::Icm, cfg);
    const auto b = optimize_evidence(d, KernelFamily::Icm, cfg);
    CHECK(a.log_evidence == b.log_evidence);
    CHECK(a.params.data.variance == b.params.data.variance);
    CHECK(a.params.coreg->kappa == b.params.coreg->kappa);
    CHECK(a.params.coreg->v == b.params.coreg->v);

    double prev = -INFINITY;
    for (int restarts = 1; restarts <= 4; ++restarts) {
        cfg.restarts = restarts;
        const double best = optimize_evidence(d, KernelFamily::Icm, cfg).log_evidence;
        CHECK(best >= prev);
        prev = best;
    }
}

TEST_CASE("learned task correlation follows the data") {
    // Same labelling rule in both tasks versus opposite rules.
    const auto same = separable(60, 12, 2, false);
    const auto anti = separable(60, 12, 2, true);
    auto cfg = small_config();
    cfg.restarts = 3;
    const auto corr = [&](const BinaryDataset& d) {
        const auto r = optimize_evidence(d, KernelFamily::Icm, cfg);
        const Eigen::MatrixXd b = coreg_matrix(*r.params.coreg);
        return b(0, 1) / std::sqrt(b(0, 0) * b(1, 1));
    };
    const double c_same = corr(same);
    const double c_anti = corr(anti);
    CHECK(c_same > c_anti);
    CHECK(c_same > 0.0);
    CHECK(c_anti < 0.0);
}

TEST_CASE("ARD favours the informative feature and leaves absent ones alone") {
    auto d = separable(50, 5);
    // Widen to three features; the third never occurs.
    for (auto& in : d.inputs) {
        auto dense = in.x.to_dense();
        dense.push_back(0.0);
        in.x = SparseFeatureVector::from_dense(dense);
    }
    d.dims = 3;
    const auto cfg = small_config();
    const auto r = optimize_evidence(d, KernelFamily::LinearArd, cfg);
    const auto& a = r.params.data.ard_variances;
    REQUIRE(a.size() == 3);
    CHECK(a[0] > a[1]);
    CHECK(a[2] == r.params.data.variance);

    bool has_ard_stage = false;
    for (const auto& e : r.trace) has_ard_stage |= e.stage == "ard";
    CHECK(has_ard_stage);
}

TEST_CASE("trace tsv") {
    const auto r = optimize_evidence(separable(10, 1), KernelFamily::Linear, small_config());
    std::ostringstream out;
    write_trace_tsv(out, r);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "index\tstage\trestart\tlog_evidence\tparams");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        CHECK(std::count(line.begin(), line.end(), '\t') == 4);
        ++rows;
    }
    CHECK(rows == r.trace.size());
}
