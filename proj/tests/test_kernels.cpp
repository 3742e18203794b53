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

#include "stancegp/kernels.hpp"

using namespace stancegp;

namespace {

SparseFeatureVector random_sparse(std::size_t dims, std::mt19937_64& rng, double density = 0.3) {
    std::vector<double> dense(dims, 0.0);
    std::bernoulli_distribution on(density);
    std::normal_distribution<double> nd;
    for (auto& d : dense) {
        if (on(rng)) d = nd(rng);
    }
    return SparseFeatureVector::from_dense(dense);
}

double dense_ard_dot(const SparseFeatureVector& a, const SparseFeatureVector& b, const std::vector<double>& w) {
    const auto da = a.to_dense();
    const auto db = b.to_dense();
    double s = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) s += w[i] * da[i] * db[i];
    return s;
}

}  // namespace

TEST_CASE("linear kernel against a dense reference") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dims = 1 + rng() % 30;
        const auto a = random_sparse(dims, rng);
        const auto b = random_sparse(dims, rng);
        LinearKernelParams p;
        p.variance = 0.5 + (rng() % 100) / 20.0;
        const std::vector<double> iso(dims, p.variance);
        CHECK(linear_kernel(a, b, p) == doctest::Approx(dense_ard_dot(a, b, iso)).epsilon(1e-12));

        LinearKernelParams ard;
        std::uniform_real_distribution<double> u(0.01, 5.0);
        for (std::size_t i = 0; i < dims; ++i) ard.ard_variances.push_back(u(rng));
        CHECK(linear_kernel(a, b, ard) == doctest::Approx(dense_ard_dot(a, b, ard.ard_variances)).epsilon(1e-12));
        CHECK(linear_kernel(a, b, ard) == linear_kernel(b, a, ard));
    }
}

TEST_CASE("worked kernel values") {
    const auto v = [](std::vector<double> d) { return SparseFeatureVector::from_dense(d); };
    CHECK(linear_kernel(v({1, 2}), v({3, 4}), {1.0, {}}) == 11.0);
    CHECK(linear_kernel(v({1, 0}), v({0, 1}), {5.0, {}}) == 0.0);
    CHECK(linear_kernel(v({1, 1}), v({1, 1}), {1.0, {4.0, 9.0}}) == 13.0);
    CHECK(linear_kernel(v({1, 2}), v({3, 4}), {3.0, {}}) == 3.0 * linear_kernel(v({1, 2}), v({3, 4}), {1.0, {}}));
    CHECK_THROWS_AS(linear_kernel(v({1, 2}), v({1, 2, 3}), {}), UsageError);

    CHECK(coreg_matrix({{1, 1}, {0, 0}}).isIdentity());
    CHECK(coreg_matrix({{0, 0}, {1, 1}}) == Eigen::MatrixXd::Ones(2, 2));
    Eigen::Matrix2d b;
    b << 2, 3, 3, 11;
    CHECK(coreg_matrix({{1, 2}, {1, 3}}) == Eigen::MatrixXd(b));

    const CoregionalizationParams c{{1, 2}, {1, 3}};
    CHECK(icm_kernel({v({1}), 0}, {v({2}), 1}, {1.0, {}}, c) == 6.0);
    CHECK(icm_kernel({v({1, 2}), 1}, {v({1, 2}), 1}, {1.0, {}}, {{0, 0}, {0, 1}}) == 5.0);
    CHECK(icm_kernel({v({1, 2}), 0}, {v({1, 2}), 1}, {1.0, {}}, {{1, 1}, {0, 0}}) == 0.0);
    CHECK_THROWS_AS(icm_kernel({v({1}), 2}, {v({1}), 0}, {1.0, {}}, c), UsageError);

    const std::vector<TaskedInput> one = {{v({2, 0}), 0}};
    CHECK(KernelEvaluator(one, {}, 2).gram(1e-6)(0, 0) == doctest::Approx(4.0 + 1e-6));
    const std::vector<TaskedInput> two = {{v({2, 0}), 0}, {v({0, 3}), 0}};
    Eigen::Matrix2d d;
    d << 4, 0, 0, 9;
    CHECK(KernelEvaluator(two, {}, 2).gram(0.0) == Eigen::MatrixXd(d));
}

TEST_CASE("degenerate icm equivalences") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + rng() % 10;
        std::vector<TaskedInput> xs;
        for (std::size_t i = 0; i < n; ++i) xs.push_back({random_sparse(6, rng), static_cast<std::uint32_t>(rng() % 3)});
        KernelParams pooled;
        pooled.data.variance = 0.7;
        KernelParams shared = pooled;
        shared.coreg = CoregionalizationParams{{0, 0, 0}, {1, 1, 1}};
        const std::vector<TaskedInput> flat = [&] {
            auto f = xs;
            for (auto& x : f) x.task = 0;
            return f;
        }();
        CHECK(KernelEvaluator(xs, shared, 6).gram(0.0) == KernelEvaluator(flat, pooled, 6).gram(0.0));

        KernelParams blocks = pooled;
        blocks.coreg = CoregionalizationParams{{1, 2, 3}, {0, 0, 0}};
        const Eigen::MatrixXd g = KernelEvaluator(xs, blocks, 6).gram(0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (xs[i].task != xs[j].task) CHECK(g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == 0.0);
            }
        }
    }
}

TEST_CASE("parameter validation") {
    LinearKernelParams p;
    p.variance = 0.0;
    CHECK_THROWS_AS(p.validate(3), UsageError);
    p.variance = 1.0;
    p.ard_variances = {1.0, 2.0};
    CHECK_THROWS_AS(p.validate(3), UsageError);
    p.ard_variances = {1.0, -2.0, 1.0};
    CHECK_THROWS_AS(p.validate(3), UsageError);
    p.ard_variances = {1.0, 2.0, 1.0};
    CHECK_NOTHROW(p.validate(3));

    CoregionalizationParams c{{1.0, -0.5}, {1.0, 1.0}};
    CHECK_THROWS_AS(c.validate(), UsageError);
    c.kappa = {1.0};
    CHECK_THROWS_AS(c.validate(), UsageError);
    c.kappa = {1.0, 0.5};
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("coregionalization matrix and icm kernel") {
    const CoregionalizationParams c{{0.5, 1.5, 2.0}, {1.0, -2.0, 0.5}};
    const Eigen::MatrixXd b = coreg_matrix(c);
    CHECK(b(0, 0) == doctest::Approx(1.5));
    CHECK(b(1, 1) == doctest::Approx(5.5));
    CHECK(b(0, 1) == doctest::Approx(-2.0));
    CHECK(b(1, 2) == doctest::Approx(-1.0));
    CHECK(b.isApprox(b.transpose()));
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(b).eigenvalues().minCoeff() >= 0.5 - 1e-12);

    std::mt19937_64 rng(9);
    const LinearKernelParams p{1.3, {}};
    for (int trial = 0; trial < 50; ++trial) {
        const TaskedInput x{random_sparse(8, rng), static_cast<std::uint32_t>(rng() % 3)};
        const TaskedInput y{random_sparse(8, rng), static_cast<std::uint32_t>(rng() % 3)};
        CHECK(icm_kernel(x, y, p, c) == doctest::Approx(b(x.task, y.task) * linear_kernel(x.x, y.x, p)));
    }
}

TEST_CASE("grams are symmetric positive semidefinite") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng() % 25;
        const std::size_t dims = 1 + rng() % 20;
        std::vector<TaskedInput> xs;
        const bool icm = trial % 3 != 0;
        for (std::size_t i = 0; i < n; ++i) xs.push_back({random_sparse(dims, rng), icm ? static_cast<std::uint32_t>(rng() % 2) : 0u});
        KernelParams kp;
        std::uniform_real_distribution<double> u(0.05, 3.0);
        kp.data.variance = u(rng);
        if (trial % 2) {
            for (std::size_t i = 0; i < dims; ++i) kp.data.ard_variances.push_back(u(rng));
        }
        if (icm) kp.coreg = CoregionalizationParams{{u(rng), u(rng)}, {u(rng) - 1.5, u(rng) - 1.5}};

        const KernelEvaluator ev(xs, kp, dims);
        const Eigen::MatrixXd g = ev.gram(0.0);
        CHECK(g == g.transpose());
        const double top = std::max(1.0, g.diagonal().maxCoeff());
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff() >= -1e-10 * top);

        // Generic template path as reference.
        const Eigen::MatrixXd ref = gram<TaskedInput>(xs, [&](const TaskedInput& a, const TaskedInput& b) {
            return kp.coreg ? icm_kernel(a, b, kp.data, *kp.coreg) : linear_kernel(a.x, b.x, kp.data);
        }, 0.0);
        CHECK((g - ref).cwiseAbs().maxCoeff() <= 1e-12 * top);

        const TaskedInput q{random_sparse(dims, rng), icm ? 1u : 0u};
        const Eigen::VectorXd cross = ev.cross(q);
        for (std::size_t i = 0; i < n; ++i) {
            const double want = kp.coreg ? icm_kernel(q, xs[i], kp.data, *kp.coreg) : linear_kernel(q.x, xs[i].x, kp.data);
            CHECK(cross(static_cast<Eigen::Index>(i)) == doctest::Approx(want).epsilon(1e-12));
        }
        const double self = kp.coreg ? icm_kernel(q, q, kp.data, *kp.coreg) : linear_kernel(q.x, q.x, kp.data);
        CHECK(ev.self(q) == doctest::Approx(self).epsilon(1e-12));

        const Eigen::MatrixXd jittered = ev.gram(0.25);
        CHECK((jittered - g).diagonal().isApproxToConstant(0.25));
    }
}

TEST_CASE("evaluator rejects mismatched inputs") {
    std::mt19937_64 rng(1);
    const std::vector<TaskedInput> xs = {{random_sparse(4, rng), 0}, {random_sparse(4, rng), 1}};
    KernelParams kp;
    kp.coreg = CoregionalizationParams{{1.0, 1.0}, {0.0, 0.0}};
    const KernelEvaluator ev(xs, kp, 4);
    CHECK_THROWS_AS(ev.check({SparseFeatureVector(5), 0}), UsageError);
    CHECK_THROWS_AS(ev.check({SparseFeatureVector(4), 2}), UsageError);
    CHECK_NOTHROW(ev.check({SparseFeatureVector(4), 1}));
    CHECK_THROWS_AS(KernelEvaluator(xs, KernelParams{}, 3), UsageError);
    CHECK_THROWS_AS(gram<TaskedInput>(xs, [](const TaskedInput&, const TaskedInput&) { return 0.0; }, -1.0), UsageError);
}

TEST_CASE("default jitter is relative to the mean diagonal") {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(3, 3);
    g.diagonal() << 1.0, 2.0, 3.0;
    CHECK(default_jitter(g) == doctest::Approx(2e-6));
}
