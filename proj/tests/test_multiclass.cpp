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

#include <random>
#include <sstream>

#include "stancegp/error.hpp"
#include "stancegp/multiclass.hpp"

using namespace stancegp;

namespace {

FeatureSpace names(std::size_t dims) {
    FeatureSpace fs{FeatureKind::Bow, {}};
    for (std::size_t i = 0; i < dims; ++i) fs.names.push_back("f" + std::to_string(i));
    return fs;
}

// Three features, one per label, plus two noise features; task-dependent skew.
std::vector<LabeledExample> toy(std::size_t n, std::uint64_t seed, std::size_t tasks = 1) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> lab(0, 2);
    std::poisson_distribution<int> noise(0.7);
    std::vector<LabeledExample> out;
    for (std::size_t i = 0; i < n; ++i) {
        const int y = lab(rng);
        std::vector<double> x(5, 0.0);
        x[static_cast<std::size_t>(y)] = 1.0 + noise(rng);
        x[3] = noise(rng);
        x[4] = noise(rng);
        out.push_back({SparseFeatureVector::from_dense(x), static_cast<std::uint32_t>(i % tasks), label_from_code(static_cast<std::size_t>(y))});
    }
    return out;
}

TrainOptions quick(KernelFamily family) {
    TrainOptions o;
    o.family = family;
    o.optimizer.restarts = 1;
    o.optimizer.max_evals = 30;
    o.optimizer.ard_passes = 1;
    o.optimizer.ard_coord_evals = 5;
    o.optimizer.seed = 3;
    return o;
}

std::vector<TaskedInput> inputs_of(const std::vector<LabeledExample>& ex) {
    std::vector<TaskedInput> out;
    for (const auto& e : ex) out.push_back({e.x, e.task});
    return out;
}

}  // namespace

TEST_CASE("one-vs-all target recoding") {
    const std::vector<double> one = {1.0};
    std::vector<LabeledExample> ex;
    for (int code : {0, 0, 1, 2}) ex.push_back({SparseFeatureVector::from_dense(one), 0, label_from_code(static_cast<std::size_t>(code))});
    TrainOptions opts;
    opts.fixed_params = KernelParams{};
    const auto m = train_ova(ex, names(1), {"r"}, opts);
    CHECK(m.models[0].targets == std::vector<double>{1, 1, -1, -1});
    CHECK(m.models[1].targets == std::vector<double>{-1, -1, 1, -1});
    CHECK(m.models[2].targets == std::vector<double>{-1, -1, -1, 1});

    const std::vector<LabeledExample> none;
    CHECK_THROWS_AS(train_ova(none, names(1), {"r"}, opts), UsageError);

    // An absent label still gets a usable model.
    ex.pop_back();
    const auto m2 = train_ova(ex, names(1), {"r"}, opts);
    CHECK(m2.models[2].targets == std::vector<double>{-1, -1, -1});
    CHECK(classify(m2, SparseFeatureVector::from_dense(one)).second.probs[2] < 0.5);
}

TEST_CASE("argmax and ties") {
    CHECK(argmax_label({{0.9, 0.2, 0.2}}) == StanceLabel::Supporting);
    CHECK(argmax_label({{0.5, 0.5, 0.5}}) == StanceLabel::Supporting);
    CHECK(argmax_label({{0.1, 0.5, 0.5}}) == StanceLabel::Denying);
    CHECK(argmax_label({{0.1, 0.2, 0.5}}) == StanceLabel::Questioning);
}

TEST_CASE("zero input predicts the prior") {
    const auto ex = toy(30, 1);
    const auto m = train_ova(ex, names(5), {"r"}, quick(KernelFamily::Linear));
    const auto [label, post] = classify(m, SparseFeatureVector(5));
    for (double p : post.probs) CHECK(p == 0.5);
    CHECK(label == StanceLabel::Supporting);
}

TEST_CASE("classification is pure and matches its posterior") {
    const auto ex = toy(45, 2, 3);
    const auto m = train_ova(ex, names(5), {"a", "b", "c"}, quick(KernelFamily::Icm));
    const auto xs = inputs_of(ex);
    const auto all = classify_all(m, xs);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto one = classify(m, xs[i].x, xs[i].task);
        CHECK(one.first == all[i].first);
        CHECK(one.second.probs == all[i].second.probs);
        CHECK(all[i].first == argmax_label(all[i].second));
        for (double p : all[i].second.probs) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
        correct += all[i].first == ex[i].label;
    }
    CHECK(correct >= ex.size() * 2 / 3);
    CHECK(m.task_index("b") == 1u);
    CHECK_FALSE(m.task_index("z").has_value());
    CHECK_THROWS_AS(classify(m, SparseFeatureVector(5), 3), UsageError);
    CHECK_THROWS_AS(classify(m, SparseFeatureVector(4), 0), UsageError);
}

TEST_CASE("sign of a single feature separates two classes") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    std::vector<LabeledExample> ex;
    std::size_t supporting = 0;
    for (int i = 0; i < 40; ++i) {
        const double v = nd(rng);
        const std::vector<double> x = {v};
        ex.push_back({SparseFeatureVector::from_dense(x), 0, v > 0 ? StanceLabel::Supporting : StanceLabel::Denying});
        supporting += v > 0;
    }
    const auto m = train_ova(ex, names(1), {"r"}, quick(KernelFamily::Linear));
    std::size_t correct = 0;
    for (const auto& e : ex) correct += classify(m, e.x).first == e.label;
    CHECK(correct >= std::max(supporting, ex.size() - supporting));
}

TEST_CASE("label permutation equivariance") {
    const auto ex = toy(36, 4);
    // Cycle 0 -> 1 -> 2 -> 0.
    auto permuted = ex;
    for (auto& e : permuted) e.label = label_from_code((label_code(e.label) + 1) % 3);
    const auto a = train_ova(ex, names(5), {"r"}, quick(KernelFamily::Linear));
    const auto b = train_ova(permuted, names(5), {"r"}, quick(KernelFamily::Linear));
    const auto xs = inputs_of(ex);
    const auto pa = classify_all(a, xs);
    const auto pb = classify_all(b, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t c = 0; c < 3; ++c) CHECK(pb[i].second.probs[(c + 1) % 3] == pa[i].second.probs[c]);
    }
}

TEST_CASE("ARD relevance ranking") {
    const std::vector<double> x = {1.0, 1.0};
    const std::vector<LabeledExample> ex = {{SparseFeatureVector::from_dense(x), 0, StanceLabel::Denying}};
    TrainOptions opts;
    opts.family = KernelFamily::LinearArd;
    opts.fixed_params = KernelParams{{1.0, {3.0, 1.0}}, std::nullopt};
    const auto m = train_ova(ex, names(2), {"r"}, opts);
    const auto ranked = ard_relevance(m);
    for (const auto& r : ranked) {
        REQUIRE(r.size() == 2);
        CHECK(r[0].name == "f0");
        CHECK(r[0].weight == 3.0);
        CHECK(r[1].index == 1);
    }
    opts.fixed_params = KernelParams{{1.0, {2.0, 2.0}}, std::nullopt};
    CHECK(ard_relevance(train_ova(ex, names(2), {"r"}, opts))[0][0].name == "f0");

    opts.family = KernelFamily::Linear;
    opts.fixed_params = KernelParams{};
    CHECK_THROWS_AS(ard_relevance(train_ova(ex, names(2), {"r"}, opts)), UsageError);
}

TEST_CASE("feature space descriptors") {
    Vocabulary v;
    v.add("zoo");
    v.add("lion");
    const auto fs = FeatureSpace::from_vocabulary(v);
    CHECK(fs.names == std::vector<std::string>{"zoo", "lion"});
    BrownLexicon lex;
    lex.add("0110", "fake", 3);
    lex.add("0110", "lies", 5);
    const auto fb = FeatureSpace::from_lexicon(lex);
    CHECK(fb.names == std::vector<std::string>{"0110 lies"});
    CHECK(fs.hash() != fb.hash());
    FeatureSpace moved = fs;
    moved.names = {"zo", "olion"};
    CHECK(moved.hash() != fs.hash());
    CHECK(parse_feature_kind("brown") == FeatureKind::Brown);
    CHECK_FALSE(parse_feature_kind("tfidf").has_value());
}

TEST_CASE("persistence round trip is exact") {
    for (auto family : {KernelFamily::Linear, KernelFamily::Icm, KernelFamily::IcmArd}) {
        CAPTURE(family_name(family));
        const auto ex = toy(30, 6, 2);
        const auto m = train_ova(ex, names(5), {"r1", "r2"}, quick(family));
        std::stringstream first;
        save_model(first, m);
        std::istringstream in("# comment line\n" + first.str());
        const auto loaded = load_model(in);
        std::ostringstream second;
        save_model(second, loaded);
        CHECK(first.str() == second.str());

        CHECK(loaded.family == m.family);
        CHECK(loaded.tasks == m.tasks);
        CHECK(loaded.labels == m.labels);
        CHECK(loaded.seed == m.seed);
        const auto xs = inputs_of(toy(20, 99, 2));
        const auto pa = classify_all(m, xs);
        const auto pb = classify_all(loaded, xs);
        for (std::size_t i = 0; i < xs.size(); ++i) CHECK(pa[i].second.probs == pb[i].second.probs);
    }
}

TEST_CASE("corrupted model files are rejected") {
    const auto m = train_ova(toy(12, 7), names(5), {"r"}, quick(KernelFamily::Linear));
    std::ostringstream out;
    save_model(out, m);
    const std::string text = out.str();

    const auto rejects = [](std::string s) {
        std::istringstream in(s);
        CHECK_THROWS_AS(load_model(in), DataError);
    };
    rejects("");
    rejects("not-a-model\n");
    auto bad_version = text;
    bad_version.replace(bad_version.find("format_version 1"), 16, "format_version 9");
    rejects(bad_version);
    auto bad_feature = text;
    bad_feature.replace(bad_feature.find("\nf3\n"), 4, "\nfX\n");
    rejects(bad_feature);
    rejects(text.substr(0, text.size() / 2));
    auto bad_number = text;
    bad_number.replace(bad_number.find("variance ") + 9, 1, "x");
    rejects(bad_number);
}
