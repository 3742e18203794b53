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

#include <algorithm>
#include <map>

#include "stancegp/error.hpp"
#include "stancegp/experiments.hpp"

namespace stancegp {

std::string_view variant_name(Variant v) {
    switch (v) {
        case Variant::Gp: return "GP";
        case Variant::GpPooled: return "GPPooled";
        case Variant::GpIcm: return "GPICM";
        case Variant::Majority: return "Majority";
    }
    return "?";
}

std::optional<Variant> parse_variant(std::string_view name) {
    for (Variant v : {Variant::Gp, Variant::GpPooled, Variant::GpIcm, Variant::Majority}) {
        if (name == variant_name(v)) return v;
    }
    return std::nullopt;
}

void MethodSpec::validate(EvalMode mode, std::size_t k) const {
    if (variant == Variant::GpIcm && (mode != EvalMode::Lpo || k < 1)) {
        throw UsageError("GPICM needs LPO with k >= 1; use GPPooled when no target tweets are trained on");
    }
    if (variant == Variant::Gp && k < 1) throw UsageError("GP trains on target tweets only and needs k >= 1");
}

StanceLabel majority_label(const LabelCounts& counts) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < kNumLabels; ++c) {
        if (counts[c] > counts[best]) best = c;
    }
    return label_from_code(best);
}

namespace {

FoldResult score(std::string rumour_id, std::vector<Prediction> predictions) {
    FoldResult out;
    out.rumour_id = std::move(rumour_id);
    out.n_test = predictions.size();
    for (const auto& p : predictions) out.correct += p.gold == p.predicted ? 1 : 0;
    out.accuracy = out.n_test ? static_cast<double>(out.correct) / static_cast<double>(out.n_test) : 0.0;
    out.predictions = std::move(predictions);
    return out;
}

double macro(std::span<const FoldResult> folds) {
    if (folds.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& f : folds) sum += f.accuracy;
    return sum / static_cast<double>(folds.size());
}

Prediction constant_prediction(const TweetRecord& t, StanceLabel label) {
    Prediction p{t.tweet_id, t.label, label, {}};
    p.posterior.probs[label_code(label)] = 1.0;
    return p;
}

}  // namespace

FoldResult majority_baseline(const Corpus& corpus, const FoldSpec& fold, const Preprocessor& pre) {
    const FoldData fd = materialize_fold(corpus, fold, pre);
    const StanceLabel label = majority_label(count_labels(fd.train));
    std::vector<Prediction> preds;
    for (const auto& t : fd.test) preds.push_back(constant_prediction(t, label));
    return score(corpus.rumours()[fold.target], std::move(preds));
}

EvalResult majority_from_counts(std::span<const CountsRow> rows) {
    if (rows.size() < 2) throw UsageError("LOO majority baseline needs at least two rumours");
    EvalResult res;
    res.method = MethodSpec{Variant::Majority, FeatureKind::Bow};
    res.mode = EvalMode::Loo;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        LabelCounts train{};
        for (std::size_t o = 0; o < rows.size(); ++o) {
            if (o == r) continue;
            for (std::size_t c = 0; c < kNumLabels; ++c) train[c] += rows[o].counts[c];
        }
        const StanceLabel label = majority_label(train);
        FoldResult f;
        f.rumour_id = rows[r].rumour_id;
        for (std::size_t c : rows[r].counts) f.n_test += c;
        f.correct = rows[r].counts[label_code(label)];
        f.accuracy = f.n_test ? static_cast<double>(f.correct) / static_cast<double>(f.n_test) : 0.0;
        res.folds.push_back(std::move(f));
    }
    res.macro_accuracy = macro(res.folds);
    return res;
}

FoldResult run_method(const Corpus& corpus, const FoldSpec& fold, const MethodSpec& method, const Resources& res,
                      const RunOptions& opts, OneVsAllModel* model_out) {
    method.validate(fold.mode, fold.k);
    if (method.variant == Variant::Majority) return majority_baseline(corpus, fold, res.preprocessor);

    FoldData fd = materialize_fold(corpus, fold, res.preprocessor);
    const std::string& target_id = corpus.rumours()[fold.target];
    if (method.variant == Variant::Gp) {
        std::erase_if(fd.train, [&](const TweetRecord& t) { return t.rumour_id != target_id; });
    }
    if (fd.train.empty()) throw DataError("fold '" + target_id + "' has no training tweets");

    std::vector<TokenSequence> train_tokens;
    for (const auto& t : fd.train) train_tokens.push_back(res.preprocessor(t.text));
    std::vector<TokenSequence> test_tokens;
    for (const auto& t : fd.test) test_tokens.push_back(res.preprocessor(t.text));

    FeatureSpace space;
    std::vector<SparseFeatureVector> train_x;
    std::vector<SparseFeatureVector> test_x;
    if (method.features == FeatureKind::Bow) {
        const Vocabulary vocab = build_vocabulary(train_tokens);
        space = FeatureSpace::from_vocabulary(vocab);
        for (const auto& t : train_tokens) train_x.push_back(featurize_bow(t, vocab));
        for (const auto& t : test_tokens) test_x.push_back(featurize_bow(t, vocab));
    } else {
        if (!res.brown) throw UsageError("Brown features need a Brown lexicon");
        const BrownLexicon lex = res.brown->restrict_to(train_tokens);
        space = FeatureSpace::from_lexicon(lex);
        for (const auto& t : train_tokens) train_x.push_back(featurize_brown(t, lex));
        for (const auto& t : test_tokens) test_x.push_back(featurize_brown(t, lex));
    }
    if (space.dims() == 0) throw DataError("fold '" + target_id + "' has no training features");

    // Tasks are the rumours present in training, in corpus order.
    std::vector<std::string> tasks;
    std::map<std::string, std::uint32_t> task_of;
    for (const auto& id : corpus.rumours()) {
        if (std::any_of(fd.train.begin(), fd.train.end(), [&](const TweetRecord& t) { return t.rumour_id == id; })) {
            task_of[id] = static_cast<std::uint32_t>(tasks.size());
            tasks.push_back(id);
        }
    }

    std::vector<LabeledExample> examples;
    for (std::size_t i = 0; i < fd.train.size(); ++i) {
        examples.push_back(LabeledExample{std::move(train_x[i]), task_of.at(fd.train[i].rumour_id), fd.train[i].label});
    }

    TrainOptions topts;
    const bool icm = method.variant == Variant::GpIcm;
    topts.family = icm ? (opts.ard ? KernelFamily::IcmArd : KernelFamily::Icm)
                       : (opts.ard ? KernelFamily::LinearArd : KernelFamily::Linear);
    topts.optimizer = opts.optimizer;
    topts.fixed_params = opts.fixed_params;
    OneVsAllModel model = train_ova(examples, std::move(space), std::move(tasks), topts);

    std::uint32_t target_task = 0;
    if (icm) {
        const auto it = task_of.find(target_id);
        if (it == task_of.end()) throw DataError("fold '" + target_id + "': no target tweets survived filtering");
        target_task = it->second;
    }
    std::vector<TaskedInput> queries;
    for (auto& x : test_x) queries.push_back(TaskedInput{std::move(x), target_task});
    const auto classified = classify_all(model, queries);

    std::vector<Prediction> preds;
    for (std::size_t i = 0; i < fd.test.size(); ++i) {
        preds.push_back(Prediction{fd.test[i].tweet_id, fd.test[i].label, classified[i].first, classified[i].second});
    }
    if (model_out) *model_out = std::move(model);
    return score(target_id, std::move(preds));
}

EvalResult evaluate(const Corpus& corpus, const MethodSpec& method, EvalMode mode, std::size_t k, std::size_t l,
                    const Resources& res, const RunOptions& opts) {
    method.validate(mode, k);
    EvalResult out;
    out.method = method;
    out.mode = mode;
    out.k = k;
    for (const auto& fold : make_folds(corpus, mode, k, l)) {
        out.folds.push_back(run_method(corpus, fold, method, res, opts));
    }
    out.macro_accuracy = macro(out.folds);
    return out;
}

std::vector<SweepPoint> run_sweep(const Corpus& corpus, const MethodSpec& method, std::span<const std::size_t> k_values,
                                  std::size_t l, const Resources& res, const RunOptions& opts) {
    for (std::size_t k : k_values) {
        if (k >= l) throw UsageError("sweep values must satisfy k < l");
        method.validate(EvalMode::Lpo, k);
    }
    std::vector<SweepPoint> out;
    for (std::size_t k : k_values) {
        out.push_back(SweepPoint{k, evaluate(corpus, method, EvalMode::Lpo, k, l, res, opts).macro_accuracy});
    }
    return out;
}

ArdReport ard_report(const Corpus& corpus, const Resources& res, const RunOptions& opts, std::size_t k, std::size_t l,
                     std::size_t top_n) {
    if (!res.brown) throw UsageError("the ARD report needs a Brown lexicon");
    const MethodSpec method{Variant::GpIcm, FeatureKind::Brown};
    RunOptions ard_opts = opts;
    ard_opts.ard = true;

    struct Acc {
        double sum = 0.0;
        std::size_t n = 0;
    };
    std::array<std::map<std::string, Acc>, kNumLabels> acc;
    for (const auto& fold : make_folds(corpus, EvalMode::Lpo, k, l)) {
        OneVsAllModel model;
        run_method(corpus, fold, method, res, ard_opts, &model);
        const auto ranked = ard_relevance(model);
        for (std::size_t c = 0; c < kNumLabels; ++c) {
            for (const auto& f : ranked[c]) {
                auto& a = acc[c][f.name.substr(0, f.name.find(' '))];
                a.sum += f.weight;
                ++a.n;
            }
        }
    }

    ArdReport report;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        auto& entries = report[c];
        for (const auto& [bits, a] : acc[c]) {
            const auto idx = res.brown->cluster_index(bits);
            entries.push_back(ArdEntry{bits, idx ? res.brown->representative_word(*idx) : std::string(),
                                       a.sum / static_cast<double>(a.n), a.n});
        }
        std::stable_sort(entries.begin(), entries.end(),
                         [](const ArdEntry& a, const ArdEntry& b) { return a.weight > b.weight; });
        if (entries.size() > top_n) entries.resize(top_n);
    }
    return report;
}

}  // namespace stancegp
