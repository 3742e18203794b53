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
#include <numeric>

#include "stancegp/error.hpp"
#include "stancegp/multiclass.hpp"

namespace stancegp {

std::string_view feature_kind_name(FeatureKind kind) {
    return kind == FeatureKind::Bow ? "bow" : "brown";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view name) {
    if (name == "bow") return FeatureKind::Bow;
    if (name == "brown") return FeatureKind::Brown;
    return std::nullopt;
}

std::uint64_t FeatureSpace::hash() const {
    std::uint64_t h = 14695981039346656037ULL;
    const auto mix = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0xFF;  // separator byte; never valid UTF-8
        h *= 1099511628211ULL;
    };
    mix(feature_kind_name(kind));
    for (const auto& n : names) mix(n);
    return h;
}

FeatureSpace FeatureSpace::from_vocabulary(const Vocabulary& vocab) {
    return FeatureSpace{FeatureKind::Bow, vocab.tokens()};
}

FeatureSpace FeatureSpace::from_lexicon(const BrownLexicon& lexicon) {
    FeatureSpace fs{FeatureKind::Brown, {}};
    fs.names.reserve(lexicon.num_clusters());
    for (std::uint32_t c = 0; c < lexicon.num_clusters(); ++c) {
        fs.names.push_back(lexicon.cluster_bitstring(c) + " " + lexicon.representative_word(c));
    }
    return fs;
}

std::optional<std::uint32_t> OneVsAllModel::task_index(std::string_view rumour_id) const {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i] == rumour_id) return static_cast<std::uint32_t>(i);
    }
    return std::nullopt;
}

OneVsAllModel train_ova(std::span<const LabeledExample> examples, FeatureSpace features,
                        std::vector<std::string> tasks, const TrainOptions& options) {
    if (examples.empty()) throw UsageError("cannot train on an empty training set");
    const bool icm = family_is_icm(options.family);
    if (tasks.empty()) throw UsageError("training needs at least one task");
    if (!icm) tasks.resize(1);

    OneVsAllModel model;
    model.family = options.family;
    model.features = std::move(features);
    model.tasks = std::move(tasks);
    model.seed = options.optimizer.seed;

    BinaryDataset data;
    data.dims = model.features.dims();
    data.num_tasks = model.tasks.size();
    for (const auto& ex : examples) {
        if (ex.x.dims() != data.dims) throw UsageError("example dimension does not match the feature space");
        if (icm && ex.task >= data.num_tasks) throw UsageError("example task index out of range");
        data.inputs.push_back(TaskedInput{ex.x, icm ? ex.task : 0u});
        model.labels.push_back(ex.label);
    }
    model.inputs = data.inputs;

    for (StanceLabel c : kAllLabels) {
        BinaryModel& bm = model.models[label_code(c)];
        data.targets.clear();
        for (StanceLabel l : model.labels) data.targets.push_back(l == c ? 1.0 : -1.0);
        if (options.fixed_params) {
            bm.params = *options.fixed_params;
        } else {
            bm.params = optimize_evidence(data, options.family, options.optimizer).params;
        }
        FixedFit fit = fit_fixed(data, bm.params, options.optimizer.ep);
        bm.targets = data.targets;
        bm.gram = std::move(fit.gram);
        bm.approx = std::move(fit.approx);
    }
    return model;
}

StanceLabel argmax_label(const ClassPosterior& posterior) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < kNumLabels; ++c) {
        if (posterior.probs[c] > posterior.probs[best]) best = c;
    }
    return label_from_code(best);
}

std::vector<std::pair<StanceLabel, ClassPosterior>> classify_all(const OneVsAllModel& model,
                                                                 std::span<const TaskedInput> xs) {
    const bool icm = family_is_icm(model.family);
    std::vector<TaskedInput> queries(xs.begin(), xs.end());
    for (auto& q : queries) {
        if (q.x.dims() != model.features.dims()) {
            throw UsageError("input has " + std::to_string(q.x.dims()) + " features, model expects " +
                             std::to_string(model.features.dims()));
        }
        if (!icm) {
            q.task = 0;
        } else if (q.task >= model.num_tasks()) {
            throw UsageError("task " + std::to_string(q.task) + " was not seen in training");
        }
    }

    std::vector<std::pair<StanceLabel, ClassPosterior>> out(queries.size());
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        const BinaryModel& bm = model.models[c];
        const KernelEvaluator eval(model.inputs, bm.params, model.features.dims());
        for (std::size_t i = 0; i < queries.size(); ++i) {
            const Eigen::VectorXd ks = eval.cross(queries[i]);
            const LatentPrediction lp = predict_latent(bm.approx, bm.gram.gram, ks, eval.self(queries[i]));
            out[i].second.probs[c] = predict_prob(lp);
        }
    }
    for (auto& [label, post] : out) label = argmax_label(post);
    return out;
}

std::pair<StanceLabel, ClassPosterior> classify(const OneVsAllModel& model, const SparseFeatureVector& x,
                                                std::uint32_t task) {
    const TaskedInput in{x, task};
    return classify_all(model, std::span<const TaskedInput>(&in, 1)).front();
}

std::array<std::vector<RankedFeature>, kNumLabels> ard_relevance(const OneVsAllModel& model) {
    std::array<std::vector<RankedFeature>, kNumLabels> out;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        const auto& ard = model.models[c].params.data.ard_variances;
        if (ard.empty()) throw UsageError("model was not trained with ARD variances");
        std::vector<std::size_t> order(ard.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ard[a] > ard[b]; });
        for (std::size_t f : order) out[c].push_back(RankedFeature{f, model.features.names[f], ard[f]});
    }
    return out;
}

}  // namespace stancegp
