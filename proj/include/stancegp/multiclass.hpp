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

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stancegp/hyperopt.hpp"
#include "stancegp/textproc.hpp"

namespace stancegp {

enum class FeatureKind { Bow, Brown };

std::string_view feature_kind_name(FeatureKind kind);
std::optional<FeatureKind> parse_feature_kind(std::string_view name);

/// Names the dimensions of the feature space a model was trained in: BOW
/// tokens, or "bitstring word" for Brown clusters.
struct FeatureSpace {
    FeatureKind kind = FeatureKind::Bow;
    std::vector<std::string> names;

    std::size_t dims() const { return names.size(); }
    /// FNV-1a over the kind and the names, for persistence checks.
    std::uint64_t hash() const;

    static FeatureSpace from_vocabulary(const Vocabulary& vocab);
    static FeatureSpace from_lexicon(const BrownLexicon& lexicon);
};

struct LabeledExample {
    SparseFeatureVector x;
    std::uint32_t task = 0;
    StanceLabel label = StanceLabel::Supporting;
};

struct BinaryModel {
    KernelParams params;
    std::vector<double> targets;
    TrainingGram gram;  // without EP's extra jitter
    EPApproximation approx;
};

struct ClassPosterior {
    std::array<double, kNumLabels> probs{};
};

struct TrainOptions {
    KernelFamily family = KernelFamily::Linear;
    OptimizerConfig optimizer;
    /// Skips evidence maximization and uses these hyperparameters for all
    /// three binary problems.
    std::optional<KernelParams> fixed_params;
};

struct OneVsAllModel {
    KernelFamily family = KernelFamily::Linear;
    FeatureSpace features;
    /// Task index -> rumour id. Single entry for non-ICM families.
    std::vector<std::string> tasks;
    std::vector<TaskedInput> inputs;
    std::vector<StanceLabel> labels;
    std::array<BinaryModel, kNumLabels> models;
    std::uint64_t seed = 0;

    std::size_t num_tasks() const { return tasks.size(); }
    std::optional<std::uint32_t> task_index(std::string_view rumour_id) const;
};

/// Three independent evidence-optimized binary fits, one per label. Labels
/// absent from the training set get an all-negative target vector. Non-ICM
/// families ignore the example tasks.
OneVsAllModel train_ova(std::span<const LabeledExample> examples, FeatureSpace features,
                        std::vector<std::string> tasks, const TrainOptions& options);

/// Argmax of the three one-vs-all probabilities; ties go to the lowest code.
/// ICM models throw UsageError for a task they were not trained on; other
/// families ignore `task`.
std::pair<StanceLabel, ClassPosterior> classify(const OneVsAllModel& model, const SparseFeatureVector& x,
                                                std::uint32_t task = 0);

/// Same as classify for every input, with the kernel setup shared.
std::vector<std::pair<StanceLabel, ClassPosterior>> classify_all(const OneVsAllModel& model,
                                                                 std::span<const TaskedInput> xs);

StanceLabel argmax_label(const ClassPosterior& posterior);

struct RankedFeature {
    std::size_t index = 0;
    std::string name;
    double weight = 0.0;
};

/// Features sorted by descending learned ARD variance, per label (index by
/// label code). Ties keep feature order.
std::array<std::vector<RankedFeature>, kNumLabels> ard_relevance(const OneVsAllModel& model);

/// Versioned plain-text model format. Numbers are written with 17
/// significant digits, and loading refits the posterior from the stored site
/// parameters, so a loaded model classifies bit-identically.
void save_model(std::ostream& out, const OneVsAllModel& model);
/// Leading '#' comment lines are skipped.
OneVsAllModel load_model(std::istream& in);

}  // namespace stancegp
