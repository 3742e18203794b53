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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stancegp/multiclass.hpp"
#include "stancegp/textproc.hpp"

namespace stancegp {

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

using LabelCounts = std::array<std::size_t, kNumLabels>;

/// Records grouped by rumour. Rumours are in lexicographic order; within a
/// rumour records are ordered by seq_index, which is dense and 0-based.
class Corpus {
public:
    Corpus() = default;
    /// Groups and normalizes: stable sort by the given seq_index, then
    /// renumber 0..n-1. Throws DataError on a duplicate (rumour, tweet) pair.
    static Corpus from_records(std::vector<TweetRecord> records);

    std::size_t num_rumours() const { return rumours_.size(); }
    std::size_t size() const;
    const std::vector<std::string>& rumours() const { return rumours_; }
    const std::vector<TweetRecord>& records(std::size_t rumour) const { return records_[rumour]; }
    std::optional<std::size_t> rumour_index(std::string_view rumour_id) const;
    LabelCounts label_counts(std::size_t rumour) const;

    bool operator==(const Corpus&) const = default;

private:
    std::vector<std::string> rumours_;
    std::vector<std::vector<TweetRecord>> records_;
};

/// Corpus TSV: tweet_id, rumour_id, seq_index, label, text. An optional
/// header line starts with "tweet_id". Errors name the offending line.
Corpus read_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::istream& in, std::string_view source = "<stream>");
void write_corpus(std::ostream& out, const Corpus& corpus);

/// Per-rumour label counts: "rumour_id<TAB>support<TAB>deny<TAB>question".
struct CountsRow {
    std::string rumour_id;
    LabelCounts counts{};
};
std::vector<CountsRow> read_counts(const std::filesystem::path& path);
std::vector<CountsRow> parse_counts(std::istream& in, std::string_view source = "<stream>");

// ---------------------------------------------------------------------------
// Folds
// ---------------------------------------------------------------------------

enum class EvalMode { Loo, Lpo };
std::string_view mode_name(EvalMode mode);
std::optional<EvalMode> parse_mode(std::string_view name);

inline constexpr std::size_t kDefaultHoldoutOffset = 50;

struct FoldSpec {
    std::size_t target = 0;  // rumour index
    EvalMode mode = EvalMode::Loo;
    std::size_t k = 0;       // target prefix added to training
    std::size_t l = 0;       // first test seq_index (LPO only)
};

/// One fold per rumour. LPO needs k < l and every rumour longer than l.
std::vector<FoldSpec> make_folds(const Corpus& corpus, EvalMode mode, std::size_t k = 0,
                                 std::size_t l = kDefaultHoldoutOffset);

struct FoldData {
    std::vector<TweetRecord> train;  // retweet-filtered
    std::vector<TweetRecord> test;
};

/// Training: every other rumour plus the first k target tweets, retweet
/// filtered. Test: the whole target (LOO) or target tweets with seq_index >= l.
FoldData materialize_fold(const Corpus& corpus, const FoldSpec& fold, const Preprocessor& pre);

// ---------------------------------------------------------------------------
// Methods
// ---------------------------------------------------------------------------

enum class Variant { Gp, GpPooled, GpIcm, Majority };
std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

struct MethodSpec {
    Variant variant = Variant::GpPooled;
    FeatureKind features = FeatureKind::Bow;

    /// GP needs k >= 1; GPICM needs LPO with k >= 1.
    void validate(EvalMode mode, std::size_t k) const;
};

struct Resources {
    Preprocessor preprocessor;
    /// Required for Brown features. Restricted per fold to the clusters the
    /// training data hits.
    std::optional<BrownLexicon> brown;
};

struct Prediction {
    std::string tweet_id;
    StanceLabel gold = StanceLabel::Supporting;
    StanceLabel predicted = StanceLabel::Supporting;
    ClassPosterior posterior;
};

struct FoldResult {
    std::string rumour_id;
    std::size_t n_test = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
    std::vector<Prediction> predictions;
};

struct EvalResult {
    MethodSpec method;
    EvalMode mode = EvalMode::Loo;
    std::size_t k = 0;
    std::vector<FoldResult> folds;  // rumour order
    double macro_accuracy = 0.0;
};

/// Most frequent label; ties go to the lowest code.
StanceLabel majority_label(const LabelCounts& counts);
LabelCounts count_labels(std::span<const TweetRecord> records);

FoldResult majority_baseline(const Corpus& corpus, const FoldSpec& fold, const Preprocessor& pre);

/// LOO majority baseline straight from per-rumour label counts: each fold
/// trains on the summed counts of the other rumours.
EvalResult majority_from_counts(std::span<const CountsRow> rows);

/// Sets the per-fold model family and optimizer; `ard` switches to the ARD
/// variant of the family.
struct RunOptions {
    OptimizerConfig optimizer;
    bool ard = false;
    /// Bypasses evidence maximization (testing).
    std::optional<KernelParams> fixed_params;
};

/// Featurizes the fold, trains the method on it and classifies the test set.
FoldResult run_method(const Corpus& corpus, const FoldSpec& fold, const MethodSpec& method,
                      const Resources& res, const RunOptions& opts, OneVsAllModel* model_out = nullptr);

EvalResult evaluate(const Corpus& corpus, const MethodSpec& method, EvalMode mode, std::size_t k,
                    std::size_t l, const Resources& res, const RunOptions& opts);

struct SweepPoint {
    std::size_t k = 0;
    double macro_accuracy = 0.0;
};

/// LPO evaluation for each k with the same test split (seq_index >= l).
std::vector<SweepPoint> run_sweep(const Corpus& corpus, const MethodSpec& method,
                                  std::span<const std::size_t> k_values, std::size_t l,
                                  const Resources& res, const RunOptions& opts);

inline constexpr std::array<std::size_t, 6> kDefaultSweep = {0, 10, 20, 30, 40, 50};

struct ArdEntry {
    std::string bitstring;
    std::string word;
    double weight = 0.0;
    std::size_t folds = 0;  // folds whose training data hit the cluster
};

/// Per label (by code), the top_n clusters by ARD variance averaged over the
/// folds that contain the cluster.
using ArdReport = std::array<std::vector<ArdEntry>, kNumLabels>;

/// GPICM with Brown features and ARD, LPO with (k, l), one fit per rumour.
ArdReport ard_report(const Corpus& corpus, const Resources& res, const RunOptions& opts,
                     std::size_t k = 10, std::size_t l = kDefaultHoldoutOffset, std::size_t top_n = 5);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Columns: method, features, mode, k, rumour_id, n_test, accuracy; closes
/// with a "macro" row.
void write_results_tsv(std::ostream& out, std::span<const EvalResult> results, bool header = true);
void write_sweep_tsv(std::ostream& out, const MethodSpec& method, std::span<const SweepPoint> points,
                     bool header = true);
/// rank, then word and bitstring for each of support, deny, question.
void write_ard_tsv(std::ostream& out, const ArdReport& report);
/// tweet_id, predicted label, p_support, p_deny, p_question.
void write_predictions_tsv(std::ostream& out, std::span<const Prediction> predictions);
void write_counts_tsv(std::ostream& out, const Corpus& corpus);

/// Fixed-point with `digits` decimals, locale independent.
std::string format_fixed(double v, int digits);

// ---------------------------------------------------------------------------
// Synthetic corpora
// ---------------------------------------------------------------------------

struct SyntheticConfig {
    std::size_t num_tasks = 3;
    std::size_t tweets_per_task = 80;
    std::uint64_t seed = 0;

    /// Shared class-conditional clusters per label; each task has its own
    /// surface words for every cluster.
    std::size_t concept_clusters = 3;
    std::size_t words_per_cluster = 4;
    std::size_t noise_clusters = 6;
    /// Expected informative tokens per tweet.
    double signal_tokens = 2.5;
    std::size_t noise_tokens = 3;
    /// Starts every tweet with a word naming its task.
    bool topic_words = true;
    /// Probability that a concept token comes from another label's clusters.
    double confusion = 0.2;
    /// Probability that a concept token comes from a cluster used by its own
    /// task only (one per task and label) instead of a shared one.
    double local_share = 0.3;

    /// Adds one extra cluster whose words mostly appear in tweets with
    /// `marker_label`. Those tweets draw their other informative tokens from
    /// the remaining labels' clusters.
    bool plant_marker = false;
    StanceLabel marker_label = StanceLabel::Denying;
    double marker_rate = 0.7;
    /// Rate of the marker in tweets of the other labels.
    double marker_noise = 0.05;
};

struct LexiconEntry {
    std::string bitstring;
    std::string word;
    std::uint64_t count = 0;
};

struct SyntheticCorpus {
    Corpus corpus;
    BrownLexicon lexicon;
    std::vector<LexiconEntry> lexicon_entries;  // what `lexicon` was built from
    std::string marker_bitstring;  // empty unless a marker was planted
};

/// Deterministic in the config. Task class proportions cycle through skews
/// of real rumour label distributions.
SyntheticCorpus make_synthetic(const SyntheticConfig& cfg);

}  // namespace stancegp
