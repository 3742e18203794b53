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

#include "stancegp/error.hpp"
#include "stancegp/experiments.hpp"

namespace stancegp {

std::string_view mode_name(EvalMode mode) { return mode == EvalMode::Loo ? "loo" : "lpo"; }

std::optional<EvalMode> parse_mode(std::string_view name) {
    if (name == "loo") return EvalMode::Loo;
    if (name == "lpo") return EvalMode::Lpo;
    return std::nullopt;
}

std::vector<FoldSpec> make_folds(const Corpus& corpus, EvalMode mode, std::size_t k, std::size_t l) {
    if (corpus.num_rumours() == 0) throw UsageError("corpus has no rumours");
    std::vector<FoldSpec> folds;
    if (mode == EvalMode::Loo) {
        if (k != 0) throw UsageError("LOO folds take no target tweets (k must be 0)");
        if (corpus.num_rumours() < 2) throw UsageError("LOO needs at least two rumours");
        for (std::size_t r = 0; r < corpus.num_rumours(); ++r) folds.push_back(FoldSpec{r, mode, 0, 0});
        return folds;
    }
    if (l == 0) throw UsageError("LPO holdout offset l must be positive");
    if (k >= l) throw UsageError("LPO needs k < l (k=" + std::to_string(k) + ", l=" + std::to_string(l) + ")");
    for (std::size_t r = 0; r < corpus.num_rumours(); ++r) {
        if (corpus.records(r).size() <= l) {
            throw DataError("rumour '" + corpus.rumours()[r] + "' has " + std::to_string(corpus.records(r).size()) +
                            " tweets; LPO with l=" + std::to_string(l) + " needs more");
        }
        folds.push_back(FoldSpec{r, mode, k, l});
    }
    return folds;
}

FoldData materialize_fold(const Corpus& corpus, const FoldSpec& fold, const Preprocessor& pre) {
    if (fold.target >= corpus.num_rumours()) throw UsageError("fold target out of range");
    std::vector<TweetRecord> train;
    for (std::size_t r = 0; r < corpus.num_rumours(); ++r) {
        if (r == fold.target) continue;
        const auto& recs = corpus.records(r);
        train.insert(train.end(), recs.begin(), recs.end());
    }
    const auto& target = corpus.records(fold.target);
    FoldData out;
    if (fold.mode == EvalMode::Lpo) {
        train.insert(train.end(), target.begin(), target.begin() + static_cast<std::ptrdiff_t>(std::min(fold.k, target.size())));
        for (const auto& t : target) {
            if (t.seq_index >= fold.l) out.test.push_back(t);
        }
    } else {
        out.test = target;
    }
    out.train = filter_retweets(train, pre);
    return out;
}

}  // namespace stancegp
