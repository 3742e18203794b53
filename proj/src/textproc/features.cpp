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
#include <cmath>
#include <map>
#include <string>

#include "stancegp/error.hpp"
#include "stancegp/textproc.hpp"

namespace stancegp {

StanceLabel label_from_code(std::size_t code) {
    if (code >= kNumLabels) throw DataError("label code out of range: " + std::to_string(code));
    return static_cast<StanceLabel>(code);
}

std::string_view label_name(StanceLabel label) {
    switch (label) {
        case StanceLabel::Supporting: return "support";
        case StanceLabel::Denying: return "deny";
        case StanceLabel::Questioning: return "question";
    }
    return "?";
}

std::optional<StanceLabel> parse_label(std::string_view name) {
    if (name == "support") return StanceLabel::Supporting;
    if (name == "deny") return StanceLabel::Denying;
    if (name == "question") return StanceLabel::Questioning;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

SparseFeatureVector SparseFeatureVector::from_pairs(
    std::size_t dims, std::span<const std::pair<std::uint32_t, double>> pairs) {
    SparseFeatureVector v(dims);
    v.indices_.reserve(pairs.size());
    v.values_.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [index, value] = pairs[k];
        if (index >= dims) {
            throw DataError("sparse index " + std::to_string(index) + " out of range for dims " +
                            std::to_string(dims));
        }
        if (k > 0 && index <= pairs[k - 1].first) {
            throw DataError("sparse indices must be strictly ascending");
        }
        if (!std::isfinite(value)) throw DataError("sparse value is not finite");
        if (value == 0.0) continue;
        v.indices_.push_back(index);
        v.values_.push_back(value);
    }
    return v;
}

SparseFeatureVector SparseFeatureVector::from_dense(std::span<const double> dense) {
    std::vector<std::pair<std::uint32_t, double>> pairs;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0.0) pairs.emplace_back(static_cast<std::uint32_t>(i), dense[i]);
    }
    return from_pairs(dense.size(), pairs);
}

double SparseFeatureVector::l1_norm() const {
    double s = 0.0;
    for (double v : values_) s += std::abs(v);
    return s;
}

double SparseFeatureVector::squared_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return s;
}

std::vector<double> SparseFeatureVector::to_dense() const {
    std::vector<double> out(dims_, 0.0);
    for (std::size_t k = 0; k < indices_.size(); ++k) out[indices_[k]] = values_[k];
    return out;
}

double sparse_dot(const SparseFeatureVector& a, const SparseFeatureVector& b) {
    const auto ia = a.indices();
    const auto ib = b.indices();
    const auto va = a.values();
    const auto vb = b.values();
    double sum = 0.0;
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < ia.size() && q < ib.size()) {
        if (ia[p] < ib[q]) {
            ++p;
        } else if (ib[q] < ia[p]) {
            ++q;
        } else {
            sum += va[p] * vb[q];
            ++p;
            ++q;
        }
    }
    return sum;
}

// ---------------------------------------------------------------------------

std::uint32_t Vocabulary::add(std::string_view token) {
    const auto [it, inserted] =
        index_.try_emplace(std::string(token), static_cast<std::uint32_t>(tokens_.size()));
    if (inserted) tokens_.emplace_back(token);
    return it->second;
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view token) const {
    const auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocabulary build_vocabulary(std::span<const TokenSequence> token_seqs) {
    Vocabulary vocab;
    for (const auto& seq : token_seqs) {
        for (const auto& token : seq) vocab.add(token);
    }
    return vocab;
}

namespace {

SparseFeatureVector counts_to_vector(std::size_t dims, const std::map<std::uint32_t, double>& counts) {
    std::vector<std::pair<std::uint32_t, double>> pairs(counts.begin(), counts.end());
    return SparseFeatureVector::from_pairs(dims, pairs);
}

}  // namespace

SparseFeatureVector featurize_bow(const TokenSequence& tokens, const Vocabulary& vocab) {
    std::map<std::uint32_t, double> counts;
    for (const auto& token : tokens) {
        if (const auto idx = vocab.find(token)) counts[*idx] += 1.0;
    }
    return counts_to_vector(vocab.size(), counts);
}

SparseFeatureVector featurize_brown(const TokenSequence& tokens, const BrownLexicon& lexicon) {
    std::map<std::uint32_t, double> counts;
    for (const auto& token : tokens) {
        if (const auto idx = lexicon.cluster_of(token)) counts[*idx] += 1.0;
    }
    return counts_to_vector(lexicon.num_clusters(), counts);
}

}  // namespace stancegp
