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
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stancegp/sparse.hpp"

namespace stancegp {

// ---------------------------------------------------------------------------
// Records and labels
// ---------------------------------------------------------------------------

/// Stance of a message towards its rumour. The integer codes are fixed.
enum class StanceLabel : std::uint8_t { Supporting = 0, Denying = 1, Questioning = 2 };

inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<StanceLabel, kNumLabels> kAllLabels = {
    StanceLabel::Supporting, StanceLabel::Denying, StanceLabel::Questioning};

constexpr std::size_t label_code(StanceLabel l) { return static_cast<std::size_t>(l); }
StanceLabel label_from_code(std::size_t code);

/// Corpus spelling: "support", "deny", "question".
std::string_view label_name(StanceLabel label);
std::optional<StanceLabel> parse_label(std::string_view name);

struct TweetRecord {
    std::string tweet_id;
    std::string rumour_id;
    std::size_t seq_index = 0;
    std::string text;
    StanceLabel label = StanceLabel::Supporting;

    bool operator==(const TweetRecord&) const = default;
};

using TokenSequence = std::vector<std::string>;

// ---------------------------------------------------------------------------
// Resources
// ---------------------------------------------------------------------------

/// Emoticon -> replacement word. Keys are matched case-sensitively against
/// whole whitespace-delimited tokens (":s" and ":S" are distinct entries).
class EmoticonMap {
public:
    EmoticonMap() = default;
    explicit EmoticonMap(std::unordered_map<std::string, std::string> entries);

    /// "emoticon<TAB>replacement" per line; blank lines and '#' comments skipped.
    static EmoticonMap load(const std::filesystem::path& path);
    static EmoticonMap parse(std::istream& in, std::string_view source = "<stream>");

    const std::string* find(std::string_view token) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::string> entries_;
};

class StopwordList {
public:
    StopwordList() = default;
    explicit StopwordList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

    /// One lowercase word per line; blank lines and '#' comments skipped.
    static StopwordList load(const std::filesystem::path& path);
    static StopwordList parse(std::istream& in);

    bool contains(std::string_view word) const;
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

// ---------------------------------------------------------------------------
// Normalization pipeline
// ---------------------------------------------------------------------------

/// Runs, in order: username removal, emoticon replacement, lowercasing,
/// tokenization (runs of '.', '!' or '?' become their own tokens, all other
/// punctuation is deleted), squashing of 3+ character runs to exactly two,
/// stopword removal, and Porter stemming of purely alphabetic tokens.
TokenSequence preprocess(std::string_view text, const EmoticonMap& emoticons,
                         const StopwordList& stopwords);

/// Owns a resource pair and applies preprocess().
class Preprocessor {
public:
    Preprocessor() = default;
    Preprocessor(EmoticonMap emoticons, StopwordList stopwords)
        : emoticons_(std::move(emoticons)), stopwords_(std::move(stopwords)) {}

    /// Loads "stopwords.txt" and "emoticons.tsv" from a resource directory.
    static Preprocessor from_directory(const std::filesystem::path& dir);

    TokenSequence operator()(std::string_view text) const {
        return preprocess(text, emoticons_, stopwords_);
    }

    const EmoticonMap& emoticons() const { return emoticons_; }
    const StopwordList& stopwords() const { return stopwords_; }

private:
    EmoticonMap emoticons_;
    StopwordList stopwords_;
};

/// Classic Porter (1980) suffix stripper for lowercase ASCII words.
std::string porter_stem(std::string_view word);

/// Drops records whose text starts with "RT @" (any case) and records whose
/// normalized token sequence repeats an earlier record of the same rumour.
/// Survivors keep their input order.
std::vector<TweetRecord> filter_retweets(std::span<const TweetRecord> records,
                                         const Preprocessor& pre);

// ---------------------------------------------------------------------------
// Feature spaces
// ---------------------------------------------------------------------------

class Vocabulary {
public:
    /// Returns the index of token, inserting it at the end if absent.
    std::uint32_t add(std::string_view token);
    std::optional<std::uint32_t> find(std::string_view token) const;

    std::size_t size() const { return tokens_.size(); }
    bool empty() const { return tokens_.empty(); }
    const std::vector<std::string>& tokens() const { return tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

/// Indices assigned in first-occurrence order.
Vocabulary build_vocabulary(std::span<const TokenSequence> token_seqs);

/// Raw term counts over the vocabulary; unknown tokens are dropped.
SparseFeatureVector featurize_bow(const TokenSequence& tokens, const Vocabulary& vocab);

/// Word -> Brown cluster bitstring, with a dense index over the clusters.
class BrownLexicon {
public:
    /// Registers word in cluster `bitstring`; `count` feeds the representative-word choice.
    void add(std::string_view bitstring, std::string_view word, std::uint64_t count = 0);

    /// Cluster index of word, if it is mapped.
    std::optional<std::uint32_t> cluster_of(std::string_view word) const;
    const std::string* bitstring_of(std::string_view word) const;
    std::optional<std::uint32_t> cluster_index(std::string_view bitstring) const;

    std::size_t num_clusters() const { return clusters_.size(); }
    std::size_t num_words() const { return words_.size(); }
    const std::string& cluster_bitstring(std::uint32_t index) const { return clusters_[index].bitstring; }
    /// Most frequent member word of the cluster (first seen on ties).
    const std::string& representative_word(std::uint32_t index) const { return clusters_[index].best_word; }

    /// Maps porter_stem(w) to w's cluster for every word w whose stem is not
    /// already an entry, so stemmed pipeline tokens resolve. When several words
    /// share a stem, the most frequent one decides the cluster.
    void add_stem_aliases();

    /// Sub-lexicon holding only the clusters hit by `token_seqs`, indexed in
    /// first-occurrence order of those hits. All member words of the kept
    /// clusters are retained.
    BrownLexicon restrict_to(std::span<const TokenSequence> token_seqs) const;
    /// Sub-lexicon with exactly the given clusters, in the given order.
    BrownLexicon restrict_to_clusters(std::span<const std::string> bitstrings) const;

private:
    struct Cluster {
        std::string bitstring;
        std::string best_word;
        std::uint64_t best_count = 0;
        bool has_word = false;
    };
    struct Entry {
        std::uint32_t cluster;
        std::uint64_t count;
    };
    std::vector<Cluster> clusters_;
    std::unordered_map<std::string, std::uint32_t> cluster_index_;
    std::unordered_map<std::string, Entry> words_;
    std::vector<std::string> word_order_;
};

/// Reads "bitstring<TAB>word<TAB>count" lines. Throws DataError naming the
/// offending line for malformed input.
BrownLexicon load_brown_lexicon(const std::filesystem::path& path);
BrownLexicon parse_brown_lexicon(std::istream& in, std::string_view source = "<stream>");

/// Cluster-count vector; dims equals lexicon.num_clusters() for every input.
SparseFeatureVector featurize_brown(const TokenSequence& tokens, const BrownLexicon& lexicon);

}  // namespace stancegp
