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
#include <charconv>
#include <fstream>
#include <istream>
#include <string>

#include "stancegp/error.hpp"
#include "stancegp/textproc.hpp"

namespace stancegp {

void BrownLexicon::add(std::string_view bitstring, std::string_view word, std::uint64_t count) {
    std::string key(bitstring);
    auto it = cluster_index_.find(key);
    if (it == cluster_index_.end()) {
        it = cluster_index_.emplace(key, static_cast<std::uint32_t>(clusters_.size())).first;
        clusters_.push_back(Cluster{key, {}, 0, false});
    }
    const std::uint32_t cluster = it->second;
    const auto [wit, inserted] = words_.try_emplace(std::string(word), Entry{cluster, count});
    if (!inserted) {
        // Later lines for an already-mapped word are ignored.
        return;
    }
    word_order_.emplace_back(word);
    Cluster& c = clusters_[cluster];
    if (!c.has_word || count > c.best_count) {
        c.best_word = std::string(word);
        c.best_count = count;
        c.has_word = true;
    }
}

std::optional<std::uint32_t> BrownLexicon::cluster_of(std::string_view word) const {
    const auto it = words_.find(std::string(word));
    if (it == words_.end()) return std::nullopt;
    return it->second.cluster;
}

const std::string* BrownLexicon::bitstring_of(std::string_view word) const {
    const auto idx = cluster_of(word);
    return idx ? &clusters_[*idx].bitstring : nullptr;
}

std::optional<std::uint32_t> BrownLexicon::cluster_index(std::string_view bitstring) const {
    const auto it = cluster_index_.find(std::string(bitstring));
    if (it == cluster_index_.end()) return std::nullopt;
    return it->second;
}

void BrownLexicon::add_stem_aliases() {
    std::vector<std::string> order = word_order_;
    std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
        return words_.at(a).count > words_.at(b).count;
    });
    for (const auto& word : order) {
        std::string stem = porter_stem(word);
        if (words_.contains(stem)) continue;
        const Entry e = words_.at(word);
        words_.emplace(stem, Entry{e.cluster, 0});
        word_order_.push_back(std::move(stem));
    }
}

BrownLexicon BrownLexicon::restrict_to(std::span<const TokenSequence> token_seqs) const {
    std::vector<std::string> order;
    std::vector<bool> seen(clusters_.size(), false);
    for (const auto& seq : token_seqs) {
        for (const auto& token : seq) {
            if (const auto idx = cluster_of(token); idx && !seen[*idx]) {
                seen[*idx] = true;
                order.push_back(clusters_[*idx].bitstring);
            }
        }
    }
    return restrict_to_clusters(order);
}

BrownLexicon BrownLexicon::restrict_to_clusters(std::span<const std::string> bitstrings) const {
    BrownLexicon out;
    for (const auto& bits : bitstrings) {
        if (!cluster_index_.contains(bits)) {
            throw DataError("cluster " + bits + " is not in the lexicon");
        }
        out.cluster_index_.emplace(bits, static_cast<std::uint32_t>(out.clusters_.size()));
        out.clusters_.push_back(Cluster{bits, {}, 0, false});
    }
    for (const auto& word : word_order_) {
        const Entry& e = words_.at(word);
        if (out.cluster_index_.contains(clusters_[e.cluster].bitstring)) {
            out.add(clusters_[e.cluster].bitstring, word, e.count);
        }
    }
    return out;
}

BrownLexicon parse_brown_lexicon(std::istream& in, std::string_view source) {
    BrownLexicon lexicon;
    std::string line;
    std::size_t line_no = 0;
    const auto fail = [&](const std::string& why) {
        throw DataError(std::string(source) + ":" + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos) {
            fail("expected 'bitstring<TAB>word<TAB>count'");
        }
        const std::string_view bits(line.data(), t1);
        const std::string_view word(line.data() + t1 + 1, t2 - t1 - 1);
        const std::string_view count_str(line.data() + t2 + 1, line.size() - t2 - 1);
        if (bits.empty() || bits.find_first_not_of("01") != std::string_view::npos) {
            fail("cluster id must be a nonempty binary string");
        }
        if (word.empty()) fail("empty word");
        std::uint64_t count = 0;
        const auto [ptr, ec] = std::from_chars(count_str.data(), count_str.data() + count_str.size(), count);
        if (ec != std::errc{} || ptr != count_str.data() + count_str.size()) {
            fail("count must be a nonnegative integer");
        }
        lexicon.add(bits, word, count);
    }
    return lexicon;
}

BrownLexicon load_brown_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open Brown lexicon: " + path.string());
    return parse_brown_lexicon(in, path.string());
}

}  // namespace stancegp
