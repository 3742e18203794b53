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
#include <cstdio>
#include <random>

#include "stancegp/error.hpp"
#include "stancegp/experiments.hpp"

namespace stancegp {

namespace {

// Label proportions (support, deny, question) of real rumours, cycled over tasks.
constexpr std::array<std::array<double, kNumLabels>, 7> kSkews = {{
    {796, 487, 132},
    {177, 295, 160},
    {62, 42, 73},
    {616, 129, 99},
    {783, 4, 95},
    {177, 0, 13},
    {3150, 0, 7},
}};

// Lowercase words that the preprocessing pipeline leaves untouched: no
// stopwords, and no Porter suffix ever matches.
std::string synthetic_word(std::size_t i) {
    static constexpr char kCons[] = "bdfgkmptvz";
    static constexpr char kVowels[] = "ou";
    std::string w = "q";
    std::size_t pos = 0;
    do {
        w += kCons[i % 10];
        w += kVowels[pos++ % 2];
        i /= 10;
    } while (i > 0);
    w += 'k';
    return w;
}

std::string bitstring_for(std::size_t cluster) {
    std::string bits;
    for (std::size_t v = cluster + 16; v > 0; v /= 2) bits.insert(bits.begin(), static_cast<char>('0' + v % 2));
    return bits;
}

}  // namespace

SyntheticCorpus make_synthetic(const SyntheticConfig& cfg) {
    if (cfg.num_tasks == 0 || cfg.tweets_per_task == 0) throw UsageError("synthetic corpus needs tasks and tweets");
    if (cfg.concept_clusters == 0 || cfg.words_per_cluster == 0 || cfg.noise_clusters == 0) {
        throw UsageError("synthetic corpus needs concept and noise clusters");
    }
    if (cfg.confusion < 0.0 || cfg.confusion > 1.0 || cfg.local_share < 0.0 || cfg.local_share > 1.0 || cfg.marker_rate < 0.0 || cfg.marker_rate > 1.0 ||
        cfg.marker_noise < 0.0 || cfg.marker_noise > 1.0) {
        throw UsageError("synthetic probabilities must lie in [0, 1]");
    }

    SyntheticCorpus out;
    std::size_t next_word = 0;
    std::size_t next_cluster = 0;
    // words[cluster][task] -> surface words
    std::vector<std::vector<std::vector<std::string>>> words;
    const auto new_cluster = [&](std::size_t per_task) {
        const std::string bits = bitstring_for(next_cluster++);
        std::vector<std::vector<std::string>> by_task(cfg.num_tasks);
        std::uint64_t count = 1000;
        for (auto& list : by_task) {
            for (std::size_t w = 0; w < per_task; ++w) {
                list.push_back(synthetic_word(next_word++));
                out.lexicon.add(bits, list.back(), count);
                out.lexicon_entries.push_back(LexiconEntry{bits, list.back(), count});
                --count;
            }
        }
        words.push_back(std::move(by_task));
        return words.size() - 1;
    };

    std::array<std::vector<std::size_t>, kNumLabels> concept_ids;
    for (auto& ids : concept_ids) {
        for (std::size_t c = 0; c < cfg.concept_clusters; ++c) ids.push_back(new_cluster(cfg.words_per_cluster));
    }
    std::vector<std::size_t> noise_ids;
    for (std::size_t c = 0; c < cfg.noise_clusters; ++c) noise_ids.push_back(new_cluster(cfg.words_per_cluster));
    std::vector<std::array<std::size_t, kNumLabels>> local_ids(cfg.num_tasks);
    for (auto& ids : local_ids) {
        for (auto& id : ids) id = new_cluster(cfg.words_per_cluster);
    }
    std::vector<std::size_t> topic_ids;
    for (std::size_t t = 0; t < cfg.num_tasks; ++t) topic_ids.push_back(new_cluster(1));
    std::size_t marker_id = 0;
    if (cfg.plant_marker) {
        marker_id = new_cluster(cfg.words_per_cluster);
        out.marker_bitstring = bitstring_for(marker_id);
    }

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::poisson_distribution<int> n_signal(cfg.signal_tokens);
    const auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    const auto word_of = [&](std::size_t cluster, std::size_t task) -> const std::string& {
        const auto& list = words[cluster][task];
        return list[pick(list.size())];
    };

    std::vector<TweetRecord> records;
    for (std::size_t t = 0; t < cfg.num_tasks; ++t) {
        const auto& skew = kSkews[t % kSkews.size()];
        std::discrete_distribution<std::size_t> label_dist(skew.begin(), skew.end());
        char rumour[32];
        std::snprintf(rumour, sizeof rumour, "rumour_%02zu", t);
        for (std::size_t i = 0; i < cfg.tweets_per_task; ++i) {
            const StanceLabel y = label_from_code(label_dist(rng));
            std::vector<std::string> tokens;
            if (cfg.topic_words) tokens.push_back(words[topic_ids[t]][t][0]);
            const bool marker_class = cfg.plant_marker && y == cfg.marker_label;
            const int signal = n_signal(rng);
            for (int s = 0; s < signal; ++s) {
                // Marker tweets echo the other labels' vocabulary evenly, so
                // only the marker tells them apart.
                std::size_t source = label_code(y);
                if (marker_class || unit(rng) < cfg.confusion) {
                    source = (source + 1 + pick(kNumLabels - 1)) % kNumLabels;
                    // The marker label has no concept clusters of its own.
                    if (cfg.plant_marker && source == label_code(cfg.marker_label)) {
                        source = (0 + 1 + 2) - label_code(y) - source;
                    }
                }
                if (unit(rng) < cfg.local_share) {
                    tokens.push_back(word_of(local_ids[t][source], t));
                } else {
                    const auto& ids = concept_ids[source];
                    tokens.push_back(word_of(ids[pick(ids.size())], t));
                }
            }
            if (cfg.plant_marker && unit(rng) < (marker_class ? cfg.marker_rate : cfg.marker_noise)) {
                tokens.push_back(word_of(marker_id, t));
            }
            for (std::size_t s = 0; s < cfg.noise_tokens; ++s) {
                tokens.push_back(word_of(noise_ids[pick(noise_ids.size())], t));
            }
            std::shuffle(tokens.begin() + (cfg.topic_words ? 1 : 0), tokens.end(), rng);

            TweetRecord r;
            r.tweet_id = std::string(rumour) + "_" + std::to_string(i);
            r.rumour_id = rumour;
            r.seq_index = i;
            r.label = y;
            for (const auto& w : tokens) r.text += (r.text.empty() ? "" : " ") + w;
            records.push_back(std::move(r));
        }
    }
    out.corpus = Corpus::from_records(std::move(records));
    return out;
}

}  // namespace stancegp
