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
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "stancegp/error.hpp"
#include "stancegp/textproc.hpp"
#include "utf8.hpp"

namespace stancegp {

namespace {

constexpr int kMaxStemRounds = 8;

bool is_kept_punct(char32_t cp) { return cp == U'.' || cp == U'!' || cp == U'?'; }

bool is_punct_token(std::string_view token) {
    return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) {
        return c == '.' || c == '!' || c == '?';
    });
}

bool is_alpha_ascii(std::string_view token) {
    return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) {
        return c >= 'a' && c <= 'z';
    });
}

std::string strip_comment_and_trim(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

// Splits one lowercased raw token into word pieces and runs of a single
// kept punctuation character. Other punctuation is removed in place.
void tokenize_piece(std::u32string_view piece, TokenSequence& out) {
    std::u32string word;
    std::u32string punct_run;
    const auto flush_word = [&] {
        if (!word.empty()) {
            out.push_back(utf8::encode(word));
            word.clear();
        }
    };
    const auto flush_punct = [&] {
        if (!punct_run.empty()) {
            out.push_back(utf8::encode(punct_run));
            punct_run.clear();
        }
    };
    for (char32_t cp : piece) {
        if (is_kept_punct(cp)) {
            flush_word();
            if (!punct_run.empty() && punct_run.back() != cp) flush_punct();
            punct_run.push_back(cp);
        } else if (utf8::is_punct(cp)) {
            continue;
        } else {
            flush_punct();
            word.push_back(cp);
        }
    }
    flush_word();
    flush_punct();
}

std::string squash_runs(std::string_view token) {
    const std::u32string cps = utf8::decode(token);
    std::u32string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
        const std::size_t n = out.size();
        if (n >= 2 && out[n - 1] == cp && out[n - 2] == cp) continue;
        out.push_back(cp);
    }
    return utf8::encode(out);
}

std::string stem_to_fixpoint(std::string token) {
    for (int round = 0; round < kMaxStemRounds; ++round) {
        std::string next = porter_stem(token);
        if (next == token) break;
        token = std::move(next);
    }
    return token;
}

}  // namespace

// ---------------------------------------------------------------------------

EmoticonMap::EmoticonMap(std::unordered_map<std::string, std::string> entries)
    : entries_(std::move(entries)) {}

EmoticonMap EmoticonMap::parse(std::istream& in, std::string_view source) {
    std::unordered_map<std::string, std::string> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_comment_and_trim(std::move(line));
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
            throw DataError(std::string(source) + ":" + std::to_string(line_no) +
                            ": expected 'emoticon<TAB>replacement'");
        }
        entries[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return EmoticonMap(std::move(entries));
}

EmoticonMap EmoticonMap::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open emoticon map: " + path.string());
    return parse(in, path.string());
}

const std::string* EmoticonMap::find(std::string_view token) const {
    const auto it = entries_.find(std::string(token));
    return it == entries_.end() ? nullptr : &it->second;
}

StopwordList StopwordList::parse(std::istream& in) {
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        line = strip_comment_and_trim(std::move(line));
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t");
        words.insert(line.substr(first, last - first + 1));
    }
    return StopwordList(std::move(words));
}

StopwordList StopwordList::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open stopword list: " + path.string());
    return parse(in);
}

bool StopwordList::contains(std::string_view word) const {
    return words_.contains(std::string(word));
}

Preprocessor Preprocessor::from_directory(const std::filesystem::path& dir) {
    return Preprocessor(EmoticonMap::load(dir / "emoticons.tsv"),
                        StopwordList::load(dir / "stopwords.txt"));
}

// ---------------------------------------------------------------------------

TokenSequence preprocess(std::string_view text, const EmoticonMap& emoticons,
                         const StopwordList& stopwords) {
    TokenSequence raw;
    for (std::string_view piece : utf8::split_whitespace(text)) {
        if (piece.front() == '@') continue;
        if (const std::string* replacement = emoticons.find(piece)) {
            raw.push_back(*replacement);
        } else {
            raw.emplace_back(piece);
        }
    }

    TokenSequence tokens;
    for (const std::string& piece : raw) {
        std::u32string lowered = utf8::decode(piece);
        for (char32_t& cp : lowered) cp = utf8::to_lower(cp);
        tokenize_piece(lowered, tokens);
    }

    TokenSequence out;
    out.reserve(tokens.size());
    for (const std::string& token : tokens) {
        std::string squashed = squash_runs(token);
        if (is_punct_token(squashed)) {
            out.push_back(std::move(squashed));
            continue;
        }
        if (stopwords.contains(squashed)) continue;
        if (is_alpha_ascii(squashed)) {
            squashed = stem_to_fixpoint(std::move(squashed));
            // A stem can collide with a stopword ("ares" -> "are").
            if (stopwords.contains(squashed)) continue;
        }
        out.push_back(std::move(squashed));
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<TweetRecord> filter_retweets(std::span<const TweetRecord> records,
                                         const Preprocessor& pre) {
    std::vector<bool> keep(records.size(), true);

    for (std::size_t i = 0; i < records.size(); ++i) {
        std::string_view text = records[i].text;
        const auto first = text.find_first_not_of(" \t");
        text = first == std::string_view::npos ? std::string_view{} : text.substr(first);
        if (text.size() >= 4 && (text[0] == 'R' || text[0] == 'r') &&
            (text[1] == 'T' || text[1] == 't') && text[2] == ' ' && text[3] == '@') {
            keep[i] = false;
        }
    }

    // Walk each rumour in seq_index order (input order on ties).
    std::map<std::string, std::vector<std::size_t>> by_rumour;
    for (std::size_t i = 0; i < records.size(); ++i) {
        by_rumour[records[i].rumour_id].push_back(i);
    }
    for (auto& [rumour, idx] : by_rumour) {
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return records[a].seq_index < records[b].seq_index;
        });
        std::set<TokenSequence> seen;
        for (std::size_t i : idx) {
            if (!keep[i]) continue;
            TokenSequence tokens = pre(records[i].text);
            if (!seen.insert(std::move(tokens)).second) keep[i] = false;
        }
    }

    std::vector<TweetRecord> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (keep[i]) out.push_back(records[i]);
    }
    return out;
}

}  // namespace stancegp
