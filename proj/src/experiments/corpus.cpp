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
#include <map>
#include <ostream>
#include <set>

#include "stancegp/error.hpp"
#include "stancegp/experiments.hpp"

namespace stancegp {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line, std::size_t max_fields) {
    std::vector<std::string_view> out;
    while (out.size() + 1 < max_fields) {
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) break;
        out.push_back(line.substr(0, tab));
        line.remove_prefix(tab + 1);
    }
    out.push_back(line);
    return out;
}

template <class T>
bool parse_uint(std::string_view s, T& out) {
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size() && !s.empty();
}

[[noreturn]] void data_error(std::string_view source, std::size_t line, const std::string& what) {
    throw DataError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Corpus Corpus::from_records(std::vector<TweetRecord> records) {
    std::map<std::string, std::vector<TweetRecord>> grouped;
    std::set<std::pair<std::string, std::string>> seen;
    for (auto& r : records) {
        if (!seen.emplace(r.rumour_id, r.tweet_id).second) {
            throw DataError("duplicate tweet '" + r.tweet_id + "' in rumour '" + r.rumour_id + "'");
        }
        grouped[r.rumour_id].push_back(std::move(r));
    }
    Corpus c;
    for (auto& [id, recs] : grouped) {
        std::stable_sort(recs.begin(), recs.end(),
                         [](const TweetRecord& a, const TweetRecord& b) { return a.seq_index < b.seq_index; });
        for (std::size_t i = 0; i < recs.size(); ++i) recs[i].seq_index = i;
        c.rumours_.push_back(id);
        c.records_.push_back(std::move(recs));
    }
    return c;
}

std::size_t Corpus::size() const {
    std::size_t n = 0;
    for (const auto& r : records_) n += r.size();
    return n;
}

std::optional<std::size_t> Corpus::rumour_index(std::string_view rumour_id) const {
    const auto it = std::lower_bound(rumours_.begin(), rumours_.end(), rumour_id);
    if (it == rumours_.end() || *it != rumour_id) return std::nullopt;
    return static_cast<std::size_t>(it - rumours_.begin());
}

LabelCounts Corpus::label_counts(std::size_t rumour) const { return count_labels(records_.at(rumour)); }

LabelCounts count_labels(std::span<const TweetRecord> records) {
    LabelCounts c{};
    for (const auto& r : records) ++c[label_code(r.label)];
    return c;
}

Corpus parse_corpus(std::istream& in, std::string_view source) {
    std::vector<TweetRecord> records;
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_tabs(line, 5);
        if (line_no == 1 && f[0] == "tweet_id") continue;
        if (f.size() != 5) data_error(source, line_no, "expected 5 tab-separated fields, got " + std::to_string(f.size()));
        TweetRecord r;
        r.tweet_id = f[0];
        r.rumour_id = f[1];
        if (r.tweet_id.empty() || r.rumour_id.empty()) data_error(source, line_no, "empty tweet_id or rumour_id");
        if (!parse_uint(f[2], r.seq_index)) data_error(source, line_no, "bad seq_index '" + std::string(f[2]) + "'");
        const auto label = parse_label(f[3]);
        if (!label) data_error(source, line_no, "unknown label '" + std::string(f[3]) + "'");
        r.label = *label;
        r.text = f[4];
        if (!seen.emplace(r.rumour_id, r.tweet_id).second) {
            data_error(source, line_no, "duplicate tweet '" + r.tweet_id + "' in rumour '" + r.rumour_id + "'");
        }
        records.push_back(std::move(r));
    }
    if (in.bad()) throw DataError(std::string(source) + ": read error");
    return Corpus::from_records(std::move(records));
}

Corpus read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file " + path.string());
    return parse_corpus(in, path.string());
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
    out << "tweet_id\trumour_id\tseq_index\tlabel\ttext\n";
    for (std::size_t r = 0; r < corpus.num_rumours(); ++r) {
        for (const auto& t : corpus.records(r)) {
            out << t.tweet_id << '\t' << t.rumour_id << '\t' << t.seq_index << '\t' << label_name(t.label) << '\t'
                << t.text << '\n';
        }
    }
}

std::vector<CountsRow> parse_counts(std::istream& in, std::string_view source) {
    std::vector<CountsRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_tabs(line, 5);
        if (f[0] == "rumour_id") continue;
        if (f.size() != 4) data_error(source, line_no, "expected rumour_id and three counts");
        CountsRow row;
        row.rumour_id = f[0];
        for (std::size_t c = 0; c < kNumLabels; ++c) {
            if (!parse_uint(f[c + 1], row.counts[c])) data_error(source, line_no, "bad count '" + std::string(f[c + 1]) + "'");
        }
        for (const auto& prev : rows) {
            if (prev.rumour_id == row.rumour_id) data_error(source, line_no, "duplicate rumour '" + row.rumour_id + "'");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(std::string(source) + ": no count rows");
    std::sort(rows.begin(), rows.end(), [](const CountsRow& a, const CountsRow& b) { return a.rumour_id < b.rumour_id; });
    return rows;
}

std::vector<CountsRow> read_counts(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open counts file " + path.string());
    return parse_counts(in, path.string());
}

}  // namespace stancegp
