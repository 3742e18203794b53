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

#include <charconv>
#include <ostream>

#include "stancegp/experiments.hpp"

namespace stancegp {

std::string format_fixed(double v, int digits) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, r.ptr);
}

void write_results_tsv(std::ostream& out, std::span<const EvalResult> results, bool header) {
    if (header) out << "method\tfeatures\tmode\tk\trumour_id\tn_test\taccuracy\n";
    for (const auto& res : results) {
        const auto prefix = [&](std::ostream& o) -> std::ostream& {
            return o << variant_name(res.method.variant) << '\t' << feature_kind_name(res.method.features) << '\t'
                     << mode_name(res.mode) << '\t' << res.k << '\t';
        };
        std::size_t total = 0;
        for (const auto& f : res.folds) {
            prefix(out) << f.rumour_id << '\t' << f.n_test << '\t' << format_fixed(f.accuracy, 6) << '\n';
            total += f.n_test;
        }
        prefix(out) << "macro\t" << total << '\t' << format_fixed(res.macro_accuracy, 6) << '\n';
    }
}

void write_sweep_tsv(std::ostream& out, const MethodSpec& method, std::span<const SweepPoint> points, bool header) {
    if (header) out << "method\tfeatures\tk\tmacro_accuracy\n";
    for (const auto& p : points) {
        out << variant_name(method.variant) << '\t' << feature_kind_name(method.features) << '\t' << p.k << '\t'
            << format_fixed(p.macro_accuracy, 6) << '\n';
    }
}

void write_ard_tsv(std::ostream& out, const ArdReport& report) {
    out << "rank";
    for (StanceLabel c : kAllLabels) out << '\t' << label_name(c) << "_word\t" << label_name(c) << "_cluster";
    out << '\n';
    std::size_t rows = 0;
    for (const auto& col : report) rows = std::max(rows, col.size());
    for (std::size_t i = 0; i < rows; ++i) {
        out << i + 1;
        for (const auto& col : report) {
            if (i < col.size()) {
                out << '\t' << col[i].word << '\t' << col[i].bitstring;
            } else {
                out << "\t\t";
            }
        }
        out << '\n';
    }
}

void write_predictions_tsv(std::ostream& out, std::span<const Prediction> predictions) {
    for (const auto& p : predictions) {
        out << p.tweet_id << '\t' << label_name(p.predicted);
        for (double prob : p.posterior.probs) out << '\t' << format_fixed(prob, 6);
        out << '\n';
    }
}

void write_counts_tsv(std::ostream& out, const Corpus& corpus) {
    out << "rumour_id\tsupport\tdeny\tquestion\ttotal\n";
    for (std::size_t r = 0; r < corpus.num_rumours(); ++r) {
        const LabelCounts c = corpus.label_counts(r);
        out << corpus.rumours()[r] << '\t' << c[0] << '\t' << c[1] << '\t' << c[2] << '\t' << c[0] + c[1] + c[2]
            << '\n';
    }
}

}  // namespace stancegp
