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
#include <istream>
#include <ostream>
#include <sstream>

#include "stancegp/error.hpp"
#include "stancegp/multiclass.hpp"

namespace stancegp {

namespace {

constexpr int kFormatVersion = 1;

std::string fmt(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

void write_row(std::ostream& out, std::string_view key, std::span<const double> values) {
    out << key << ' ' << values.size();
    for (double v : values) out << ' ' << fmt(v);
    out << '\n';
}

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::string line() {
        std::string s;
        if (!std::getline(in_, s)) fail("unexpected end of model file");
        ++line_no_;
        if (!s.empty() && s.back() == '\r') s.pop_back();
        return s;
    }

    std::vector<std::string> fields(std::string_view expected_key) {
        std::istringstream ss(line());
        std::vector<std::string> out;
        for (std::string f; ss >> f;) out.push_back(f);
        if (out.empty() || out[0] != expected_key) fail("expected '" + std::string(expected_key) + "'");
        return out;
    }

    std::string value(std::string_view key) {
        auto f = fields(key);
        if (f.size() != 2) fail("expected one value after '" + std::string(key) + "'");
        return f[1];
    }

    std::size_t count(std::string_view s) {
        std::size_t v = 0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail("bad count '" + std::string(s) + "'");
        return v;
    }

    double number(std::string_view s) {
        double v = 0.0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail("bad number '" + std::string(s) + "'");
        return v;
    }

    std::vector<double> row(std::string_view key) {
        auto f = fields(key);
        if (f.size() < 2) fail("missing length");
        const std::size_t n = count(f[1]);
        if (f.size() != n + 2) fail("row '" + std::string(key) + "' has the wrong length");
        std::vector<double> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(number(f[i + 2]));
        return out;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw DataError("model file line " + std::to_string(line_no_) + ": " + what);
    }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

}  // namespace

void save_model(std::ostream& out, const OneVsAllModel& model) {
    char hash[17];
    const auto r = std::to_chars(hash, hash + 16, model.features.hash(), 16);
    out << "stancegp-model\n";
    out << "format_version " << kFormatVersion << '\n';
    out << "family " << family_name(model.family) << '\n';
    out << "feature_kind " << feature_kind_name(model.features.kind) << '\n';
    out << "feature_hash " << std::string_view(hash, r.ptr) << '\n';
    out << "seed " << model.seed << '\n';

    out << "features " << model.features.dims() << '\n';
    for (const auto& n : model.features.names) out << n << '\n';
    out << "tasks " << model.tasks.size() << '\n';
    for (const auto& t : model.tasks) out << t << '\n';

    out << "inputs " << model.inputs.size() << '\n';
    for (const auto& in : model.inputs) {
        out << in.task << ' ' << in.x.nnz();
        for (std::size_t k = 0; k < in.x.nnz(); ++k) {
            out << ' ' << in.x.indices()[k] << ':' << fmt(in.x.values()[k]);
        }
        out << '\n';
    }
    out << "labels " << model.labels.size();
    for (StanceLabel l : model.labels) out << ' ' << label_name(l);
    out << '\n';

    for (StanceLabel c : kAllLabels) {
        const BinaryModel& bm = model.models[label_code(c)];
        out << "model " << label_name(c) << '\n';
        out << "variance " << fmt(bm.params.data.variance) << '\n';
        write_row(out, "ard", bm.params.data.ard_variances);
        if (bm.params.coreg) {
            write_row(out, "kappa", bm.params.coreg->kappa);
            write_row(out, "v", bm.params.coreg->v);
        } else {
            out << "kappa 0\nv 0\n";
        }
        out << "jitter " << fmt(bm.gram.jitter) << '\n';
        out << "extra_jitter " << fmt(bm.approx.added_jitter) << '\n';
        write_row(out, "site_nu", std::span<const double>(bm.approx.site_nu.data(), bm.approx.site_nu.size()));
        write_row(out, "site_tau", std::span<const double>(bm.approx.site_tau.data(), bm.approx.site_tau.size()));
    }
    out << "end\n";
}

OneVsAllModel load_model(std::istream& in) {
    Reader rd(in);
    std::string magic = rd.line();
    while (!magic.empty() && magic[0] == '#') magic = rd.line();
    if (magic != "stancegp-model") rd.fail("not a stancegp model file");
    if (rd.value("format_version") != std::to_string(kFormatVersion)) rd.fail("unsupported format version");

    OneVsAllModel model;
    const auto family = parse_family(rd.value("family"));
    if (!family) rd.fail("unknown kernel family");
    model.family = *family;
    const auto kind = parse_feature_kind(rd.value("feature_kind"));
    if (!kind) rd.fail("unknown feature kind");
    model.features.kind = *kind;
    const std::string stored_hash = rd.value("feature_hash");
    {
        const std::string s = rd.value("seed");
        const auto r = std::from_chars(s.data(), s.data() + s.size(), model.seed);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size()) rd.fail("bad seed");
    }

    const std::size_t dims = rd.count(rd.value("features"));
    for (std::size_t i = 0; i < dims; ++i) model.features.names.push_back(rd.line());
    {
        char hash[17];
        const auto r = std::to_chars(hash, hash + 16, model.features.hash(), 16);
        if (stored_hash != std::string_view(hash, r.ptr)) rd.fail("feature-space hash mismatch");
    }
    const std::size_t num_tasks = rd.count(rd.value("tasks"));
    if (num_tasks == 0) rd.fail("model needs at least one task");
    for (std::size_t i = 0; i < num_tasks; ++i) model.tasks.push_back(rd.line());

    const std::size_t n = rd.count(rd.value("inputs"));
    for (std::size_t i = 0; i < n; ++i) {
        std::istringstream ss(rd.line());
        std::string tok;
        TaskedInput ti;
        if (!(ss >> tok)) rd.fail("missing task");
        ti.task = static_cast<std::uint32_t>(rd.count(tok));
        if (ti.task >= num_tasks) rd.fail("task index out of range");
        if (!(ss >> tok)) rd.fail("missing nnz");
        const std::size_t nnz = rd.count(tok);
        std::vector<std::pair<std::uint32_t, double>> pairs;
        for (std::size_t k = 0; k < nnz; ++k) {
            if (!(ss >> tok)) rd.fail("too few entries");
            const auto colon = tok.find(':');
            if (colon == std::string::npos) rd.fail("entry without ':'");
            pairs.emplace_back(static_cast<std::uint32_t>(rd.count(std::string_view(tok).substr(0, colon))),
                               rd.number(std::string_view(tok).substr(colon + 1)));
        }
        if (ss >> tok) rd.fail("too many entries");
        try {
            ti.x = SparseFeatureVector::from_pairs(dims, pairs);
        } catch (const DataError& e) {
            rd.fail(e.what());
        }
        model.inputs.push_back(std::move(ti));
    }
    {
        auto f = rd.fields("labels");
        if (f.size() < 2 || rd.count(f[1]) != n || f.size() != n + 2) rd.fail("label count mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            const auto l = parse_label(f[i + 2]);
            if (!l) rd.fail("unknown label '" + f[i + 2] + "'");
            model.labels.push_back(*l);
        }
    }

    for (StanceLabel c : kAllLabels) {
        if (rd.value("model") != label_name(c)) rd.fail("models out of order");
        BinaryModel& bm = model.models[label_code(c)];
        bm.params.data.variance = rd.number(rd.value("variance"));
        bm.params.data.ard_variances = rd.row("ard");
        auto kappa = rd.row("kappa");
        auto v = rd.row("v");
        if (family_is_icm(model.family)) {
            bm.params.coreg = CoregionalizationParams{std::move(kappa), std::move(v)};
        } else if (!kappa.empty() || !v.empty()) {
            rd.fail("coregionalization parameters on a non-ICM model");
        }
        const double jitter = rd.number(rd.value("jitter"));
        const double extra = rd.number(rd.value("extra_jitter"));
        const auto nu = rd.row("site_nu");
        const auto tau = rd.row("site_tau");
        if (nu.size() != n || tau.size() != n) rd.fail("site parameter count mismatch");

        for (StanceLabel l : model.labels) bm.targets.push_back(l == c ? 1.0 : -1.0);
        try {
            const KernelEvaluator eval(model.inputs, bm.params, dims);
            bm.gram = build_training_gram(eval);
        } catch (const UsageError& e) {
            rd.fail(e.what());
        }
        if (bm.gram.jitter != jitter) rd.fail("stored jitter does not match the rebuilt Gram");
        Eigen::MatrixXd k = bm.gram.gram;
        if (extra > 0.0) k.diagonal().array() += extra;
        bm.approx = ep_from_sites(k, bm.targets, Eigen::Map<const Eigen::VectorXd>(nu.data(), n),
                                  Eigen::Map<const Eigen::VectorXd>(tau.data(), n));
        bm.approx.added_jitter = extra;
        bm.approx.converged = true;
    }
    if (rd.line() != "end") rd.fail("expected 'end'");
    return model;
}

}  // namespace stancegp
