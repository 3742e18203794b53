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

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "cli.hpp"
#include "settings.hpp"
#include "stancegp/error.hpp"
#include "stancegp/experiments.hpp"

namespace stancegp::cli {

namespace {

namespace fs = std::filesystem;

// Writes `content` to `path` through a temporary file in the same directory
// and a rename, so a failed run never leaves a partial file behind. An empty
// path means `out`.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
        out.flush();
        return;
    }
    const fs::path target(path);
    if (target.has_parent_path() && !fs::is_directory(target.parent_path())) {
        throw UsageError("output directory " + target.parent_path().string() + " does not exist");
    }
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        f << content;
        f.close();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw DataError("cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw DataError("cannot move output into place at " + target.string());
    }
}

const std::string& require(const Settings& s, const std::string& key, const char* flag) {
    const std::string& v = s.get(key);
    if (v.empty()) throw UsageError(std::string("missing ") + flag + " (setting " + key + ")");
    return v;
}

Corpus load_corpus(const Settings& s) { return read_corpus(require(s, "paths.corpus", "--corpus")); }

Resources load_resources(const Settings& s, bool need_brown) {
    Resources res;
    res.preprocessor = Preprocessor::from_directory(s.resource_dir());
    const std::string& brown = s.get("paths.brown");
    if (!brown.empty()) {
        res.brown = load_brown_lexicon(brown);
        res.brown->add_stem_aliases();
    } else if (need_brown) {
        throw UsageError("Brown features need --brown <lexicon>");
    }
    return res;
}

RunOptions run_options(const Settings& s) {
    RunOptions opts;
    opts.optimizer = s.optimizer();
    opts.ard = s.get_bool("method.ard");
    return opts;
}

KernelFamily family_for(const MethodSpec& m, bool ard) {
    if (m.variant == Variant::Majority) throw UsageError("the Majority method has no model to train");
    if (m.variant == Variant::GpIcm) return ard ? KernelFamily::IcmArd : KernelFamily::Icm;
    return ard ? KernelFamily::LinearArd : KernelFamily::Linear;
}

// ---------------------------------------------------------------------------

std::string cmd_ingest_check(const Settings& s) {
    const Corpus corpus = load_corpus(s);
    std::ostringstream o;
    o << s.header();
    write_counts_tsv(o, corpus);
    return o.str();
}

std::string cmd_train(const Settings& s) {
    const Corpus corpus = load_corpus(s);
    const MethodSpec method = s.method();
    const Resources res = load_resources(s, method.features == FeatureKind::Brown);

    std::vector<TweetRecord> all;
    for (std::size_t r = 0; r < corpus.num_rumours(); ++r) {
        all.insert(all.end(), corpus.records(r).begin(), corpus.records(r).end());
    }
    const auto train = filter_retweets(all, res.preprocessor);
    std::vector<TokenSequence> tokens;
    for (const auto& t : train) tokens.push_back(res.preprocessor(t.text));

    FeatureSpace space;
    std::vector<SparseFeatureVector> xs;
    if (method.features == FeatureKind::Bow) {
        const Vocabulary vocab = build_vocabulary(tokens);
        space = FeatureSpace::from_vocabulary(vocab);
        for (const auto& t : tokens) xs.push_back(featurize_bow(t, vocab));
    } else {
        const BrownLexicon lex = res.brown->restrict_to(tokens);
        space = FeatureSpace::from_lexicon(lex);
        for (const auto& t : tokens) xs.push_back(featurize_brown(t, lex));
    }
    if (space.dims() == 0) throw DataError("the training corpus yields no features");

    std::vector<LabeledExample> examples;
    for (std::size_t i = 0; i < train.size(); ++i) {
        const auto task = corpus.rumour_index(train[i].rumour_id);
        examples.push_back(LabeledExample{std::move(xs[i]), static_cast<std::uint32_t>(*task), train[i].label});
    }
    TrainOptions topts;
    topts.family = family_for(method, s.get_bool("method.ard"));
    topts.optimizer = s.optimizer();
    const OneVsAllModel model = train_ova(examples, std::move(space), corpus.rumours(), topts);

    std::ostringstream o;
    o << s.header();
    save_model(o, model);
    return o.str();
}

std::string cmd_predict(const Settings& s) {
    std::ifstream mf(require(s, "paths.model", "--model"));
    if (!mf) throw DataError("cannot open model file " + s.get("paths.model"));
    const OneVsAllModel model = load_model(mf);
    const Corpus corpus = load_corpus(s);
    const bool brown = model.features.kind == FeatureKind::Brown;
    const Resources res = load_resources(s, brown);

    Vocabulary vocab;
    BrownLexicon lex;
    if (brown) {
        std::vector<std::string> bits;
        for (const auto& n : model.features.names) bits.push_back(n.substr(0, n.find(' ')));
        lex = res.brown->restrict_to_clusters(bits);
    } else {
        for (const auto& n : model.features.names) vocab.add(n);
    }

    std::vector<TaskedInput> queries;
    std::vector<Prediction> preds;
    for (std::size_t r = 0; r < corpus.num_rumours(); ++r) {
        std::uint32_t task = 0;
        if (family_is_icm(model.family)) {
            const auto t = model.task_index(corpus.rumours()[r]);
            if (!t) throw UsageError("rumour '" + corpus.rumours()[r] + "' is not a task of this ICM model");
            task = *t;
        }
        for (const auto& rec : corpus.records(r)) {
            const TokenSequence tokens = res.preprocessor(rec.text);
            queries.push_back(TaskedInput{brown ? featurize_brown(tokens, lex) : featurize_bow(tokens, vocab), task});
            preds.push_back(Prediction{rec.tweet_id, rec.label, StanceLabel::Supporting, {}});
        }
    }
    const auto classified = classify_all(model, queries);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        preds[i].predicted = classified[i].first;
        preds[i].posterior = classified[i].second;
    }
    std::ostringstream o;
    o << s.header();
    write_predictions_tsv(o, preds);
    return o.str();
}

std::string cmd_eval(const Settings& s) {
    const Corpus corpus = load_corpus(s);
    const MethodSpec method = s.method();
    const Resources res = load_resources(s, method.features == FeatureKind::Brown);
    const EvalResult result =
        evaluate(corpus, method, s.mode(), s.get_size("fold.k"), s.get_size("fold.l"), res, run_options(s));
    std::ostringstream o;
    o << s.header();
    write_results_tsv(o, std::span<const EvalResult>(&result, 1));
    return o.str();
}

std::string cmd_sweep(const Settings& s) {
    const Corpus corpus = load_corpus(s);
    const MethodSpec method = s.method();
    const Resources res = load_resources(s, method.features == FeatureKind::Brown);
    const auto ks = s.sweep_values();
    const auto points = run_sweep(corpus, method, ks, s.get_size("fold.l"), res, run_options(s));
    std::ostringstream o;
    o << s.header();
    write_sweep_tsv(o, method, points);
    return o.str();
}

std::string cmd_baseline(const Settings& s, const std::string& fixture) {
    EvalResult result;
    if (!fixture.empty()) {
        if (fixture != "table2") throw UsageError("unknown fixture '" + fixture + "' (available: table2)");
        const std::string& counts = s.get("paths.counts");
        const auto rows = read_counts(counts.empty() ? s.resource_dir() / "table2_counts.tsv" : fs::path(counts));
        result = majority_from_counts(rows);
    } else {
        const Corpus corpus = load_corpus(s);
        const Resources res = load_resources(s, false);
        result = evaluate(corpus, MethodSpec{Variant::Majority, FeatureKind::Bow}, s.mode(), s.get_size("fold.k"),
                          s.get_size("fold.l"), res, run_options(s));
    }
    std::ostringstream o;
    o << s.header();
    write_results_tsv(o, std::span<const EvalResult>(&result, 1));
    o << "# macro_accuracy " << format_fixed(result.macro_accuracy, 3) << '\n';
    return o.str();
}

std::string cmd_ard_report(const Settings& s) {
    const Corpus corpus = load_corpus(s);
    const Resources res = load_resources(s, true);
    const ArdReport report = ard_report(corpus, res, run_options(s), s.get_size("report.k"), s.get_size("fold.l"),
                                        s.get_size("report.top_n"));
    std::ostringstream o;
    o << s.header();
    write_ard_tsv(o, report);
    return o.str();
}

void cmd_synth(const Settings& s, std::ostream& out) {
    const fs::path dir = require(s, "output.dir", "--out-dir");
    if (!fs::is_directory(dir)) throw UsageError("output directory " + dir.string() + " does not exist");
    SyntheticConfig cfg;
    cfg.num_tasks = s.get_size("synth.tasks");
    cfg.tweets_per_task = s.get_size("synth.tweets");
    cfg.plant_marker = s.get_bool("synth.marker");
    cfg.seed = s.seed();
    const SyntheticCorpus syn = make_synthetic(cfg);

    std::ostringstream corpus;
    write_corpus(corpus, syn.corpus);
    std::ostringstream lex;
    for (const auto& e : syn.lexicon_entries) lex << e.bitstring << '\t' << e.word << '\t' << e.count << '\n';
    emit((dir / "corpus.tsv").string(), corpus.str(), out);
    emit((dir / "brown.tsv").string(), lex.str(), out);
    std::ostringstream o;
    o << s.header() << "corpus\t" << (dir / "corpus.tsv").string() << "\nbrown\t" << (dir / "brown.tsv").string() << '\n';
    if (!syn.marker_bitstring.empty()) o << "marker\t" << syn.marker_bitstring << '\n';
    emit(s.get("output.path"), o.str(), out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rumour stance classification with Gaussian processes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", STANCEGP_VERSION);

    std::map<std::string, std::string> flags;
    std::string config_path;
    std::vector<std::string> assignments;
    std::optional<std::uint64_t> seed;
    std::string fixture;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key=value config file");
        sub->add_option("--seed", seed, "random seed recorded in every output");
        sub->add_option("--set", assignments, "override one setting, key=value (repeatable)");
        sub->add_option("-o,--out", flags["output.path"], "output file (default: stdout)");
    };
    const auto opt = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
        sub->add_option(name, flags[key], help);
    };
    const auto with_corpus = [&](CLI::App* sub) { opt(sub, "--corpus", "paths.corpus", "corpus TSV"); };
    const auto with_resources = [&](CLI::App* sub) {
        opt(sub, "--resources", "paths.resources", "directory with stopwords.txt and emoticons.tsv");
        opt(sub, "--brown", "paths.brown", "Brown cluster lexicon (bitstring, word, count)");
    };
    const auto with_method = [&](CLI::App* sub) {
        opt(sub, "--variant", "method.variant", "GP, GPPooled, GPICM or Majority");
        opt(sub, "--features", "method.features", "bow or brown");
    };
    const auto with_folds = [&](CLI::App* sub) {
        opt(sub, "--mode", "fold.mode", "loo or lpo");
        opt(sub, "--k", "fold.k", "target tweets added to training");
        opt(sub, "--l", "fold.l", "first test position within the target rumour");
    };

    auto* ingest = app.add_subcommand("ingest-check", "validate a corpus and report per-rumour label counts");
    common(ingest);
    with_corpus(ingest);

    auto* train = app.add_subcommand("train", "fit a one-vs-all model on a whole corpus and save it");
    common(train);
    with_corpus(train);
    with_resources(train);
    with_method(train);

    auto* predict = app.add_subcommand("predict", "classify a corpus with a saved model");
    common(predict);
    with_corpus(predict);
    with_resources(predict);
    opt(predict, "--model", "paths.model", "model file written by train");

    auto* eval = app.add_subcommand("eval", "evaluate a method over LOO or LPO folds");
    common(eval);
    with_corpus(eval);
    with_resources(eval);
    with_method(eval);
    with_folds(eval);

    auto* sweep = app.add_subcommand("sweep", "macro accuracy against the number of target training tweets");
    common(sweep);
    with_corpus(sweep);
    with_resources(sweep);
    with_method(sweep);
    opt(sweep, "--ks", "sweep.k", "comma-separated k values");
    opt(sweep, "--l", "fold.l", "first test position within the target rumour");

    auto* baseline = app.add_subcommand("baseline", "majority-class baseline");
    common(baseline);
    with_corpus(baseline);
    with_folds(baseline);
    opt(baseline, "--resources", "paths.resources", "directory with stopwords.txt and emoticons.tsv");
    baseline->add_option("--fixture", fixture, "use a bundled label-count fixture instead of a corpus (table2)");
    opt(baseline, "--counts", "paths.counts", "label-count file for --fixture");

    auto* ard = app.add_subcommand("ard-report", "top Brown clusters per label by ARD variance (GPICM, LPO)");
    common(ard);
    with_corpus(ard);
    with_resources(ard);
    opt(ard, "--k", "report.k", "target tweets added to training");
    opt(ard, "--l", "fold.l", "first test position within the target rumour");
    opt(ard, "--top", "report.top_n", "clusters per label");

    auto* synth = app.add_subcommand("synth", "write a seeded synthetic multi-rumour corpus and lexicon");
    common(synth);
    opt(synth, "--out-dir", "output.dir", "directory for corpus.tsv and brown.tsv");
    opt(synth, "--tasks", "synth.tasks", "number of rumours");
    opt(synth, "--tweets", "synth.tweets", "tweets per rumour");
    synth->add_flag("--marker", flags["synth.marker"], "plant a denial-marker cluster");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        Settings s;
        if (!config_path.empty()) s.load_file(config_path);
        for (const auto& [key, value] : flags) {
            if (!value.empty()) s.set(key, value);
        }
        if (!flags["synth.marker"].empty()) s.set("synth.marker", "true");
        for (const auto& a : assignments) s.set_assignment(a);
        if (seed) s.set("seed", std::to_string(*seed));
        const std::string& path = s.get("output.path");

        if (ingest->parsed()) emit(path, cmd_ingest_check(s), out);
        if (train->parsed()) emit(path, cmd_train(s), out);
        if (predict->parsed()) emit(path, cmd_predict(s), out);
        if (eval->parsed()) emit(path, cmd_eval(s), out);
        if (sweep->parsed()) emit(path, cmd_sweep(s), out);
        if (baseline->parsed()) emit(path, cmd_baseline(s, fixture), out);
        if (ard->parsed()) emit(path, cmd_ard_report(s), out);
        if (synth->parsed()) cmd_synth(s, out);
        return 0;
    } catch (const UsageError& e) {
        err << "stancegp: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        err << "stancegp: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "stancegp: " << e.what() << '\n';
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "stancegp: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "stancegp: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace stancegp::cli
