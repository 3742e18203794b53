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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "stancegp/experiments.hpp"

using namespace stancegp;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "stancegp");
    std::ostringstream out, err;
    Result r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("stancegp-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    fs::path operator/(const std::string& name) const { return path_ / name; }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void write_file(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

std::string strip_comments(const std::string& s) {
    std::istringstream in(s);
    std::string out, line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        out += line + '\n';
    }
    return out;
}

const std::vector<std::string> kQuick = {"--set", "optimizer.restarts=1", "--set", "optimizer.max_evals=20"};

}  // namespace

TEST_CASE("baseline fixture") {
    const auto r = run({"baseline", "--fixture", "table2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# macro_accuracy 0.677\n") != std::string::npos);
    CHECK(r.out.find("Majority\tbow\tloo\t0\thospital\t1415\t0.562544") != std::string::npos);
    CHECK(r.out.find("Majority\tbow\tloo\t0\tmcdonalds\t190\t0.931579") != std::string::npos);
    CHECK(r.out.rfind("# stancegp ", 0) == 0);
    CHECK(r.out.find("seed=0") != std::string::npos);

    // The seed is recorded but does not change the configuration hash.
    const auto seeded = run({"baseline", "--fixture", "table2", "--seed", "7"});
    const auto config_of = [](const std::string& s) { return s.substr(0, s.find(" seed=")); };
    CHECK(config_of(seeded.out) == config_of(r.out));
    CHECK(seeded.out.find("seed=7") != std::string::npos);
    const auto other = run({"baseline", "--fixture", "table2", "--set", "fold.l=40"});
    CHECK(config_of(other.out) != config_of(r.out));
}

TEST_CASE("exit codes") {
    TempDir tmp;
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"baseline", "--bogus"}).code == 1);
    CHECK(run({"baseline", "--fixture", "table9"}).code == 1);
    CHECK(run({"baseline", "--fixture", "table2", "--set", "no.such=1"}).code == 1);
    CHECK(run({"eval", "--corpus", (tmp / "missing.tsv").string()}).code == 2);

    write_file(tmp / "bad.tsv", "t1\tzoo\t0\tsupport\tok\nt2\tzoo\t1\tsarcasm\tbad\n");
    const auto bad = run({"ingest-check", "--corpus", (tmp / "bad.tsv").string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("bad.tsv:2") != std::string::npos);

    write_file(tmp / "ok.tsv", "t1\tzoo\t0\tsupport\tlions\nt2\tbank\t0\tdeny\tarmy\n");
    CHECK(run({"eval", "--corpus", (tmp / "ok.tsv").string(), "--variant", "GPICM", "--mode", "loo"}).code == 1);
    CHECK(run({"eval", "--corpus", (tmp / "ok.tsv").string(), "--features", "brown"}).code == 1);
    CHECK(run({"eval", "--corpus", (tmp / "ok.tsv").string(), "--mode", "lpo", "--k", "1", "--l", "50"}).code == 2);
}

TEST_CASE("ingest-check reports label counts") {
    TempDir tmp;
    std::ostringstream corpus;
    std::size_t id = 0;
    const auto add = [&](const char* label, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i, ++id) corpus << "z" << id << "\tzoo\t" << id << '\t' << label << "\ttext " << id << '\n';
    };
    add("support", 616);
    add("deny", 129);
    add("question", 99);
    write_file(tmp / "zoo.tsv", corpus.str());
    const auto r = run({"ingest-check", "--corpus", (tmp / "zoo.tsv").string()});
    REQUIRE(r.code == 0);
    CHECK(strip_comments(r.out) == "rumour_id\tsupport\tdeny\tquestion\ttotal\nzoo\t616\t129\t99\t844\n");
}

TEST_CASE("outputs are written atomically") {
    TempDir tmp;
    const fs::path out = tmp / "result.tsv";
    write_file(out, "previous\n");
    write_file(tmp / "bad.tsv", "only\tfour\tfields\there\n");
    CHECK(run({"ingest-check", "--corpus", (tmp / "bad.tsv").string(), "-o", out.string()}).code == 2);
    CHECK(slurp(out) == "previous\n");

    CHECK(run({"baseline", "--fixture", "table2", "-o", out.string()}).code == 0);
    CHECK(slurp(out).find("# macro_accuracy 0.677") != std::string::npos);
    CHECK(run({"baseline", "--fixture", "table2", "-o", (tmp / "nope" / "x.tsv").string()}).code == 1);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(tmp.path())) files += e.is_regular_file();
    CHECK(files == 2);  // no temporaries left behind
}

TEST_CASE("synth, train and predict round trip") {
    TempDir tmp;
    const auto syn = run({"synth", "--out-dir", tmp.path().string(), "--tweets", "30", "--seed", "3"});
    REQUIRE(syn.code == 0);
    const fs::path corpus = tmp / "corpus.tsv";
    const fs::path brown = tmp / "brown.tsv";
    REQUIRE(fs::exists(corpus));
    REQUIRE(fs::exists(brown));

    for (const std::string features : {"bow", "brown"}) {
        CAPTURE(features);
        const fs::path model = tmp / ("model-" + features + ".txt");
        std::vector<std::string> train = {"train", "--corpus", corpus.string(), "--brown", brown.string(),
                                          "--variant", "GPICM", "--features", features, "-o", model.string()};
        train.insert(train.end(), kQuick.begin(), kQuick.end());
        const auto t = run(train);
        REQUIRE_MESSAGE(t.code == 0, t.err);

        const auto p = run({"predict", "--corpus", corpus.string(), "--brown", brown.string(), "--model", model.string()});
        REQUIRE_MESSAGE(p.code == 0, p.err);
        const auto again = run({"predict", "--corpus", corpus.string(), "--brown", brown.string(), "--model", model.string()});
        CHECK(again.out == p.out);

        // Same predictions in-process from the saved model.
        std::ifstream mf(model);
        const OneVsAllModel m = load_model(mf);
        const Corpus c = read_corpus(corpus);
        const Preprocessor pre = Preprocessor::from_directory(STANCEGP_DATA_DIR);
        BrownLexicon lex = load_brown_lexicon(brown);
        lex.add_stem_aliases();
        BrownLexicon sub;
        Vocabulary vocab;
        if (features == "brown") {
            std::vector<std::string> bits;
            for (const auto& n : m.features.names) bits.push_back(n.substr(0, n.find(' ')));
            sub = lex.restrict_to_clusters(bits);
        } else {
            for (const auto& n : m.features.names) vocab.add(n);
        }
        std::vector<TaskedInput> xs;
        std::vector<Prediction> preds;
        for (std::size_t r = 0; r < c.num_rumours(); ++r) {
            for (const auto& rec : c.records(r)) {
                const auto tokens = pre(rec.text);
                xs.push_back({features == "bow" ? featurize_bow(tokens, vocab) : featurize_brown(tokens, sub), *m.task_index(c.rumours()[r])});
                preds.push_back({rec.tweet_id, rec.label, {}, {}});
            }
        }
        const auto classified = classify_all(m, xs);

        // And the same as training in-process with the settings the CLI used.
        std::vector<TweetRecord> all;
        for (std::size_t r = 0; r < c.num_rumours(); ++r) all.insert(all.end(), c.records(r).begin(), c.records(r).end());
        const auto kept = filter_retweets(all, pre);
        std::vector<TokenSequence> tokens;
        for (const auto& t : kept) tokens.push_back(pre(t.text));
        FeatureSpace space;
        std::vector<LabeledExample> ex;
        const BrownLexicon fit_lex = lex.restrict_to(tokens);
        const Vocabulary fit_vocab = build_vocabulary(tokens);
        space = features == "bow" ? FeatureSpace::from_vocabulary(fit_vocab) : FeatureSpace::from_lexicon(fit_lex);
        for (std::size_t i = 0; i < kept.size(); ++i) {
            ex.push_back({features == "bow" ? featurize_bow(tokens[i], fit_vocab) : featurize_brown(tokens[i], fit_lex),
                          static_cast<std::uint32_t>(*c.rumour_index(kept[i].rumour_id)), kept[i].label});
        }
        TrainOptions topts;
        topts.family = KernelFamily::Icm;
        topts.optimizer.restarts = 1;
        topts.optimizer.max_evals = 20;
        const auto fresh = train_ova(ex, space, c.rumours(), topts);
        const auto in_memory = classify_all(fresh, xs);
        for (std::size_t i = 0; i < xs.size(); ++i) CHECK(in_memory[i].second.probs == classified[i].second.probs);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < preds.size(); ++i) {
            preds[i].predicted = classified[i].first;
            preds[i].posterior = classified[i].second;
            correct += preds[i].predicted == preds[i].gold;
        }
        std::ostringstream expected;
        write_predictions_tsv(expected, preds);
        CHECK(strip_comments(p.out) == expected.str());
        CHECK(correct * 2 > preds.size());

        // A model applied to a corpus with an unseen rumour is refused.
        write_file(tmp / "other.tsv", "x1\tunseen\t0\tsupport\tzoo\n");
        CHECK(run({"predict", "--corpus", (tmp / "other.tsv").string(), "--brown", brown.string(), "--model", model.string()}).code == 1);
    }
}

TEST_CASE("eval and sweep on a synthetic corpus") {
    TempDir tmp;
    REQUIRE(run({"synth", "--out-dir", tmp.path().string(), "--tweets", "30", "--seed", "4"}).code == 0);
    const std::string corpus = (tmp / "corpus.tsv").string();
    std::vector<std::string> eval = {"eval", "--corpus", corpus, "--variant", "GPPooled", "--mode", "lpo", "--k", "0", "--l", "15"};
    eval.insert(eval.end(), kQuick.begin(), kQuick.end());
    const auto e = run(eval);
    REQUIRE_MESSAGE(e.code == 0, e.err);
    CHECK(e.out.find("GPPooled\tbow\tlpo\t0\tmacro\t45\t") != std::string::npos);

    std::vector<std::string> sweep = {"sweep", "--corpus", corpus, "--variant", "GPPooled", "--ks", "0,5", "--l", "15"};
    sweep.insert(sweep.end(), kQuick.begin(), kQuick.end());
    const auto s = run(sweep);
    REQUIRE_MESSAGE(s.code == 0, s.err);
    const std::string body = strip_comments(s.out);
    CHECK(std::count(body.begin(), body.end(), '\n') == 3);
    // k = 0 of the sweep is the LPO k = 0 evaluation.
    const std::string macro = e.out.substr(e.out.rfind('\t') + 1);
    CHECK(body.find("GPPooled\tbow\t0\t" + macro) != std::string::npos);

    write_file(tmp / "run.conf", "# test\nmethod.variant = Majority\nfold.mode = loo\n");
    const auto b = run({"baseline", "--corpus", corpus, "--config", (tmp / "run.conf").string()});
    CHECK(b.code == 0);
    CHECK(b.out.find("# macro_accuracy ") != std::string::npos);
}
