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
#include <fstream>

#include "settings.hpp"
#include "stancegp/error.hpp"

#ifndef STANCEGP_DATA_DIR
#define STANCEGP_DATA_DIR "data"
#endif
#ifndef STANCEGP_VERSION
#define STANCEGP_VERSION "0.0.0"
#endif

namespace stancegp::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
    T out{};
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size() || v.empty()) {
        throw UsageError("setting " + key + ": '" + v + "' is not a valid number");
    }
    return out;
}

bool is_output_key(const std::string& key) { return key == "seed" || key.rfind("output.", 0) == 0; }

}  // namespace

Settings::Settings() {
    const OptimizerConfig opt;
    values_ = {
        {"seed", "0"},
        {"paths.corpus", ""},
        {"paths.brown", ""},
        {"paths.resources", STANCEGP_DATA_DIR},
        {"paths.counts", ""},
        {"paths.model", ""},
        {"output.path", ""},
        {"method.variant", "GPPooled"},
        {"method.features", "bow"},
        {"method.ard", "false"},
        {"fold.mode", "loo"},
        {"fold.k", "0"},
        {"fold.l", std::to_string(kDefaultHoldoutOffset)},
        {"sweep.k", "0,10,20,30,40,50"},
        {"report.top_n", "5"},
        {"report.k", "10"},
        {"synth.tasks", "3"},
        {"synth.tweets", "80"},
        {"synth.marker", "false"},
        {"output.dir", ""},
        {"optimizer.restarts", std::to_string(opt.restarts)},
        {"optimizer.max_evals", std::to_string(opt.max_evals)},
        {"optimizer.tolerance", "0.001"},
        {"optimizer.log_lo", "-4"},
        {"optimizer.log_hi", "4"},
        {"optimizer.v_lo", "-3"},
        {"optimizer.v_hi", "3"},
        {"optimizer.ard_passes", std::to_string(opt.ard_passes)},
        {"optimizer.ard_coord_evals", std::to_string(opt.ard_coord_evals)},
        {"ep.tolerance", "0.0001"},
        {"ep.max_sweeps", std::to_string(opt.ep.max_sweeps)},
        {"ep.damping", "0.5"},
    };
}

void Settings::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        try {
            set(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
        } catch (const UsageError& e) {
            throw UsageError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void Settings::set(const std::string& key, const std::string& value) {
    const auto it = values_.find(key);
    if (it == values_.end()) throw UsageError("unknown setting '" + key + "'");
    it->second = value;
}

void Settings::set_assignment(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw UsageError("expected key=value, got '" + assignment + "'");
    set(trim(std::string_view(assignment).substr(0, eq)), trim(std::string_view(assignment).substr(eq + 1)));
}

const std::string& Settings::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw UsageError("unknown setting '" + key + "'");
    return it->second;
}

std::size_t Settings::get_size(const std::string& key) const { return parse_number<std::size_t>(key, get(key)); }
int Settings::get_int(const std::string& key) const { return parse_number<int>(key, get(key)); }
double Settings::get_double(const std::string& key) const { return parse_number<double>(key, get(key)); }

bool Settings::get_bool(const std::string& key) const {
    const std::string& v = get(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw UsageError("setting " + key + ": expected true or false, got '" + v + "'");
}

std::uint64_t Settings::seed() const { return parse_number<std::uint64_t>("seed", get("seed")); }

std::string Settings::hash() const {
    std::uint64_t h = 14695981039346656037ULL;
    for (const auto& [k, v] : values_) {
        if (is_output_key(k)) continue;
        for (unsigned char c : k + "=" + v + "\n") {
            h ^= c;
            h *= 1099511628211ULL;
        }
    }
    char buf[17];
    const auto r = std::to_chars(buf, buf + 16, h, 16);
    return std::string(16 - static_cast<std::size_t>(r.ptr - buf), '0') + std::string(buf, r.ptr);
}

std::string Settings::header() const {
    return "# stancegp " STANCEGP_VERSION " config=" + hash() + " seed=" + get("seed") + "\n";
}

MethodSpec Settings::method() const {
    const auto variant = parse_variant(get("method.variant"));
    if (!variant) throw UsageError("method.variant must be GP, GPPooled, GPICM or Majority");
    const auto features = parse_feature_kind(get("method.features"));
    if (!features) throw UsageError("method.features must be bow or brown");
    return MethodSpec{*variant, *features};
}

EvalMode Settings::mode() const {
    const auto mode = parse_mode(get("fold.mode"));
    if (!mode) throw UsageError("fold.mode must be loo or lpo");
    return *mode;
}

OptimizerConfig Settings::optimizer() const {
    OptimizerConfig cfg;
    cfg.restarts = get_int("optimizer.restarts");
    cfg.max_evals = get_int("optimizer.max_evals");
    cfg.tolerance = get_double("optimizer.tolerance");
    cfg.log_bounds = {get_double("optimizer.log_lo"), get_double("optimizer.log_hi")};
    cfg.v_bounds = {get_double("optimizer.v_lo"), get_double("optimizer.v_hi")};
    cfg.ard_passes = get_int("optimizer.ard_passes");
    cfg.ard_coord_evals = get_int("optimizer.ard_coord_evals");
    cfg.ep.tolerance = get_double("ep.tolerance");
    cfg.ep.max_sweeps = get_int("ep.max_sweeps");
    cfg.ep.damping = get_double("ep.damping");
    cfg.seed = seed();
    cfg.validate();
    return cfg;
}

std::vector<std::size_t> Settings::sweep_values() const {
    std::vector<std::size_t> out;
    std::string_view rest = get("sweep.k");
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string item = trim(rest.substr(0, comma));
        out.push_back(parse_number<std::size_t>("sweep.k", item));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    if (out.empty()) throw UsageError("sweep.k lists no values");
    return out;
}

std::filesystem::path Settings::resource_dir() const { return get("paths.resources"); }

}  // namespace stancegp::cli
