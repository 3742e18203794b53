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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stancegp/experiments.hpp"

namespace stancegp::cli {

/// Flat key=value run configuration. Keys carry a section prefix
/// ("method.variant", "fold.k", ...); unknown keys are usage errors.
class Settings {
public:
    Settings();

    /// Reads "key = value" lines; blank lines and '#' comments are skipped.
    void load_file(const std::filesystem::path& path);
    void set(const std::string& key, const std::string& value);
    /// "key=value".
    void set_assignment(const std::string& assignment);

    const std::string& get(const std::string& key) const;
    std::size_t get_size(const std::string& key) const;
    int get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::uint64_t seed() const;

    /// FNV-1a over the sorted key=value lines, skipping the seed and output
    /// locations, which the artifact header records separately.
    std::string hash() const;
    std::string header() const;

    MethodSpec method() const;
    EvalMode mode() const;
    OptimizerConfig optimizer() const;
    std::vector<std::size_t> sweep_values() const;
    std::filesystem::path resource_dir() const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace stancegp::cli
