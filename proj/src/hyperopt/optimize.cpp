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
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "nelder_mead.hpp"
#include "stancegp/error.hpp"
#include "stancegp/hyperopt.hpp"

namespace stancegp {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

// Transformed parameter vector layout:
//   scalar: [log variance]
//   ICM:    [log variance, log kappa_0..D-1, v_0..D-1]
struct Codec {
    bool icm = false;
    std::size_t tasks = 1;

    std::size_t size() const { return icm ? 1 + 2 * tasks : 1; }

    KernelParams decode(std::span<const double> x) const {
        KernelParams p;
        p.data.variance = std::exp(x[0]);
        if (icm) {
            CoregionalizationParams c;
            for (std::size_t d = 0; d < tasks; ++d) {
                c.kappa.push_back(std::exp(x[1 + d]));
                c.v.push_back(x[1 + tasks + d]);
            }
            p.coreg = std::move(c);
        }
        return p;
    }

    std::vector<double> natural(std::span<const double> x) const {
        std::vector<double> out(x.begin(), x.end());
        const std::size_t logs = icm ? 1 + tasks : 1;
        for (std::size_t i = 0; i < logs; ++i) out[i] = std::exp(out[i]);
        return out;
    }

    void bounds(const OptimizerConfig& cfg, std::vector<double>& lo, std::vector<double>& hi) const {
        lo.assign(size(), cfg.log_bounds.lo);
        hi.assign(size(), cfg.log_bounds.hi);
        if (icm) {
            for (std::size_t d = 0; d < tasks; ++d) {
                lo[1 + tasks + d] = cfg.v_bounds.lo;
                hi[1 + tasks + d] = cfg.v_bounds.hi;
            }
        }
    }

    std::vector<double> default_start(const OptimizerConfig& cfg) const {
        std::vector<double> x(size(), 0.0);
        if (icm) {
            for (std::size_t d = 0; d < tasks; ++d) {
                x[1 + tasks + d] = std::clamp(1.0, cfg.v_bounds.lo, cfg.v_bounds.hi);
            }
        }
        for (std::size_t i = 0; i < (icm ? 1 + tasks : 1); ++i) {
            x[i] = std::clamp(0.0, cfg.log_bounds.lo, cfg.log_bounds.hi);
        }
        return x;
    }
};

class Search {
public:
    Search(const BinaryDataset& data, const OptimizerConfig& cfg) : data_(data), cfg_(cfg) {}

    double evaluate(const KernelParams& params, int restart, std::string stage, std::vector<double> natural) {
        TraceEntry entry;
        entry.index = trace_.size();
        entry.restart = restart;
        entry.stage = std::move(stage);
        entry.params = std::move(natural);
        try {
            const FixedFit fit = fit_fixed(data_, params, cfg_.ep);
            entry.log_evidence = fit.approx.log_evidence;
            entry.failed = !std::isfinite(entry.log_evidence);
        } catch (const NumericalError&) {
            entry.failed = true;
        }
        if (entry.failed) entry.log_evidence = -std::numeric_limits<double>::infinity();
        if (!entry.failed && (!have_best_ || entry.log_evidence > best_value_)) {
            have_best_ = true;
            best_value_ = entry.log_evidence;
            best_params_ = params;
        }
        const double value = entry.log_evidence;
        trace_.push_back(std::move(entry));
        return value;
    }

    bool have_best() const { return have_best_; }
    double best_value() const { return best_value_; }
    const KernelParams& best_params() const { return best_params_; }
    std::vector<TraceEntry>& trace() { return trace_; }

private:
    const BinaryDataset& data_;
    const OptimizerConfig& cfg_;
    std::vector<TraceEntry> trace_;
    bool have_best_ = false;
    double best_value_ = -std::numeric_limits<double>::infinity();
    KernelParams best_params_;
};

void run_simplex_stage(const BinaryDataset& data, bool icm, const OptimizerConfig& cfg, Search& search) {
    Codec codec{icm, data.num_tasks};
    std::vector<double> lo;
    std::vector<double> hi;
    codec.bounds(cfg, lo, hi);

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        std::vector<double> x0;
        if (restart == 0) {
            x0 = codec.default_start(cfg);
        } else {
            std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                              static_cast<std::uint32_t>(restart)};
            std::mt19937_64 rng(seq);
            x0.resize(codec.size());
            for (std::size_t i = 0; i < x0.size(); ++i) {
                std::uniform_real_distribution<double> u(lo[i], hi[i]);
                x0[i] = u(rng);
            }
        }
        const auto objective = [&](std::span<const double> x) {
            const double le = search.evaluate(codec.decode(x), restart, "simplex", codec.natural(x));
            return -le;
        };
        detail::NelderMeadOptions opts;
        opts.max_evals = cfg.max_evals;
        opts.tolerance = cfg.tolerance;
        detail::nelder_mead(objective, std::move(x0), lo, hi, opts);
    }
}

void run_ard_stage(const BinaryDataset& data, const OptimizerConfig& cfg, Search& search) {
    KernelParams current = search.best_params();
    double current_value = search.best_value();
    current.data.ard_variances.assign(data.dims, current.data.variance);

    std::vector<bool> active(data.dims, false);
    for (const auto& in : data.inputs) {
        for (std::uint32_t idx : in.x.indices()) active[idx] = true;
    }

    current_value = search.evaluate(current, -1, "ard", {-1.0, current.data.variance});

    const auto at = [&](std::size_t f, double log_a) {
        KernelParams p = current;
        p.data.ard_variances[f] = std::exp(log_a);
        return p;
    };

    for (int pass = 0; pass < cfg.ard_passes; ++pass) {
        for (std::size_t f = 0; f < data.dims; ++f) {
            if (!active[f]) continue;
            const auto value_at = [&](double log_a) {
                return search.evaluate(at(f, log_a), -1, "ard",
                                       {static_cast<double>(f), std::exp(log_a)});
            };
            // Golden-section maximization over the log-variance of feature f.
            double a = cfg.log_bounds.lo;
            double b = cfg.log_bounds.hi;
            double c = b - kInvPhi * (b - a);
            double d = a + kInvPhi * (b - a);
            double fc = value_at(c);
            double fd = value_at(d);
            double best_x = fc >= fd ? c : d;
            double best_v = std::max(fc, fd);
            for (int e = 2; e < cfg.ard_coord_evals; ++e) {
                if (fc >= fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - kInvPhi * (b - a);
                    fc = value_at(c);
                    if (fc > best_v) { best_v = fc; best_x = c; }
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + kInvPhi * (b - a);
                    fd = value_at(d);
                    if (fd > best_v) { best_v = fd; best_x = d; }
                }
            }
            if (best_v > current_value) {
                current.data.ard_variances[f] = std::exp(best_x);
                current_value = best_v;
            }
        }
    }
}

}  // namespace

std::string_view family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::Linear: return "linear";
        case KernelFamily::LinearArd: return "linear-ard";
        case KernelFamily::Icm: return "icm";
        case KernelFamily::IcmArd: return "icm-ard";
    }
    return "?";
}

std::optional<KernelFamily> parse_family(std::string_view name) {
    if (name == "linear") return KernelFamily::Linear;
    if (name == "linear-ard") return KernelFamily::LinearArd;
    if (name == "icm") return KernelFamily::Icm;
    if (name == "icm-ard") return KernelFamily::IcmArd;
    return std::nullopt;
}

void OptimizerConfig::validate() const {
    if (restarts < 1) throw UsageError("optimizer needs at least one restart");
    if (max_evals < 1) throw UsageError("optimizer needs at least one evaluation per restart");
    if (!(log_bounds.lo < log_bounds.hi) || !(v_bounds.lo < v_bounds.hi)) {
        throw UsageError("optimizer bounds must satisfy lo < hi");
    }
    if (!(tolerance > 0.0)) throw UsageError("optimizer tolerance must be positive");
    if (ard_passes < 0 || ard_coord_evals < 2) throw UsageError("invalid ARD search settings");
    ep.validate();
}

void BinaryDataset::validate() const {
    if (inputs.empty()) throw UsageError("binary dataset is empty");
    if (inputs.size() != targets.size()) throw UsageError("inputs and targets differ in length");
    if (num_tasks < 1) throw UsageError("dataset needs at least one task");
    for (const auto& in : inputs) {
        if (in.x.dims() != dims) throw UsageError("input dimension mismatch in dataset");
        if (in.task >= num_tasks) throw UsageError("task index out of range in dataset");
    }
    for (double y : targets) {
        if (y != 1.0 && y != -1.0) throw UsageError("targets must be +1 or -1");
    }
}

TrainingGram build_training_gram(const KernelEvaluator& evaluator) {
    TrainingGram out;
    out.gram = evaluator.gram(0.0);
    out.jitter = default_jitter(out.gram);
    out.gram.diagonal().array() += out.jitter;
    return out;
}

FixedFit fit_fixed(const BinaryDataset& data, const KernelParams& params, const EPConfig& ep) {
    const KernelEvaluator evaluator(data.inputs, params, data.dims);
    FixedFit fit{build_training_gram(evaluator), {}};
    fit.approx = ep_fit(fit.gram.gram, data.targets, ep);
    return fit;
}

OptimizationResult optimize_evidence(const BinaryDataset& data, KernelFamily family,
                                     const OptimizerConfig& cfg) {
    data.validate();
    cfg.validate();
    Search search(data, cfg);
    run_simplex_stage(data, family_is_icm(family), cfg, search);
    if (!search.have_best()) {
        std::ostringstream msg;
        msg << "EP failed at every evaluated hyperparameter set; first failures:";
        const auto& trace = search.trace();
        for (std::size_t i = 0; i < trace.size() && i < 5; ++i) {
            msg << " [";
            for (std::size_t k = 0; k < trace[i].params.size(); ++k) {
                msg << (k ? "," : "") << trace[i].params[k];
            }
            msg << "]";
        }
        throw NumericalError(msg.str());
    }
    if (family_is_ard(family)) run_ard_stage(data, cfg, search);

    OptimizationResult result;
    result.params = search.best_params();
    result.log_evidence = search.best_value();
    result.trace = std::move(search.trace());
    return result;
}

void write_trace_tsv(std::ostream& out, const OptimizationResult& result) {
    out << "index\tstage\trestart\tlog_evidence\tparams\n";
    for (const auto& e : result.trace) {
        out << e.index << '\t' << e.stage << '\t' << e.restart << '\t';
        if (e.failed) {
            out << "nan";
        } else {
            out << e.log_evidence;
        }
        out << '\t';
        for (std::size_t k = 0; k < e.params.size(); ++k) out << (k ? "," : "") << e.params[k];
        out << '\n';
    }
}

}  // namespace stancegp
