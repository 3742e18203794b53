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
#include <string>

#include "stancegp/error.hpp"
#include "stancegp/gpc.hpp"
#include "stancegp/simd.hpp"

namespace stancegp {

namespace {

constexpr int kJitterLevels = 6;

struct SiteUpdate {
    double tau;
    double nu;
};

// Moment matching of N(f | cav_mean, cav_var) * Phi(y f), returned as the site
// natural parameters that reproduce the matched Gaussian. Written so that a
// near-zero cavity variance does not cancel catastrophically.
SiteUpdate match_probit_site(double y, double cav_mean, double cav_var) {
    const double scale = std::sqrt(1.0 + cav_var);
    const double z = y * cav_mean / scale;
    const double r = probit_ratio(z);
    const double alpha = y * r / scale;
    const double beta = r * (z + r) / (1.0 + cav_var);
    const double denom = 1.0 - cav_var * beta;
    return {beta / denom, (alpha + cav_mean * beta) / denom};
}

void check_inputs(const Eigen::MatrixXd& gram, std::span<const double> targets) {
    if (gram.rows() != gram.cols()) throw UsageError("Gram matrix must be square");
    if (targets.empty()) throw UsageError("EP needs at least one training point");
    if (static_cast<std::size_t>(gram.rows()) != targets.size()) {
        throw UsageError("Gram size " + std::to_string(gram.rows()) + " does not match " +
                         std::to_string(targets.size()) + " targets");
    }
    for (double y : targets) {
        if (y != 1.0 && y != -1.0) throw UsageError("targets must be +1 or -1");
    }
}

Eigen::VectorXd column_matvec(const Eigen::MatrixXd& sym, const Eigen::VectorXd& x) {
    // sym is symmetric, so row i equals column i (contiguous in column-major storage).
    const auto n = sym.rows();
    Eigen::VectorXd out(n);
    const std::span<const double> xs(x.data(), static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i) = simd::dot(std::span<const double>(sym.col(i).data(), static_cast<std::size_t>(n)), xs);
    }
    return out;
}

EPApproximation run_ep(const Eigen::MatrixXd& gram, std::span<const double> targets,
                       const EPConfig& cfg, double added_jitter) {
    const auto n = gram.rows();
    Eigen::MatrixXd k = gram;
    if (added_jitter > 0.0) k.diagonal().array() += added_jitter;
    if (Eigen::LLT<Eigen::MatrixXd>(k).info() != Eigen::Success) {
        throw NumericalError("Gram matrix is not positive definite");
    }

    Eigen::VectorXd nu = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd tau = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd sigma = k;
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd col(n);

    EPApproximation approx;
    bool converged = false;
    int sweep = 0;
    while (sweep < cfg.max_sweeps) {
        ++sweep;
        double max_delta = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double s_ii = sigma(i, i);
            const double cav_denom = 1.0 - tau(i) * s_ii;
            // s_ii == 0: the latent is pinned at zero and the site carries no information.
            if (!(s_ii > 0.0) || !(cav_denom > 0.0)) continue;
            const double cav_var = s_ii / cav_denom;
            const double cav_mean = (mu(i) - s_ii * nu(i)) / cav_denom;

            SiteUpdate upd = match_probit_site(targets[static_cast<std::size_t>(i)], cav_mean, cav_var);
            double dtau = upd.tau - tau(i);
            if (!(1.0 + dtau * s_ii > 0.0)) {
                upd.tau = cfg.damping * upd.tau + (1.0 - cfg.damping) * tau(i);
                upd.nu = cfg.damping * upd.nu + (1.0 - cfg.damping) * nu(i);
                upd.tau = std::max(upd.tau, 0.0);
                dtau = upd.tau - tau(i);
                if (!(1.0 + dtau * s_ii > 0.0)) continue;
            }
            if (!std::isfinite(upd.tau) || !std::isfinite(upd.nu)) continue;

            const double dnu = upd.nu - nu(i);
            max_delta = std::max({max_delta, std::abs(dtau), std::abs(dnu)});
            tau(i) = upd.tau;
            nu(i) = upd.nu;

            // Sigma -= c s s^T with s the old column i; mu follows in O(n):
            // mu' = mu + dnu s - c s (s^T nu').
            const double c = dtau / (1.0 + dtau * s_ii);
            col = sigma.col(i);
            const std::span<const double> cs(col.data(), static_cast<std::size_t>(n));
            for (Eigen::Index j = 0; j < n; ++j) {
                const double coef = -c * col(j);
                if (coef == 0.0) continue;
                simd::axpy(coef, cs, std::span<double>(sigma.col(j).data(), static_cast<std::size_t>(n)));
            }
            const double s_nu = simd::dot(cs, std::span<const double>(nu.data(), static_cast<std::size_t>(n)));
            simd::axpy(dnu - c * s_nu, cs, std::span<double>(mu.data(), static_cast<std::size_t>(n)));
        }

        approx = ep_from_sites(k, targets, nu, tau);
        sigma = approx.post_cov;
        mu = approx.post_mean;
        if (max_delta < cfg.tolerance) {
            converged = true;
            break;
        }
    }
    if (sweep == 0) approx = ep_from_sites(k, targets, nu, tau);
    approx.converged = converged;
    approx.sweeps = sweep;
    approx.added_jitter = added_jitter;
    return approx;
}

}  // namespace

void EPConfig::validate() const {
    if (!(tolerance > 0.0)) throw UsageError("EP tolerance must be positive");
    if (max_sweeps < 1) throw UsageError("EP needs at least one sweep");
    if (!(damping > 0.0 && damping <= 1.0)) throw UsageError("EP damping must be in (0, 1]");
}

EPApproximation ep_from_sites(const Eigen::MatrixXd& gram, std::span<const double> targets,
                              const Eigen::VectorXd& site_nu, const Eigen::VectorXd& site_tau) {
    check_inputs(gram, targets);
    const auto n = gram.rows();
    if (site_nu.size() != n || site_tau.size() != n) throw UsageError("site vectors do not match Gram size");
    if ((site_tau.array() < 0.0).any()) throw NumericalError("negative site precision");

    EPApproximation a;
    a.site_nu = site_nu;
    a.site_tau = site_tau;
    a.sqrt_tau = site_tau.array().sqrt();

    // B = I + S^1/2 K S^1/2 has eigenvalues >= 1 whenever K is PSD.
    Eigen::MatrixXd b = a.sqrt_tau.asDiagonal() * gram * a.sqrt_tau.asDiagonal();
    b.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(b);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("Cholesky factorization of I + S^1/2 K S^1/2 failed");
    }
    a.chol = llt.matrixL();
    const Eigen::MatrixXd& chol = a.chol;
    const auto lower = chol.triangularView<Eigen::Lower>();

    // Sigma = K - V^T V with V = L^-1 S^1/2 K
    const Eigen::MatrixXd v = lower.solve(a.sqrt_tau.asDiagonal() * gram);
    a.post_cov = gram;
    a.post_cov.selfadjointView<Eigen::Lower>().rankUpdate(v.transpose(), -1.0);
    a.post_cov.triangularView<Eigen::StrictlyUpper>() = a.post_cov.transpose();
    a.post_mean = column_matvec(a.post_cov, site_nu);

    const Eigen::VectorXd kn = column_matvec(gram, site_nu);
    Eigen::VectorXd tmp = lower.solve(a.sqrt_tau.cwiseProduct(kn));
    tmp = lower.transpose().solve(tmp);
    a.weights = site_nu - a.sqrt_tau.cwiseProduct(tmp);

    // EP estimate of log p(y | X), in a form that stays finite for zero sites.
    double log_z = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s_ii = a.post_cov(i, i);
        const double denom = 1.0 - site_tau(i) * s_ii;
        if (!(denom > 0.0)) {
            log_z = -std::numeric_limits<double>::infinity();
            break;
        }
        const double cav_var = std::max(s_ii, 0.0) / denom;
        const double cav_mean = (a.post_mean(i) - s_ii * site_nu(i)) / denom;
        const double t = site_tau(i);
        const double nv = site_nu(i);
        const double y = targets[static_cast<std::size_t>(i)];
        log_z += log_probit(y * cav_mean / std::sqrt(1.0 + cav_var));
        log_z += 0.5 * std::log1p(t * cav_var);
        log_z += (cav_mean * cav_mean * t - 2.0 * cav_mean * nv - nv * nv * cav_var) /
                 (2.0 * (1.0 + t * cav_var));
    }
    log_z -= a.chol.diagonal().array().log().sum();
    log_z += 0.5 * site_nu.dot(a.post_mean);
    a.log_evidence = log_z;
    return a;
}

EPApproximation ep_fit(const Eigen::MatrixXd& gram, std::span<const double> targets,
                       const EPConfig& cfg) {
    cfg.validate();
    check_inputs(gram, targets);
    const double scale = std::max(gram.diagonal().cwiseAbs().mean(), 1e-12);
    std::string last_error;
    for (int level = 0; level < kJitterLevels; ++level) {
        const double added = level == 0 ? 0.0 : scale * 1e-6 * std::pow(10.0, level - 1);
        try {
            return run_ep(gram, targets, cfg, added);
        } catch (const NumericalError& e) {
            last_error = e.what();
        }
    }
    throw NumericalError("EP failed after jitter escalation: " + last_error);
}

LatentPrediction predict_latent(const EPApproximation& approx, const Eigen::MatrixXd& gram,
                                const Eigen::VectorXd& k_star, double k_ss) {
    const auto n = approx.weights.size();
    if (gram.rows() != n || gram.cols() != n || k_star.size() != n) {
        throw UsageError("predict_latent: dimensions do not match the fitted approximation");
    }
    LatentPrediction lp;
    lp.mean = k_star.dot(approx.weights);
    const Eigen::VectorXd v =
        approx.chol.triangularView<Eigen::Lower>().solve(approx.sqrt_tau.cwiseProduct(k_star));
    double var = k_ss - v.squaredNorm();
    if (var < 0.0) {
        // Cancellation noise scales with the prior variance.
        if (var < -1e-8 * std::max(1.0, k_ss)) {
            throw NumericalError("predictive variance is negative (" + std::to_string(var) + ")");
        }
        var = 0.0;
    }
    lp.variance = var;
    return lp;
}

}  // namespace stancegp
