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

#include <span>

#include <Eigen/Dense>

namespace stancegp {

/// Standard normal CDF.
double probit(double z);
/// log(probit(z)), accurate far into the lower tail.
double log_probit(double z);
/// N(z) / Phi(z) (inverse Mills ratio), stable for large negative z.
double probit_ratio(double z);

struct EPConfig {
    /// Stop once no site parameter moved by more than this during a sweep.
    double tolerance = 1e-4;
    int max_sweeps = 100;
    /// Applied when an undamped update would drive a cavity precision negative.
    double damping = 0.5;

    void validate() const;
};

/// Gaussian approximation N(post_mean, post_cov) to p(f | X, y) from EP with a
/// probit likelihood and zero prior mean.
struct EPApproximation {
    Eigen::VectorXd site_nu;
    Eigen::VectorXd site_tau;
    Eigen::VectorXd post_mean;
    Eigen::MatrixXd post_cov;
    double log_evidence = 0.0;

    bool converged = false;  // false: max_sweeps hit, result still usable
    int sweeps = 0;
    /// Diagonal jitter EP had to add on top of the supplied Gram.
    double added_jitter = 0.0;

    // Prediction cache: sqrt(site_tau), chol(I + S^1/2 K S^1/2), and the
    // weights w with E[f*] = k*^T w.
    Eigen::VectorXd sqrt_tau;
    Eigen::MatrixXd chol;
    Eigen::VectorXd weights;
};

struct LatentPrediction {
    double mean = 0.0;
    double variance = 0.0;
};

/// Sequential EP: sites are visited in index order, the posterior is
/// rank-one updated after each site and refactorized from the sites after
/// every sweep. If the factorization fails, EP restarts with escalating
/// diagonal jitter; NumericalError once that is exhausted.
///
/// `targets` holds +1 / -1.
EPApproximation ep_fit(const Eigen::MatrixXd& gram, std::span<const double> targets,
                       const EPConfig& cfg = {});

/// Posterior, evidence and prediction cache for fixed site parameters.
/// Deterministic: the same inputs give bit-identical output, which is what
/// model persistence relies on.
EPApproximation ep_from_sites(const Eigen::MatrixXd& gram, std::span<const double> targets,
                              const Eigen::VectorXd& site_nu, const Eigen::VectorXd& site_tau);

/// Latent predictive moments at a test point given k(x*, X) and k(x*, x*).
/// `gram` is only used to check dimensions against the fitted approximation.
LatentPrediction predict_latent(const EPApproximation& approx, const Eigen::MatrixXd& gram,
                                const Eigen::VectorXd& k_star, double k_ss);

/// p(y* = +1) = Phi(mean / sqrt(1 + variance)).
double predict_prob(const LatentPrediction& lp);

}  // namespace stancegp
