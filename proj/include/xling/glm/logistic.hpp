#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xling/error.hpp"
#include "xling/glm/coefficients.hpp"
#include "xling/glm/design.hpp"

namespace xling::glm {

struct FitOptions {
    double tolerance = 1e-8;   // on max |delta beta|
    int max_iterations = 100;
    int max_halvings = 40;
    double separation_bound = 15.0;  // |beta| above this flags separation
};

struct FitResult {
    std::vector<std::string> names;
    Eigen::VectorXd beta;
    Eigen::MatrixXd vcov;  // inverse Fisher information at beta
    double log_likelihood = 0.0;
    std::vector<double> log_likelihood_trace;  // one entry per accepted iterate, starting at beta = 0
    int iterations = 0;
    bool converged = false;
    bool separation = false;
    std::vector<std::string> warnings;
    DesignLayout layout;
    std::size_t observations = 0;

    // Estimates with Wald statistics; standard errors are NaN unless converged.
    CoefficientTable coefficients;
};

inline double logistic(double eta) {
    if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

// log(1 + exp(eta)) without overflow.
inline double log1p_exp(double eta) { return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

inline double log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = x * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y[i] * eta[i] - log1p_exp(eta[i]);
    return ll;
}

inline Eigen::VectorXd fitted_probabilities(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
    return (x * beta).unaryExpr([](double e) { return logistic(e); });
}

// Gradient of the log-likelihood: X'(y - p).
inline Eigen::VectorXd score(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
    return x.transpose() * (y - fitted_probabilities(x, beta));
}

// Observed (= expected, for the canonical link) Fisher information X'WX.
inline Eigen::MatrixXd fisher_information(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd p = fitted_probabilities(x, beta);
    const Eigen::VectorXd w = p.array() * (1.0 - p.array());
    return x.transpose() * w.asDiagonal() * x;
}

// Columns of x that are linear combinations of earlier-pivoted columns.
inline std::vector<std::string> dependent_columns(const Eigen::MatrixXd& x, const std::vector<std::string>& names) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    std::vector<std::string> out;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = qr.rank(); k < x.cols(); ++k) out.push_back(names[static_cast<std::size_t>(perm[k])]);
    return out;
}

namespace detail {

[[noreturn]] inline void throw_rank_deficient(std::vector<std::string> dep) {
    std::string msg = "design is rank deficient; dependent columns:";
    for (const auto& d : dep) msg += " '" + d + "'";
    throw RankDeficiency(msg, std::move(dep));
}

} // namespace detail

// Two-sided normal p-values from the inverse information. Requires a converged fit.
inline CoefficientTable wald_stats(const FitResult& fit) {
    if (!fit.converged) throw NotConverged("Wald statistics need a converged fit");
    CoefficientTable table;
    for (std::size_t j = 0; j < fit.names.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        Coefficient c;
        c.term = fit.names[j];
        c.estimate = fit.beta[jj];
        c.std_error = std::sqrt(fit.vcov(jj, jj));
        c.z = c.estimate == 0.0 ? 0.0 : c.estimate / c.std_error;
        c.p_value = std::erfc(std::abs(c.z) / std::sqrt(2.0));
        table.push_back(std::move(c));
    }
    return table;
}

// Maximum likelihood for the logit link by iteratively reweighted least
// squares (Newton steps), halving a step whenever it lowers the likelihood.
inline FitResult fit_logistic(const DesignMatrix& design, const FitOptions& opt = {}) {
    const Eigen::MatrixXd& x = design.x;
    const Eigen::VectorXd& y = design.y;
    if (x.rows() == 0) throw DataError("cannot fit a design with no rows");
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y[i] != 0.0 && y[i] != 1.0) throw DataError("response must be 0 or 1", static_cast<std::size_t>(i) + 1);

    const auto names = design.names();
    if (auto dep = dependent_columns(x, names); !dep.empty()) detail::throw_rank_deficient(std::move(dep));

    FitResult fit;
    fit.names = names;
    fit.layout = design.layout;
    fit.observations = static_cast<std::size_t>(x.rows());
    fit.beta = Eigen::VectorXd::Zero(x.cols());
    fit.log_likelihood = log_likelihood(x, y, fit.beta);
    fit.log_likelihood_trace.push_back(fit.log_likelihood);

    double last_change = 0.0;
    for (int it = 1; it <= opt.max_iterations; ++it) {
        const Eigen::MatrixXd info = fisher_information(x, fit.beta);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
        const double scale = info.diagonal().cwiseAbs().maxCoeff();
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
            ldlt.vectorD().minCoeff() <= 1e-14 * std::max(scale, 1.0)) {
            // X has full rank, so only vanishing weights (separation) get here.
            fit.warnings.push_back("weighted normal system became singular at iteration " + std::to_string(it));
            break;
        }
        const Eigen::VectorXd delta = ldlt.solve(x.transpose() * (y - fitted_probabilities(x, fit.beta)));

        double step = 1.0;
        Eigen::VectorXd candidate = fit.beta + delta;
        double ll = log_likelihood(x, y, candidate);
        int halvings = 0;
        while (!(ll >= fit.log_likelihood) && halvings < opt.max_halvings) {
            step *= 0.5;
            candidate = fit.beta + step * delta;
            ll = log_likelihood(x, y, candidate);
            ++halvings;
        }
        fit.iterations = it;
        last_change = (step * delta).cwiseAbs().maxCoeff();
        if (!(ll >= fit.log_likelihood)) {
            // No ascent direction left at working precision.
            fit.converged = last_change < opt.tolerance || delta.cwiseAbs().maxCoeff() < opt.tolerance;
            break;
        }
        fit.beta = candidate;
        fit.log_likelihood = ll;
        fit.log_likelihood_trace.push_back(ll);
        if (last_change < opt.tolerance) {
            fit.converged = true;
            break;
        }
    }
    if (!fit.converged)
        fit.warnings.push_back("no convergence after " + std::to_string(fit.iterations) +
                               " iterations (last max |step| = " + std::to_string(last_change) + ")");

    for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
        if (std::abs(fit.beta[j]) > opt.separation_bound) {
            fit.separation = true;
            fit.warnings.push_back("possible separation: |" + names[static_cast<std::size_t>(j)] + "| = " +
                                   std::to_string(std::abs(fit.beta[j])));
        }
    }

    const Eigen::MatrixXd info = fisher_information(x, fit.beta);
    fit.vcov = info.ldlt().solve(Eigen::MatrixXd::Identity(info.rows(), info.cols()));
    fit.vcov = 0.5 * (fit.vcov + fit.vcov.transpose());

    if (fit.converged) {
        fit.coefficients = wald_stats(fit);
    } else {
        for (std::size_t j = 0; j < names.size(); ++j)
            fit.coefficients.push_back(Coefficient{names[j], fit.beta[static_cast<Eigen::Index>(j)]});
    }
    return fit;
}

inline double linear_predictor(const FitResult& fit, const Observation& row) {
    return fit.layout.encode(row).dot(fit.beta);
}

// Throws DataError for a level the fit never saw.
inline double predict_probability(const FitResult& fit, const Observation& row) {
    return logistic(linear_predictor(fit, row));
}

} // namespace xling::glm
