#include "nowcast/models/linear.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::models {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Features and target after optional centring/scaling.
struct Prepared {
    MatrixXd z;
    VectorXd y;
    VectorXd means;
    VectorXd scales;
    double y_mean = 0.0;
};

Prepared prepare(const chaos::DesignMatrix& m, const LinearOptions& o) {
    if (m.empty()) throw LengthError("linear fit: empty design matrix");
    const auto n = static_cast<Eigen::Index>(m.rows());
    const auto p = static_cast<Eigen::Index>(m.feature_count());
    Prepared out;
    out.z = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        m.feature_data().data(), n, p);
    out.y = Eigen::Map<const VectorXd>(m.targets().data(), n);

    out.means = o.fit_intercept ? VectorXd(out.z.colwise().mean()) : VectorXd::Zero(p);
    out.y_mean = o.fit_intercept ? out.y.mean() : 0.0;
    out.z.rowwise() -= out.means.transpose();
    out.y.array() -= out.y_mean;

    out.scales = VectorXd::Ones(p);
    if (o.standardize) {
        for (Eigen::Index j = 0; j < p; ++j) {
            const double s = std::sqrt(out.z.col(j).squaredNorm() / static_cast<double>(n));
            if (s > 0.0) {
                out.scales(j) = s;
                out.z.col(j) /= s;
            }
        }
    }
    return out;
}

void check_lambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument(fmt::format("linear fit: lambda must be finite and >= 0, got {}", lambda));
    }
}

VectorXd solve_penalised(const MatrixXd& gram, const VectorXd& rhs, double lambda) {
    MatrixXd a = gram;
    a.diagonal().array() += lambda;
    const Eigen::LDLT<MatrixXd> ldlt(a);
    const double scale = a.diagonal().cwiseAbs().maxCoeff();
    const double pivot = ldlt.info() == Eigen::Success ? ldlt.vectorD().minCoeff() : 0.0;
    if (!ldlt.isPositive() || !(scale > 0.0) || pivot <= 1e-10 * scale) {
        throw SingularityError(
            fmt::format("linear fit: normal equations are singular (lambda = {}, pivot ratio = {})", lambda,
                        scale > 0.0 ? pivot / scale : 0.0));
    }
    return ldlt.solve(rhs);
}

LinearModel unstandardize(const Prepared& prep, const VectorXd& beta) {
    LinearModel lm;
    lm.coefficients.resize(static_cast<std::size_t>(beta.size()));
    lm.intercept = prep.y_mean;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        const double c = beta(j) / prep.scales(j);
        lm.coefficients[static_cast<std::size_t>(j)] = c;
        lm.intercept -= c * prep.means(j);
    }
    return lm;
}

TrainedModel finish(Family family, double lambda, const chaos::DesignMatrix& m, LinearModel lm) {
    Hyperparameters p;
    p.family = family;
    p.reg_param = lambda;
    TrainedModel draft(p, m.feature_count(), lm, 0.0);
    const double mse = mean_squared_error(draft, m);
    return TrainedModel(p, m.feature_count(), std::move(lm), mse);
}

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

double lasso_objective(double yty, const VectorXd& c, const MatrixXd& g, const VectorXd& beta, double lambda) {
    return yty - 2.0 * beta.dot(c) + beta.dot(g * beta) + lambda * beta.lpNorm<1>();
}

double kkt_violation(const VectorXd& c, const MatrixXd& g, const VectorXd& beta, double lambda) {
    const VectorXd grad = 2.0 * (c - g * beta);  // 2 z_j^T r
    double worst = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (g(j, j) <= 0.0) continue;
        const double v = beta(j) == 0.0 ? std::max(0.0, std::abs(grad(j)) - lambda)
                                        : std::abs(grad(j) - lambda * (beta(j) > 0.0 ? 1.0 : -1.0));
        worst = std::max(worst, v);
    }
    return worst;
}

}  // namespace

TrainedModel fit_ridge(const chaos::DesignMatrix& matrix, double lambda, const LinearOptions& options) {
    check_lambda(lambda);
    const Prepared prep = prepare(matrix, options);
    const MatrixXd gram = prep.z.transpose() * prep.z;
    const VectorXd beta = solve_penalised(gram, prep.z.transpose() * prep.y, lambda);
    return finish(Family::ridge, lambda, matrix, unstandardize(prep, beta));
}

TrainedModel fit_lasso(const chaos::DesignMatrix& matrix, double lambda, const LassoSettings& settings,
                       const LinearOptions& options) {
    check_lambda(lambda);
    if (!(settings.tol > 0.0) || settings.max_sweeps < 1) {
        throw std::invalid_argument("fit_lasso: tol must be > 0 and max_sweeps >= 1");
    }
    const Prepared prep = prepare(matrix, options);
    const MatrixXd g = prep.z.transpose() * prep.z;
    const VectorXd c = prep.z.transpose() * prep.y;
    const double yty = prep.y.squaredNorm();
    const Eigen::Index p = g.rows();

    VectorXd beta = VectorXd::Zero(p);
    try {
        beta = solve_penalised(g, c, lambda);
    } catch (const SingularityError&) {
        // cold start
    }

    LinearModel lm;
    lm.converged = false;
    for (int sweep = 1; sweep <= settings.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            const double gjj = g(j, j);
            if (gjj <= 0.0) {
                beta(j) = 0.0;
                continue;
            }
            const double rho = c(j) - g.row(j).dot(beta) + gjj * beta(j);
            const double updated = soft_threshold(rho, lambda / 2.0) / gjj;
            max_change = std::max(max_change, std::abs(updated - beta(j)));
            beta(j) = updated;
        }
        lm.objective_trace.push_back(lasso_objective(yty, c, g, beta, lambda));
        lm.iterations = sweep;
        if (max_change < settings.tol && kkt_violation(c, g, beta, lambda) <= settings.tol) {
            lm.converged = true;
            break;
        }
    }

    LinearModel out = unstandardize(prep, beta);
    out.converged = lm.converged;
    out.iterations = lm.iterations;
    out.objective_trace = std::move(lm.objective_trace);
    return finish(Family::lasso, lambda, matrix, std::move(out));
}

TrainedModel fit_glm(const chaos::DesignMatrix& matrix, double lambda, const LinearOptions& options) {
    check_lambda(lambda);
    // Gaussian variance function V(mu) = 1 and identity link g(mu) = mu, so
    // every IRLS weight is 1 and the working response is y itself.
    constexpr auto variance = [](double) { return 1.0; };
    constexpr auto link_derivative = [](double) { return 1.0; };
    constexpr int kMaxIterations = 25;

    const Prepared prep = prepare(matrix, options);
    const auto n = prep.z.rows();
    const VectorXd y = prep.y.array() + prep.y_mean;
    VectorXd mu = y;
    VectorXd eta = mu;
    VectorXd beta = VectorXd::Zero(prep.z.cols());
    double offset = options.fit_intercept ? prep.y_mean : 0.0;
    double deviance = std::numeric_limits<double>::infinity();
    int iterations = 0;

    for (int it = 1; it <= kMaxIterations; ++it) {
        VectorXd w(n), working(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double gp = link_derivative(mu(i));
            w(i) = 1.0 / (variance(mu(i)) * gp * gp);
            working(i) = eta(i) + (y(i) - mu(i)) * gp;
        }
        const double wsum = w.sum();
        VectorXd zbar = VectorXd::Zero(prep.z.cols());
        double wbar = 0.0;
        if (options.fit_intercept) {
            zbar = (prep.z.transpose() * w) / wsum;
            wbar = w.dot(working) / wsum;
        }
        const MatrixXd zc = prep.z.rowwise() - zbar.transpose();
        const VectorXd rc = working.array() - wbar;
        const MatrixXd gram = zc.transpose() * w.asDiagonal() * zc;
        beta = solve_penalised(gram, zc.transpose() * w.asDiagonal() * rc, lambda);
        offset = wbar - zbar.dot(beta);

        eta = (prep.z * beta).array() + offset;
        mu = eta;
        const double next = (y - mu).squaredNorm();
        iterations = it;
        const bool settled = std::abs(deviance - next) <= 1e-12 * (next + 1e-300);
        deviance = next;
        if (settled) break;
    }

    LinearModel lm = unstandardize(prep, beta);
    // The offset lives in the centred-target frame; shift back to raw units.
    lm.intercept += offset - (options.fit_intercept ? prep.y_mean : 0.0);
    lm.iterations = iterations;
    return finish(Family::glm, lambda, matrix, std::move(lm));
}

}  // namespace nowcast::models
