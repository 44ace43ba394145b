#pragma once

#include "nowcast/chaos/embedding.hpp"
#include "nowcast/models/trained_model.hpp"

namespace nowcast::models {

/// Preprocessing for the linear families. With both flags on (the default)
/// features are centred and scaled to unit population variance before the
/// penalty is applied, and the intercept is left unpenalised.
struct LinearOptions {
    bool standardize = true;
    bool fit_intercept = true;
};

struct LassoSettings {
    double tol = 1e-7;        ///< on coefficient change and on KKT violation
    int max_sweeps = 10000;
};

/**
 * Minimises sum_i (y_i - b - x_i.beta)^2 + lambda * sum_j beta_j^2 by a direct
 * symmetric solve of the regularised normal equations.
 * Throws SingularityError when lambda == 0 and the system is singular.
 */
TrainedModel fit_ridge(const chaos::DesignMatrix& matrix, double lambda, const LinearOptions& options = {});

/**
 * Minimises sum_i (y_i - b - x_i.beta)^2 + lambda * sum_j |beta_j| by cyclic
 * coordinate descent with soft-thresholding, warm-started from the ridge
 * solution. Stops once a full sweep moves no coefficient by tol or more and the
 * KKT conditions hold within tol; otherwise returns after max_sweeps with
 * converged() == false.
 */
TrainedModel fit_lasso(const chaos::DesignMatrix& matrix, double lambda, const LassoSettings& settings = {},
                       const LinearOptions& options = {});

/// Gaussian family, identity link, L2 penalty lambda, fitted by iteratively
/// reweighted least squares.
TrainedModel fit_glm(const chaos::DesignMatrix& matrix, double lambda, const LinearOptions& options = {});

}  // namespace nowcast::models
