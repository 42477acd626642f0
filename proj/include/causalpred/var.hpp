#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "causalpred/dataset.hpp"

namespace causalpred {

/// Pooled lag-embedded regression problem. Rows are stacked per entity so no
/// regressor row mixes observations from two entities; each row carries
/// [1, x_{t-1}..., x_{t-p}...] with one column per modeled variable per lag.
struct LagDesign {
    Eigen::MatrixXd targets;     // rows x k
    Eigen::MatrixXd regressors;  // rows x (1 + p*k)
    int lag = 0;
    std::vector<std::string> variables;
    std::vector<RowKey> row_index;

    std::string column_label(std::size_t col) const;
};

struct VarModel {
    Eigen::MatrixXd coefficients;         // (1 + p*k) x k, column per target equation
    Eigen::MatrixXd residual_covariance;  // k x k, 1/T maximum-likelihood convention
    int lag = 0;
    long n_effective = 0;
    std::vector<std::string> variables;
    bool gram_jitter_used = false;
};

LagDesign build_lag_design(const PanelDataset& data, const std::vector<std::string>& vars,
                           int lag);

/// Least-squares fit per target equation over the pooled design. Falls back to
/// a jittered Gram solve (1e-10 x mean diagonal) when the design is rank
/// deficient; fails identifying the collinear columns when that is not enough.
VarModel fit_var(const LagDesign& design);

/// ln det(Sigma) + (2/T) * k * (1 + k*p). Requires positive-definite Sigma.
double aic(const VarModel& model);

struct LagChoice {
    int lag = 0;
    std::vector<std::pair<int, double>> aic_by_lag;
};

/// Argmin of AIC over p in {1..p_max}; ties break toward the smaller lag.
LagChoice select_lag_detailed(const PanelDataset& data, const std::vector<std::string>& vars,
                              int p_max);
int select_lag(const PanelDataset& data, const std::vector<std::string>& vars, int p_max);

}  // namespace causalpred
