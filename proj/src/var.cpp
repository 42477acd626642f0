#include "causalpred/var.hpp"

#include <cmath>
#include <iostream>
#include <limits>

namespace causalpred {

std::string LagDesign::column_label(std::size_t col) const {
    if (col == 0) return "intercept";
    const std::size_t k = variables.size();
    const std::size_t j = (col - 1) / k + 1;  // lag
    const std::size_t v = (col - 1) % k;
    return variables[v] + " lag-" + std::to_string(j);
}

LagDesign build_lag_design(const PanelDataset& data, const std::vector<std::string>& vars,
                           int lag) {
    if (lag < 1) throw ValidationError("lag order must be >= 1");
    const std::size_t n_dates = data.n_dates();
    if (static_cast<std::size_t>(lag) >= n_dates) {
        throw ValidationError("lag " + std::to_string(lag) + " >= dates per entity (" +
                              std::to_string(n_dates) + ")");
    }
    const std::size_t k = vars.size();
    if (k == 0) throw ValidationError("no variables selected for lag design");
    std::vector<std::size_t> vidx(k);
    for (std::size_t v = 0; v < k; ++v) vidx[v] = data.variable_index(vars[v]);

    const std::size_t rows_per_entity = n_dates - static_cast<std::size_t>(lag);
    const std::size_t rows = rows_per_entity * data.n_entities();

    LagDesign design;
    design.lag = lag;
    design.variables = vars;
    design.targets.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(k));
    design.regressors.resize(static_cast<Eigen::Index>(rows),
                             static_cast<Eigen::Index>(1 + static_cast<std::size_t>(lag) * k));
    design.row_index.reserve(rows);

    Eigen::Index r = 0;
    for (std::size_t e = 0; e < data.n_entities(); ++e) {
        for (std::size_t t = static_cast<std::size_t>(lag); t < n_dates; ++t, ++r) {
            for (std::size_t v = 0; v < k; ++v) {
                design.targets(r, static_cast<Eigen::Index>(v)) = data.value(e, t, vidx[v]);
            }
            design.regressors(r, 0) = 1.0;
            Eigen::Index c = 1;
            for (int j = 1; j <= lag; ++j) {
                for (std::size_t v = 0; v < k; ++v, ++c) {
                    design.regressors(r, c) = data.value(e, t - static_cast<std::size_t>(j),
                                                         vidx[v]);
                }
            }
            design.row_index.push_back({data.entities()[e], data.dates()[t]});
        }
    }
    return design;
}

VarModel fit_var(const LagDesign& design) {
    const Eigen::MatrixXd& R = design.regressors;
    const Eigen::MatrixXd& Y = design.targets;
    const Eigen::Index rows = R.rows(), cols = R.cols();
    if (rows < cols) {
        throw ValidationError("lag design has fewer rows (" + std::to_string(rows) +
                              ") than regressor columns (" + std::to_string(cols) + ")");
    }

    VarModel model;
    model.lag = design.lag;
    model.variables = design.variables;
    model.n_effective = rows;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(R);
    if (qr.rank() == cols) {
        model.coefficients = qr.solve(Y);
    } else {
        // Jittered normal equations as the rank fallback.
        Eigen::MatrixXd gram = R.transpose() * R;
        const double jitter = 1e-10 * gram.diagonal().mean();
        gram.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(gram);
        if (llt.info() != Eigen::Success) {
            std::string culprits;
            const auto perm = qr.colsPermutation().indices();
            for (Eigen::Index i = qr.rank(); i < cols; ++i) {
                if (!culprits.empty()) culprits += ", ";
                culprits += design.column_label(static_cast<std::size_t>(perm(i)));
            }
            throw NumericalError("rank-deficient lag design beyond jitter fallback; "
                                 "collinear columns: " + culprits);
        }
        model.coefficients = llt.solve(R.transpose() * Y);
        model.gram_jitter_used = true;
        std::cerr << "warning: rank-deficient lag design, solved with jittered Gram matrix\n";
    }

    const Eigen::MatrixXd resid = Y - R * model.coefficients;
    Eigen::MatrixXd sigma = (resid.transpose() * resid) / static_cast<double>(rows);
    model.residual_covariance = 0.5 * (sigma + sigma.transpose());
    return model;
}

double aic(const VarModel& model) {
    const Eigen::MatrixXd& sigma = model.residual_covariance;
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("residual covariance is not positive definite; AIC undefined");
    }
    double log_det = 0.0;
    const auto& L = llt.matrixLLT();
    for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
        const double d = L(i, i);
        if (!(d > 0.0) || !std::isfinite(std::log(d))) {
            throw NumericalError("residual covariance is singular; AIC undefined");
        }
        log_det += 2.0 * std::log(d);
    }
    const double k = static_cast<double>(sigma.rows());
    const double p = static_cast<double>(model.lag);
    const double T = static_cast<double>(model.n_effective);
    return log_det + (2.0 / T) * k * (1.0 + k * p);
}

LagChoice select_lag_detailed(const PanelDataset& data, const std::vector<std::string>& vars,
                              int p_max) {
    if (p_max < 1) throw ValidationError("p_max must be >= 1");
    if (static_cast<std::size_t>(p_max) >= data.n_dates()) {
        throw ValidationError("p_max " + std::to_string(p_max) +
                              " >= dates per entity (" + std::to_string(data.n_dates()) + ")");
    }
    LagChoice choice;
    double best = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= p_max; ++p) {
        const double a = aic(fit_var(build_lag_design(data, vars, p)));
        choice.aic_by_lag.emplace_back(p, a);
        if (a < best) {
            best = a;
            choice.lag = p;
        }
    }
    return choice;
}

int select_lag(const PanelDataset& data, const std::vector<std::string>& vars, int p_max) {
    return select_lag_detailed(data, vars, p_max).lag;
}

}  // namespace causalpred
