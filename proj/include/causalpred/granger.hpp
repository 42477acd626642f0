#pragma once

#include <string>
#include <vector>

#include "causalpred/var.hpp"

namespace causalpred {

/// Directional, instantaneous, and total interdependence of one fitted pair.
/// Values are raw log variance ratios; tiny negatives from finite-precision
/// arithmetic are kept so the decomposition identity holds exactly.
struct BivariateCausality {
    double g_x_to_y = 0.0;
    double g_y_to_x = 0.0;
    double g_instantaneous = 0.0;
    double g_total = 0.0;
    int lag = 0;
};

/// Fits AR(p) on x, AR(p) on y, and a joint VAR(p), and forms the log
/// variance-ratio scores from the three residual covariances.
BivariateCausality bivariate_granger(const PanelDataset& data, const std::string& x,
                                     const std::string& y, int lag);

/// Score of every predictor toward the dependent variable, sorted by
/// descending score (ties by name).
std::vector<std::pair<std::string, double>> bivariate_scan(const PanelDataset& data,
                                                           const std::string& dep, int lag);

/// ln of the dependent-equation residual variance ratio between the model
/// without `pred` (conditioning set only) and the model including it.
double conditional_granger(const PanelDataset& data, const std::string& dep,
                           const std::string& pred,
                           const std::vector<std::string>& conditioning, int lag);

struct ConditionalCausalityReport {
    struct Entry {
        std::string name;
        double score = 0.0;      // clamped at 0 for reporting
        double raw_score = 0.0;  // unclamped diagnostic value
        int rank = 0;
    };
    std::vector<Entry> entries;  // rank order (descending score, ties by name)
    int lag = 0;
    double cutoff = 0.0;
    std::vector<std::string> selected;
};

/// One full-model fit plus one reduced fit per predictor, conditioning each
/// score on all remaining predictors.
ConditionalCausalityReport conditional_scan(const PanelDataset& data, const std::string& dep,
                                            int lag, double cutoff);

/// CSV with one row per predictor: clamped bivariate/conditional scores,
/// rank, selection verdict, and raw diagnostic columns.
std::string causality_report_csv(const std::vector<std::pair<std::string, double>>& bivariate,
                                 int bivariate_lag, const ConditionalCausalityReport& conditional,
                                 const std::vector<std::string>& comment_lines);

}  // namespace causalpred
