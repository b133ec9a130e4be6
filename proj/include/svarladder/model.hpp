#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "svarladder/errors.hpp"

namespace svl {

/// A G-channel real-valued time series, one sample per row.
///
/// Values are treated as immutable after construction; every routine in the
/// library takes series by const reference and never mutates them.
struct MultiChannelSeries {
    Eigen::MatrixXd data;                    // N x G
    std::vector<std::string> channel_names;  // exactly G unique labels
    std::optional<double> sample_interval;   // seconds, metadata only

    long samples() const { return data.rows(); }
    int channels() const { return static_cast<int>(data.cols()); }
};

/// Checks the series invariants: N >= 1, G >= 1, all samples finite,
/// channel_names consistent and unique.
void validate_series(const MultiChannelSeries& series);

/// Generates the default labels "ch1".."chG".
std::vector<std::string> default_channel_names(int channels);

/// Instantaneous (structural) and lagged causal factor matrices.
///
/// Element convention: structural(i, j) is the factor from cause channel j to
/// effect channel i, i.e. the row form y_i = sum_j structural(i, j) * y_j.
/// Lagged matrices follow the same row-equals-effect convention, lagged[d-1]
/// holding the lag-d factors. The structural diagonal is identically zero:
/// a channel cannot cause itself within one instant.
struct CausalFactors {
    Eigen::MatrixXd structural;              // G x G, zero diagonal
    std::vector<Eigen::MatrixXd> lagged;     // D matrices, each G x G
    std::vector<std::string> channel_names;  // G labels

    int channels() const { return static_cast<int>(structural.rows()); }
    int lag_order() const { return static_cast<int>(lagged.size()); }
};

/// Validates factor matrices and returns them unchanged.
///
/// Throws SelfStructuralCausality for a nonzero structural diagonal entry,
/// DimensionMismatch for inconsistent sizes, NonFinite for NaN/Inf entries.
CausalFactors validate_factors(const CausalFactors& factors);

/// Pre-selected scalars governing the state evolution, plus the three noise
/// variances of the filter. alpha..epsilon populate the per-state blocks
///   A0 = [[alpha, beta], [0, gamma]],  D0 = [[delta, 0], [0, epsilon]].
///
/// Defaults give the integrated random walk: the slope of each factor
/// random-walks and integrates into its value.
struct Hyperparameters {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    double delta = 0.0;
    double epsilon = 1.0;
    double process_noise_variance = 1e-4;     // q, variance of each scalar shock
    double measurement_noise_variance = 1.0;  // diagonal of R
    double initial_state_variance = 1e3;      // diagonal of P0
};

void validate_hyperparameters(const Hyperparameters& hyper);

/// Everything `estimate` needs besides the data.
struct EstimationConfig {
    int lag_order = 1;          // D
    Hyperparameters hyper;
    int tail_window = 5000;     // samples averaged for convergence
    double threshold = 0.1;     // absolute rejection level, |v| <= threshold -> 0
    bool standardize = true;    // per-channel zero mean / unit std before filtering
};

void validate_config(const EstimationConfig& config);

}  // namespace svl
