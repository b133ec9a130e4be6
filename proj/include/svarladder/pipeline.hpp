#pragma once

#include <Eigen/Dense>
#include <tuple>

#include "svarladder/kalman.hpp"
#include "svarladder/model.hpp"

namespace svl {

/// Output of `estimate`: thresholded factors, the raw (tail-averaged,
/// unthresholded) factors, the full state trajectory, and the preprocessing
/// that was applied. When standardize was off, channel_means is all zeros and
/// channel_stds all ones.
struct EstimationResult {
    CausalFactors factors;
    CausalFactors raw_factors;
    StateTrajectory trajectory;
    Eigen::VectorXd channel_means;
    Eigen::VectorXd channel_stds;
    EstimationConfig config;
    int tail_window_used = 0;  // after clamping to floor((N - D) / 2)
};

/// Rescales each channel to zero sample mean and unit sample standard
/// deviation (n-1 normalization). Returns the standardized series together
/// with the per-channel means and stds that were removed.
/// Throws ZeroVarianceChannel (naming the channel) and SeriesTooShort (N < 2).
std::tuple<MultiChannelSeries, Eigen::VectorXd, Eigen::VectorXd>
standardize(const MultiChannelSeries& series);

/// Mean of the last `window` posterior value components per factor, clamped
/// to what the trajectory actually holds.
struct TailAverage {
    Eigen::VectorXd values;  // F
    int window_used = 0;
};

TailAverage tail_average(const StateTrajectory& trajectory, int window);

/// Zeroes every entry with |v| <= level, leaves the rest untouched.
CausalFactors threshold_factors(const CausalFactors& raw, double level);

/// End-to-end estimation: optional standardization, filter run, tail
/// averaging over min(config.tail_window, floor((N - D) / 2)) samples,
/// thresholding, and packing into matrices.
EstimationResult estimate(const MultiChannelSeries& series, const EstimationConfig& config);

/// Independent batch reference: per effect channel k, ordinary least squares
/// of y_k[n] on the contemporaneous other channels and all lagged channels,
/// over n = D..N-1. Shares no code with the filter path; shipped so users can
/// cross-check any estimate against the textbook solution.
/// Throws RankDeficientRegressors naming the effect channel.
CausalFactors ols_oracle(const MultiChannelSeries& series, int lag_order);

}  // namespace svl
