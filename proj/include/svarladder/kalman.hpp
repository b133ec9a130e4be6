#pragma once

#include <Eigen/Dense>
#include <utility>

#include "svarladder/model.hpp"
#include "svarladder/statespace.hpp"

namespace svl {

/// Gaussian state estimate at one sample: mean (2F), covariance (2F x 2F),
/// and the sample index it refers to. The covariance is kept symmetric
/// positive semidefinite by construction (Joseph-form updates).
struct FilterState {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
    long step = 0;
};

/// Posterior history of one filter run.
///
/// Row n of values/slopes holds the posterior value and slope component of
/// every factor after processing sample n; rows 0..D-1 stay at the prior mean
/// because the regressor window is incomplete there. innovations row n is the
/// one-step prediction error per channel, innovation_covariance_trace the
/// trace of H P H^T + R at that step (zero for the warm-up rows).
struct StateTrajectory {
    Eigen::MatrixXd values;       // N x F
    Eigen::MatrixXd slopes;       // N x F
    Eigen::MatrixXd innovations;  // N x G
    Eigen::VectorXd innovation_covariance_trace;  // N
    StateLayout layout;

    long samples() const { return values.rows(); }
};

/// Time update: mean' = A mean, P' = A P A^T + Q (re-symmetrized); advances
/// the step counter.
FilterState predict(const FilterState& fs, const TransitionModel& tm);

/// Measurement update with observation matrix H, measurement y and
/// measurement covariance R. Returns the posterior state and the innovation
/// y - H mean. The gain solve uses an LDLT factorization of H P H^T + R and
/// the covariance is updated in Joseph form, which keeps it PSD under
/// roundoff. Throws SingularInnovationCovariance when H P H^T + R is
/// numerically singular.
std::pair<FilterState, Eigen::VectorXd> update(const FilterState& fs,
                                               const Eigen::MatrixXd& H,
                                               const Eigen::VectorXd& y,
                                               const Eigen::MatrixXd& R);

/// Runs the full time-varying filter over a series: zero initial mean,
/// P0 = initial_state_variance * I, and for each sample n >= D one
/// predict/update cycle with H[n] built from the sliding window and
/// R = measurement_noise_variance * I.
///
/// Internally the filter runs one independent subfilter per effect channel:
/// H's rows touch disjoint state blocks and R is diagonal, so the joint
/// covariance stays block-diagonal per effect channel at every step and the
/// decomposition is exact.
StateTrajectory run_filter(const MultiChannelSeries& series, const EstimationConfig& config);

}  // namespace svl
