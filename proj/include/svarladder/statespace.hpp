#pragma once

#include <Eigen/Dense>
#include <vector>

#include "svarladder/model.hpp"

namespace svl {

enum class FactorKind { SNL, INL, INS };

const char* to_string(FactorKind kind);

/// Identifies one causal factor: effect channel, cause channel, lag.
/// lag == 0 is a structural (INS) factor and requires effect != cause;
/// lag >= 1 with effect == cause is SNL, otherwise INL.
struct FactorId {
    int effect = 0;
    int cause = 0;
    int lag = 0;

    FactorKind kind() const {
        if (lag == 0) return FactorKind::INS;
        return effect == cause ? FactorKind::SNL : FactorKind::INL;
    }

    bool operator==(const FactorId&) const = default;
};

/// Maps the F = G*((D+1)*G - 1) causal factors onto state-vector slots.
///
/// Ordering is effect-major and fixed: all factors of effect channel 0 first,
/// then effect channel 1, and so on. Within one effect channel: the G-1
/// structural causes in ascending cause index (the effect channel itself is
/// skipped), then the lag-1 causes 0..G-1 ascending, then lag-2, up to lag D.
/// Factor i occupies state slots 2i (value) and 2i+1 (slope).
struct StateLayout {
    int channels = 0;   // G
    int lag_order = 0;  // D
    std::vector<FactorId> entries;

    int factor_count() const { return static_cast<int>(entries.size()); }
    /// Factors per effect channel: (G-1) + D*G.
    int block_size() const { return channels - 1 + lag_order * channels; }
    /// Index of the first factor of the given effect channel.
    int block_start(int effect) const { return effect * block_size(); }

    /// Inverse of entries[]; closed form, no search.
    int index_of(const FactorId& id) const;
};

/// Builds the layout for G channels and lag order D.
/// Throws InvalidDimension for G < 1 or D < 1.
StateLayout state_layout(int channels, int lag_order);

/// Block-diagonal transition matrix A and process-noise covariance Q for the
/// doubled (value + slope) state vector, both 2F x 2F. Each factor gets one
/// copy of A0; Q holds F copies of D0 * q * D0^T, where the same scalar shock
/// drives a factor's value and slope rows.
struct TransitionModel {
    Eigen::MatrixXd A;
    Eigen::MatrixXd Q;
};

TransitionModel build_transition(const Hyperparameters& hyper, const StateLayout& layout);

/// Per-sample observation matrix H[n], G x 2F.
///
/// window.row(d) must hold y[n-d] for d = 0..D. Row k of H is nonzero only on
/// effect channel k's value slots: the structural slot for cause j carries
/// y_j[n], the lag-d slot for cause j carries y_j[n-d]. Every slope column is
/// exactly zero.
Eigen::MatrixXd build_observation(const Eigen::MatrixXd& window, const StateLayout& layout);

}  // namespace svl
