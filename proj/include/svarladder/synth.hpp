#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "svarladder/model.hpp"

namespace svl {

/// Ground-truth generator specification: factor matrices, per-channel noise
/// scales (the diagonal of B), output length after burn-in, and the RNG seed.
/// initial_values optionally seeds the presample window (D rows, row d being
/// y[d - D] in chronological order, i.e. the last row is the sample just
/// before n = 0); it defaults to zeros and is mainly useful for noise-free
/// runs.
struct SynthSpec {
    CausalFactors factors;
    Eigen::VectorXd noise_scale;  // G entries, each >= 0
    long length = 0;              // N, samples kept after burn-in
    std::uint64_t seed = 0;
    long burn_in = 500;
    std::optional<Eigen::MatrixXd> initial_values;
};

/// Draws the series y[n] = (I - S0)^-1 (sum_d S^d y[n-d] + B e[n]) with
/// independent standard normal e[n], discarding the first burn_in samples.
/// Bit-identical output for identical specs (the normal draws use a fixed
/// Box-Muller transform over mt19937_64, not the implementation-defined
/// std::normal_distribution).
/// Throws UnstableModel when the reduced form has spectral radius >= 1 and
/// SingularStructure when (I - S0) is not invertible.
MultiChannelSeries simulate(const SynthSpec& spec);

/// Spectral radius of the D*G x D*G companion matrix of the reduced-form VAR
/// y[n] = sum_d (I - S0)^-1 S^d y[n-d]. Strictly below 1 means stationary.
double stability_check(const CausalFactors& factors);

}  // namespace svl
