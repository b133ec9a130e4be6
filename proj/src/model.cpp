#include "svarladder/model.hpp"

#include <cmath>
#include <unordered_set>

namespace svl {

std::vector<std::string> default_channel_names(int channels) {
    std::vector<std::string> names;
    names.reserve(channels);
    for (int k = 0; k < channels; ++k) names.push_back("ch" + std::to_string(k + 1));
    return names;
}

void validate_series(const MultiChannelSeries& series) {
    if (series.data.rows() < 1 || series.data.cols() < 1)
        throw InvalidDimension("series needs at least one sample and one channel");
    if (static_cast<long>(series.channel_names.size()) != series.data.cols())
        throw DimensionMismatch("series has " + std::to_string(series.data.cols()) +
                                " channels but " + std::to_string(series.channel_names.size()) +
                                " names");
    std::unordered_set<std::string> seen;
    for (const auto& name : series.channel_names)
        if (!seen.insert(name).second) throw DuplicateChannelName(name);
    if (!series.data.allFinite()) throw NonFinite("series data");
}

CausalFactors validate_factors(const CausalFactors& factors) {
    const int g = factors.channels();
    if (g < 1) throw InvalidDimension("factors need at least one channel");
    if (factors.structural.rows() != factors.structural.cols())
        throw DimensionMismatch("structural matrix is not square");
    if (static_cast<int>(factors.channel_names.size()) != g)
        throw DimensionMismatch("factor matrices are " + std::to_string(g) + "x" +
                                std::to_string(g) + " but there are " +
                                std::to_string(factors.channel_names.size()) + " channel names");
    for (const auto& lag : factors.lagged)
        if (lag.rows() != g || lag.cols() != g)
            throw DimensionMismatch("lagged matrix size differs from structural");
    if (!factors.structural.allFinite()) throw NonFinite("structural factors");
    for (const auto& lag : factors.lagged)
        if (!lag.allFinite()) throw NonFinite("lagged factors");
    for (int i = 0; i < g; ++i)
        if (factors.structural(i, i) != 0.0) throw SelfStructuralCausality(i, factors.structural(i, i));
    return factors;
}

void validate_hyperparameters(const Hyperparameters& hyper) {
    const double scalars[] = {hyper.alpha, hyper.beta, hyper.gamma, hyper.delta, hyper.epsilon};
    for (double v : scalars)
        if (!std::isfinite(v)) throw NonFinite("hyperparameters");
    if (!(hyper.process_noise_variance >= 0.0)) throw InvalidDimension("process_noise_variance must be >= 0");
    if (!(hyper.measurement_noise_variance > 0.0))
        throw InvalidDimension("measurement_noise_variance must be > 0");
    if (!(hyper.initial_state_variance > 0.0)) throw InvalidDimension("initial_state_variance must be > 0");
}

void validate_config(const EstimationConfig& config) {
    if (config.lag_order < 1) throw InvalidDimension("lag_order must be >= 1");
    if (config.tail_window < 1) throw InvalidDimension("tail_window must be >= 1");
    if (!(config.threshold >= 0.0)) throw InvalidDimension("threshold must be >= 0");
    validate_hyperparameters(config.hyper);
}

}  // namespace svl
