#include "svarladder/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace svl {

std::tuple<MultiChannelSeries, Eigen::VectorXd, Eigen::VectorXd>
standardize(const MultiChannelSeries& series) {
    validate_series(series);
    const long n = series.samples();
    const int g = series.channels();
    if (n < 2) throw SeriesTooShort(n, 1);

    Eigen::VectorXd means(g), stds(g);
    MultiChannelSeries out = series;
    for (int k = 0; k < g; ++k) {
        const double mean = series.data.col(k).mean();
        const double var =
            (series.data.col(k).array() - mean).square().sum() / static_cast<double>(n - 1);
        if (!(var > 0.0)) throw ZeroVarianceChannel(series.channel_names[k]);
        const double sd = std::sqrt(var);
        means(k) = mean;
        stds(k) = sd;
        out.data.col(k) = (series.data.col(k).array() - mean) / sd;
    }
    return {std::move(out), std::move(means), std::move(stds)};
}

TailAverage tail_average(const StateTrajectory& trajectory, int window) {
    if (window < 1) throw InvalidDimension("tail window must be >= 1");
    const long n = trajectory.samples();
    const long used = std::min<long>(window, n);
    TailAverage out;
    out.window_used = static_cast<int>(used);
    out.values = trajectory.values.bottomRows(used).colwise().mean();
    return out;
}

CausalFactors threshold_factors(const CausalFactors& raw, double level) {
    if (!(level >= 0.0)) throw InvalidDimension("threshold must be >= 0");
    CausalFactors out = validate_factors(raw);
    auto clip = [level](Eigen::MatrixXd& m) {
        m = (m.array().abs() <= level).select(0.0, m);
    };
    clip(out.structural);
    for (auto& lag : out.lagged) clip(lag);
    return out;
}

namespace {

CausalFactors pack_factors(const Eigen::VectorXd& values, const StateLayout& layout,
                           const std::vector<std::string>& names) {
    const int g = layout.channels;
    CausalFactors factors;
    factors.channel_names = names;
    factors.structural = Eigen::MatrixXd::Zero(g, g);
    factors.lagged.assign(layout.lag_order, Eigen::MatrixXd::Zero(g, g));
    for (int i = 0; i < layout.factor_count(); ++i) {
        const FactorId& id = layout.entries[i];
        if (id.lag == 0)
            factors.structural(id.effect, id.cause) = values(i);
        else
            factors.lagged[id.lag - 1](id.effect, id.cause) = values(i);
    }
    return factors;
}

}  // namespace

EstimationResult estimate(const MultiChannelSeries& series, const EstimationConfig& config) {
    validate_series(series);
    validate_config(config);
    const long n = series.samples();
    const int g = series.channels();
    const int d = config.lag_order;
    if (n <= d + 10) throw SeriesTooShort(n, d + 10);

    EstimationResult result;
    result.config = config;

    MultiChannelSeries prepared;
    if (config.standardize) {
        auto [standardized, means, stds] = standardize(series);
        prepared = std::move(standardized);
        result.channel_means = std::move(means);
        result.channel_stds = std::move(stds);
    } else {
        prepared = series;
        result.channel_means = Eigen::VectorXd::Zero(g);
        result.channel_stds = Eigen::VectorXd::Ones(g);
    }

    result.trajectory = run_filter(prepared, config);

    const int max_window = static_cast<int>((n - d) / 2);
    const int window = std::max(1, std::min(config.tail_window, max_window));
    TailAverage tail = tail_average(result.trajectory, window);
    result.tail_window_used = tail.window_used;

    result.raw_factors = pack_factors(tail.values, result.trajectory.layout, series.channel_names);
    result.factors = threshold_factors(result.raw_factors, config.threshold);
    return result;
}

CausalFactors ols_oracle(const MultiChannelSeries& series, int lag_order) {
    validate_series(series);
    if (lag_order < 1) throw InvalidDimension("lag order must be >= 1");
    const long n = series.samples();
    const int g = series.channels();
    const int d = lag_order;
    const int regressors = (g - 1) + d * g;  // per effect channel
    const long rows = n - d;
    if (rows <= regressors) throw SeriesTooShort(n, d + regressors);

    const StateLayout layout = state_layout(g, d);
    CausalFactors factors;
    factors.channel_names = series.channel_names;
    factors.structural = Eigen::MatrixXd::Zero(g, g);
    factors.lagged.assign(d, Eigen::MatrixXd::Zero(g, g));

    Eigen::MatrixXd x(rows, regressors);
    Eigen::VectorXd y(rows);
    for (int k = 0; k < g; ++k) {
        for (long t = d; t < n; ++t) {
            const long row = t - d;
            for (int i = 0; i < regressors; ++i) {
                const FactorId& id = layout.entries[layout.block_start(k) + i];
                x(row, i) = series.data(t - id.lag, id.cause);
            }
            y(row) = series.data(t, k);
        }

        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
        qr.setThreshold(1e-10);
        if (qr.rank() < regressors) throw RankDeficientRegressors(k);
        const Eigen::VectorXd beta = qr.solve(y);

        for (int i = 0; i < regressors; ++i) {
            const FactorId& id = layout.entries[layout.block_start(k) + i];
            if (id.lag == 0)
                factors.structural(id.effect, id.cause) = beta(i);
            else
                factors.lagged[id.lag - 1](id.effect, id.cause) = beta(i);
        }
    }
    return factors;
}

}  // namespace svl
