#include "svarladder/synth.hpp"

#include <cmath>
#include <random>

namespace svl {

namespace {

// Portable deterministic standard-normal draws: fixed Box-Muller transform
// over mt19937_64 (std::normal_distribution is implementation-defined).
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = unit_open();
        const double u2 = unit_open();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        spare_ = mag * std::sin(two_pi * u2);
        has_spare_ = true;
        return mag * std::cos(two_pi * u2);
    }

private:
    double unit_open() {  // (0, 1]
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    }

    std::mt19937_64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

Eigen::MatrixXd structural_inverse(const CausalFactors& factors) {
    const int g = factors.channels();
    const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(g, g) - factors.structural;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(lhs, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || smax / smin >= 1e12) throw SingularStructure();
    return lhs.inverse();
}

}  // namespace

double stability_check(const CausalFactors& factors) {
    validate_factors(factors);
    const int g = factors.channels();
    const int d = factors.lag_order();
    if (d == 0) return 0.0;

    const Eigen::MatrixXd inv = structural_inverse(factors);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d * g, d * g);
    for (int lag = 0; lag < d; ++lag)
        companion.block(0, lag * g, g, g) = inv * factors.lagged[lag];
    if (d > 1)
        companion.block(g, 0, (d - 1) * g, (d - 1) * g) =
            Eigen::MatrixXd::Identity((d - 1) * g, (d - 1) * g);

    return companion.eigenvalues().cwiseAbs().maxCoeff();
}

MultiChannelSeries simulate(const SynthSpec& spec) {
    validate_factors(spec.factors);
    const int g = spec.factors.channels();
    const int d = spec.factors.lag_order();
    if (spec.length < 1) throw InvalidDimension("simulation length must be >= 1");
    if (spec.burn_in < 0) throw InvalidDimension("burn_in must be >= 0");
    if (spec.noise_scale.size() != g)
        throw DimensionMismatch("noise_scale needs one entry per channel");
    if (!spec.noise_scale.allFinite() || spec.noise_scale.minCoeff() < 0.0)
        throw InvalidDimension("noise_scale entries must be finite and >= 0");

    const double radius = stability_check(spec.factors);
    if (radius >= 1.0) throw UnstableModel(radius);
    const Eigen::MatrixXd inv = structural_inverse(spec.factors);

    // Rolling presample window: history.col(j) is y[n - 1 - j].
    Eigen::MatrixXd history = Eigen::MatrixXd::Zero(g, d);
    if (spec.initial_values) {
        const Eigen::MatrixXd& init = *spec.initial_values;
        if (init.rows() != d || init.cols() != g)
            throw DimensionMismatch("initial_values must be D x G");
        if (!init.allFinite()) throw NonFinite("initial_values");
        for (int j = 0; j < d; ++j) history.col(j) = init.row(d - 1 - j).transpose();
    }

    NormalSource noise(spec.seed);
    MultiChannelSeries series;
    series.channel_names = spec.factors.channel_names;
    series.data.resize(spec.length, g);

    Eigen::VectorXd shock(g), accum(g), y(g);
    const long total = spec.burn_in + spec.length;
    for (long n = 0; n < total; ++n) {
        for (int k = 0; k < g; ++k) shock(k) = spec.noise_scale(k) * noise.next();
        accum = shock;
        for (int lag = 0; lag < d; ++lag) accum += spec.factors.lagged[lag] * history.col(lag);
        y = inv * accum;

        for (int j = d - 1; j > 0; --j) history.col(j) = history.col(j - 1);
        if (d > 0) history.col(0) = y;
        if (n >= spec.burn_in) series.data.row(n - spec.burn_in) = y.transpose();
    }
    return series;
}

}  // namespace svl
