#include "svarladder/statespace.hpp"

namespace svl {

const char* to_string(FactorKind kind) {
    switch (kind) {
        case FactorKind::SNL: return "SNL";
        case FactorKind::INL: return "INL";
        case FactorKind::INS: return "INS";
    }
    return "?";
}

StateLayout state_layout(int channels, int lag_order) {
    if (channels < 1) throw InvalidDimension("channel count must be >= 1");
    if (lag_order < 1) throw InvalidDimension("lag order must be >= 1");

    StateLayout layout;
    layout.channels = channels;
    layout.lag_order = lag_order;
    layout.entries.reserve(static_cast<size_t>(channels) * layout.block_size());
    for (int effect = 0; effect < channels; ++effect) {
        for (int cause = 0; cause < channels; ++cause)
            if (cause != effect) layout.entries.push_back({effect, cause, 0});
        for (int lag = 1; lag <= lag_order; ++lag)
            for (int cause = 0; cause < channels; ++cause)
                layout.entries.push_back({effect, cause, lag});
    }
    return layout;
}

int StateLayout::index_of(const FactorId& id) const {
    const int g = channels;
    if (id.effect < 0 || id.effect >= g || id.cause < 0 || id.cause >= g || id.lag < 0 ||
        id.lag > lag_order)
        throw InvalidDimension("factor id out of range");
    if (id.lag == 0 && id.effect == id.cause)
        throw InvalidDimension("no structural factor from a channel to itself");
    int within;
    if (id.lag == 0)
        within = id.cause < id.effect ? id.cause : id.cause - 1;
    else
        within = (g - 1) + (id.lag - 1) * g + id.cause;
    return block_start(id.effect) + within;
}

TransitionModel build_transition(const Hyperparameters& hyper, const StateLayout& layout) {
    validate_hyperparameters(hyper);
    const int f = layout.factor_count();
    const double q = hyper.process_noise_variance;

    Eigen::Matrix2d a0;
    a0 << hyper.alpha, hyper.beta, 0.0, hyper.gamma;
    // Covariance of D0 * (q_i, q_i)^T: one scalar shock feeds both rows.
    Eigen::Matrix2d q0;
    q0 << hyper.delta * hyper.delta * q, hyper.delta * hyper.epsilon * q,
        hyper.delta * hyper.epsilon * q, hyper.epsilon * hyper.epsilon * q;

    TransitionModel tm;
    tm.A = Eigen::MatrixXd::Zero(2 * f, 2 * f);
    tm.Q = Eigen::MatrixXd::Zero(2 * f, 2 * f);
    for (int i = 0; i < f; ++i) {
        tm.A.block<2, 2>(2 * i, 2 * i) = a0;
        tm.Q.block<2, 2>(2 * i, 2 * i) = q0;
    }
    return tm;
}

Eigen::MatrixXd build_observation(const Eigen::MatrixXd& window, const StateLayout& layout) {
    const int g = layout.channels;
    const int d = layout.lag_order;
    if (window.rows() < d + 1)
        throw IncompleteWindow(static_cast<int>(window.rows()), d + 1);
    if (window.rows() != d + 1 || window.cols() != g)
        throw DimensionMismatch("window must be (D+1) x G");

    const int f = layout.factor_count();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(g, 2 * f);
    for (int i = 0; i < f; ++i) {
        const FactorId& id = layout.entries[i];
        h(id.effect, 2 * i) = window(id.lag, id.cause);
    }
    return h;
}

}  // namespace svl
