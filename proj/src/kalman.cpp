#include "svarladder/kalman.hpp"

#include <cmath>

namespace svl {

FilterState predict(const FilterState& fs, const TransitionModel& tm) {
    if (tm.A.rows() != fs.mean.size() || tm.Q.rows() != fs.mean.size())
        throw DimensionMismatch("transition model does not match state size");

    FilterState out;
    out.mean = tm.A * fs.mean;
    Eigen::MatrixXd p = tm.A * fs.covariance * tm.A.transpose() + tm.Q;
    out.covariance = 0.5 * (p + p.transpose());
    out.step = fs.step + 1;
    return out;
}

std::pair<FilterState, Eigen::VectorXd> update(const FilterState& fs, const Eigen::MatrixXd& H,
                                               const Eigen::VectorXd& y, const Eigen::MatrixXd& R) {
    const Eigen::Index n = fs.mean.size();
    const Eigen::Index g = y.size();
    if (H.rows() != g || H.cols() != n || R.rows() != g || R.cols() != g)
        throw DimensionMismatch("observation model does not match state/measurement size");

    const Eigen::VectorXd innovation = y - H * fs.mean;
    const Eigen::MatrixXd pht = fs.covariance * H.transpose();
    Eigen::MatrixXd s = H * pht + R;
    s = 0.5 * (s + s.transpose());

    Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
    const double d_max = ldlt.vectorD().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(d_max > 0.0) ||
        ldlt.vectorD().minCoeff() <= 1e-12 * d_max)
        throw SingularInnovationCovariance(fs.step);

    const Eigen::MatrixXd gain = ldlt.solve(pht.transpose()).transpose();  // P H^T S^-1

    FilterState out;
    out.mean = fs.mean + gain * innovation;
    const Eigen::MatrixXd ikh =
        Eigen::MatrixXd::Identity(n, n) - gain * H;
    out.covariance = ikh * fs.covariance * ikh.transpose() + gain * R * gain.transpose();
    out.step = fs.step;
    return {std::move(out), innovation};
}

namespace {

// One effect channel's decoupled subfilter: value/slope pairs for the
// (G-1) + D*G factors of that channel, scalar measurement per step.
struct ChannelFilter {
    Eigen::VectorXd x;   // 2m
    Eigen::MatrixXd p;   // 2m x 2m
    Eigen::MatrixXd a;   // block diagonal of A0
    Eigen::MatrixXd q;   // block diagonal of D0 q D0^T

    void init(int m, const Hyperparameters& hyper) {
        x = Eigen::VectorXd::Zero(2 * m);
        p = hyper.initial_state_variance * Eigen::MatrixXd::Identity(2 * m, 2 * m);
        a = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        q = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        const double qv = hyper.process_noise_variance;
        for (int i = 0; i < m; ++i) {
            a.block<2, 2>(2 * i, 2 * i) << hyper.alpha, hyper.beta, 0.0, hyper.gamma;
            q.block<2, 2>(2 * i, 2 * i) << hyper.delta * hyper.delta * qv,
                hyper.delta * hyper.epsilon * qv, hyper.delta * hyper.epsilon * qv,
                hyper.epsilon * hyper.epsilon * qv;
        }
    }

    void predict_step() {
        x = a * x;
        Eigen::MatrixXd ap = a * p * a.transpose() + q;
        p = 0.5 * (ap + ap.transpose());
    }

    // Scalar Joseph-form update; returns the innovation.
    double update_step(const Eigen::VectorXd& h, double y, double r, long step, double* s_out) {
        const double innovation = y - h.dot(x);
        const Eigen::VectorXd ph = p * h;
        const double s = h.dot(ph) + r;
        if (!(s > 0.0) || !std::isfinite(s)) throw SingularInnovationCovariance(step);
        *s_out = s;
        const Eigen::VectorXd gain = ph / s;
        x += gain * innovation;
        const Eigen::MatrixXd ikh =
            Eigen::MatrixXd::Identity(p.rows(), p.cols()) - gain * h.transpose();
        p = ikh * p * ikh.transpose() + r * gain * gain.transpose();
        return innovation;
    }
};

}  // namespace

StateTrajectory run_filter(const MultiChannelSeries& series, const EstimationConfig& config) {
    validate_series(series);
    validate_config(config);
    const long n = series.samples();
    const int g = series.channels();
    const int d = config.lag_order;
    if (n <= d) throw SeriesTooShort(n, d);

    const StateLayout layout = state_layout(g, d);
    const int m = layout.block_size();
    const int f = layout.factor_count();
    const double r = config.hyper.measurement_noise_variance;

    std::vector<ChannelFilter> filters(g);
    for (auto& cf : filters) cf.init(m, config.hyper);

    StateTrajectory traj;
    traj.layout = layout;
    traj.values = Eigen::MatrixXd::Zero(n, f);
    traj.slopes = Eigen::MatrixXd::Zero(n, f);
    traj.innovations = Eigen::MatrixXd::Zero(n, g);
    traj.innovation_covariance_trace = Eigen::VectorXd::Zero(n);

    // Rows 0..D-1 stay at the prior mean (zero): no complete regressor window yet.
    Eigen::VectorXd h(2 * m);
    for (long t = d; t < n; ++t) {
        double trace = 0.0;
        for (int k = 0; k < g; ++k) {
            ChannelFilter& cf = filters[k];
            cf.predict_step();

            h.setZero();
            for (int i = 0; i < m; ++i) {
                const FactorId& id = layout.entries[layout.block_start(k) + i];
                h(2 * i) = series.data(t - id.lag, id.cause);
            }

            double s = 0.0;
            traj.innovations(t, k) = cf.update_step(h, series.data(t, k), r, t, &s);
            trace += s;

            for (int i = 0; i < m; ++i) {
                traj.values(t, layout.block_start(k) + i) = cf.x(2 * i);
                traj.slopes(t, layout.block_start(k) + i) = cf.x(2 * i + 1);
            }
        }
        traj.innovation_covariance_trace(t) = trace;
    }
    return traj;
}

}  // namespace svl
