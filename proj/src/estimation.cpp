#include "lmar/estimation.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lmar/detail/windows.hpp"
#include "lmar/errors.hpp"
#include "lmar/lags.hpp"
#include "lmar/model.hpp"

namespace lmar {

namespace {

// Shared E-step/M-step engine over one series. Values are centered on their
// mean before any window algebra; every produced quantity (lag weights,
// covariance updates, the monitor) is translation-invariant, and centering
// keeps the accumulated outer products well conditioned when the series sits
// far from the origin.
class EmWorkspace {
public:
    EmWorkspace(const TimeSeries& series, int p, std::int64_t m)
        : p_(p), m_(m), n_(series.last_index()) {
        if (p < 1) throw InvalidArgumentError("p must be >= 1");
        if (series.first_index() > -m) {
            throw IndexOutOfRangeError(
                "series must start at or before index " + std::to_string(-m));
        }
        if (n_ < 0) {
            throw SeriesTooShortError("series holds no target observations");
        }
        if (candidate_lags(0, p_, m_).empty()) {
            throw EmptyLagSetError(
                "candidate lag set empty at index 0; m must be >= 2p+1");
        }
        double mean = 0.0;
        for (double v : series.values()) mean += v;
        mean /= static_cast<double>(series.size());
        std::vector<double> centered(series.values());
        for (double& v : centered) v -= mean;
        centered_ = TimeSeries(std::move(centered), series.sample_rate_hz(),
                               series.first_index());
    }

    std::int64_t n() const { return n_; }

    struct PassResult {
        double monitor = 0.0;
        Responsibilities omega;
    };

    // One evaluation sweep at a fixed covariance: per-target lag weights and
    // the surrogate objective value.
    PassResult pass(const MixtureParam& sigma, bool want_omega) const {
        const auto llt = cholesky_spd(sigma.matrix(), "covariance");
        const auto windows =
            detail::transform_windows(centered_, p_ + 1, n_, llt, nullptr);
        const double half_logdet =
            llt.matrixLLT().diagonal().array().log().sum();

        PassResult out;
        if (want_omega) out.omega.rows.resize(n_ + 1);
        Eigen::ArrayXd log_k;
        for (std::int64_t i = 0; i <= n_; ++i) {
            const LagSet lags = candidate_lags(i, p_, m_);
            const std::int64_t d = lags.count();
            log_k.resize(d);
            const auto current = windows.col(i);
            for (std::int64_t c = 0; c < d; ++c) {
                log_k[c] =
                    -0.5 *
                    (current - windows.col(i - (lags.lo + c))).squaredNorm();
            }
            const double lse = detail::log_sum_exp(log_k);
            out.monitor +=
                lse - half_logdet - std::log(static_cast<double>(d));
            if (want_omega) {
                auto& row = out.omega.rows[i];
                row.resize(d);
                for (std::int64_t c = 0; c < d; ++c) {
                    row[c] = std::exp(log_k[c] - lse);
                }
            }
        }
        return out;
    }

    // Weighted covariance of window differences. The sum over pairs of
    // omega * (z_i - z_t)(z_i - z_t)' is expanded into per-window outer
    // products so the cost stays linear in the pair count.
    MixtureParam update(const Responsibilities& omega) const {
        if (static_cast<std::int64_t>(omega.rows.size()) != n_ + 1) {
            throw ShapeError("responsibilities must hold one row per target");
        }
        const int dim = p_ + 1;
        const std::int64_t end0 = centered_.first_index() + p_;
        const std::int64_t n_windows = n_ - end0 + 1;

        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
        Eigen::VectorXd wbar = Eigen::VectorXd::Zero(n_windows);
        Eigen::VectorXd b(dim);
        for (std::int64_t i = 0; i <= n_; ++i) {
            const LagSet lags = candidate_lags(i, p_, m_);
            const auto& row = omega.rows[i];
            if (static_cast<std::int64_t>(row.size()) != lags.count()) {
                throw ShapeError("responsibility row " + std::to_string(i) +
                                 " does not match its lag set");
            }
            b.setZero();
            for (std::size_t c = 0; c < row.size(); ++c) {
                const std::int64_t t = i - (lags.lo + static_cast<std::int64_t>(c));
                b.noalias() += row[c] * window(t);
                wbar[t - end0] += row[c];
            }
            const auto zi = window(i);
            acc.noalias() += zi * zi.transpose();
            acc.noalias() -= zi * b.transpose();
            acc.noalias() -= b * zi.transpose();
        }
        for (std::int64_t t = end0; t <= n_; ++t) {
            const double wt = wbar[t - end0];
            if (wt != 0.0) {
                const auto zt = window(t);
                acc.noalias() += wt * (zt * zt.transpose());
            }
        }
        acc /= static_cast<double>(n_ + 1);
        return MixtureParam(0.5 * (acc + acc.transpose()));
    }

private:
    // Raw centered window ending at index t.
    Eigen::Map<const Eigen::VectorXd> window(std::int64_t t) const {
        return Eigen::Map<const Eigen::VectorXd>(
            centered_.values().data() +
                (t - centered_.first_index()) - p_,
            p_ + 1);
    }

    int p_;
    std::int64_t m_;
    std::int64_t n_;
    TimeSeries centered_;
};

}  // namespace

Responsibilities e_step(const TimeSeries& series, const MixtureParam& sigma,
                        std::int64_t m) {
    EmWorkspace ws(series, sigma.p(), m);
    return ws.pass(sigma, /*want_omega=*/true).omega;
}

MixtureParam m_step(const TimeSeries& series, const Responsibilities& omega,
                    int p, std::int64_t m) {
    EmWorkspace ws(series, p, m);
    return ws.update(omega);
}

MixtureParam init_sigma(const TimeSeries& series, int p) {
    if (p < 1) throw InvalidArgumentError("p must be >= 1");
    const std::int64_t n = series.size();
    if (n < p + 2) {
        throw SeriesTooShortError("diagonal initialization needs at least p+2 = " +
                                  std::to_string(p + 2) + " observations");
    }
    const auto& y = series.values();
    double mean = 0.0;
    for (std::int64_t t = 0; t + 1 < n; ++t) mean += y[t + 1] - y[t];
    mean /= static_cast<double>(n - 1);
    double ss = 0.0;
    for (std::int64_t t = 0; t + 1 < n; ++t) {
        const double d = (y[t + 1] - y[t]) - mean;
        ss += d * d;
    }
    const double var =
        n > 2 ? ss / static_cast<double>(n - 2) : ss;  // n-1 diffs
    const double floored = std::max(var, 1e-8);
    return MixtureParam(floored *
                        Eigen::MatrixXd::Identity(p + 1, p + 1));
}

FittedModel fit(const TimeSeries& series, int p, std::int64_t m,
                const FitConfig& config) {
    if (config.rel_tol <= 0.0) {
        throw InvalidArgumentError("rel_tol must be positive");
    }
    if (config.max_iter < 1) {
        throw InvalidArgumentError("max_iter must be >= 1");
    }
    if (m < 2 * static_cast<std::int64_t>(p) + 1) {
        throw SeriesTooShortError("m must be at least 2p+1 = " +
                                  std::to_string(2 * p + 1));
    }
    if (series.size() < m + 1) {
        throw SeriesTooShortError(
            "series needs more than m = " + std::to_string(m) +
            " observations to fit");
    }

    const TimeSeries view = series.with_first_index(-m);
    MixtureParam sigma = config.init ? *config.init : init_sigma(view, p);
    if (sigma.p() != p) {
        throw ShapeError("initial covariance dimension does not match p");
    }

    EmWorkspace ws(view, p, m);

    // Near-singular updates happen on (near-)constant data, where every
    // window difference collapses; a small isotropic floor keeps the fit
    // usable instead of failing.
    auto pass_with_floor = [&](MixtureParam& s, bool want_omega) {
        try {
            return ws.pass(s, want_omega);
        } catch (const SingularMatrixError&) {
            Eigen::MatrixXd floored = s.matrix();
            floored.diagonal().array() += 1e-8;
            s = MixtureParam(floored);
            return ws.pass(s, want_omega);
        }
    };

    auto current = pass_with_floor(sigma, true);
    std::vector<double> trace{current.monitor};
    MixtureParam best_sigma = sigma;
    double best_monitor = current.monitor;
    int best_at = 0;

    int t = 0;
    bool converged = false;
    while (t < config.max_iter) {
        MixtureParam next = ws.update(current.omega);
        ++t;
        auto next_pass = pass_with_floor(next, true);
        trace.push_back(next_pass.monitor);
        if (next_pass.monitor > best_monitor) {
            best_monitor = next_pass.monitor;
            best_sigma = next;
            best_at = t;
        }
        const double prev = trace[t - 1];
        const double denom = std::abs(prev);
        const double delta = std::abs(next_pass.monitor - prev);
        current = std::move(next_pass);
        if (denom > 0.0 ? (delta / denom < config.rel_tol)
                        : (delta < config.rel_tol)) {
            converged = true;
            break;
        }
    }

    FittedModel model{
        .sigma_hat = best_sigma,
        .p = p,
        .m = m,
        .iterations = t,
        .monitor_trace = std::move(trace),
        .exact_loglik_final = exact_cond_loglik(view, best_sigma, m),
        .converged = converged,
        .best_iterate_used = best_at != t,
    };
    return model;
}

}  // namespace lmar
