#pragma once

// Nonlinear least squares: a damped (Levenberg-Marquardt style) minimizer
// with box bounds, plus closed-form model fits for exponential decays and
// damped cosines. All fits are deterministic: identical inputs give
// bitwise-identical outputs.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nvsim/constants.hpp"
#include "nvsim/linalg.hpp"
#include "nvsim/spin_system.hpp"

namespace nvsim {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct LeastSquaresOptions {
    int max_iterations = 500;
    double initial_damping = 1e-3;
    double residual_change_tol = 1e-10; // relative, accepted steps
    double step_norm_tol = 1e-12;
    double fd_step = 1e-7;
};

struct LeastSquaresResult {
    VectorXd parameters;
    double residual_norm = 0.0; // 2-norm of the residual vector
    int iterations = 0;
    bool converged = false;
};

using ResidualFn = std::function<VectorXd(const VectorXd&)>;
using JacobianFn = std::function<MatrixXd(const VectorXd&)>;

namespace detail {

inline VectorXd clamp_to_box(VectorXd p, const VectorXd& lo,
                             const VectorXd& hi) {
    for (Eigen::Index i = 0; i < p.size(); ++i)
        p[i] = std::min(hi[i], std::max(lo[i], p[i]));
    return p;
}

inline MatrixXd finite_difference_jacobian(const ResidualFn& f,
                                           const VectorXd& p,
                                           const VectorXd& r0,
                                           const VectorXd& lo,
                                           const VectorXd& hi, double step) {
    MatrixXd j(r0.size(), p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        double h = step * std::max(1.0, std::abs(p[i]));
        VectorXd q = p;
        if (p[i] + h > hi[i]) h = -h; // stay inside the box
        q[i] = p[i] + h;
        j.col(i) = (f(q) - r0) / h;
    }
    return j;
}

inline std::string parameter_echo(const VectorXd& p) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(p[i]);
    }
    return s + "]";
}

} // namespace detail

inline LeastSquaresResult minimize_least_squares(
    const ResidualFn& residual, VectorXd initial, const VectorXd& lower,
    const VectorXd& upper, const LeastSquaresOptions& options = {},
    const JacobianFn& jacobian = nullptr) {
    if (initial.size() != lower.size() || initial.size() != upper.size())
        throw Error("minimize_least_squares: bound sizes mismatch");

    VectorXd p = detail::clamp_to_box(std::move(initial), lower, upper);
    VectorXd r = residual(p);
    double cost = r.squaredNorm();
    if (!std::isfinite(cost))
        throw Error("minimize_least_squares: non-finite residual at initial "
                    "parameters " +
                    detail::parameter_echo(p));

    double damping = options.initial_damping;
    LeastSquaresResult result;
    result.parameters = p;
    result.residual_norm = std::sqrt(cost);
    result.converged = false;

    int it = 0;
    for (; it < options.max_iterations; ++it) {
        const MatrixXd j =
            jacobian ? jacobian(p)
                     : detail::finite_difference_jacobian(
                           residual, p, r, lower, upper, options.fd_step);
        const MatrixXd jtj = j.transpose() * j;
        const VectorXd g = j.transpose() * r;

        VectorXd scale = jtj.diagonal();
        for (Eigen::Index k = 0; k < scale.size(); ++k)
            scale[k] = std::max(scale[k], 1e-12);

        // Damping schedule: /10 on accept, *10 on reject.
        bool accepted = false;
        for (int tries = 0; tries < 40 && !accepted; ++tries) {
            MatrixXd a = jtj;
            a.diagonal() += damping * scale;
            const VectorXd step = a.ldlt().solve(-g);
            const VectorXd q = detail::clamp_to_box(p + step, lower, upper);
            const VectorXd rq = residual(q);
            const double cq = rq.squaredNorm();
            if (!std::isfinite(cq))
                throw Error("minimize_least_squares: non-finite residual at " +
                            detail::parameter_echo(q));
            if (cq < cost) {
                const double rel_change =
                    (cost - cq) / std::max(cost, 1e-300);
                const double step_norm = (q - p).norm();
                p = q;
                r = rq;
                cost = cq;
                damping = std::max(damping / 10.0, 1e-14);
                accepted = true;
                if (rel_change < options.residual_change_tol ||
                    step_norm < options.step_norm_tol) {
                    result.converged = true;
                }
            } else {
                damping *= 10.0;
                if ((q - p).norm() < options.step_norm_tol) {
                    // The box or the damping pinned us; nothing left to do.
                    result.converged = true;
                    accepted = true;
                }
            }
        }
        if (!accepted || result.converged) break;
    }

    result.parameters = p;
    result.residual_norm = std::sqrt(cost);
    result.iterations = it + 1;
    return result;
}

// ---------------------------------------------------------------------------
// Exponential decay: y = A * exp(-t/T) + C
// ---------------------------------------------------------------------------

struct DecayFit {
    double amplitude = 0.0;
    double time_constant = 0.0; // same unit as t
    double offset = 0.0;
    double residual_norm = 0.0;
    bool converged = false;
    bool time_constant_identifiable = true;
};

namespace detail {

// Linear least squares for (A, C) at fixed T.
inline void amplitude_offset_at(const std::vector<double>& t,
                                const std::vector<double>& y, double big_t,
                                double& a, double& c) {
    double see = 0, se = 0, sye = 0, sy = 0;
    const auto n = double(t.size());
    for (size_t i = 0; i < t.size(); ++i) {
        const double e = std::exp(-t[i] / big_t);
        see += e * e;
        se += e;
        sye += y[i] * e;
        sy += y[i];
    }
    const double det = see * n - se * se;
    if (std::abs(det) < 1e-300) {
        a = 0.0;
        c = sy / n;
        return;
    }
    a = (sye * n - sy * se) / det;
    c = (sy * see - sye * se) / det;
}

} // namespace detail

inline DecayFit fit_exponential(const std::vector<double>& t,
                                const std::vector<double>& y,
                                const LeastSquaresOptions& options = {}) {
    if (t.size() != y.size() || t.size() < 4)
        throw Error("fit_exponential: need >= 4 points");
    for (size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1]))
            throw Error("fit_exponential: t must be strictly increasing");

    const double span = t.back() - t.front();
    double ymin = y[0], ymax = y[0], ysum = 0.0;
    for (double v : y) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
        ysum += v;
    }
    const double yscale = std::max(std::abs(ymin), std::abs(ymax));

    DecayFit fit;
    if (ymax - ymin <= 1e-13 * std::max(1.0, yscale)) {
        // Constant data: offset only, no identifiable time constant.
        fit.amplitude = 0.0;
        fit.offset = ysum / double(y.size());
        fit.time_constant = span;
        fit.converged = true;
        fit.time_constant_identifiable = false;
        return fit;
    }

    const auto model_residual = [&](const VectorXd& p) {
        VectorXd r(Eigen::Index(t.size()));
        for (size_t i = 0; i < t.size(); ++i)
            r[Eigen::Index(i)] = p[0] * std::exp(-t[i] / p[1]) + p[2] - y[i];
        return r;
    };
    const auto model_jacobian = [&](const VectorXd& p) {
        MatrixXd j(Eigen::Index(t.size()), 3);
        for (size_t i = 0; i < t.size(); ++i) {
            const double e = std::exp(-t[i] / p[1]);
            j(Eigen::Index(i), 0) = e;
            j(Eigen::Index(i), 1) = p[0] * e * t[i] / (p[1] * p[1]);
            j(Eigen::Index(i), 2) = 1.0;
        }
        return j;
    };

    VectorXd lo(3), hi(3);
    lo << -1e12, span * 1e-6, -1e12;
    hi << 1e12, span * 1e6, 1e12;

    // Multistart over 8 log-spaced time-constant guesses; exponential fits
    // are notorious for local minima in T.
    bool have_best = false;
    LeastSquaresResult best;
    for (int k = 0; k < 8; ++k) {
        const double big_t =
            span / 100.0 * std::pow(1000.0, double(k) / 7.0); // span/100..10*span
        double a0, c0;
        detail::amplitude_offset_at(t, y, big_t, a0, c0);
        VectorXd p0(3);
        p0 << a0, big_t, c0;
        const auto res = minimize_least_squares(model_residual, p0, lo, hi,
                                                options, model_jacobian);
        if (!have_best || res.residual_norm < best.residual_norm) {
            best = res;
            have_best = true;
        }
    }

    fit.amplitude = best.parameters[0];
    fit.time_constant = best.parameters[1];
    fit.offset = best.parameters[2];
    fit.residual_norm = best.residual_norm;
    fit.converged = best.converged;
    fit.time_constant_identifiable =
        std::abs(fit.amplitude) > 1e-10 * std::max(1.0, yscale);
    return fit;
}

// ---------------------------------------------------------------------------
// Damped cosine: y = A * exp(-t/tau) * cos(2*pi*f*t + phi) + C
// ---------------------------------------------------------------------------

struct OscillationFit {
    double frequency = 0.0; // cycles per unit of t
    double phase = 0.0;     // radians in [0, 2*pi)
    double decay_time = std::numeric_limits<double>::infinity();
    double amplitude = 0.0;
    double offset = 0.0;
    double residual_norm = 0.0;
    bool converged = false;
};

inline OscillationFit fit_damped_cosine(const std::vector<double>& t,
                                        const std::vector<double>& y,
                                        const LeastSquaresOptions& options = {}) {
    if (t.size() != y.size() || t.size() < 8)
        throw Error("fit_damped_cosine: need >= 8 points");
    for (size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1]))
            throw Error("fit_damped_cosine: t must be strictly increasing");

    const size_t n = t.size();
    const double span = t.back() - t.front();
    double dt_min = span;
    for (size_t i = 1; i < n; ++i) dt_min = std::min(dt_min, t[i] - t[i - 1]);
    const double f_nyquist = 0.5 / dt_min;

    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= double(n);

    // Periodogram on a grid of resolution 1/(2*span) up to Nyquist.
    const int n_freq = std::max(8, int(std::floor(f_nyquist * 2.0 * span)));
    double best_power = -1.0, peak_freq = 0.0;
    Complex peak_z{0.0, 0.0};
    std::vector<double> powers;
    powers.reserve(size_t(n_freq));
    for (int k = 1; k <= n_freq; ++k) {
        const double f = double(k) / (2.0 * span);
        if (f > f_nyquist) break;
        Complex z{0.0, 0.0};
        for (size_t i = 0; i < n; ++i) {
            const double ang = -2.0 * constants::pi * f * t[i];
            z += (y[i] - mean) * Complex(std::cos(ang), std::sin(ang));
        }
        const double power = std::norm(z);
        powers.push_back(power);
        if (power > best_power) {
            best_power = power;
            peak_freq = f;
            peak_z = z;
        }
    }
    if (powers.empty())
        throw Error("fit_damped_cosine: no usable frequency grid");

    std::vector<double> sorted = powers;
    std::sort(sorted.begin(), sorted.end());
    const double floor_power = sorted[sorted.size() / 2];
    if (best_power < 4.0 * floor_power)
        throw Error("fit_damped_cosine: no spectral peak above the noise "
                    "floor");
    if (peak_freq * span < 1.0)
        throw Error("fit_damped_cosine: data span less than one period");
    if (peak_freq > 0.5 * f_nyquist)
        throw Error("fit_damped_cosine: estimated frequency above half the "
                    "Nyquist limit; sampling too coarse");

    const double a0 = 2.0 * std::abs(peak_z) / double(n);
    const double phi0 = std::atan2(peak_z.imag(), peak_z.real());

    // Parameters (A, rate, f, phi, C) with rate = 1/tau >= 0 so an undamped
    // cosine sits at the rate=0 boundary instead of tau=infinity.
    const auto model_residual = [&](const VectorXd& p) {
        VectorXd r(Eigen::Index(n));
        for (size_t i = 0; i < n; ++i) {
            const double arg = 2.0 * constants::pi * p[2] * t[i] + p[3];
            r[Eigen::Index(i)] =
                p[0] * std::exp(-p[1] * t[i]) * std::cos(arg) + p[4] - y[i];
        }
        return r;
    };
    const auto model_jacobian = [&](const VectorXd& p) {
        MatrixXd j(Eigen::Index(n), 5);
        for (size_t i = 0; i < n; ++i) {
            const double e = std::exp(-p[1] * t[i]);
            const double arg = 2.0 * constants::pi * p[2] * t[i] + p[3];
            const double c = std::cos(arg), s = std::sin(arg);
            j(Eigen::Index(i), 0) = e * c;
            j(Eigen::Index(i), 1) = -p[0] * t[i] * e * c;
            j(Eigen::Index(i), 2) =
                -p[0] * e * s * 2.0 * constants::pi * t[i];
            j(Eigen::Index(i), 3) = -p[0] * e * s;
            j(Eigen::Index(i), 4) = 1.0;
        }
        return j;
    };

    VectorXd lo(5), hi(5);
    lo << -1e12, 0.0, peak_freq / 3.0, -8.0, -1e12;
    hi << 1e12, 50.0 / span, std::min(3.0 * peak_freq, f_nyquist), 8.0, 1e12;

    bool have_best = false;
    LeastSquaresResult best;
    for (const double r0 : {0.0, 1.0 / span}) {
        VectorXd p0(5);
        p0 << a0, r0, peak_freq, phi0, mean;
        const auto res = minimize_least_squares(model_residual, p0, lo, hi,
                                                options, model_jacobian);
        if (!have_best || res.residual_norm < best.residual_norm) {
            best = res;
            have_best = true;
        }
    }

    OscillationFit fit;
    fit.amplitude = best.parameters[0];
    const double rate = best.parameters[1];
    fit.decay_time = rate > 1e-12
                         ? 1.0 / rate
                         : std::numeric_limits<double>::infinity();
    fit.frequency = best.parameters[2];
    fit.phase = best.parameters[3];
    fit.offset = best.parameters[4];
    fit.residual_norm = best.residual_norm;
    fit.converged = best.converged;
    if (fit.amplitude < 0.0) {
        fit.amplitude = -fit.amplitude;
        fit.phase += constants::pi;
    }
    fit.phase = std::remainder(fit.phase, 2.0 * constants::pi);
    if (fit.phase < 0.0) fit.phase += 2.0 * constants::pi;
    return fit;
}

} // namespace nvsim
