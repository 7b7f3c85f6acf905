#include "ringswarm/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace ringswarm {

std::vector<double> linspace(double a, double b, int n) {
    if (n < 2) throw std::invalid_argument("linspace needs n >= 2");
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
    t.back() = b;
    return t;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order embedded weights.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

double error_norm(const VectorXd& err, const VectorXd& y0, const VectorXd& y1,
                  double atol, double rtol) {
    double acc = 0;
    for (int i = 0; i < err.size(); ++i) {
        double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        double r = err[i] / sc;
        acc += r * r;
    }
    return std::sqrt(acc / err.size());
}

// Cubic Hermite on [t, t+h] using endpoint values and derivatives.
VectorXd hermite(double s, double h, const VectorXd& y0, const VectorXd& f0,
                 const VectorXd& y1, const VectorXd& f1) {
    double s2 = s * s, s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1;
    double h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2;
    double h11 = s3 - s2;
    return h00 * y0 + h * h10 * f0 + h01 * y1 + h * h11 * f1;
}

}  // namespace

Trajectory integrate(const RhsFn& f, const VectorXd& y0, double t0,
                     const std::vector<double>& sample_times, const StepControl& ctrl) {
    Trajectory out;
    if (sample_times.empty()) throw std::invalid_argument("no sample times");
    for (size_t i = 1; i < sample_times.size(); ++i)
        if (sample_times[i] <= sample_times[i - 1])
            throw std::invalid_argument("sample times must be strictly increasing");
    if (sample_times.front() < t0 - 1e-15)
        throw std::invalid_argument("first sample time precedes t0");
    double t_end = sample_times.back();

    const int dim = static_cast<int>(y0.size());
    VectorXd y = y0, k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    VectorXd ytmp(dim), ynew(dim), err(dim);

    double t = t0;
    double h = ctrl.dt_init > 0 ? ctrl.dt_init : 1e-3;
    if (ctrl.dt_max > 0) h = std::min(h, ctrl.dt_max);
    h = std::min(h, t_end - t0);

    size_t next_sample = 0;
    auto emit = [&](double ts, const VectorXd& ys) {
        out.times.push_back(ts);
        out.states.push_back(ys);
    };
    if (std::abs(sample_times[0] - t0) <= 1e-15 * std::max(1.0, std::abs(t0))) {
        emit(t0, y);
        next_sample = 1;
    }
    if (next_sample >= sample_times.size()) {
        out.complete = true;
        return out;
    }

    f(t, y, k1);  // FSAL seed
    // PI step controller (order 5: exponents 0.7/5, 0.4/5).
    double err_prev = 1.0;
    const double safety = 0.9, min_fac = 0.2, max_fac = 6.0;

    for (long step = 0; step < ctrl.max_steps; ++step) {
        if (t >= t_end) break;
        h = std::min(h, t_end - t);
        if (h < ctrl.dt_min) {
            out.complete = false;
            out.failure_reason = "step size underflow at t=" + std::to_string(t);
            return out;
        }

        ytmp = y + h * (a21 * k1);
        f(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h, ytmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        f(t + h, ynew, k7);
        err = ynew - (y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));

        if (!ynew.allFinite()) {
            h *= 0.25;
            continue;
        }
        double en = error_norm(err, y, ynew, ctrl.abs_tol, ctrl.rel_tol);
        if (en <= 1.0) {
            // accepted: emit any samples inside (t, t+h]
            while (next_sample < sample_times.size() && sample_times[next_sample] <= t + h + 1e-15 * std::abs(t + h)) {
                double ts = std::min(sample_times[next_sample], t + h);
                double s = (ts - t) / h;
                emit(sample_times[next_sample], hermite(s, h, y, k1, ynew, k7));
                ++next_sample;
            }
            t += h;
            y = ynew;
            k1 = k7;
            if (next_sample >= sample_times.size()) {
                out.complete = true;
                return out;
            }
            double fac = safety * std::pow(en > 1e-16 ? en : 1e-16, -0.7 / 5) *
                         std::pow(err_prev, 0.4 / 5);
            fac = std::clamp(fac, min_fac, max_fac);
            h *= fac;
            if (ctrl.dt_max > 0) h = std::min(h, ctrl.dt_max);
            err_prev = std::max(en, 1e-16);
        } else {
            double fac = std::clamp(safety * std::pow(en, -1.0 / 5), min_fac, 1.0);
            h *= fac;
        }
    }
    out.complete = next_sample >= sample_times.size();
    if (!out.complete && out.failure_reason.empty())
        out.failure_reason = "max step count exceeded at t=" + std::to_string(t);
    return out;
}

Trajectory integrate_span(const RhsFn& f, const VectorXd& y0, double t0, double t_end,
                          int n_samples, const StepControl& ctrl) {
    return integrate(f, y0, t0, linspace(t0, t_end, n_samples), ctrl);
}

}  // namespace ringswarm
