#pragma once

#include "analytic.hpp"

#include <optional>
#include <vector>

namespace starhex {

struct FlowOptions {
    double h_tol = 1e-9;      // |H| drift budget over the whole trace
    double rel_tol = 1e-12;   // integrator tolerance
    double abs_tol = 1e-14;
    double eta_event = 1e-3;  // pinch detection threshold on |eta|
    double xi_max = 25.0;     // chart guard
    double max_step = 0.02;
    int max_steps = 4000000;
};

struct IncompletenessEvent {
    double t_stop;     // time at which integration stopped
    double t_hit;      // extrapolated branch-point hit time
    int root_index;    // which sixth root is approached
};

struct FlowTrace {
    std::vector<double> times;
    std::vector<Complex> xi;
    std::vector<Complex> eta;
    Complex alpha;
    double max_h_drift = 0.0;
    int accepted_steps = 0;
    int rejected_steps = 0;
    std::optional<IncompletenessEvent> incompleteness;
};

namespace detail {

struct State {
    Complex xi, eta;
};

inline State rhs(const Complex& alpha, const State& s) {
    return {alpha * s.eta, -6.0 * alpha * std::pow(s.xi, 5)};
}

inline State axpy(const State& s, double c, const State& d) {
    return {s.xi + c * d.xi, s.eta + c * d.eta};
}

} // namespace detail

/**
 * Real-time integral curve of the rotated Hamiltonian field
 * dxi/dt = alpha eta, deta/dt = -6 alpha xi^5, by an adaptive embedded
 * Dormand-Prince 5(4) step with |H| drift monitoring: a step whose drift
 * exceeds a tenth of the budget is rejected outright.  Integration stops
 * early with an incompleteness event when |eta| falls below eta_min, with
 * the hit time extrapolated from the square-root pinch profile.
 */
inline FlowTrace hamiltonian_flow(const SurfacePoint& start, const Complex& alpha,
                                  double t_end, const FlowOptions& opts = {}) {
    using detail::State;
    if (std::abs(std::abs(alpha) - 1.0) > 1e-12)
        throw std::domain_error("hamiltonian_flow: |alpha| must be 1");
    if (std::abs(hamiltonian(start.xi, start.eta)) > 1e-9)
        throw std::domain_error("hamiltonian_flow: start not on the surface");

    // Dormand-Prince coefficients.
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    FlowTrace trace;
    trace.alpha = alpha;
    State y{start.xi, start.eta};
    double t = 0.0;
    trace.times.push_back(t);
    trace.xi.push_back(y.xi);
    trace.eta.push_back(y.eta);

    double h = std::min(opts.max_step, t_end > 0 ? t_end / 16.0 : opts.max_step);
    const double per_step_drift = opts.h_tol / 10.0;

    int steps = 0;
    while (t < t_end && steps++ < opts.max_steps) {
        h = std::min(h, t_end - t);
        const State k1 = detail::rhs(alpha, y);
        const State y2 = detail::axpy(y, h * a21, k1);
        const State k2 = detail::rhs(alpha, y2);
        State y3 = detail::axpy(y, h * a31, k1);
        y3 = detail::axpy(y3, h * a32, k2);
        const State k3 = detail::rhs(alpha, y3);
        State y4 = detail::axpy(y, h * a41, k1);
        y4 = detail::axpy(y4, h * a42, k2);
        y4 = detail::axpy(y4, h * a43, k3);
        const State k4 = detail::rhs(alpha, y4);
        State y5 = detail::axpy(y, h * a51, k1);
        y5 = detail::axpy(y5, h * a52, k2);
        y5 = detail::axpy(y5, h * a53, k3);
        y5 = detail::axpy(y5, h * a54, k4);
        const State k5 = detail::rhs(alpha, y5);
        State y6 = detail::axpy(y, h * a61, k1);
        y6 = detail::axpy(y6, h * a62, k2);
        y6 = detail::axpy(y6, h * a63, k3);
        y6 = detail::axpy(y6, h * a64, k4);
        y6 = detail::axpy(y6, h * a65, k5);
        const State k6 = detail::rhs(alpha, y6);
        State ynew = detail::axpy(y, h * b1, k1);
        ynew = detail::axpy(ynew, h * b3, k3);
        ynew = detail::axpy(ynew, h * b4, k4);
        ynew = detail::axpy(ynew, h * b5, k5);
        ynew = detail::axpy(ynew, h * b6, k6);
        const State k7 = detail::rhs(alpha, ynew);

        Complex err_xi = h * (e1 * k1.xi + e3 * k3.xi + e4 * k4.xi + e5 * k5.xi +
                              e6 * k6.xi + e7 * k7.xi);
        Complex err_eta = h * (e1 * k1.eta + e3 * k3.eta + e4 * k4.eta + e5 * k5.eta +
                               e6 * k6.eta + e7 * k7.eta);
        const double scale_xi =
            opts.abs_tol + opts.rel_tol * std::max(std::abs(y.xi), std::abs(ynew.xi));
        const double scale_eta =
            opts.abs_tol + opts.rel_tol * std::max(std::abs(y.eta), std::abs(ynew.eta));
        const double err = std::sqrt(0.5 * (std::norm(err_xi / scale_xi) +
                                            std::norm(err_eta / scale_eta)));
        const double drift = std::abs(hamiltonian(ynew.xi, ynew.eta));
        const double drift_step = drift - std::abs(hamiltonian(y.xi, y.eta));

        if (err <= 1.0 && drift_step <= per_step_drift) {
            t += h;
            y = ynew;
            trace.times.push_back(t);
            trace.xi.push_back(y.xi);
            trace.eta.push_back(y.eta);
            trace.max_h_drift = std::max(trace.max_h_drift, drift);
            ++trace.accepted_steps;
            // Branch-point pinch: eta crosses zero transversally while xi
            // stalls at a sixth root.  The crossing is far narrower than a
            // step, so solve the (locally affine) eta(t) for its closest
            // approach inside the step just taken.
            {
                const Complex eta_dot = -6.0 * alpha * std::pow(y.xi, 5);
                const double speed2 = std::norm(eta_dot);
                if (speed2 > 0) {
                    const double tau =
                        -(y.eta.real() * eta_dot.real() + y.eta.imag() * eta_dot.imag()) /
                        speed2;
                    const Complex eta_min = y.eta + tau * eta_dot;
                    if (tau >= -h && tau <= 0.25 * h && std::abs(eta_min) < opts.eta_event) {
                        int nearest = 0;
                        double best = 1e300;
                        for (int k = 0; k < 6; ++k) {
                            const double d =
                                std::abs(y.xi - sixth_roots()[static_cast<std::size_t>(k)]);
                            if (d < best) {
                                best = d;
                                nearest = k;
                            }
                        }
                        if (best < 0.05) {
                            trace.incompleteness = IncompletenessEvent{t, t + tau, nearest};
                            break;
                        }
                    }
                }
            }
            if (std::abs(y.xi) > opts.xi_max)
                throw std::domain_error("hamiltonian_flow: trajectory left the chart");
        } else {
            ++trace.rejected_steps;
        }
        const double shrink = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(shrink, 0.2, 5.0);
        h = std::min(h, opts.max_step);
        if (h < 1e-15) throw std::runtime_error("hamiltonian_flow: step size underflow");
    }
    return trace;
}

/**
 * Develop the image of a concrete xi-polyline (prepending the straight leg
 * from 0 to its first point) with the branch carried along; returns the
 * z-value at every polyline vertex.
 */
inline std::vector<Complex> develop_along(const std::vector<Complex>& xs,
                                          const DevelopOptions& opts = {}) {
    if (xs.empty()) return {};
    static const double INV_SQRT2 = 0.7071067811865475244;
    std::vector<Complex> out;
    out.reserve(xs.size());

    Complex z(0.0, 0.0);
    Complex branch(1.0, 0.0);
    // Leg from the base point to the first sample.
    std::vector<Complex> pts;
    pts.push_back(Complex(0.0, 0.0));
    pts.insert(pts.end(), xs.begin(), xs.end());

    PlanePath whole(pts);
    whole.require_clearance(opts.eps);

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Complex a = pts[i];
        const Complex b = pts[i + 1];
        if (a != b) {
            detail::BranchTable table(
                [a, b](double t) {
                    const Complex w = a + t * (b - a);
                    return 1.0 - std::pow(w, 6);
                },
                0.0, 1.0, branch);
            z += AdaptiveGK::integrate([&](double t) { return (b - a) / table.eval(t); }, 0.0,
                                       1.0, opts.abs_tol, opts.rel_tol);
            branch = table.end_value();
        }
        out.push_back(INV_SQRT2 * z);
    }
    return out;
}

/**
 * Residual of the straightening identity along a flow trace: the developed
 * image must be z(0) + alpha * t.  Returns the max deviation over samples.
 */
inline double flow_straightening_residual(const FlowTrace& trace,
                                          const DevelopOptions& opts = {}) {
    const std::vector<Complex> zs = develop_along(trace.xi, opts);
    double worst = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const Complex expect = zs.front() + trace.alpha * trace.times[i];
        worst = std::max(worst, std::abs(zs[i] - expect));
    }
    return worst;
}

/**
 * Inverse of the developing map on the principal sheet: solves F(xi) = z by
 * a damped Newton iteration (F' = 1 / eta on the tracked branch).
 */
inline Complex develop_inverse(const Complex& z_target, double tol = 1e-12) {
    Complex xi = std::sqrt(2.0) * z_target;
    if (std::abs(xi) > 0.9) xi *= 0.9 / std::abs(xi);
    double res = 1e300;
    for (int it = 0; it < 80; ++it) {
        const DevelopResult dr = develop(PlanePath::straight(Complex(0, 0), xi),
                                         DevelopOptions{1e-9, 1e-12, 1e-13});
        const Complex f = dr.z - z_target;
        res = std::abs(f);
        if (res < tol) return xi;
        // Newton step with simple damping against leaving the chart.
        Complex step = -f * dr.eta_end;
        for (int damp = 0; damp < 30; ++damp) {
            const Complex cand = xi + step;
            bool clear = true;
            for (const Complex& w : sixth_roots())
                if (std::abs(cand - w) < 1e-6) clear = false;
            if (clear) {
                xi = cand;
                break;
            }
            step *= 0.5;
        }
    }
    throw refinement_error("develop_inverse: Newton iteration did not converge");
}

} // namespace starhex
