#pragma once

#include "quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace starhex {

using Complex = std::complex<double>;

struct singularity_error : std::runtime_error {
    explicit singularity_error(const std::string& what) : std::runtime_error(what) {}
};

struct refinement_error : std::runtime_error {
    explicit refinement_error(const std::string& what) : std::runtime_error(what) {}
};

/// The six branch points: the sixth roots of unity.
inline const std::array<Complex, 6>& sixth_roots() {
    static const std::array<Complex, 6> roots = [] {
        std::array<Complex, 6> r;
        for (int k = 0; k < 6; ++k) {
            const double th = M_PI * k / 3.0;
            r[static_cast<std::size_t>(k)] = Complex(std::cos(th), std::sin(th));
        }
        return r;
    }();
    return roots;
}

/**
 * The prescribed square root of 1 - xi^6: with w_k - xi = r_k e^{i th_k},
 * th_k in [0, 2pi), the value is prod(sqrt(r_k)) * exp(i * sum(th_k) / 2).
 * Its square is prod(w_k - xi) = xi^6 - 1 (note the sign relative to the
 * principal sqrt of 1 - xi^6; the two differ by a factor +-i).
 */
inline Complex sqrt_footnote(const Complex& xi, double tol = 1e-12) {
    const Complex xi6 = std::pow(xi, 6);
    if (std::abs(xi6 - 1.0) < tol)
        throw singularity_error("sqrt_footnote: branch point");
    double log_r = 0.0;
    double theta_sum = 0.0;
    for (const Complex& w : sixth_roots()) {
        const Complex diff = w - xi;
        log_r += 0.5 * std::log(std::abs(diff));
        double th = std::arg(diff);
        if (th < 0) th += 2.0 * M_PI;
        theta_sum += th;
    }
    return std::exp(log_r) * Complex(std::cos(0.5 * theta_sum), std::sin(0.5 * theta_sum));
}

/// Distance from point p to the segment [a, b].
inline double segment_distance(const Complex& a, const Complex& b, const Complex& p) {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p - a).real() * d.real() + (p - a).imag() * d.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

/**
 * A polyline integration contour.  Valid paths keep every segment at least
 * `eps` away from all six branch points (checked on demand).
 */
struct PlanePath {
    std::vector<Complex> points;

    PlanePath() = default;
    explicit PlanePath(std::vector<Complex> pts) : points(std::move(pts)) {}

    static PlanePath straight(const Complex& a, const Complex& b) {
        return PlanePath({a, b});
    }

    /// Closed circular loop as an n-step polyline (first point repeated).
    static PlanePath loop(const Complex& center, double radius, int n_steps) {
        std::vector<Complex> pts;
        pts.reserve(static_cast<std::size_t>(n_steps) + 1);
        for (int i = 0; i <= n_steps; ++i) {
            const double th = 2.0 * M_PI * i / n_steps;
            pts.push_back(center + radius * Complex(std::cos(th), std::sin(th)));
        }
        pts.back() = pts.front();
        return PlanePath(pts);
    }

    double clearance() const {
        double best = 1e300;
        for (std::size_t i = 0; i + 1 < points.size(); ++i)
            for (const Complex& w : sixth_roots())
                best = std::min(best, segment_distance(points[i], points[i + 1], w));
        return best;
    }

    void require_clearance(double eps) const {
        if (points.size() < 2) throw std::domain_error("path needs at least two points");
        if (clearance() < eps)
            throw singularity_error("path passes within eps of a branch point");
    }
};

namespace detail {

/**
 * Continuous branch of sqrt(g(t)) along t in [t0, t1], seeded with the
 * value at t0.  Evaluation is order-independent: anchors laid down by a
 * monotone walk let any t be reached by a short local walk, so adaptive
 * quadrature may revisit panels freely.
 */
class BranchTable {
public:
    BranchTable(std::function<Complex(double)> g, double t0, double t1, Complex v0)
        : g_(std::move(g)), t0_(t0), t1_(t1) {
        anchors_.push_back({t0, v0});
        // seed walk; 16 coarse steps, refined on demand
        Complex v = v0;
        double t = t0;
        const int coarse = 16;
        for (int i = 1; i <= coarse; ++i) {
            const double tn = t0 + (t1 - t0) * i / coarse;
            v = walk(t, v, tn, 0);
            t = tn;
            anchors_.push_back({t, v});
        }
    }

    Complex eval(double t) const {
        // nearest anchor at or before t
        std::size_t lo = 0;
        for (std::size_t i = 0; i < anchors_.size(); ++i) {
            if (anchors_[i].first <= t + 1e-15) lo = i;
        }
        return walk(anchors_[lo].first, anchors_[lo].second, t, 0);
    }

    Complex end_value() const { return anchors_.back().second; }

private:
    std::function<Complex(double)> g_;
    double t0_, t1_;
    std::vector<std::pair<double, Complex>> anchors_;

    Complex walk(double t_from, Complex v_from, double t_to, int depth) const {
        if (t_from == t_to) return v_from;
        if (depth > 48)
            throw refinement_error("branch continuation: step too coarse to disambiguate sign");
        const Complex p = std::sqrt(g_(t_to));
        if (std::abs(p) == 0.0)
            throw singularity_error("branch continuation hit a zero of the radicand");
        const Complex cand = std::abs(p - v_from) <= std::abs(-p - v_from) ? p : -p;
        if (std::abs(cand - v_from) < 0.7 * std::abs(p)) return cand;
        const double mid = 0.5 * (t_from + t_to);
        const Complex vm = walk(t_from, v_from, mid, depth + 1);
        return walk(mid, vm, t_to, depth + 1);
    }
};

} // namespace detail

/**
 * Analytic continuation of eta = sqrt(2 (1 - xi^6)) along a path, starting
 * from a given determination at the first point.  The result satisfies the
 * surface equation at the endpoint; a loop around a single branch point
 * returns the opposite sign.
 */
inline Complex eta_continue(const PlanePath& path, const Complex& eta_start,
                            double eps = 1e-6) {
    path.require_clearance(eps);
    const Complex xi0 = path.points.front();
    const Complex h0 = 0.5 * eta_start * eta_start + std::pow(xi0, 6) - 1.0;
    if (std::abs(h0) > 1e-9)
        throw std::domain_error("eta_continue: start values do not satisfy the surface equation");

    Complex eta = eta_start;
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        const Complex a = path.points[i];
        const Complex b = path.points[i + 1];
        detail::BranchTable table(
            [a, b](double t) {
                const Complex w = a + t * (b - a);
                return 2.0 * (1.0 - std::pow(w, 6));
            },
            0.0, 1.0, eta);
        eta = table.end_value();
    }
    return eta;
}

struct DevelopOptions {
    double eps = 1e-6;        // branch-point clearance
    double rel_tol = 1e-12;   // quadrature tolerance per segment
    double abs_tol = 1e-13;
};

struct DevelopResult {
    Complex z;        // the developed image (includes the 1/sqrt(2) factor)
    Complex eta_end;  // tracked eta = sqrt(2 (1 - xi^6)) at the endpoint
};

/**
 * The developing integral z = (1/sqrt 2) * int dw / sqrt(1 - w^6) along the
 * path, with the integrand's branch tracked continuously from its value at
 * the path start (principal value 1 at w = 0).  Paths must start at 0.
 */
inline DevelopResult develop(const PlanePath& path, const DevelopOptions& opts = {}) {
    if (path.points.empty() || std::abs(path.points.front()) > 1e-14)
        throw std::domain_error("develop: path must start at 0");
    path.require_clearance(opts.eps);

    static const double INV_SQRT2 = 0.7071067811865475244;
    Complex z(0.0, 0.0);
    Complex branch(1.0, 0.0);  // sqrt(1 - w^6) at w = 0
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        const Complex a = path.points[i];
        const Complex b = path.points[i + 1];
        if (a == b) continue;
        detail::BranchTable table(
            [a, b](double t) {
                const Complex w = a + t * (b - a);
                return 1.0 - std::pow(w, 6);
            },
            0.0, 1.0, branch);
        const Complex seg = AdaptiveGK::integrate(
            [&](double t) { return (b - a) / table.eval(t); }, 0.0, 1.0, opts.abs_tol,
            opts.rel_tol);
        z += seg;
        branch = table.end_value();
    }
    return {INV_SQRT2 * z, std::sqrt(2.0) * branch};
}

/**
 * Developing integral for a path whose final waypoint is one of the branch
 * points.  The last segment is integrated with the square-root-regularizing
 * substitution w = root - (root - a) s^2, every earlier segment as usual.
 */
inline Complex develop_to_root(const PlanePath& path, const DevelopOptions& opts = {}) {
    if (path.points.size() < 2) throw std::domain_error("develop_to_root: short path");
    const Complex endpoint = path.points.back();
    const Complex* root = nullptr;
    for (const Complex& w : sixth_roots())
        if (std::abs(endpoint - w) < 1e-12) root = &w;
    if (!root) throw std::domain_error("develop_to_root: endpoint is not a sixth root of unity");

    // Develop the regular prefix.
    PlanePath prefix;
    prefix.points.assign(path.points.begin(), path.points.end() - 1);
    Complex z(0.0, 0.0);
    Complex branch(1.0, 0.0);
    static const double INV_SQRT2 = 0.7071067811865475244;
    if (prefix.points.size() >= 2) {
        const DevelopResult dr = develop(prefix, opts);
        z = dr.z * std::sqrt(2.0);  // undo the prefactor; reapplied below
        branch = dr.eta_end / std::sqrt(2.0);
    }

    const Complex a = prefix.points.back();
    const Complex r = *root;
    // q(w) = (1 - w^6) / (root - w) = sum_m root^(5-m) w^m, nonzero at the root.
    auto q = [r](const Complex& w) {
        Complex acc(0.0, 0.0);
        Complex wm(1.0, 0.0);
        for (int m = 0; m <= 5; ++m) {
            acc += std::pow(r, 5 - m) * wm;
            wm *= w;
        }
        return acc;
    };
    // Fix sqrt(root - a) so that s * r0 * sqrt(q) continues the branch at a.
    const Complex r0_principal = std::sqrt(r - a);
    const Complex q_at_a = branch / r0_principal;  // candidate sqrt(q(a))
    const Complex r0 = (std::abs(q_at_a * q_at_a - q(a)) <= std::abs(q_at_a * q_at_a + q(a)))
                           ? r0_principal
                           : -r0_principal;
    const Complex sqrt_q_at_a = branch / r0;

    detail::BranchTable qtable(
        [a, r, q](double s) {
            // s runs 1 -> 0 conceptually; table is built on [0,1] with the
            // anchor at s=1 reached by symmetry: parametrize u = 1 - s.
            const double ss = 1.0 - s;
            const Complex w = r - (r - a) * ss * ss;
            return q(w);
        },
        0.0, 1.0, sqrt_q_at_a);

    const Complex tail = AdaptiveGK::integrate(
        [&](double u) { return 2.0 * (r - a) / (r0 * qtable.eval(u)); }, 0.0, 1.0,
        opts.abs_tol, opts.rel_tol);
    return INV_SQRT2 * (z + tail);
}

/// Closed form for the raw edge integral int_0^1 dw / sqrt(1 - w^6):
/// Gamma(1/6) Gamma(1/2) / (6 Gamma(2/3)).
inline double raw_integral_closed_form() {
    return std::exp(std::lgamma(1.0 / 6.0) + std::lgamma(0.5) - std::lgamma(2.0 / 3.0)) / 6.0;
}

/// The raw edge integral by quadrature (endpoint substitution).
inline double raw_integral_quadrature() {
    const Complex F1 = develop_to_root(PlanePath::straight(Complex(0, 0), Complex(1, 0)));
    return std::sqrt(2.0) * F1.real();
}

/// The side constant C = F(1) with the developing map's normalization.
inline double constant_C() {
    return develop_to_root(PlanePath::straight(Complex(0, 0), Complex(1, 0))).real();
}

// ---------------------------------------------------------------------------
// Surface points and pointwise identities
// ---------------------------------------------------------------------------

/// Hamiltonian residual H = eta^2/2 + xi^6 - 1.
inline Complex hamiltonian(const Complex& xi, const Complex& eta) {
    return 0.5 * eta * eta + std::pow(xi, 6) - 1.0;
}

struct SurfacePoint {
    Complex xi;
    Complex eta;
    int sheet = +1;  // +1: eta matches continuation from (0, sqrt 2); -1 otherwise
};

/// Reference determination of eta over xi, continued from (0, sqrt(2))
/// along the straight path.  The path must clear the branch points.
inline Complex eta_reference(const Complex& xi, double eps = 1e-9) {
    const PlanePath p = PlanePath::straight(Complex(0, 0), xi);
    return eta_continue(p, Complex(std::sqrt(2.0), 0.0), eps);
}

/// Validate (xi, eta) as a surface point and tag its sheet.
inline SurfacePoint make_surface_point(const Complex& xi, const Complex& eta) {
    if (std::abs(hamiltonian(xi, eta)) > 1e-9)
        throw std::domain_error("not on the zero level set");
    if (std::abs(eta) == 0.0) throw std::domain_error("eta = 0 is excluded");
    const Complex ref = eta_reference(xi);
    SurfacePoint p;
    p.xi = xi;
    p.eta = eta;
    p.sheet = std::abs(eta - ref) <= std::abs(eta + ref) ? +1 : -1;
    return p;
}

/**
 * |F'(xi) * eta - 1| with F' = 1 / (sqrt(2) sqrt(1 - xi^6)) on the tracked
 * branch and eta on the matching (or deliberately mismatched) sheet.
 */
inline double straightening_residual(const Complex& xi, bool matched_sheet = true) {
    const Complex eta_ref = eta_reference(xi);
    const Complex eta = matched_sheet ? eta_ref : -eta_ref;
    const Complex fprime = 1.0 / eta_ref;  // 1/(sqrt2 * sqrt(1-xi^6)) = 1/eta_ref
    return std::abs(fprime * eta - 1.0);
}

/// Point symmetries of the surface used in the isometry checks.
enum class SurfaceSym { rotation, conjugation, identity };

inline SurfacePoint apply_surface_sym(SurfaceSym g, const SurfacePoint& p) {
    static const Complex w(0.5, 0.86602540378443865);
    switch (g) {
        case SurfaceSym::rotation: {
            SurfacePoint q;
            q.xi = w * p.xi;
            q.eta = p.eta;
            return q;
        }
        case SurfaceSym::conjugation: {
            SurfacePoint q;
            q.xi = std::conj(p.xi);
            q.eta = std::conj(p.eta);
            return q;
        }
        case SurfaceSym::identity:
            return p;
    }
    return p;
}

struct IsometryReport {
    double residual;
    double error_estimate;
};

/**
 * Metric distortion of a surface symmetry at a sample point, measured by
 * central finite differences of the pulled-back hermitian metric
 * (1/eta) dxi (.) conj: the squared length ratio along two tangent
 * directions.  Reports max |ratio - 1| plus a two-scale error estimate;
 * throws when truncation dominates the measurement.
 */
inline IsometryReport isometry_residual(SurfaceSym g, const SurfacePoint& p,
                                        double h = 1e-4) {
    auto continue_eta = [&](const Complex& from_xi, const Complex& from_eta,
                            const Complex& to_xi) {
        return eta_continue(PlanePath::straight(from_xi, to_xi), from_eta);
    };
    auto residual_at = [&](double step) {
        double worst = 0.0;
        for (const Complex dir : {Complex(1, 0), Complex(0, 1)}) {
            const Complex xp = p.xi + step * dir;
            const Complex xm = p.xi - step * dir;
            const Complex ep = continue_eta(p.xi, p.eta, xp);
            const Complex em = continue_eta(p.xi, p.eta, xm);
            const SurfacePoint pp{xp, ep, p.sheet};
            const SurfacePoint pm{xm, em, p.sheet};
            const SurfacePoint qp = apply_surface_sym(g, pp);
            const SurfacePoint qm = apply_surface_sym(g, pm);
            const SurfacePoint q0 = apply_surface_sym(g, p);
            const double len_src = std::abs((xp - xm) / p.eta);
            const double len_img = std::abs((qp.xi - qm.xi) / q0.eta);
            worst = std::max(worst, std::abs(len_img / len_src - 1.0));
        }
        return worst;
    };
    const double r_h = residual_at(h);
    const double r_h2 = residual_at(0.5 * h);
    const double est = std::abs(r_h - r_h2);
    if (est > 10.0 * (r_h2 + 1e-12) && est > 1e-6)
        throw refinement_error("isometry_residual: step too large, truncation dominates");
    return {r_h2, est};
}

} // namespace starhex
