#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace starhex {

struct quadrature_error : std::runtime_error {
    explicit quadrature_error(const std::string& what) : std::runtime_error(what) {}
};

namespace gk {

// Gauss-Kronrod 7-15 rule on [-1, 1].
inline constexpr int kNodes = 15;
inline constexpr double kX[kNodes] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline constexpr double kWK[kNodes] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
// Gauss weights attach to the odd-indexed Kronrod nodes.
inline constexpr double kWG[7] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                  0.417959183673469, 0.381830050505119, 0.279705391489277,
                                  0.129484966168870};

} // namespace gk

/**
 * Adaptive complex-valued quadrature over [a, b]: G7-K15 panels with
 * recursive bisection until |K15 - G7| meets the mixed tolerance.
 */
class AdaptiveGK {
public:
    template <typename F>
    static std::complex<double> integrate(F&& f, double a, double b, double abs_tol = 1e-13,
                                          double rel_tol = 1e-12, int max_depth = 48) {
        return recurse(f, a, b, abs_tol, rel_tol, max_depth);
    }

private:
    template <typename F>
    static std::complex<double> recurse(F& f, double a, double b, double abs_tol,
                                        double rel_tol, int depth) {
        if (depth <= 0) throw quadrature_error("adaptive quadrature did not converge");
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        std::complex<double> k15(0.0, 0.0), g7(0.0, 0.0);
        for (int i = 0; i < gk::kNodes; ++i) {
            const std::complex<double> v = f(mid + half * gk::kX[i]);
            k15 += gk::kWK[i] * v;
            if (i % 2 == 1) g7 += gk::kWG[i / 2] * v;
        }
        k15 *= half;
        g7 *= half;
        const double err = std::abs(k15 - g7);
        if (err <= abs_tol + rel_tol * std::abs(k15)) return k15;
        return recurse(f, a, mid, 0.5 * abs_tol, rel_tol, depth - 1) +
               recurse(f, mid, b, 0.5 * abs_tol, rel_tol, depth - 1);
    }
};

} // namespace starhex
