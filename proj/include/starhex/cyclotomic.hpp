#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace starhex {

using Complex = std::complex<double>;

/// Thrown when an exact integer coefficient would wrap.
struct overflow_error : std::runtime_error {
    explicit overflow_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::int64_t checked_add(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_add_overflow(x, y, &r)) throw overflow_error("CycNum: integer overflow in +");
    return r;
}

inline std::int64_t checked_sub(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_sub_overflow(x, y, &r)) throw overflow_error("CycNum: integer overflow in -");
    return r;
}

inline std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_mul_overflow(x, y, &r)) throw overflow_error("CycNum: integer overflow in *");
    return r;
}

} // namespace detail

/// Exact sign of p + q*sqrt(3).  sqrt(3) is irrational, so the value is zero
/// only when p == q == 0.
inline int sign_with_sqrt3(std::int64_t p, std::int64_t q) {
    if (p == 0 && q == 0) return 0;
    if (p >= 0 && q >= 0) return +1;
    if (p <= 0 && q <= 0) return -1;
    // Mixed signs: compare p^2 against 3 q^2.
    const std::int64_t p2 = detail::checked_mul(p, p);
    const std::int64_t q2 = detail::checked_mul(3, detail::checked_mul(q, q));
    if (p > 0) return p2 > q2 ? +1 : -1;
    return p2 > q2 ? -1 : +1;
}

/**
 * CycNum: an element a + b*z + c*z^2 + d*z^3 of the ring Z[z], where
 * z = exp(i*pi/6) is a primitive 12th root of unity with minimal polynomial
 * x^4 - x^2 + 1.  Products are reduced by z^4 = z^2 - 1, so the coefficient
 * tuple is canonical.  All arithmetic is overflow-checked.
 *
 * The ring contains the sixth root of unity w = z^2, the imaginary unit
 * i = z^3, sqrt(3) = 2z - z^3, and is closed under complex conjugation,
 * which is enough to express every vertex, edge line, reflection and lattice
 * translation of the star-hexagon geometry exactly.
 */
class CycNum {
public:
    constexpr CycNum() : c_{0, 0, 0, 0} {}
    constexpr CycNum(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
        : c_{a, b, c, d} {}

    static constexpr CycNum from_int(std::int64_t n) { return CycNum(n, 0, 0, 0); }
    static constexpr CycNum zero() { return CycNum(); }
    static constexpr CycNum one() { return CycNum(1, 0, 0, 0); }
    /// z itself.
    static constexpr CycNum zeta() { return CycNum(0, 1, 0, 0); }
    /// w = z^2 = exp(i*pi/3), the order-6 rotation.
    static constexpr CycNum omega() { return CycNum(0, 0, 1, 0); }
    /// i = z^3.
    static constexpr CycNum imag_unit() { return CycNum(0, 0, 0, 1); }
    /// sqrt(3) = 2z - z^3.
    static constexpr CycNum sqrt3() { return CycNum(0, 2, 0, -1); }

    /// z^k for any integer k, reduced exactly.
    static CycNum zeta_pow(int k) {
        int m = k % 12;
        if (m < 0) m += 12;
        static constexpr std::array<std::array<std::int64_t, 4>, 12> table = {{
            {1, 0, 0, 0},   // z^0
            {0, 1, 0, 0},   // z^1
            {0, 0, 1, 0},   // z^2
            {0, 0, 0, 1},   // z^3
            {-1, 0, 1, 0},  // z^4 = z^2 - 1
            {0, -1, 0, 1},  // z^5 = z^3 - z
            {-1, 0, 0, 0},  // z^6 = -1
            {0, -1, 0, 0},  // z^7
            {0, 0, -1, 0},  // z^8
            {0, 0, 0, -1},  // z^9
            {1, 0, -1, 0},  // z^10
            {0, 1, 0, -1},  // z^11
        }};
        const auto& t = table[static_cast<std::size_t>(m)];
        return CycNum(t[0], t[1], t[2], t[3]);
    }

    /// w^k = z^(2k).
    static CycNum omega_pow(int k) { return zeta_pow(2 * k); }

    std::int64_t a() const { return c_[0]; }
    std::int64_t b() const { return c_[1]; }
    std::int64_t c() const { return c_[2]; }
    std::int64_t d() const { return c_[3]; }
    const std::array<std::int64_t, 4>& coeffs() const { return c_; }

    bool operator==(const CycNum& o) const { return c_ == o.c_; }
    bool operator!=(const CycNum& o) const { return c_ != o.c_; }

    bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }

    CycNum operator+(const CycNum& o) const {
        using detail::checked_add;
        return CycNum(checked_add(c_[0], o.c_[0]), checked_add(c_[1], o.c_[1]),
                      checked_add(c_[2], o.c_[2]), checked_add(c_[3], o.c_[3]));
    }

    CycNum operator-(const CycNum& o) const {
        using detail::checked_sub;
        return CycNum(checked_sub(c_[0], o.c_[0]), checked_sub(c_[1], o.c_[1]),
                      checked_sub(c_[2], o.c_[2]), checked_sub(c_[3], o.c_[3]));
    }

    CycNum operator-() const {
        using detail::checked_sub;
        return CycNum(checked_sub(0, c_[0]), checked_sub(0, c_[1]),
                      checked_sub(0, c_[2]), checked_sub(0, c_[3]));
    }

    CycNum operator*(const CycNum& o) const {
        using detail::checked_add;
        using detail::checked_mul;
        using detail::checked_sub;
        const std::int64_t a1 = c_[0], b1 = c_[1], c1 = c_[2], d1 = c_[3];
        const std::int64_t a2 = o.c_[0], b2 = o.c_[1], c2 = o.c_[2], d2 = o.c_[3];
        // Raw convolution up to degree 6, then reduce by
        // z^4 = z^2 - 1, z^5 = z^3 - z, z^6 = -1.
        const std::int64_t e0 = checked_mul(a1, a2);
        const std::int64_t e1 = checked_add(checked_mul(a1, b2), checked_mul(b1, a2));
        const std::int64_t e2 = checked_add(checked_mul(a1, c2),
                                checked_add(checked_mul(b1, b2), checked_mul(c1, a2)));
        const std::int64_t e3 = checked_add(
            checked_add(checked_mul(a1, d2), checked_mul(b1, c2)),
            checked_add(checked_mul(c1, b2), checked_mul(d1, a2)));
        const std::int64_t e4 = checked_add(checked_mul(b1, d2),
                                checked_add(checked_mul(c1, c2), checked_mul(d1, b2)));
        const std::int64_t e5 = checked_add(checked_mul(c1, d2), checked_mul(d1, c2));
        const std::int64_t e6 = checked_mul(d1, d2);
        return CycNum(checked_sub(checked_sub(e0, e4), e6),
                      checked_sub(e1, e5),
                      checked_add(e2, e4),
                      checked_add(e3, e5));
    }

    CycNum operator*(std::int64_t n) const {
        using detail::checked_mul;
        return CycNum(checked_mul(c_[0], n), checked_mul(c_[1], n),
                      checked_mul(c_[2], n), checked_mul(c_[3], n));
    }

    /// Complex conjugate, an exact ring automorphism (z -> z^11 = z - z^3).
    CycNum conj() const {
        using detail::checked_add;
        using detail::checked_sub;
        return CycNum(checked_add(c_[0], c_[2]), c_[1], checked_sub(0, c_[2]),
                      checked_sub(0, checked_add(c_[1], c_[3])));
    }

    /// |w|^2 = w * conj(w); always a real element (b + 2d == 0, c == 0 form
    /// does not hold in general, but the embedded imaginary part vanishes).
    CycNum norm_sq() const { return (*this) * conj(); }

    /// Numerical embedding sum_k coeff_k * exp(i*k*pi/6).
    Complex embed() const {
        static const double S3H = 0.86602540378443864676; // sqrt(3)/2
        const double a = static_cast<double>(c_[0]);
        const double b = static_cast<double>(c_[1]);
        const double c = static_cast<double>(c_[2]);
        const double d = static_cast<double>(c_[3]);
        return Complex(a + S3H * b + 0.5 * c, 0.5 * b + S3H * c + d);
    }

    /// 2*Re(w) as an exact pair (p, q) meaning p + q*sqrt(3).
    std::pair<std::int64_t, std::int64_t> twice_re() const {
        return {detail::checked_add(detail::checked_mul(2, c_[0]), c_[2]), c_[1]};
    }

    /// 2*Im(w) as an exact pair (p, q) meaning p + q*sqrt(3).
    std::pair<std::int64_t, std::int64_t> twice_im() const {
        return {detail::checked_add(c_[1], detail::checked_mul(2, c_[3])), c_[2]};
    }

    /// Exact sign of the real part.
    int re_sign() const {
        auto [p, q] = twice_re();
        return sign_with_sqrt3(p, q);
    }

    /// Exact sign of the imaginary part.
    int im_sign() const {
        auto [p, q] = twice_im();
        return sign_with_sqrt3(p, q);
    }

    bool is_real() const { return im_sign() == 0; }

    std::string str() const {
        std::ostringstream os;
        os << "(" << c_[0] << "," << c_[1] << "," << c_[2] << "," << c_[3] << ")";
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const CycNum& w) { return os << w.str(); }

private:
    std::array<std::int64_t, 4> c_;
};

inline CycNum operator*(std::int64_t n, const CycNum& w) { return w * n; }

/// Exact comparison of real parts: sign of Re(u) - Re(v).
inline int compare_re(const CycNum& u, const CycNum& v) { return (u - v).re_sign(); }

/// Exact comparison of imaginary parts.
inline int compare_im(const CycNum& u, const CycNum& v) { return (u - v).im_sign(); }

/// Lexicographic order on embedded points by (Re, Im), decided exactly.
inline bool lex_less(const CycNum& u, const CycNum& v) {
    const int r = compare_re(u, v);
    if (r != 0) return r < 0;
    return compare_im(u, v) < 0;
}

/**
 * A point of the plane, either exact (a CycNum, in units of the side
 * constant C) or a plain floating-point complex number.  Exact points keep
 * their numerical embedding alongside.
 */
struct PlanePoint {
    std::optional<CycNum> exact;
    Complex approx;

    PlanePoint() : exact(CycNum::zero()), approx(0.0, 0.0) {}
    PlanePoint(const CycNum& w) : exact(w), approx(w.embed()) {}
    PlanePoint(const Complex& z) : exact(std::nullopt), approx(z) {}
    PlanePoint(double x, double y) : exact(std::nullopt), approx(x, y) {}

    bool is_exact() const { return exact.has_value(); }
};

} // namespace starhex
