#pragma once

#include "star.hpp"

#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace starhex {

/**
 * Element of the dihedral point group generated by the rotation R (by
 * exp(i*pi/3)) and the reflection U (complex conjugation):
 * z -> w^rot * z, or w^rot * conj(z) when refl is set.
 * Composition uses R U = U R^{-1}.
 */
struct DihedralElem {
    int rot = 0;   // exponent mod 6
    bool refl = false;

    static DihedralElem identity() { return {}; }
    static DihedralElem R(int k = 1) { return {((k % 6) + 6) % 6, false}; }
    static DihedralElem U() { return {0, true}; }
    /// V = R^2, one of the two generators of the reflection subgroup.
    static DihedralElem V() { return R(2); }
    /// U R (conjugate first by R, then reflect) = R^{-1} U as a map.
    static DihedralElem UR() { return DihedralElem::U() * DihedralElem::R(); }
    /// S_m = R^{2m+1} U, the reflection across the ray through tip T_m.
    static DihedralElem S(int m) { return R(2 * m + 1) * U(); }

    /// (this) after (other): apply other first.
    DihedralElem operator*(const DihedralElem& o) const {
        DihedralElem r;
        r.rot = ((rot + (refl ? -o.rot : o.rot)) % 6 + 6) % 6;
        r.refl = refl != o.refl;
        return r;
    }

    DihedralElem inverse() const {
        if (refl) return *this;  // reflections are involutions
        return {(6 - rot) % 6, false};
    }

    bool operator==(const DihedralElem& o) const { return rot == o.rot && refl == o.refl; }
    bool operator!=(const DihedralElem& o) const { return !(*this == o); }

    CycNum apply(const CycNum& z) const {
        const CycNum y = refl ? z.conj() : z;
        return CycNum::omega_pow(rot) * y;
    }
    Complex apply(const Complex& z) const {
        const Complex y = refl ? std::conj(z) : z;
        return CycNum::omega_pow(rot).embed() * y;
    }
};

/// The six elements of the reflection subgroup <V, UR>: the even rotations
/// and the three reflections S_m.
inline std::vector<DihedralElem> gvee_elements() {
    std::vector<DihedralElem> out;
    for (int k = 0; k < 3; ++k) out.push_back(DihedralElem::R(2 * k));
    for (int k = 0; k < 3; ++k) out.push_back(DihedralElem::R(2 * k) * DihedralElem::UR());
    return out;
}

/**
 * Exact translation of the tiling lattice, in units of C.  The lattice is
 * Z + Z*w (w = exp(i*pi/3)): exactly the CycNum elements with vanishing
 * z- and z^3-coefficients.  Generators:
 *   u_k = 2 w^(k-1)            for k = 1, 3, 5,
 *   u_k = sqrt(3) z^(k-1)      for k = 2, 4, 6  (tip directions),
 * and u_{-k} = -u_k.  The even-index generators span the sublattice of
 * star-copy centers.
 */
struct LatticeVec {
    CycNum v;

    LatticeVec() : v(CycNum::zero()) {}
    explicit LatticeVec(const CycNum& w) : v(w) {
        if (!is_member(w)) throw std::domain_error("LatticeVec: not a lattice element");
    }

    static bool is_member(const CycNum& w) { return w.b() == 0 && w.d() == 0; }

    /// Integer coordinates (p, q) with v = p + q*w.
    std::pair<std::int64_t, std::int64_t> coords() const { return {v.a(), v.c()}; }

    static LatticeVec generator(int k) {
        if (k == 0 || k < -6 || k > 6) throw std::domain_error("generator index must be in +-1..6");
        const bool neg = k < 0;
        const int j = neg ? -k : k;
        CycNum u;
        if (j % 2 == 1) {
            u = CycNum::from_int(2) * CycNum::omega_pow(j - 1);
        } else {
            u = CycNum::sqrt3() * CycNum::zeta_pow(j - 1);
        }
        return LatticeVec(neg ? -u : u);
    }

    bool operator==(const LatticeVec& o) const { return v == o.v; }
};

/// Membership of a point in V+ (the translated vertices and centers: the
/// whole side-1 triangular lattice), decided exactly.
inline bool vplus_member(const CycNum& z) { return LatticeVec::is_member(z); }

/// Distance from a floating-point location to the nearest V+ point.
inline double vplus_distance(const Complex& z) {
    // Solve z = p + q*w continuously, then scan the four rounding corners.
    static const double S3H = 0.86602540378443865;
    const double q = z.imag() / S3H;
    const double p = z.real() - 0.5 * q;
    double best = 1e300;
    for (int dp = -1; dp <= 2; ++dp) {
        for (int dq = -1; dq <= 2; ++dq) {
            const double pp = std::floor(p) + dp;
            const double qq = std::floor(q) + dq;
            const Complex lattice(pp + 0.5 * qq, S3H * qq);
            best = std::min(best, std::abs(z - lattice));
        }
    }
    return best;
}

/**
 * Element (R^rot, u) of the affine group: z -> w^rot z + u with u in the
 * tiling lattice.  Group law: (h,a)*(j,b) = (h+j, w^h b + a).
 */
struct AffineElem {
    int rot = 0;
    LatticeVec trans;

    static AffineElem identity() { return {}; }
    static AffineElem rotation(int k) { return {((k % 6) + 6) % 6, LatticeVec()}; }
    static AffineElem translation(const LatticeVec& u) { return {0, u}; }

    AffineElem operator*(const AffineElem& o) const {
        AffineElem r;
        r.rot = (rot + o.rot) % 6;
        r.trans = LatticeVec(CycNum::omega_pow(rot) * o.trans.v + trans.v);
        return r;
    }

    AffineElem inverse() const {
        AffineElem r;
        r.rot = (6 - rot) % 6;
        r.trans = LatticeVec(-(CycNum::omega_pow(r.rot) * trans.v));
        return r;
    }

    bool operator==(const AffineElem& o) const { return rot == o.rot && trans == o.trans; }
    bool operator!=(const AffineElem& o) const { return !(*this == o); }
    bool is_identity() const { return rot == 0 && trans.v.is_zero(); }

    CycNum act(const CycNum& z) const { return CycNum::omega_pow(rot) * z + trans.v; }
    Complex act(const Complex& z) const {
        return CycNum::omega_pow(rot).embed() * z + trans.v.embed();
    }
    PlanePoint act(const PlanePoint& p) const {
        if (p.is_exact()) return PlanePoint(act(*p.exact));
        return PlanePoint(act(p.approx));
    }
};

/// R^h u_k expressed as +-u_j; always possible because rotations permute the
/// generator directions within each parity class.
inline std::pair<int, int> rotate_generator(int h, int k) {
    const CycNum target = CycNum::omega_pow(h) * LatticeVec::generator(k).v;
    for (int j = 1; j <= 6; ++j) {
        const CycNum u = LatticeVec::generator(j).v;
        if (u == target) return {+1, j};
        if (-u == target) return {-1, j};
    }
    throw std::logic_error("rotated generator is not a generator");
}

/**
 * The closed-form index rule for R^h u_k: sign (-1)^mu and index nu with
 * nu = h+k (mu=0) for 1 <= h+k <= 6 and nu = h+k-6 (mu=1) for 7 <= h+k <= 11.
 * The rule only matches the exact rotation on part of its stated domain
 * (h = 0, or h even with k odd and h+k <= 6); outside that it contradicts
 * the geometry, so this returns nullopt there and callers fall back to
 * exact lattice arithmetic.
 */
inline std::optional<std::pair<int, int>> mu_nu(int h, int k) {
    if (h < 0 || h > 5 || k < 1 || k > 6) return std::nullopt;
    const int s = h + k;
    if (s < 1 || s > 11) return std::nullopt;
    const int mu = s <= 6 ? 0 : 1;
    const int nu = s <= 6 ? s : s - 6;
    const auto [sign, index] = rotate_generator(h, k);
    if (index == nu && sign == (mu == 0 ? +1 : -1)) return std::make_pair(mu, nu);
    return std::nullopt;
}

/// act(g, z) != z.  Precondition: z outside V+ and g not the identity.
inline bool freeness_check(const AffineElem& g, const PlanePoint& z) {
    if (g.is_identity()) throw std::domain_error("freeness_check: identity element");
    if (z.is_exact()) {
        if (vplus_member(*z.exact)) throw std::domain_error("freeness_check: z in V+");
        return g.act(*z.exact) != *z.exact;
    }
    if (vplus_distance(z.approx) < 1e-9) throw std::domain_error("freeness_check: z in V+");
    return std::abs(g.act(z.approx) - z.approx) > 1e-9;
}

/// Fixed point of z -> w^rot z + u for rot != 0 (each such map has exactly
/// one: u / (1 - w^rot)).
inline Complex fixed_point(const AffineElem& g) {
    if (g.rot == 0) throw std::domain_error("fixed_point: translation has none");
    const Complex w = CycNum::omega_pow(g.rot).embed();
    return g.trans.v.embed() / (1.0 - w);
}

// ---------------------------------------------------------------------------
// Orbits on the edge-pair set and on vertices
// ---------------------------------------------------------------------------

namespace detail {

/// The pair (index 0..5 in pairs()) containing the image of an edge under a
/// point symmetry; the image of a star edge is again a star edge.
inline int image_pair_index(const StarHexagon& star, int edge_label, const DihedralElem& g) {
    const StarEdge& e = star.edge_by_label(edge_label);
    const CycNum t = g.apply(e.tip_pos);
    const CycNum h = g.apply(e.hex_pos);
    for (const auto& f : star.edges()) {
        if (f.tip_pos == t && f.hex_pos == h) return star.pair_index_of_label(f.label);
    }
    throw std::logic_error("symmetry does not preserve the edge set");
}

} // namespace detail

/// Orbit of an edge pair under the reflection subgroup, as pair names.
inline std::set<char> gvee_orbit(const StarHexagon& star, char pair_name) {
    const EdgePair& p = star.pair_by_name(pair_name);
    std::set<char> orbit;
    for (const auto& g : gvee_elements()) {
        const int idx = detail::image_pair_index(star, p.labels[0], g);
        orbit.insert(star.pairs()[static_cast<std::size_t>(idx)].name);
    }
    return orbit;
}

/// Orbits of the 12 star vertices under the reflection subgroup: two tip
/// orbits of size 3 and the hexagon-vertex orbit of size 6.
inline std::vector<std::vector<CycNum>> vertex_orbits(const StarHexagon& star) {
    std::vector<CycNum> remaining = star.vertices();
    std::vector<std::vector<CycNum>> orbits;
    while (!remaining.empty()) {
        const CycNum seed = remaining.front();
        std::vector<CycNum> orbit;
        for (const auto& g : gvee_elements()) {
            const CycNum img = g.apply(seed);
            bool seen = false;
            for (const auto& v : orbit) seen = seen || v == img;
            if (!seen) orbit.push_back(img);
        }
        for (const auto& v : orbit) {
            remaining.erase(std::remove(remaining.begin(), remaining.end(), v), remaining.end());
        }
        orbits.push_back(orbit);
    }
    return orbits;
}

/// Union of the two tip orbits: all six tips.
inline std::vector<CycNum> combined_tip_orbit(const StarHexagon& star) {
    std::vector<CycNum> out;
    for (const auto& orbit : vertex_orbits(star)) {
        if (orbit.size() == 3) out.insert(out.end(), orbit.begin(), orbit.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// The center sublattice and fundamental-domain reduction
// ---------------------------------------------------------------------------

/// Basis of the star-copy center sublattice: sqrt(3) z and sqrt(3) z^3.
inline CycNum center_basis_a() { return CycNum::sqrt3() * CycNum::zeta(); }
inline CycNum center_basis_b() { return CycNum::sqrt3() * CycNum::zeta_pow(3); }

/// Is z a star-copy center (element of the sublattice spanned by the tip
/// translations)?
inline bool is_center_lattice(const CycNum& z) {
    if (!LatticeVec::is_member(z)) return false;
    // z = p + q*w; centers are the sublattice {p + q == 0 mod 3}.
    const auto [p, q] = LatticeVec(z).coords();
    return ((p - q) % 3 + 3) % 3 == 0;
}

/// Enumerate center-lattice points m*A + n*B with |m|,|n| <= span.
inline std::vector<CycNum> enumerate_centers(int span) {
    std::vector<CycNum> out;
    for (int m = -span; m <= span; ++m)
        for (int n = -span; n <= span; ++n)
            out.push_back(center_basis_a() * m + center_basis_b() * n);
    return out;
}

/**
 * Reduction to the fundamental star: returns (z', g) with z' in cl(K*) and
 * act(g, z') = z, exact for exact input.  Points already in the star reduce
 * to themselves with the identity; otherwise the reducing element is the
 * translation by the center of the honeycomb hexagon containing z, with
 * boundary ties broken toward the lexicographically least representative.
 * Throws std::domain_error for points of V+.
 */
inline std::pair<PlanePoint, AffineElem> reduce_to_fundamental(const StarHexagon& star,
                                                               const PlanePoint& z) {
    if (z.is_exact() ? vplus_member(*z.exact) : (vplus_distance(z.approx) < 1e-12)) {
        throw std::domain_error("reduce_to_fundamental: point lies in V+");
    }

    if (z.is_exact() ? star.contains(*z.exact) : star.contains(z.approx)) {
        return {z, AffineElem::identity()};
    }

    // Continuous center-lattice coordinates of z, then scan the nearby
    // integer corners for hexagons containing it.
    static const double S3H = 0.86602540378443865;
    const Complex za = z.approx;
    const double m0 = za.real() / 1.5;
    const double n0 = (za.imag() - m0 * S3H) / (2.0 * S3H);

    std::vector<std::pair<CycNum, Complex>> candidates;
    for (int dm = -2; dm <= 2; ++dm) {
        for (int dn = -2; dn <= 2; ++dn) {
            const auto m = static_cast<std::int64_t>(std::floor(m0)) + dm;
            const auto n = static_cast<std::int64_t>(std::floor(n0)) + dn;
            const CycNum c = center_basis_a() * m + center_basis_b() * n;
            const Complex ca = c.embed();
            if (z.is_exact()) {
                if (star.in_hexagon(*z.exact - c)) candidates.push_back({c, ca});
            } else {
                if (star.in_hexagon_approx(za - ca, 1e-12)) candidates.push_back({c, ca});
            }
        }
    }
    if (candidates.empty()) throw std::logic_error("reduce_to_fundamental: no covering hexagon");

    // Ties on shared hexagon boundaries: keep the lexicographically least
    // reduced representative.
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (z.is_exact()) {
            if (lex_less(*z.exact - candidates[i].first, *z.exact - candidates[best].first))
                best = i;
        } else {
            const Complex a = za - candidates[i].second;
            const Complex b = za - candidates[best].second;
            if (a.real() < b.real() - 1e-15 ||
                (std::abs(a.real() - b.real()) <= 1e-15 && a.imag() < b.imag()))
                best = i;
        }
    }
    const CycNum c = candidates[best].first;
    const AffineElem g = AffineElem::translation(LatticeVec(c));
    if (z.is_exact()) return {PlanePoint(*z.exact - c), g};
    return {PlanePoint(za - candidates[best].second), g};
}

// ---------------------------------------------------------------------------
// Tiling edges
// ---------------------------------------------------------------------------

/// A tiling edge: the unit segment from a star-copy center/tip point to an
/// adjacent lattice vertex, tail + w^direction.
struct TilingEdge {
    CycNum tail;     // in the center sublattice
    int direction;   // 0..5
};

/// All tiling edges meeting the closed disk of the given radius.
inline std::vector<TilingEdge> tiling_edges_in_window(double radius) {
    std::vector<TilingEdge> out;
    const int span = static_cast<int>(radius) + 2;
    for (const auto& c : enumerate_centers(span)) {
        const Complex ca = c.embed();
        for (int j = 0; j < 6; ++j) {
            const Complex head = ca + CycNum::omega_pow(j).embed();
            // Segment-disk test: nearest point of the segment to the origin.
            const Complex d = head - ca;
            double t = -(ca.real() * d.real() + ca.imag() * d.imag());
            t = std::max(0.0, std::min(1.0, t));
            if (std::abs(ca + t * d) <= radius) out.push_back({c, j});
        }
    }
    return out;
}

/// The translation class (0..5) of a tiling edge: its direction from the
/// center-lattice endpoint.  Two tiling edges are translates of one another
/// under the center sublattice iff their classes agree.
inline int tiling_edge_class(const TilingEdge& e) { return e.direction; }

/// The star's own 12 edges, oriented tip-to-vertex, grouped by translation
/// class; every class holds exactly two, one from each of two edge pairs.
inline std::array<std::vector<int>, 6> kstar_edges_by_class(const StarHexagon& star) {
    std::array<std::vector<int>, 6> out;
    for (const auto& e : star.edges()) {
        const CycNum dir = e.hex_pos - e.tip_pos;
        for (int j = 0; j < 6; ++j) {
            if (dir == CycNum::omega_pow(j)) {
                out[static_cast<std::size_t>(j)].push_back(e.label);
                break;
            }
        }
    }
    return out;
}

} // namespace starhex
