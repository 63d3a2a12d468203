#pragma once

#include "flow.hpp"
#include "group.hpp"

#include <optional>
#include <vector>

namespace starhex {

struct BilliardOptions {
    double vertex_tol = 1e-9;    // vertex-hit band, in C units along the edge line
    double center_eps = 1e-9;    // center-pass flag radius
    double boundary_tol = 1e-9;  // membership slack
};

struct BilliardState {
    Complex pos;
    Complex dir;        // unit
    double time = 0.0;  // elapsed, in C units
};

struct BounceEvent {
    enum class Kind { edge_reflection, vertex_reversal, center_pass };
    Kind kind;
    double time = 0.0;
    Complex pos;
    Complex dir_in;
    Complex dir_out;
    int edge_label = 0;              // for reflections
    int vertex_id = -1;              // 0..5 = H0..H5, 6..11 = T0..T5
    bool tolerance_sensitive = false;
    double center_distance = 0.0;    // for center passes
};

struct BilliardTrace {
    std::vector<Complex> polyline;     // start, every bounce point, final point
    std::vector<BounceEvent> events;   // bounces and center passes, in order
    BilliardState final_state;
    double total_length = 0.0;
};

namespace detail {

struct BoundaryHit {
    double t;          // ray parameter = path length
    int line;          // 0..5
    double param;      // position along the line, in [0,3]
    bool is_vertex;
    int vertex_id;
    int edge_label;
    Complex pos;
    bool band_sensitive;
};

inline double dot(const Complex& a, const Complex& b) {
    return a.real() * b.real() + a.imag() * b.imag();
}

/// First intersection of the ray pos + t*dir with the star boundary.
inline std::optional<BoundaryHit> first_boundary_hit(const StarHexagon& star,
                                                     const Complex& pos, const Complex& dir,
                                                     const BilliardOptions& opts) {
    static const double kOffset = 0.8660254037844386468;  // sqrt(3)/2
    std::optional<BoundaryHit> best;
    for (int m = 0; m < 6; ++m) {
        const Complex n = star.line_normal(m).embed();
        const double denom = dot(dir, n);
        if (std::abs(denom) < 1e-15) continue;
        double t = (kOffset - dot(pos, n)) / denom;
        // one Newton polish against the exact line equation
        t += (kOffset - dot(pos + t * dir, n)) / denom;
        if (t < 1e-12) continue;
        const Complex hit = pos + t * dir;
        const Complex d = star.line_dir(m).embed();
        const double s = dot(hit - star.line_start(m).embed(), d);
        if (s < -opts.vertex_tol || s > 3.0 + opts.vertex_tol) continue;
        // Classify along the line: vertices at 0,1,2,3; edges (0,1) and (2,3).
        double nearest_k = std::round(s);
        const bool vertex_band = std::abs(s - nearest_k) <= opts.vertex_tol &&
                                 nearest_k >= 0.0 && nearest_k <= 3.0;
        bool on_edge = (s > 0.0 && s < 1.0) || (s > 2.0 && s < 3.0);
        if (!vertex_band && !on_edge) continue;
        if (best && t >= best->t) continue;
        BoundaryHit h;
        h.t = t;
        h.line = m;
        h.param = s;
        h.pos = hit;
        h.is_vertex = vertex_band;
        h.band_sensitive = vertex_band && std::abs(s - nearest_k) > 1e-13;
        if (vertex_band) {
            const int k = static_cast<int>(nearest_k);
            const int tips[4] = {6 + (m + 1) % 6, -1, -1, 6 + (m + 5) % 6};
            const int hexes[4] = {-1, (m + 1) % 6, m, -1};
            h.vertex_id = k == 0 || k == 3 ? tips[k] : hexes[k];
            h.edge_label = 0;
        } else {
            h.vertex_id = -1;
            h.edge_label = star.line_edge_label(m, s > 1.5);
        }
        best = h;
    }
    return best;
}

inline Complex reflect_dir(const StarHexagon& star, int line, const Complex& d) {
    const Complex n = star.line_normal(line).embed();
    return d - 2.0 * dot(d, n) * n;
}

} // namespace detail

/// Rotating an edge by w^j lands on another edge; its label.
inline int rotated_label(const StarHexagon& star, int label, int j) {
    const StarEdge& e = star.edge_by_label(label);
    const CycNum w = CycNum::omega_pow(j);
    const CycNum tip = w * e.tip_pos;
    const CycNum hex = w * e.hex_pos;
    for (const auto& f : star.edges())
        if (f.tip_pos == tip && f.hex_pos == hex) return f.label;
    throw std::logic_error("rotation did not map the edge set to itself");
}

inline void validate_state(const StarHexagon& star, const BilliardState& s,
                           const BilliardOptions& opts) {
    if (!star.contains(s.pos, opts.boundary_tol))
        throw std::domain_error("billiard state outside cl(K*)");
    if (std::abs(std::abs(s.dir) - 1.0) > 1e-12)
        throw std::domain_error("billiard direction must be unit");
}

/**
 * Advance to the first boundary contact: specular reflection on an open
 * edge, reversal at a vertex (within the tolerance band).  A segment
 * passing within center_eps of the excised center is flagged through the
 * returned event list of trace(); the motion continues through it.
 */
inline std::pair<BilliardState, BounceEvent> billiard_step(const StarHexagon& star,
                                                           const BilliardState& state,
                                                           const BilliardOptions& opts = {}) {
    validate_state(star, state, opts);
    // Starting on the boundary pointing outward is not a billiard state.
    for (int m = 0; m < 6; ++m) {
        const Complex n = star.line_normal(m).embed();
        const double off = detail::dot(state.pos, n) - 0.8660254037844386468;
        if (std::abs(off) <= opts.boundary_tol && detail::dot(state.dir, n) > 1e-12) {
            const Complex d = star.line_dir(m).embed();
            const double s = detail::dot(state.pos - star.line_start(m).embed(), d);
            if (s >= -opts.boundary_tol && s <= 3.0 + opts.boundary_tol &&
                !(s > 1.0 + opts.boundary_tol && s < 2.0 - opts.boundary_tol))
                throw std::domain_error("billiard start on boundary pointing outward");
        }
    }

    const auto hit = detail::first_boundary_hit(star, state.pos, state.dir, opts);
    if (!hit) throw std::logic_error("billiard ray found no boundary");

    BounceEvent ev;
    ev.time = state.time + hit->t;
    ev.pos = hit->pos;
    ev.dir_in = state.dir;
    ev.tolerance_sensitive = hit->band_sensitive;
    BilliardState next;
    next.pos = hit->pos;
    next.time = state.time + hit->t;
    if (hit->is_vertex) {
        ev.kind = BounceEvent::Kind::vertex_reversal;
        ev.vertex_id = hit->vertex_id;
        next.dir = -state.dir;
    } else {
        ev.kind = BounceEvent::Kind::edge_reflection;
        ev.edge_label = hit->edge_label;
        next.dir = detail::reflect_dir(star, hit->line, state.dir);
    }
    ev.dir_out = next.dir;
    return {next, ev};
}

/// Iterate billiard_step, collecting the polyline and all events (center
/// passes included as flagged events; they do not deflect the motion).
inline BilliardTrace billiard_trace(const StarHexagon& star, const BilliardState& start,
                                    int n_events, const BilliardOptions& opts = {}) {
    if (n_events < 0) throw std::domain_error("n_events must be >= 0");
    BilliardTrace out;
    out.final_state = start;
    if (n_events == 0) return out;
    out.polyline.push_back(start.pos);
    BilliardState s = start;
    for (int i = 0; i < n_events; ++i) {
        auto [next, ev] = billiard_step(star, s, opts);
        // Center pass along the segment just traversed?
        const double d0 = segment_distance(s.pos, next.pos, Complex(0, 0));
        if (d0 <= opts.center_eps) {
            BounceEvent cp;
            cp.kind = BounceEvent::Kind::center_pass;
            cp.center_distance = d0;
            cp.pos = Complex(0, 0);
            cp.dir_in = cp.dir_out = s.dir;
            cp.time = s.time + std::abs(-s.pos);  // arc length to closest approach
            out.events.push_back(cp);
        }
        out.total_length += std::abs(next.pos - s.pos);
        out.polyline.push_back(next.pos);
        out.events.push_back(ev);
        s = next;
    }
    out.final_state = s;
    return out;
}

/// Billiard position after arc length L from the trace start.
inline Complex billiard_position_at(const BilliardTrace& tr, double arc) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < tr.polyline.size(); ++i) {
        const double seg = std::abs(tr.polyline[i + 1] - tr.polyline[i]);
        if (arc <= acc + seg || i + 2 == tr.polyline.size()) {
            const double t = seg > 0 ? std::clamp((arc - acc) / seg, 0.0, 1.0) : 0.0;
            return tr.polyline[i] + t * (tr.polyline[i + 1] - tr.polyline[i]);
        }
        acc += seg;
    }
    return tr.polyline.empty() ? Complex(0, 0) : tr.polyline.back();
}

// ---------------------------------------------------------------------------
// Unfolding
// ---------------------------------------------------------------------------

/**
 * Improper affine isometry z -> w^rot (z or conj z) + trans, with the
 * translation kept exact.  The reflections across star edge lines and all
 * of their composites live here.
 */
struct ExtendedIsometry {
    int rot = 0;
    bool refl = false;
    CycNum trans = CycNum::zero();

    static ExtendedIsometry identity() { return {}; }

    /// Reflection across the carrier line of the star's boundary line m.
    static ExtendedIsometry edge_line_reflection(int m) {
        ExtendedIsometry g;
        g.rot = (2 * m + 1) % 6;
        g.refl = true;
        g.trans = CycNum::sqrt3() * CycNum::zeta_pow(2 * m + 1);
        return g;
    }

    static ExtendedIsometry translation(const CycNum& u) {
        ExtendedIsometry g;
        g.trans = u;
        return g;
    }

    Complex apply(const Complex& z) const {
        const Complex y = refl ? std::conj(z) : z;
        return CycNum::omega_pow(rot).embed() * y + trans.embed();
    }
    CycNum apply(const CycNum& z) const {
        const CycNum y = refl ? z.conj() : z;
        return CycNum::omega_pow(rot) * y + trans;
    }
    /// Rotational part applied to a direction vector.
    Complex apply_dir(const Complex& d) const {
        const Complex y = refl ? std::conj(d) : d;
        return CycNum::omega_pow(rot).embed() * y;
    }

    /// this after other.
    ExtendedIsometry operator*(const ExtendedIsometry& o) const {
        ExtendedIsometry r;
        r.rot = ((rot + (refl ? -o.rot : o.rot)) % 6 + 6) % 6;
        r.refl = refl != o.refl;
        const CycNum ot = refl ? o.trans.conj() : o.trans;
        r.trans = CycNum::omega_pow(rot) * ot + trans;
        return r;
    }

    ExtendedIsometry inverse() const {
        ExtendedIsometry r;
        if (!refl) {
            r.rot = (6 - rot) % 6;
            r.refl = false;
            r.trans = -(CycNum::omega_pow(r.rot) * trans);
        } else {
            // (w^k conj(z) + t)^-1 = w^k conj(z - t) applied appropriately
            r.rot = rot;
            r.refl = true;
            r.trans = -(CycNum::omega_pow(rot) * trans.conj());
        }
        return r;
    }

    bool operator==(const ExtendedIsometry& o) const {
        return rot == o.rot && refl == o.refl && trans == o.trans;
    }
};

struct UnfoldedLine {
    Complex start;
    Complex dir;
    double length = 0.0;
    struct Piece {
        double s0, s1;              // arc-length range on the line
        ExtendedIsometry to_star;   // maps line points of this range into cl(K*)
    };
    std::vector<Piece> pieces;
};

struct fold_error : std::runtime_error {
    explicit fold_error(const std::string& what) : std::runtime_error(what) {}
};

/// Minimum distance from the segment [a,b] to the lattice V+.
inline double segment_vplus_distance(const Complex& a, const Complex& b) {
    const double len = std::abs(b - a);
    const int samples = std::max(2, static_cast<int>(len / 0.2) + 2);
    double best = 1e300;
    for (int i = 0; i <= samples; ++i) {
        const Complex p = a + (b - a) * (static_cast<double>(i) / samples);
        // distance from the nearest lattice point to the segment
        static const double S3H = 0.86602540378443865;
        const double q = p.imag() / S3H;
        const double pp = p.real() - 0.5 * q;
        for (int dp = 0; dp <= 1; ++dp)
            for (int dq = 0; dq <= 1; ++dq) {
                const double cp = std::floor(pp) + dp;
                const double cq = std::floor(q) + dq;
                const Complex lattice(cp + 0.5 * cq, S3H * cq);
                best = std::min(best, segment_distance(a, b, lattice));
            }
    }
    return best;
}

/**
 * Straighten a reversal-free billiard trace: the first segment extends to a
 * line, and each bounce contributes the reflection across its edge line to
 * the bookkeeping.  Piece i of the line maps back onto billiard segment i
 * under its recorded isometry.
 */
inline UnfoldedLine unfold(const StarHexagon& star, const BilliardTrace& trace,
                           const BilliardOptions& opts = {}) {
    UnfoldedLine line;
    if (trace.polyline.size() < 2) {
        line.start = trace.final_state.pos;
        line.dir = trace.final_state.dir;
        line.length = 0.0;
        return line;
    }
    line.start = trace.polyline.front();
    line.dir = (trace.polyline[1] - trace.polyline[0]) /
               std::abs(trace.polyline[1] - trace.polyline[0]);

    ExtendedIsometry to_star = ExtendedIsometry::identity();  // line coords -> star coords
    double s = 0.0;
    std::size_t seg = 0;
    for (const auto& ev : trace.events) {
        if (ev.kind == BounceEvent::Kind::center_pass) continue;
        if (ev.kind == BounceEvent::Kind::vertex_reversal)
            throw fold_error("unfold: vertex reversal is not a reflection in any edge");
        const double seg_len = std::abs(trace.polyline[seg + 1] - trace.polyline[seg]);
        line.pieces.push_back({s, s + seg_len, to_star});
        s += seg_len;
        ++seg;
        // The bounce reflects in base-star coordinates, so it composes on
        // the left of everything accumulated so far.
        const StarEdge& e = star.edge_by_label(ev.edge_label);
        to_star = ExtendedIsometry::edge_line_reflection(e.line) * to_star;
    }
    // trailing segment
    const double seg_len = std::abs(trace.polyline[seg + 1] - trace.polyline[seg]);
    line.pieces.push_back({s, s + seg_len, to_star});
    line.length = s + seg_len;

    // The pieces must reassemble the billiard polyline...
    for (std::size_t i = 0; i < line.pieces.size(); ++i) {
        const auto& piece = line.pieces[i];
        const Complex p0 = piece.to_star.apply(line.start + piece.s0 * line.dir);
        if (std::abs(p0 - trace.polyline[i]) > 1e-9)
            throw fold_error("unfold: bookkeeping does not reproduce the trace");
    }
    // ...and the straight line must clear the lattice.
    if (segment_vplus_distance(line.start, line.start + line.length * line.dir) <
        opts.vertex_tol)
        throw fold_error("unfold: line passes through V+");
    return line;
}

struct FoldResult {
    BilliardTrace trace;
    std::vector<UnfoldedLine::Piece> pieces;  // line range -> isometry into the star
};

/**
 * Fold a straight line back into the star: reduce the start into cl(K*)
 * (identity when it is already there, the covering translation otherwise)
 * and propagate across edges, reflecting the running isometry at every
 * crossing.  Vertex incidences within the tolerance band are singular.
 */
inline FoldResult fold(const StarHexagon& star, const Complex& start, const Complex& dir0,
                       double length, const BilliardOptions& opts = {}) {
    if (segment_vplus_distance(start, start + length * dir0) < opts.vertex_tol)
        throw fold_error("fold: line passes within the tolerance band of V+");

    // Reduce the start point into the star.
    ExtendedIsometry to_star = ExtendedIsometry::identity();
    if (!star.contains(start, opts.boundary_tol)) {
        const auto [rep, g] = reduce_to_fundamental(star, PlanePoint(start));
        to_star = ExtendedIsometry::translation(-g.trans.v);
    }

    FoldResult out;
    Complex pos = to_star.apply(start);
    Complex dir = to_star.apply_dir(dir0);
    double s = 0.0;
    out.trace.polyline.push_back(pos);
    while (s < length - 1e-12) {
        const auto hit = detail::first_boundary_hit(star, pos, dir, opts);
        if (!hit) throw std::logic_error("fold: ray found no boundary");
        if (hit->t >= length - s) {
            const Complex end = pos + (length - s) * dir;
            out.pieces.push_back({s, length, to_star});
            out.trace.polyline.push_back(end);
            out.trace.total_length += length - s;
            out.trace.final_state = {end, dir, length};
            s = length;
            break;
        }
        if (hit->is_vertex)
            throw fold_error("fold: singular incidence with a vertex of the tiling");
        out.pieces.push_back({s, s + hit->t, to_star});
        out.trace.total_length += hit->t;
        s += hit->t;
        BounceEvent ev;
        ev.kind = BounceEvent::Kind::edge_reflection;
        ev.time = s;
        ev.pos = hit->pos;
        ev.dir_in = dir;
        ev.edge_label = hit->edge_label;
        dir = detail::reflect_dir(star, hit->line, dir);
        ev.dir_out = dir;
        out.trace.events.push_back(ev);
        out.trace.polyline.push_back(hit->pos);
        pos = hit->pos;
        to_star = ExtendedIsometry::edge_line_reflection(hit->line) * to_star;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Geodesic / billiard correspondence
// ---------------------------------------------------------------------------

struct SurfaceCompareReport {
    double max_line_deviation = 0.0;      // developed flow vs straight line
    double max_billiard_deviation = 0.0;  // folded flow vs billiard simulation
    bool exited_star = false;
    std::optional<IncompletenessEvent> incompleteness;
};

/**
 * Integrate the Hamiltonian flow, develop it, and compare: the developed
 * image against the straight line z0 + alpha t, and its folded image
 * against the independently simulated billiard from (z0, alpha).
 */
inline SurfaceCompareReport surface_geodesic_compare(const StarHexagon& star,
                                                     const SurfacePoint& start,
                                                     const Complex& alpha, double t_end,
                                                     const FlowOptions& fopts = {},
                                                     const BilliardOptions& bopts = {}) {
    SurfaceCompareReport report;
    const FlowTrace tr = hamiltonian_flow(start, alpha, t_end, fopts);
    report.incompleteness = tr.incompleteness;

    const std::vector<Complex> zs = develop_along(tr.xi);
    const Complex z0 = zs.front();
    if (!star.contains(z0, 1e-9))
        throw std::domain_error("surface_geodesic_compare: image of start not in the star");

    for (std::size_t i = 0; i < zs.size(); ++i) {
        const Complex ref = z0 + alpha * tr.times[i];
        report.max_line_deviation =
            std::max(report.max_line_deviation, std::abs(zs[i] - ref));
        if (!star.contains(ref, 1e-9)) report.exited_star = true;
    }

    // Fold the developed straight line and compare against the billiard.
    const double total = tr.times.back();
    if (total > 0) {
        const FoldResult folded = fold(star, z0, alpha, total, bopts);
        const BilliardState b0{folded.trace.polyline.front(),
                               folded.pieces.front().to_star.apply_dir(alpha), 0.0};
        const int bounces = static_cast<int>(folded.trace.events.size()) + 1;
        const BilliardTrace sim = billiard_trace(star, b0, bounces, bopts);
        for (std::size_t i = 0; i < zs.size(); ++i) {
            const double t = tr.times[i];
            // isometry of the piece containing arc length t
            const UnfoldedLine::Piece* piece = &folded.pieces.back();
            for (const auto& p : folded.pieces)
                if (t >= p.s0 - 1e-12 && t <= p.s1 + 1e-12) {
                    piece = &p;
                    break;
                }
            const Complex folded_sample = piece->to_star.apply(zs[i]);
            const Complex sim_sample = billiard_position_at(sim, t);
            report.max_billiard_deviation =
                std::max(report.max_billiard_deviation, std::abs(folded_sample - sim_sample));
        }
    }
    return report;
}

} // namespace starhex
