#pragma once

#include "cyclotomic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace starhex {

/**
 * The closed regular stellated hexagon cl(K*), in units of the side
 * constant C: hexagon vertices H_j = w^j (w = exp(i*pi/3)) and star tips
 * T_j = sqrt(3) * z^(2j+1) (z = exp(i*pi/6)).  Twelve closed unit edges run
 * tip-to-vertex; they are labeled {1..6, -1..-6} in angular order of their
 * midpoints, with -k the edge opposite (point reflection) of k.
 *
 * Each boundary line {Re(conj(n) z) = sqrt(3)/2}, n = z^(2m+1), carries two
 * collinear edges separated by a hexagon side; the reflection
 * S_m : z -> w^(2m+1) conj(z) across the ray through T_m exchanges them.
 * Those collinear pairs are the edge identification classes a..f.
 */
class StarHexagon;

struct StarEdge {
    int label = 0;     // +1..+6, -1..-6
    int tip = 0;       // index j of tip endpoint T_j
    int hex = 0;       // index j of hexagon endpoint H_j
    int line = 0;      // boundary line m (outward normal z^(2m+1))
    CycNum tip_pos;
    CycNum hex_pos;
    CycNum normal;     // z^(2m+1)
    Complex midpoint;  // numerical, for ordering and rendering
};

struct EdgePair {
    char name = '?';                // one of a..f
    int mirror = 0;                 // m with S_m exchanging the two edges
    std::array<int, 2> labels{};    // member edge labels
};

struct CanonicalPoint {
    enum class Kind { interior, edge_class, vertex_class, center };
    Kind kind = Kind::interior;
    PlanePoint representative;
    int pair_index = -1;            // for edge classes: index into pairs()
    std::vector<CycNum> orbit;      // for vertex classes: the identified vertices
};

/// Abstract triangulation with counted incidence.  Spoke edges of the star
/// complex may have the excised center as an endpoint; that endpoint is the
/// sentinel id kCenterSentinel and is only counted as a vertex when the
/// level includes it.
struct Triangulation {
    static constexpr int kCenterSentinel = -1;

    enum class Level { base, identified, orbit, custom };
    Level level = Level::custom;

    struct Vertex {
        int id;
        std::string name;
    };
    struct Edge {
        int id;
        int v0, v1;
    };
    struct Face {
        int id;
        std::array<int, 3> edges;
    };

    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<Face> faces;

    int V() const { return static_cast<int>(vertices.size()); }
    int E() const { return static_cast<int>(edges.size()); }
    int F() const { return static_cast<int>(faces.size()); }
    int euler() const { return V() - E() + F(); }

    /// Every edge id referenced by a face must exist, and an edge may bound
    /// at most two faces.
    void validate() const {
        std::map<int, int> edge_use;
        std::map<int, bool> edge_ids;
        for (const auto& e : edges) {
            if (edge_ids.count(e.id)) throw std::logic_error("duplicate edge id");
            edge_ids[e.id] = true;
        }
        for (const auto& f : faces) {
            for (int eid : f.edges) {
                if (!edge_ids.count(eid)) throw std::logic_error("face references unknown edge");
                if (++edge_use[eid] > 2) throw std::logic_error("edge bounds more than two faces");
            }
        }
    }
};

/// (2 - chi) / 2 for a closed surface; rejects odd Euler characteristic.
inline int genus_from_counts(int V, int E, int F) {
    const int chi = V - E + F;
    if (((2 - chi) % 2) != 0) throw std::domain_error("genus_from_counts: odd Euler characteristic");
    return (2 - chi) / 2;
}

class StarHexagon {
public:
    StarHexagon() {
        for (int j = 0; j < 6; ++j) {
            hex_[j] = CycNum::omega_pow(j);
            tip_[j] = CycNum::sqrt3() * CycNum::zeta_pow(2 * j + 1);
        }
        // The twelve edges, in angular order of their midpoints starting
        // just above direction +1: [T_j,H_j] then [T_j,H_{j+1}].
        int slot = 0;
        for (int j = 0; j < 6; ++j) {
            build_edge(slot++, j, j);
            build_edge(slot++, j, (j + 1) % 6);
        }
        // Labels 1..6 are the first six in angular order, -k opposite k.
        for (int s = 0; s < 12; ++s) {
            edges_[s].label = s < 6 ? s + 1 : -(s - 5);
        }
        build_pairs();
    }

    static CycNum center() { return CycNum::zero(); }

    const std::array<CycNum, 6>& hex_vertices() const { return hex_; }
    const std::array<CycNum, 6>& tips() const { return tip_; }

    /// All 12 vertices: H0..H5 then T0..T5.
    std::vector<CycNum> vertices() const {
        std::vector<CycNum> v(hex_.begin(), hex_.end());
        v.insert(v.end(), tip_.begin(), tip_.end());
        return v;
    }

    const std::array<StarEdge, 12>& edges() const { return edges_; }

    const StarEdge& edge_by_label(int label) const {
        for (const auto& e : edges_)
            if (e.label == label) return e;
        throw std::domain_error("no such edge label");
    }

    const std::array<EdgePair, 6>& pairs() const { return pairs_; }

    const EdgePair& pair_by_name(char name) const {
        for (const auto& p : pairs_)
            if (p.name == name) return p;
        throw std::domain_error("no such edge pair");
    }

    int pair_index_of_label(int label) const {
        for (int i = 0; i < 6; ++i)
            if (pairs_[i].labels[0] == label || pairs_[i].labels[1] == label) return i;
        throw std::domain_error("label not in any pair");
    }

    /// Partner edge label under the identification.
    int paired_label(int label) const {
        const auto& p = pairs_[static_cast<std::size_t>(pair_index_of_label(label))];
        return p.labels[0] == label ? p.labels[1] : p.labels[0];
    }

    /// The reflection S_m : z -> w^(2m+1) conj(z).
    static CycNum reflect_S(int m, const CycNum& z) {
        return CycNum::zeta_pow(4 * m + 2) * z.conj();
    }
    static Complex reflect_S(int m, const Complex& z) {
        return CycNum::zeta_pow(4 * m + 2).embed() * std::conj(z);
    }

    /// Exact membership in the closed star.
    bool contains(const CycNum& p) const {
        if (in_hexagon(p)) return true;
        for (int j = 0; j < 6; ++j)
            if (in_tip_triangle(j, p)) return true;
        return false;
    }

    /// Numerical membership with tolerance (non-negative widens the region).
    bool contains(const Complex& p, double tol = 1e-12) const {
        if (in_hexagon_approx(p, tol)) return true;
        for (int j = 0; j < 6; ++j)
            if (in_tip_triangle_approx(j, p, tol)) return true;
        return false;
    }

    bool in_hexagon(const CycNum& p) const {
        for (int m = 0; m < 6; ++m) {
            const auto [q, r] = (p * normal_conj(m)).twice_re();
            // 2 Re(...) <= sqrt(3)  <=>  q + r*sqrt3 - sqrt3 <= 0
            if (sign_with_sqrt3(q, r - 1) > 0) return false;
        }
        return true;
    }

    bool in_tip_triangle(int j, const CycNum& p) const {
        const CycNum a = hex_[static_cast<std::size_t>(j)];
        const CycNum b = tip_[static_cast<std::size_t>(j)];
        const CycNum c = hex_[static_cast<std::size_t>((j + 1) % 6)];
        return cross_sign(b - a, p - a) >= 0 && cross_sign(c - b, p - b) >= 0 &&
               cross_sign(a - c, p - c) >= 0;
    }

    /**
     * The identification map: interior points are fixed, boundary points
     * map to the canonical (lexicographically least) representative of
     * their S_m orbit, vertices to their identification class, the center
     * to itself.  Throws std::domain_error outside cl(K*).
     */
    CanonicalPoint rho(const PlanePoint& p) const {
        if (p.is_exact()) return rho_exact(*p.exact);
        return rho_approx(p.approx);
    }

    /// Which boundary line (0..5) an exact point lies on, or -1.
    int boundary_line_of(const CycNum& p) const {
        for (int m = 0; m < 6; ++m) {
            const auto [q, r] = (p * normal_conj(m)).twice_re();
            if (q == 0 && r == 1) return m;
        }
        return -1;
    }

    /// Data of boundary line m: unit outward normal z^(2m+1); the line is
    /// param(t) = line_start(m) + t * line_dir(m), carrying the edges at
    /// t in [0,1] and [2,3] with the hexagon side in between.
    CycNum line_normal(int m) const { return CycNum::zeta_pow(2 * m + 1); }
    CycNum line_start(int m) const { return tip_[static_cast<std::size_t>((m + 1) % 6)]; }
    CycNum line_dir(int m) const { return CycNum::omega_pow(m + 5); }
    int line_edge_label(int m, bool second_segment) const {
        return line_label_[static_cast<std::size_t>(m)][second_segment ? 1 : 0];
    }
    /// The four collinear vertices of line m at params 0,1,2,3.
    std::array<CycNum, 4> line_points(int m) const {
        const CycNum s = line_start(m);
        const CycNum d = line_dir(m);
        return {s, s + d, s + d * 2, s + d * 3};
    }

    bool in_hexagon_approx(const Complex& p, double tol) const {
        for (int m = 0; m < 6; ++m) {
            const Complex n = line_normal(m).embed();
            if ((p * std::conj(n)).real() > 0.8660254037844386 + tol) return false;
        }
        return true;
    }

    bool in_tip_triangle_approx(int j, const Complex& p, double tol) const {
        const Complex a = hex_[static_cast<std::size_t>(j)].embed();
        const Complex b = tip_[static_cast<std::size_t>(j)].embed();
        const Complex c = hex_[static_cast<std::size_t>((j + 1) % 6)].embed();
        auto cross = [](const Complex& u, const Complex& v) {
            return u.real() * v.imag() - u.imag() * v.real();
        };
        return cross(b - a, p - a) >= -tol && cross(c - b, p - b) >= -tol &&
               cross(a - c, p - c) >= -tol;
    }

    /// The vertex identification classes: {T0,T2,T4}, {T1,T3,T5}, {H0..H5}.
    std::array<std::vector<CycNum>, 3> vertex_classes() const {
        std::array<std::vector<CycNum>, 3> cls;
        for (int j = 0; j < 6; j += 2) cls[0].push_back(tip_[static_cast<std::size_t>(j)]);
        for (int j = 1; j < 6; j += 2) cls[1].push_back(tip_[static_cast<std::size_t>(j)]);
        for (int j = 0; j < 6; ++j) cls[2].push_back(hex_[static_cast<std::size_t>(j)]);
        return cls;
    }

private:
    std::array<CycNum, 6> hex_;
    std::array<CycNum, 6> tip_;
    std::array<StarEdge, 12> edges_;
    std::array<EdgePair, 6> pairs_;
    std::array<std::array<int, 2>, 6> line_label_{};

    CycNum normal_conj(int m) const { return CycNum::zeta_pow(-(2 * m + 1)); }

    static int cross_sign(const CycNum& u, const CycNum& v) {
        return (u.conj() * v).im_sign();
    }

    void build_edge(int slot, int tip_index, int hex_index) {
        StarEdge e;
        e.tip = tip_index;
        e.hex = hex_index;
        e.tip_pos = tip_[static_cast<std::size_t>(tip_index)];
        e.hex_pos = hex_[static_cast<std::size_t>(hex_index)];
        e.midpoint = 0.5 * (e.tip_pos.embed() + e.hex_pos.embed());
        // Outward normal: the unique z^(2m+1) with Re(conj(n) p) = sqrt(3)/2
        // for both endpoints.
        e.line = -1;
        for (int m = 0; m < 6; ++m) {
            const auto [q1, r1] = (e.tip_pos * normal_conj(m)).twice_re();
            const auto [q2, r2] = (e.hex_pos * normal_conj(m)).twice_re();
            if (q1 == 0 && r1 == 1 && q2 == 0 && r2 == 1) {
                e.line = m;
                e.normal = CycNum::zeta_pow(2 * m + 1);
                break;
            }
        }
        if (e.line < 0) throw std::logic_error("star edge without boundary line");
        edges_[static_cast<std::size_t>(slot)] = e;
    }

    void build_pairs() {
        // Pair names follow the mirror index layout of the identification
        // table: m = 0..5 -> a, b, d, c, e, f.
        static constexpr std::array<char, 6> names = {'a', 'b', 'd', 'c', 'e', 'f'};
        for (int m = 0; m < 6; ++m) {
            std::vector<const StarEdge*> on_line;
            for (const auto& e : edges_)
                if (e.line == m) on_line.push_back(&e);
            if (on_line.size() != 2) throw std::logic_error("boundary line must carry two edges");
            const StarEdge& e0 = *on_line[0];
            const StarEdge& e1 = *on_line[1];
            // S_m must exchange the two edges, endpoint by endpoint, exactly.
            if (reflect_S(m, e0.tip_pos) != e1.tip_pos || reflect_S(m, e0.hex_pos) != e1.hex_pos)
                throw std::logic_error("pairing reflection does not exchange the edges");
            // Parallel (same carrier line, hence the same direction up to sign).
            EdgePair p;
            p.name = names[static_cast<std::size_t>(m)];
            p.mirror = m;
            p.labels = {e0.label, e1.label};
            pairs_[static_cast<std::size_t>(m)] = p;
            line_label_[static_cast<std::size_t>(m)] = {0, 0};
        }
        // Record which labels sit at params [0,1] and [2,3] of each line.
        for (int m = 0; m < 6; ++m) {
            const auto pts = line_points(m);
            for (const auto& e : edges_) {
                if (e.line != m) continue;
                if (e.tip_pos == pts[0] && e.hex_pos == pts[1])
                    line_label_[static_cast<std::size_t>(m)][0] = e.label;
                else if (e.hex_pos == pts[2] && e.tip_pos == pts[3])
                    line_label_[static_cast<std::size_t>(m)][1] = e.label;
                else
                    throw std::logic_error("edge endpoints do not match line params");
            }
        }
    }

    CanonicalPoint rho_exact(const CycNum& p) const {
        CanonicalPoint out;
        if (p.is_zero()) {
            out.kind = CanonicalPoint::Kind::center;
            out.representative = PlanePoint(p);
            return out;
        }
        // Vertex?
        for (const auto& cls : vertex_classes()) {
            for (const auto& v : cls) {
                if (v == p) {
                    out.kind = CanonicalPoint::Kind::vertex_class;
                    out.orbit = cls;
                    CycNum rep = cls.front();
                    for (const auto& w : cls)
                        if (lex_less(w, rep)) rep = w;
                    out.representative = PlanePoint(rep);
                    return out;
                }
            }
        }
        // Open edge?
        const int m = boundary_line_of(p);
        if (m >= 0) {
            const auto [q, r] = ((p - line_start(m)) * line_dir(m).conj()).twice_re();
            // param t with 2t = q + r*sqrt3; on an open edge iff 0<t<1 or 2<t<3
            const bool on_first = sign_with_sqrt3(q, r) > 0 && sign_with_sqrt3(q - 2, r) < 0;
            const bool on_second =
                sign_with_sqrt3(q - 4, r) > 0 && sign_with_sqrt3(q - 6, r) < 0;
            if (on_first || on_second) {
                if (!contains(p)) throw std::domain_error("rho: point outside cl(K*)");
                const CycNum partner = reflect_S(m, p);
                out.kind = CanonicalPoint::Kind::edge_class;
                out.pair_index = m;
                out.representative = PlanePoint(lex_less(p, partner) ? p : partner);
                return out;
            }
        }
        if (!contains(p)) throw std::domain_error("rho: point outside cl(K*)");
        out.kind = CanonicalPoint::Kind::interior;
        out.representative = PlanePoint(p);
        return out;
    }

    CanonicalPoint rho_approx(const Complex& p, double tol = 1e-9) const {
        CanonicalPoint out;
        if (!contains(p, tol)) throw std::domain_error("rho: point outside cl(K*)");
        if (std::abs(p) < tol) {
            out.kind = CanonicalPoint::Kind::center;
            out.representative = PlanePoint(CycNum::zero());
            return out;
        }
        for (const auto& cls : vertex_classes()) {
            for (const auto& v : cls) {
                if (std::abs(v.embed() - p) < tol) {
                    out.kind = CanonicalPoint::Kind::vertex_class;
                    out.orbit = cls;
                    CycNum rep = cls.front();
                    for (const auto& w : cls)
                        if (lex_less(w, rep)) rep = w;
                    out.representative = PlanePoint(rep);
                    return out;
                }
            }
        }
        for (int m = 0; m < 6; ++m) {
            const Complex n = line_normal(m).embed();
            if (std::abs((p * std::conj(n)).real() - 0.8660254037844386) < tol) {
                const Complex rel = (p - line_start(m).embed()) * std::conj(line_dir(m).embed());
                const double t = rel.real();
                if ((t > tol && t < 1 - tol) || (t > 2 + tol && t < 3 - tol)) {
                    const Complex partner = reflect_S(m, p);
                    const bool keep = p.real() < partner.real() - tol ||
                                      (std::abs(p.real() - partner.real()) <= tol &&
                                       p.imag() <= partner.imag());
                    out.kind = CanonicalPoint::Kind::edge_class;
                    out.pair_index = m;
                    out.representative = PlanePoint(keep ? p : partner);
                    return out;
                }
            }
        }
        out.kind = CanonicalPoint::Kind::interior;
        out.representative = PlanePoint(p);
        return out;
    }
};

// ---------------------------------------------------------------------------
// Triangulations of the star complex
// ---------------------------------------------------------------------------

enum class TriLevel { base, identified, orbit };

/**
 * Triangulation of K* \ O (base), of the edge-identified complex
 * (identified), or of its closure with the center restored as a vertex
 * (orbit).  Counts: base (12,24,12), identified (3,18,12), orbit (4,18,12).
 */
inline Triangulation quotient_triangulation(const StarHexagon& star, TriLevel level) {
    Triangulation t;
    t.level = level == TriLevel::base      ? Triangulation::Level::base
              : level == TriLevel::identified ? Triangulation::Level::identified
                                              : Triangulation::Level::orbit;

    // Vertex ids at base level: H0..H5 -> 0..5, T0..T5 -> 6..11.
    // Edge ids: spokes to H_j -> j, spokes to T_j -> 6+j,
    //           boundary edge with slot s (see StarHexagon) -> 12+s.
    // Faces: for sector j: (H_j, T_j, edge [T_j,H_j]) -> 2j,
    //                      (T_j, H_{j+1}, edge [T_j,H_{j+1}]) -> 2j+1.
    const int center_id_orbit = 100;

    auto vertex_id = [&](bool is_tip, int j) -> int {
        switch (level) {
            case TriLevel::base:
                return is_tip ? 6 + j : j;
            case TriLevel::identified:
            case TriLevel::orbit:
                // classes: hex -> 0, even tips -> 1, odd tips -> 2
                return is_tip ? (j % 2 == 0 ? 1 : 2) : 0;
        }
        return -1;
    };
    const int center_vertex =
        level == TriLevel::orbit ? center_id_orbit : Triangulation::kCenterSentinel;

    // Vertices
    if (level == TriLevel::base) {
        for (int j = 0; j < 6; ++j) t.vertices.push_back({j, "H" + std::to_string(j)});
        for (int j = 0; j < 6; ++j) t.vertices.push_back({6 + j, "T" + std::to_string(j)});
    } else {
        t.vertices.push_back({0, "hex-class"});
        t.vertices.push_back({1, "tip-class-even"});
        t.vertices.push_back({2, "tip-class-odd"});
        if (level == TriLevel::orbit) t.vertices.push_back({center_id_orbit, "center"});
    }

    // Spoke edges: 12 at every level (the identification is the identity on
    // the interior of the star).
    for (int j = 0; j < 6; ++j)
        t.edges.push_back({j, center_vertex, vertex_id(false, j)});
    for (int j = 0; j < 6; ++j)
        t.edges.push_back({6 + j, center_vertex, vertex_id(true, j)});

    // Boundary edges: 12 at base level, 6 pair classes after identification.
    auto boundary_edge_id = [&](int slot) -> int {
        if (level == TriLevel::base) return 12 + slot;
        const auto& e = star.edges()[static_cast<std::size_t>(slot)];
        return 12 + star.pair_index_of_label(e.label);
    };
    std::vector<int> seen;
    for (int slot = 0; slot < 12; ++slot) {
        const int id = boundary_edge_id(slot);
        if (std::find(seen.begin(), seen.end(), id) != seen.end()) continue;
        seen.push_back(id);
        const auto& e = star.edges()[static_cast<std::size_t>(slot)];
        t.edges.push_back({id, vertex_id(true, e.tip), vertex_id(false, e.hex)});
    }

    // Faces: sector triangles; edge triples (spoke, spoke, boundary).
    for (int slot = 0; slot < 12; ++slot) {
        const auto& e = star.edges()[static_cast<std::size_t>(slot)];
        t.faces.push_back({slot, {e.hex, 6 + e.tip, boundary_edge_id(slot)}});
    }

    t.validate();
    return t;
}

/// Barycentric refinement: every edge gains a midpoint vertex, every face a
/// barycenter; each triangle splits into six.  Euler characteristic is
/// preserved at every level, including complexes with the excised-center
/// sentinel endpoint.
inline Triangulation barycentric_refine(const Triangulation& in) {
    Triangulation out;
    out.level = Triangulation::Level::custom;
    out.vertices = in.vertices;

    int next_vertex = 0;
    for (const auto& v : in.vertices) next_vertex = std::max(next_vertex, v.id + 1);
    next_vertex = std::max(next_vertex, 101);

    std::map<int, int> edge_mid;   // edge id -> midpoint vertex id
    std::map<int, int> face_bary;  // face id -> barycenter vertex id
    for (const auto& e : in.edges) {
        edge_mid[e.id] = next_vertex;
        out.vertices.push_back({next_vertex, "m" + std::to_string(e.id)});
        ++next_vertex;
    }
    for (const auto& f : in.faces) {
        face_bary[f.id] = next_vertex;
        out.vertices.push_back({next_vertex, "b" + std::to_string(f.id)});
        ++next_vertex;
    }

    int next_edge = 0;
    // Each original edge splits in two at its midpoint.
    std::map<int, std::array<int, 2>> halves;  // edge id -> (half at v0, half at v1)
    for (const auto& e : in.edges) {
        const int h0 = next_edge++;
        const int h1 = next_edge++;
        out.edges.push_back({h0, e.v0, edge_mid[e.id]});
        out.edges.push_back({h1, edge_mid[e.id], e.v1});
        halves[e.id] = {h0, h1};
    }
    // Each face gains edges barycenter->corner and barycenter->edge-midpoint.
    // Recover the (up to three) corners of a face from its edges; sentinel
    // corners are kept as sentinels.
    int next_face = 0;
    for (const auto& f : in.faces) {
        std::vector<int> corners;
        for (int eid : f.edges) {
            const auto& e = *std::find_if(in.edges.begin(), in.edges.end(),
                                          [&](const Triangulation::Edge& x) { return x.id == eid; });
            for (int v : {e.v0, e.v1})
                if (std::find(corners.begin(), corners.end(), v) == corners.end())
                    corners.push_back(v);
        }
        std::map<int, int> corner_spoke;  // corner vertex -> edge id to barycenter
        for (int v : corners) {
            corner_spoke[v] = next_edge;
            out.edges.push_back({next_edge++, face_bary[f.id], v});
        }
        std::map<int, int> mid_spoke;  // original edge id -> edge to barycenter
        for (int eid : f.edges) {
            mid_spoke[eid] = next_edge;
            out.edges.push_back({next_edge++, face_bary[f.id], edge_mid[eid]});
        }
        // Six sub-triangles: for each original edge and each of its halves,
        // (half, spoke-to-its-endpoint, spoke-to-midpoint).
        for (int eid : f.edges) {
            const auto& e = *std::find_if(in.edges.begin(), in.edges.end(),
                                          [&](const Triangulation::Edge& x) { return x.id == eid; });
            out.faces.push_back({next_face++, {halves[eid][0], corner_spoke[e.v0], mid_spoke[eid]}});
            out.faces.push_back({next_face++, {halves[eid][1], corner_spoke[e.v1], mid_spoke[eid]}});
        }
    }
    return out;
}

/**
 * The fan triangulation of the sphere used for the genus bookkeeping:
 * a hexagon fan around a center plus an outer fan to a point at infinity.
 * V=8, E=18, F=12, chi=2.
 */
inline Triangulation sphere_fan_triangulation() {
    Triangulation t;
    t.level = Triangulation::Level::custom;
    // ids: center 0, ring 1..6, infinity 7
    t.vertices.push_back({0, "center"});
    for (int k = 1; k <= 6; ++k) t.vertices.push_back({k, "v" + std::to_string(k - 1)});
    t.vertices.push_back({7, "infinity"});
    int eid = 0;
    std::array<int, 6> spoke{}, ring{}, ray{};
    for (int k = 0; k < 6; ++k) {
        spoke[k] = eid;
        t.edges.push_back({eid++, 0, 1 + k});
    }
    for (int k = 0; k < 6; ++k) {
        ring[k] = eid;
        t.edges.push_back({eid++, 1 + k, 1 + (k + 1) % 6});
    }
    for (int k = 0; k < 6; ++k) {
        ray[k] = eid;
        t.edges.push_back({eid++, 1 + k, 7});
    }
    int fid = 0;
    for (int k = 0; k < 6; ++k)
        t.faces.push_back({fid++, {spoke[k], ring[k], spoke[(k + 1) % 6]}});
    for (int k = 0; k < 6; ++k)
        t.faces.push_back({fid++, {ring[k], ray[k], ray[(k + 1) % 6]}});
    t.validate();
    return t;
}

/**
 * Two copies of the sphere fan glued along the six ring vertices (the
 * branch locus of the double cover).  V = 2*8-6 = 10, E = 36, F = 24,
 * chi = -2, genus 2.
 */
inline Triangulation doubled_cover_triangulation() {
    const Triangulation base = sphere_fan_triangulation();
    Triangulation t;
    t.level = Triangulation::Level::custom;
    // Copy 0 keeps ids; copy 1 shifts non-ring vertices by 100, edges and
    // faces by 100.  Ring vertices 1..6 are shared.
    auto map_vertex = [](int copy, int v) {
        if (v >= 1 && v <= 6) return v;
        return copy == 0 ? v : v + 100;
    };
    for (int copy = 0; copy < 2; ++copy) {
        for (const auto& v : base.vertices) {
            const int id = map_vertex(copy, v.id);
            if (copy == 1 && id == v.id) continue;  // shared ring vertex
            t.vertices.push_back({id, (copy ? "B-" : "A-") + v.name});
        }
        for (const auto& e : base.edges)
            t.edges.push_back({e.id + copy * 100, map_vertex(copy, e.v0), map_vertex(copy, e.v1)});
        for (const auto& f : base.faces)
            t.faces.push_back({f.id + copy * 100,
                               {f.edges[0] + copy * 100, f.edges[1] + copy * 100,
                                f.edges[2] + copy * 100}});
    }
    t.validate();
    return t;
}

// ---------------------------------------------------------------------------
// Plain-text serialization (exact integer coefficient tuples)
// ---------------------------------------------------------------------------

inline std::string star_to_text(const StarHexagon& star) {
    std::ostringstream os;
    os << "starhex-geometry 1\n";
    os << "center 0 0 0 0\n";
    for (int j = 0; j < 6; ++j) {
        const auto& c = star.hex_vertices()[static_cast<std::size_t>(j)].coeffs();
        os << "vertex H" << j << " " << c[0] << " " << c[1] << " " << c[2] << " " << c[3] << "\n";
    }
    for (int j = 0; j < 6; ++j) {
        const auto& c = star.tips()[static_cast<std::size_t>(j)].coeffs();
        os << "vertex T" << j << " " << c[0] << " " << c[1] << " " << c[2] << " " << c[3] << "\n";
    }
    for (const auto& e : star.edges())
        os << "edge " << e.label << " T" << e.tip << " H" << e.hex << "\n";
    for (const auto& p : star.pairs())
        os << "pair " << p.name << " " << p.labels[0] << " " << p.labels[1] << " m " << p.mirror
           << "\n";
    return os.str();
}

inline std::string triangulation_to_text(const Triangulation& t) {
    std::ostringstream os;
    const char* level = t.level == Triangulation::Level::base         ? "base"
                        : t.level == Triangulation::Level::identified ? "identified"
                        : t.level == Triangulation::Level::orbit      ? "orbit"
                                                                      : "custom";
    os << "triangulation " << level << " " << t.V() << " " << t.E() << " " << t.F() << "\n";
    for (const auto& v : t.vertices) os << "v " << v.id << " " << v.name << "\n";
    for (const auto& e : t.edges) os << "e " << e.id << " " << e.v0 << " " << e.v1 << "\n";
    for (const auto& f : t.faces)
        os << "f " << f.id << " " << f.edges[0] << " " << f.edges[1] << " " << f.edges[2] << "\n";
    return os.str();
}

/// Parse the star geometry format; throws std::runtime_error on malformed
/// input.  Returns the vertex map (name -> exact coefficients) and edges.
struct ParsedStar {
    std::map<std::string, CycNum> vertices;
    std::vector<std::pair<int, std::pair<std::string, std::string>>> edges;
};

inline ParsedStar parse_star_text(std::istream& in) {
    ParsedStar out;
    std::string tag;
    if (!(in >> tag) || tag != "starhex-geometry") throw std::runtime_error("bad star header");
    int version;
    if (!(in >> version) || version != 1) throw std::runtime_error("unsupported star version");
    std::string word;
    while (in >> word) {
        if (word == "center") {
            std::int64_t a, b, c, d;
            in >> a >> b >> c >> d;
        } else if (word == "vertex") {
            std::string name;
            std::int64_t a, b, c, d;
            if (!(in >> name >> a >> b >> c >> d)) throw std::runtime_error("bad vertex line");
            out.vertices[name] = CycNum(a, b, c, d);
        } else if (word == "edge") {
            int label;
            std::string v0, v1;
            if (!(in >> label >> v0 >> v1)) throw std::runtime_error("bad edge line");
            out.edges.push_back({label, {v0, v1}});
        } else if (word == "pair") {
            std::string rest;
            std::getline(in, rest);
        } else {
            throw std::runtime_error("unknown record: " + word);
        }
    }
    return out;
}

} // namespace starhex
