#include <catch2/catch_amalgamated.hpp>

#include <starhex/billiards.hpp>

#include <random>

using namespace starhex;

namespace {
const StarHexagon& star() {
    static StarHexagon s;
    return s;
}

BilliardState random_interior_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.6, 1.6);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    while (true) {
        const Complex p(u(rng), u(rng));
        if (!star().contains(p, -1e-6)) continue;  // strictly inside
        if (std::abs(p) < 0.05) continue;
        const double th = ang(rng);
        return {p, Complex(std::cos(th), std::sin(th)), 0.0};
    }
}
} // namespace

TEST_CASE("normal incidence reflects straight back") {
    const StarEdge& e = star().edge_by_label(1);
    const Complex n = e.normal.embed();
    const Complex mid = e.midpoint;
    const BilliardState s{mid - 0.3 * n, n, 0.0};
    REQUIRE(star().contains(s.pos, 1e-12));
    auto [next, ev] = billiard_step(star(), s);
    CHECK(ev.kind == BounceEvent::Kind::edge_reflection);
    CHECK(ev.edge_label == 1);
    CHECK(std::abs(next.dir + n) < 1e-14);
    CHECK(std::abs(next.time - 0.3) < 1e-12);
}

TEST_CASE("grazing the top hexagon side ends in a vertex reversal after time 1") {
    // From just inside one end of the chord between H2 and H1, heading along
    // it: the far end is a star vertex one unit away.
    const Complex h2(-0.5, 0.8660254037844386);
    const BilliardState s{h2 + Complex(1e-7, -1e-9), Complex(1, 0), 0.0};
    auto [next, ev] = billiard_step(star(), s);
    CHECK(ev.kind == BounceEvent::Kind::vertex_reversal);
    CHECK(ev.vertex_id == 1);  // H1
    CHECK(std::abs(next.time - 1.0) < 1e-6);
    CHECK(std::abs(next.dir + Complex(1, 0)) < 1e-12);
}

TEST_CASE("aiming at a tip reverses") {
    const Complex tip = star().tips()[0].embed();
    const Complex from(0.3, 0.1);
    const Complex d = (tip - from) / std::abs(tip - from);
    auto [next, ev] = billiard_step(star(), {from, d, 0.0});
    CHECK(ev.kind == BounceEvent::Kind::vertex_reversal);
    CHECK(ev.vertex_id == 6);  // T0
    CHECK(std::abs(next.dir + d) < 1e-12);
}

TEST_CASE("starting on the boundary pointing outward is rejected") {
    const StarEdge& e = star().edge_by_label(2);
    const Complex n = e.normal.embed();
    CHECK_THROWS_AS(billiard_step(star(), {e.midpoint, n, 0.0}), std::domain_error);
}

TEST_CASE("trace with zero events is empty") {
    const BilliardTrace tr = billiard_trace(star(), {Complex(0.2, 0.1), Complex(1, 0), 0.0}, 0);
    CHECK(tr.polyline.empty());
    CHECK(tr.events.empty());
}

TEST_CASE("trace segments stay inside the closed star") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const BilliardTrace tr = billiard_trace(star(), random_interior_state(rng), 24);
        for (std::size_t i = 0; i + 1 < tr.polyline.size(); ++i) {
            for (int k = 0; k <= 8; ++k) {
                const Complex p =
                    tr.polyline[i] + (tr.polyline[i + 1] - tr.polyline[i]) * (k / 8.0);
                CHECK(star().contains(p, 1e-9));
            }
        }
    }
}

TEST_CASE("speed stays unit after many bounces") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        BilliardState s = random_interior_state(rng);
        int bounces = 0;
        for (int i = 0; i < 60; ++i) {
            auto [next, ev] = billiard_step(star(), s);
            s = next;
            ++bounces;
            CHECK(std::abs(std::abs(s.dir) - 1.0) <= bounces * 1e-12);
        }
    }
}

TEST_CASE("time reversal retraces the trajectory") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 15; ++trial) {
        const BilliardState s0 = random_interior_state(rng);
        const int n = 40;
        const BilliardTrace fwd = billiard_trace(star(), s0, n);
        BilliardState rev{fwd.final_state.pos, -fwd.final_state.dir, 0.0};
        const BilliardTrace bwd = billiard_trace(star(), rev, n);
        REQUIRE(bwd.polyline.size() == fwd.polyline.size());
        for (std::size_t i = 0; i < fwd.polyline.size(); ++i) {
            const Complex expect = fwd.polyline[fwd.polyline.size() - 1 - i];
            CHECK(std::abs(bwd.polyline[i] - expect) < 1e-9);
        }
    }
}

TEST_CASE("rotating the start state rotates the trace event-for-event") {
    std::mt19937_64 rng(11);
    const Complex w = CycNum::omega().embed();
    for (int trial = 0; trial < 10; ++trial) {
        const BilliardState s0 = random_interior_state(rng);
        const BilliardState s1{w * s0.pos, w * s0.dir, 0.0};
        const BilliardTrace a = billiard_trace(star(), s0, 30);
        const BilliardTrace b = billiard_trace(star(), s1, 30);
        REQUIRE(a.events.size() == b.events.size());
        for (std::size_t i = 0; i < a.events.size(); ++i) {
            CHECK(a.events[i].kind == b.events[i].kind);
            CHECK(std::abs(a.events[i].time - b.events[i].time) < 1e-9);
            CHECK(std::abs(w * a.events[i].pos - b.events[i].pos) < 1e-9);
            if (a.events[i].kind == BounceEvent::Kind::edge_reflection) {
                CHECK(rotated_label(star(), a.events[i].edge_label, 1) ==
                      b.events[i].edge_label);
            }
        }
    }
}

TEST_CASE("a run through the center is flagged and continues") {
    const BilliardState s{Complex(-0.5, 0.0), Complex(1, 0), 0.0};
    const BilliardTrace tr = billiard_trace(star(), s, 2);
    bool flagged = false;
    for (const auto& ev : tr.events)
        if (ev.kind == BounceEvent::Kind::center_pass) flagged = true;
    CHECK(flagged);
    // motion continued to a real boundary event
    int bounces = 0;
    for (const auto& ev : tr.events)
        if (ev.kind != BounceEvent::Kind::center_pass) ++bounces;
    CHECK(bounces == 2);
}

TEST_CASE("the hexagonal six-bounce orbit at pi/3 to edge 1 closes") {
    // From the midpoint of edge 1, at 60 degrees to the edge direction.
    const Complex start(1.25, 0.43301270189221935);
    const BilliardState s0{start, Complex(-1, 0), 0.0};
    const BilliardTrace tr = billiard_trace(star(), s0, 6);
    REQUIRE(tr.events.size() == 6);
    for (const auto& ev : tr.events) CHECK(ev.kind == BounceEvent::Kind::edge_reflection);
    CHECK(std::abs(tr.final_state.pos - start) < 1e-8);
    CHECK(std::abs(tr.final_state.dir - Complex(-1, 0)) < 1e-8);
    CHECK(std::abs(tr.total_length - 9.0) < 1e-9);
}

TEST_CASE("unfold straightens and fold returns, round trip exact to 1e-9") {
    std::mt19937_64 rng(13);
    int done = 0;
    while (done < 60) {
        const BilliardState s0 = random_interior_state(rng);
        BilliardTrace tr;
        try {
            tr = billiard_trace(star(), s0, 1 + static_cast<int>(done % 50));
        } catch (const std::exception&) {
            continue;
        }
        bool has_reversal = false;
        for (const auto& ev : tr.events)
            if (ev.kind == BounceEvent::Kind::vertex_reversal) has_reversal = true;
        if (has_reversal) continue;

        UnfoldedLine line;
        try {
            line = unfold(star(), tr);
        } catch (const fold_error&) {
            continue;  // line too close to the lattice; resample
        }
        // Length is preserved.
        CHECK(std::abs(line.length - tr.total_length) < 1e-12);
        // Piece count matches bounce count + 1.
        std::size_t bounces = 0;
        for (const auto& ev : tr.events)
            if (ev.kind == BounceEvent::Kind::edge_reflection) ++bounces;
        CHECK(line.pieces.size() == bounces + 1);

        // Round trip.
        FoldResult back;
        try {
            back = fold(star(), line.start, line.dir, line.length);
        } catch (const fold_error&) {
            continue;
        }
        REQUIRE(back.trace.polyline.size() == tr.polyline.size());
        for (std::size_t i = 0; i < tr.polyline.size(); ++i)
            CHECK(std::abs(back.trace.polyline[i] - tr.polyline[i]) < 1e-9);
        ++done;
    }
}

TEST_CASE("unfold refuses traces with vertex reversals") {
    const Complex tip = star().tips()[0].embed();
    const Complex from(0.3, 0.1);
    const Complex d = (tip - from) / std::abs(tip - from);
    const BilliardTrace tr = billiard_trace(star(), {from, d, 0.0}, 2);
    CHECK_THROWS_AS(unfold(star(), tr), fold_error);
}

TEST_CASE("fold of a segment inside the star is the segment itself") {
    const FoldResult r = fold(star(), Complex(-0.2, 0.05), Complex(0, 1), 0.5);
    REQUIRE(r.trace.polyline.size() == 2);
    CHECK(std::abs(r.trace.polyline.front() - Complex(-0.2, 0.05)) < 1e-15);
    CHECK(std::abs(r.trace.polyline.back() - Complex(-0.2, 0.55)) < 1e-12);
    CHECK(r.trace.events.empty());
}

TEST_CASE("fold of a line crossing one edge reflects once, correctly") {
    // Head straight out through edge 1 at normal incidence and construct the
    // single-reflection answer by hand.
    const StarEdge& e = star().edge_by_label(1);
    const Complex n = e.normal.embed();
    const Complex a = e.midpoint - 0.4 * n;
    const FoldResult r = fold(star(), a, n, 0.7);
    REQUIRE(r.trace.events.size() == 1);
    CHECK(r.trace.events[0].edge_label == 1);
    REQUIRE(r.trace.polyline.size() == 3);
    CHECK(std::abs(r.trace.polyline[1] - e.midpoint) < 1e-12);
    // After the bounce the remaining 0.3 goes back inward.
    CHECK(std::abs(r.trace.polyline[2] - (e.midpoint - 0.3 * n)) < 1e-12);
}

TEST_CASE("long line folds to a path of identical length") {
    const FoldResult r = fold(star(), Complex(0.1, 0.07), std::polar(1.0, 0.37), 100.0);
    CHECK(std::abs(r.trace.total_length - 100.0) < 1e-7);
    // Every vertex of the folded path stays in the star.
    for (const Complex& p : r.trace.polyline) CHECK(star().contains(p, 1e-9));
}

TEST_CASE("edge crossings of the unfolded line match the bounce count") {
    std::mt19937_64 rng(17);
    int done = 0;
    while (done < 20) {
        const BilliardState s0 = random_interior_state(rng);
        BilliardTrace tr = billiard_trace(star(), s0, 12);
        bool has_reversal = false;
        for (const auto& ev : tr.events)
            if (ev.kind == BounceEvent::Kind::vertex_reversal) has_reversal = true;
        if (has_reversal) continue;
        UnfoldedLine line;
        try {
            line = unfold(star(), tr);
        } catch (const fold_error&) {
            continue;
        }
        // Count transversal crossings of tiling edges along the line.
        int crossings = 0;
        const auto edges = tiling_edges_in_window(std::abs(line.start) + line.length + 2.0);
        const Complex b = line.start + line.length * line.dir;
        for (const auto& te : edges) {
            const Complex p = te.tail.embed();
            const Complex q = p + CycNum::omega_pow(te.direction).embed();
            // segment intersection test
            auto cross = [](const Complex& u, const Complex& v) {
                return u.real() * v.imag() - u.imag() * v.real();
            };
            const double d1 = cross(b - line.start, p - line.start);
            const double d2 = cross(b - line.start, q - line.start);
            const double d3 = cross(q - p, line.start - p);
            const double d4 = cross(q - p, b - p);
            if (d1 * d2 < 0 && d3 * d4 < 0) ++crossings;
        }
        int bounces = 0;
        for (const auto& ev : tr.events)
            if (ev.kind == BounceEvent::Kind::edge_reflection) ++bounces;
        CHECK(crossings == bounces);
        ++done;
    }
}

TEST_CASE("developed flow matches straight line and billiard simulation") {
    const SurfacePoint p = make_surface_point(Complex(0, 0), Complex(std::sqrt(2.0), 0));
    const SurfaceCompareReport r =
        surface_geodesic_compare(star(), p, std::polar(1.0, 0.25), 0.5);
    CHECK(r.max_line_deviation <= 1e-7);
    CHECK(r.max_billiard_deviation <= 1e-7);
    CHECK_FALSE(r.incompleteness.has_value());
}

TEST_CASE("geodesic exiting the star is followed by the folded billiard") {
    // From the base point toward the tip gap: exits through an edge.
    const SurfacePoint p = make_surface_point(Complex(0, 0), Complex(std::sqrt(2.0), 0));
    const SurfaceCompareReport r =
        surface_geodesic_compare(star(), p, std::polar(1.0, 0.13), 1.4);
    CHECK(r.exited_star);
    CHECK(r.max_line_deviation <= 1e-6);
    CHECK(r.max_billiard_deviation <= 1e-6);
}

TEST_CASE("geodesic aimed at a vertex image is incomplete") {
    // Aim along the positive real axis: the hexagon corner image C sits at
    // distance C from the center.
    const double C = constant_C();
    const SurfacePoint p = make_surface_point(Complex(0, 0), Complex(std::sqrt(2.0), 0));
    const SurfaceCompareReport r = surface_geodesic_compare(star(), p, Complex(1, 0), 2.0);
    REQUIRE(r.incompleteness.has_value());
    CHECK(std::abs(r.incompleteness->t_hit - C) <= 1e-4);
}

TEST_CASE("rotated initial data give a rotated geodesic image") {
    const Complex w = CycNum::omega().embed();
    const Complex xi0(0.2, 0.07);
    const Complex eta0 = eta_reference(xi0);
    const SurfacePoint p = make_surface_point(xi0, eta0);
    const SurfacePoint pr{w * xi0, eta0, +1};
    const Complex alpha = std::polar(1.0, 0.4);

    const FlowTrace tr = hamiltonian_flow(p, alpha, 0.3);
    const FlowTrace trr = hamiltonian_flow(pr, w * alpha, 0.3);
    const std::vector<Complex> z = develop_along(tr.xi);
    const std::vector<Complex> zr = develop_along(trr.xi);
    CHECK(std::abs(zr.front() - w * z.front()) <= 1e-9);
    CHECK(std::abs(zr.back() - w * z.back()) <= 1e-7);
}
