#pragma once

// Instance generators shared by the unit tests and the acceptance binary.

#include "vlcdt/cdt.hpp"
#include "vlcdt/oracle.hpp"

#include <optional>

namespace vlcdt::fixtures
{

/// point with coordinates k / 2^20, k uniform in [0, 2^20 * scale)
inline Point random_point(Rng& rng, double sx = 1.0, double sy = 1.0)
{
    const auto q = [&](double s) {
        const std::int64_t k = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(s * 1048576.0)));
        return Rational(k, 1048576);
    };
    return Point(q(sx), q(sy));
}

/// Random triple with a non-dyadic denominator, for predicate exactness
inline Rational random_rational(Rng& rng, std::int64_t range, std::int64_t den)
{
    const std::int64_t num = static_cast<std::int64_t>(rng.below(2 * range * den + 1)) - range * den;
    return Rational(num, den);
}

inline std::vector<Point> random_points(Rng& rng, int n, double sx = 1.0, double sy = 1.0)
{
    std::vector<Point> pts;
    std::set<std::pair<Rational, Rational>> seen;
    while(static_cast<int>(pts.size()) < n)
    {
        Point p = random_point(rng, sx, sy);
        if(seen.emplace(p.x, p.y).second)
            pts.push_back(std::move(p));
    }
    return pts;
}

/// no four points of a Delaunay quadrilateral are cocircular
inline bool general_position(const Triangulation& t)
{
    const auto& F = t.faces();
    const auto& P = t.points();
    for(const Face& f : F)
    {
        if(!f.alive || Triangulation::ghost(f))
            continue;
        for(int i = 0; i < 3; ++i)
        {
            const Face& g = F[f.nb[i]];
            if(Triangulation::ghost(g))
                continue;
            for(const int d : g.v)
                if(d != f.v[0] && d != f.v[1] && d != f.v[2] &&
                   incircle_raw(P[f.v[0]], P[f.v[1]], P[f.v[2]], P[d]) == Sign::Zero)
                    return false;
        }
    }
    return true;
}

struct CdtInstance
{
    std::vector<Point> points;
    std::vector<std::array<int, 2>> constraints;
};

/// Random point set with up to `m` pairwise non-crossing constraints that
/// pass through no vertex and are not already Delaunay edges.
inline CdtInstance random_cdt_instance(Rng& rng, int n, int m)
{
    while(true)
    {
        CdtInstance inst;
        inst.points = random_points(rng, n);
        Triangulation t = build_delaunay(inst.points, rng.next());
        if(!general_position(t))
            continue;
        int tries = 0;
        while(static_cast<int>(inst.constraints.size()) < m && tries < 200)
        {
            ++tries;
            const int a = static_cast<int>(rng.below(n));
            const int b = static_cast<int>(rng.below(n));
            if(a == b)
                continue;
            try
            {
                const SegmentCavities sc = find_cavities(t, a, b);
                if(sc.existing || sc.crossed.size() < 2)
                    continue;
                insert_segment(t, a, b, 1);
                inst.constraints.push_back({a, b});
            }
            catch(const SegmentThroughVertex&)
            {}
            catch(const SegmentCrossesConstraint&)
            {}
        }
        if(!inst.constraints.empty())
            return inst;
    }
}

/// Cavity of a random segment in a random Delaunay triangulation
inline std::optional<Cavity> random_cavity(Rng& rng, int n, int min_size, double sy = 1.0)
{
    const std::vector<Point> pts = random_points(rng, n, 1.0, sy);
    const Triangulation t = build_delaunay(pts, rng.next());
    for(int tries = 0; tries < 50; ++tries)
    {
        const int a = static_cast<int>(rng.below(n));
        const int b = static_cast<int>(rng.below(n));
        if(a == b)
            continue;
        try
        {
            const SegmentCavities sc = find_cavities(t, a, b);
            if(sc.existing)
                continue;
            const auto& chain = rng.below(2) ? sc.left : sc.right;
            if(static_cast<int>(chain.size()) < min_size)
                continue;
            Cavity c;
            for(const int v : chain)
                c.vertices.push_back(pts[v]);
            c.segment = {pts[a], pts[b]};
            return c;
        }
        catch(const SegmentThroughVertex&)
        {}
    }
    return std::nullopt;
}

} // namespace vlcdt::fixtures
