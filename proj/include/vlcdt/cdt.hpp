#pragma once

// Triangulation with ghost triangles, randomized incremental Delaunay
// construction and constrained segment insertion through cavities.

#include "cavity.hpp"
#include "report.hpp"

#include <array>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

namespace vlcdt
{

struct DuplicatePoint : std::runtime_error
{
    explicit DuplicatePoint(const std::string& m)
        : std::runtime_error("DuplicatePoint: " + m)
    {}
};

struct AllCollinear : std::runtime_error
{
    AllCollinear()
        : std::runtime_error("AllCollinear")
    {}
};

struct SegmentThroughVertex : std::runtime_error
{
    explicit SegmentThroughVertex(int v)
        : std::runtime_error("SegmentThroughVertex: " + std::to_string(v))
        , vertex(v)
    {}
    int vertex;
};

struct SegmentCrossesConstraint : std::runtime_error
{
    SegmentCrossesConstraint(int a, int b)
        : std::runtime_error("SegmentCrossesConstraint: " + std::to_string(a) + " " + std::to_string(b))
    {}
};

/// Triangle with vertices in counterclockwise order. Slot i of `nb` and
/// `constrained` refers to the edge opposite vertex i. Ghost triangles carry
/// the infinite vertex in slot 2.
struct Face
{
    std::array<int, 3> v{};
    std::array<int, 3> nb{-1, -1, -1};
    std::array<bool, 3> constrained{false, false, false};
    bool alive = true;
};

class Triangulation
{
public:
    static constexpr int Infinite = -1;

    Triangulation() = default;
    explicit Triangulation(std::vector<Point> pts)
        : m_pts(std::move(pts))
    {}

    const std::vector<Point>& points() const
    {
        return m_pts;
    }
    const std::vector<Face>& faces() const
    {
        return m_faces;
    }
    std::vector<Face>& faces()
    {
        return m_faces;
    }

    static bool ghost(const Face& f)
    {
        return f.v[0] == Infinite || f.v[1] == Infinite || f.v[2] == Infinite;
    }

    /// real triangles, counterclockwise, rotated to start at the smallest index
    std::vector<Tri> triangles() const
    {
        std::vector<Tri> out;
        for(const Face& f : m_faces)
            if(f.alive && !ghost(f))
                out.push_back(rotate_min(f.v));
        std::sort(out.begin(), out.end());
        return out;
    }

    /// constrained edges as sorted pairs
    std::vector<std::array<int, 2>> constraints() const
    {
        std::set<std::array<int, 2>> s;
        for(const Face& f : m_faces)
        {
            if(!f.alive)
                continue;
            for(int i = 0; i < 3; ++i)
                if(f.constrained[i])
                {
                    std::array<int, 2> e{f.v[(i + 1) % 3], f.v[(i + 2) % 3]};
                    std::sort(e.begin(), e.end());
                    if(e[0] != Infinite)
                        s.insert(e);
                }
        }
        return {s.begin(), s.end()};
    }

    static Tri rotate_min(const std::array<int, 3>& v)
    {
        Tri t = v;
        const auto m = std::min_element(t.begin(), t.end()) - t.begin();
        std::rotate(t.begin(), t.begin() + m, t.end());
        return t;
    }

    /// Replace faces by new vertex triples; links and constraint flags of
    /// the boundary are carried over, shared edges in `fixed` are marked
    /// constrained.
    void replace(
        const std::vector<int>& old_faces,
        const std::vector<std::array<int, 3>>& fresh,
        const std::set<std::array<int, 2>>& fixed = {})
    {
        struct Outer
        {
            int face;
            int slot;
            bool constrained;
        };
        std::map<std::array<int, 2>, Outer> boundary;
        std::set<int> gone(old_faces.begin(), old_faces.end());
        for(const int f : old_faces)
        {
            const Face& F = m_faces[f];
            for(int i = 0; i < 3; ++i)
            {
                const int g = F.nb[i];
                if(g >= 0 && gone.count(g))
                    continue;
                const std::array<int, 2> e{F.v[(i + 1) % 3], F.v[(i + 2) % 3]};
                int slot = -1;
                if(g >= 0)
                    slot = slot_of(g, e[1], e[0]);
                boundary[e] = Outer{g, slot, F.constrained[i]};
            }
        }
        for(const int f : old_faces)
        {
            m_faces[f].alive = false;
            m_free.push_back(f);
        }
        std::map<std::array<int, 2>, std::pair<int, int>> inner;
        std::vector<int> ids;
        for(const auto& v : fresh)
        {
            int id;
            if(!m_free.empty())
            {
                id = m_free.back();
                m_free.pop_back();
                m_faces[id] = Face{};
            }
            else
            {
                id = static_cast<int>(m_faces.size());
                m_faces.emplace_back();
            }
            Face& F = m_faces[id];
            F.v = v;
            while(ghost(F) && F.v[2] != Infinite)
                std::rotate(F.v.begin(), F.v.begin() + 1, F.v.end());
            ids.push_back(id);
            for(int i = 0; i < 3; ++i)
                inner[{F.v[(i + 1) % 3], F.v[(i + 2) % 3]}] = {id, i};
        }
        for(const int id : ids)
        {
            Face& F = m_faces[id];
            for(int i = 0; i < 3; ++i)
            {
                const int a = F.v[(i + 1) % 3], b = F.v[(i + 2) % 3];
                const auto in = inner.find({b, a});
                if(in != inner.end())
                {
                    F.nb[i] = in->second.first;
                    std::array<int, 2> e{a, b};
                    std::sort(e.begin(), e.end());
                    F.constrained[i] = fixed.count(e) > 0;
                    continue;
                }
                const auto out = boundary.find({a, b});
                if(out == boundary.end())
                    throw std::logic_error("replace: open edge " + std::to_string(a) + " " + std::to_string(b));
                F.nb[i] = out->second.face;
                F.constrained[i] = out->second.constrained;
                if(out->second.face >= 0)
                    m_faces[out->second.face].nb[out->second.slot] = id;
            }
            m_last = id;
        }
    }

    int slot_of(int f, int a, int b) const
    {
        const Face& F = m_faces[f];
        for(int i = 0; i < 3; ++i)
            if(F.v[(i + 1) % 3] == a && F.v[(i + 2) % 3] == b)
                return i;
        throw std::logic_error("slot_of: edge not in face");
    }

    int last_face() const
    {
        return m_last;
    }

    void set_last(int f)
    {
        m_last = f;
    }

private:
    std::vector<Point> m_pts;
    std::vector<Face> m_faces;
    std::vector<int> m_free;
    int m_last = 0;
};

namespace detail
{

/// p strictly inside the circumcircle of a real face, or beyond a ghost's
/// hull edge (collinear points count when they lie inside the edge)
inline bool in_conflict(const Triangulation& t, const Face& f, const Point& p)
{
    const auto& P = t.points();
    if(Triangulation::ghost(f))
    {
        const Point& a = P[f.v[0]];
        const Point& b = P[f.v[1]];
        const Sign o = orient2d(a, b, p);
        if(o == Sign::Positive)
            return true;
        if(o == Sign::Negative)
            return false;
        return (a < p && p < b) || (b < p && p < a);
    }
    return incircle_raw(P[f.v[0]], P[f.v[1]], P[f.v[2]], p) == Sign::Positive;
}

/// Visibility walk towards p; stops at a real face containing p in its
/// closure or at a ghost whose hull edge sees p.
inline int locate(const Triangulation& t, const Point& p, Rng& rng)
{
    const auto& P = t.points();
    const auto& F = t.faces();
    int f = t.last_face();
    if(!F[f].alive)
        for(f = 0; !F[f].alive; ++f)
        {}
    std::size_t steps = 0;
    while(true)
    {
        const Face& face = F[f];
        if(Triangulation::ghost(face))
            return f;
        const int start = static_cast<int>(rng.below(3));
        int next = -1;
        for(int k = 0; k < 3 && next < 0; ++k)
        {
            const int i = (start + k) % 3;
            const Point& a = P[face.v[(i + 1) % 3]];
            const Point& b = P[face.v[(i + 2) % 3]];
            if(orient2d(a, b, p) == Sign::Negative)
                next = face.nb[i];
        }
        if(next < 0)
            return f;
        f = next;
        if(++steps > 4 * F.size() + 16)
            throw std::logic_error("locate: walk does not terminate");
    }
}

inline void insert_point(Triangulation& t, int pi, Rng& rng)
{
    const Point& p = t.points()[pi];
    const auto& F = t.faces();
    int start = locate(t, p, rng);
    if(!detail::in_conflict(t, F[start], p))
    {
        // p lies outside the hull on the line of the located ghost's edge
        for(int g = 0; g < static_cast<int>(F.size()); ++g)
            if(F[g].alive && Triangulation::ghost(F[g]) && in_conflict(t, F[g], p))
            {
                start = g;
                break;
            }
    }
    std::vector<int> cav{start};
    std::set<int> seen{start};
    for(std::size_t k = 0; k < cav.size(); ++k)
        for(const int g : F[cav[k]].nb)
            if(g >= 0 && !seen.count(g))
            {
                seen.insert(g);
                if(in_conflict(t, F[g], p))
                    cav.push_back(g);
            }
    std::set<int> in(cav.begin(), cav.end());
    std::vector<std::array<int, 3>> fresh;
    for(const int f : cav)
        for(int i = 0; i < 3; ++i)
            if(!in.count(F[f].nb[i]))
                fresh.push_back({F[f].v[(i + 1) % 3], F[f].v[(i + 2) % 3], pi});
    t.replace(cav, fresh);
}

/// flip the edge opposite slot i of face f
inline void flip(Triangulation& t, int f, int i)
{
    auto& F = t.faces();
    const int g = F[f].nb[i];
    const int a = F[f].v[i];
    const int b = F[f].v[(i + 1) % 3];
    const int c = F[f].v[(i + 2) % 3];
    const int j = t.slot_of(g, c, b);
    const int d = F[g].v[j];
    t.replace({f, g}, {{a, b, d}, {a, d, c}});
}

} // namespace detail

/// Cocircular quadrilaterals take the diagonal through their smallest index
inline void apply_tie_rule(Triangulation& t)
{
    bool changed = true;
    while(changed)
    {
        changed = false;
        auto& F = t.faces();
        const auto& P = t.points();
        for(int f = 0; f < static_cast<int>(F.size()) && !changed; ++f)
        {
            if(!F[f].alive || Triangulation::ghost(F[f]))
                continue;
            for(int i = 0; i < 3 && !changed; ++i)
            {
                const int g = F[f].nb[i];
                if(g < 0 || F[f].constrained[i] || Triangulation::ghost(F[g]))
                    continue;
                const int a = F[f].v[i], b = F[f].v[(i + 1) % 3], c = F[f].v[(i + 2) % 3];
                const int d = F[g].v[t.slot_of(g, c, b)];
                if(incircle_raw(P[a], P[b], P[c], P[d]) != Sign::Zero)
                    continue;
                if(std::min(b, c) < std::min(a, d))
                    continue;
                if(orient2d(P[a], P[b], P[d]) != Sign::Positive || orient2d(P[a], P[d], P[c]) != Sign::Positive)
                    continue;
                detail::flip(t, f, i);
                changed = true;
            }
        }
    }
}

/// Delaunay triangulation by randomized incremental insertion
inline Triangulation build_delaunay(const std::vector<Point>& pts, std::uint64_t seed)
{
    const int n = static_cast<int>(pts.size());
    if(n < 3)
        throw AllCollinear();
    {
        std::map<std::pair<Rational, Rational>, int> seen;
        for(int i = 0; i < n; ++i)
            if(!seen.emplace(std::make_pair(pts[i].x, pts[i].y), i).second)
                throw DuplicatePoint(std::to_string(seen[{pts[i].x, pts[i].y}]) + " " + std::to_string(i));
    }
    Rng rng(seed);
    std::vector<int> order(n);
    for(int i = 0; i < n; ++i)
        order[i] = i;
    rng.shuffle(order);
    int third = -1;
    for(int k = 2; k < n && third < 0; ++k)
        if(orient2d(pts[order[0]], pts[order[1]], pts[order[k]]) != Sign::Zero)
            third = k;
    if(third < 0)
        throw AllCollinear();
    std::swap(order[2], order[third]);
    Triangulation t(pts);
    int a = order[0], b = order[1], c = order[2];
    if(orient2d(pts[a], pts[b], pts[c]) == Sign::Negative)
        std::swap(b, c);
    auto& F = t.faces();
    F.resize(4);
    F[0].v = {a, b, c};
    F[1].v = {b, a, Triangulation::Infinite};
    F[2].v = {c, b, Triangulation::Infinite};
    F[3].v = {a, c, Triangulation::Infinite};
    F[0].nb = {2, 3, 1};
    F[1].nb = {3, 2, 0};
    F[2].nb = {1, 3, 0};
    F[3].nb = {2, 1, 0};
    for(int k = 3; k < n; ++k)
        detail::insert_point(t, order[k], rng);
    apply_tie_rule(t);
    return t;
}

/// The two cavities of segment (a, b): vertex indices a, ..., b on the left
/// and on the right of a->b, and the faces crossed by the segment.
struct SegmentCavities
{
    std::vector<int> left;
    std::vector<int> right;
    std::vector<int> crossed;
    /// the edge is already present
    bool existing = false;
};

inline SegmentCavities find_cavities(const Triangulation& t, int a, int b)
{
    const auto& P = t.points();
    const auto& F = t.faces();
    const int n = static_cast<int>(P.size());
    if(a < 0 || b < 0 || a >= n || b >= n || a == b)
        throw PreconditionError("insert_segment: invalid endpoints");
    SegmentCavities out;
    int start = -1, slot = -1;
    for(int f = 0; f < static_cast<int>(F.size()) && start < 0; ++f)
    {
        if(!F[f].alive || Triangulation::ghost(F[f]))
            continue;
        for(int i = 0; i < 3; ++i)
        {
            if(F[f].v[i] != a)
                continue;
            const int u = F[f].v[(i + 1) % 3], w = F[f].v[(i + 2) % 3];
            if(u == b || w == b)
            {
                out.existing = true;
                return out;
            }
            const Sign ou = orient2d(P[a], P[u], P[b]);
            const Sign ow = orient2d(P[a], P[w], P[b]);
            auto ahead = [&](int x) {
                return (P[x].x - P[a].x) * (P[b].x - P[a].x) + (P[x].y - P[a].y) * (P[b].y - P[a].y) > 0;
            };
            if(ou == Sign::Zero && ahead(u))
                throw SegmentThroughVertex(u);
            if(ow == Sign::Zero && ahead(w))
                throw SegmentThroughVertex(w);
            if(ou == Sign::Positive && ow == Sign::Negative)
            {
                start = f;
                slot = i;
            }
        }
    }
    if(start < 0)
        throw std::logic_error("insert_segment: no face around the start vertex");
    int f = start;
    int R = F[f].v[(slot + 1) % 3], L = F[f].v[(slot + 2) % 3];
    out.left = {a, L};
    out.right = {a, R};
    out.crossed = {f};
    while(true)
    {
        const int i = t.slot_of(f, R, L);
        if(F[f].constrained[i])
            throw SegmentCrossesConstraint(std::min(L, R), std::max(L, R));
        const int g = F[f].nb[i];
        const int j = t.slot_of(g, L, R);
        const int x = F[g].v[j];
        out.crossed.push_back(g);
        if(x == b)
            break;
        const Sign o = orient2d(P[a], P[b], P[x]);
        if(o == Sign::Zero)
            throw SegmentThroughVertex(x);
        if(o == Sign::Positive)
        {
            L = x;
            out.left.push_back(x);
        }
        else
        {
            R = x;
            out.right.push_back(x);
        }
        f = g;
    }
    out.left.push_back(b);
    out.right.push_back(b);
    return out;
}

/// Insert constrained edge (a, b); both cavities are retriangulated by
/// `retriangulate`. Statistics of both runs are appended to `stats`.
inline void insert_segment(
    Triangulation& t,
    int a,
    int b,
    std::uint64_t seed,
    const CavityOptions& opt = {},
    std::vector<RetriangulationResult>* stats = nullptr,
    const CavityHooks& hooks = {})
{
    const SegmentCavities sc = find_cavities(t, a, b);
    const auto& P = t.points();
    if(sc.existing)
    {
        auto& F = t.faces();
        for(int f = 0; f < static_cast<int>(F.size()); ++f)
        {
            if(!F[f].alive)
                continue;
            for(int i = 0; i < 3; ++i)
            {
                const int u = F[f].v[(i + 1) % 3], w = F[f].v[(i + 2) % 3];
                if((u == a && w == b) || (u == b && w == a))
                    F[f].constrained[i] = true;
            }
        }
        return;
    }
    std::vector<std::array<int, 3>> fresh;
    std::uint64_t s = seed;
    for(const auto* chain : {&sc.left, &sc.right})
    {
        Cavity c;
        for(const int v : *chain)
            c.vertices.push_back(P[v]);
        c.ranks = *chain;
        c.segment = {P[a], P[b]};
        RetriangulationResult r = retriangulate(c, s, opt, hooks);
        s = s * 0x9e3779b97f4a7c15ULL + 1;
        for(const Tri& tr : r.triangles)
            fresh.push_back({(*chain)[tr[0]], (*chain)[tr[1]], (*chain)[tr[2]]});
        if(stats)
            stats->push_back(std::move(r));
    }
    t.replace(sc.crossed, fresh, {{std::min(a, b), std::max(a, b)}});
}

/// Structure invariants, local Delaunay property of unconstrained edges and
/// the Euler relation.
inline ValidationReport verify_cdt(const Triangulation& t)
{
    ValidationReport rep;
    const auto& P = t.points();
    const auto& F = t.faces();
    const int nf = static_cast<int>(F.size());
    std::set<int> used;
    int tris = 0, hull = 0, edges2 = 0;
    for(int f = 0; f < nf; ++f)
    {
        const Face& face = F[f];
        if(!face.alive)
            continue;
        const bool g = Triangulation::ghost(face);
        if(g && face.v[2] != Triangulation::Infinite)
            rep.fail("face " + std::to_string(f) + ": infinite vertex not in slot 2");
        if(!g)
        {
            ++tris;
            for(const int v : face.v)
                used.insert(v);
            if(orient2d(P[face.v[0]], P[face.v[1]], P[face.v[2]]) != Sign::Positive)
                rep.fail("face " + std::to_string(f) + ": not counterclockwise");
        }
        for(int i = 0; i < 3; ++i)
        {
            const int nb = face.nb[i];
            const int u = face.v[(i + 1) % 3], w = face.v[(i + 2) % 3];
            if(nb < 0 || nb >= nf || !F[nb].alive)
            {
                rep.fail("face " + std::to_string(f) + ": dangling neighbour");
                continue;
            }
            int j = -1;
            try
            {
                j = t.slot_of(nb, w, u);
            }
            catch(const std::logic_error&)
            {
                rep.fail("face " + std::to_string(f) + ": neighbour does not share edge");
                continue;
            }
            if(F[nb].nb[j] != f)
                rep.fail("face " + std::to_string(f) + ": asymmetric neighbour link");
            if(F[nb].constrained[j] != face.constrained[i])
                rep.fail("edge " + std::to_string(u) + " " + std::to_string(w) + ": asymmetric constraint flag");
            if(g)
                continue;
            const bool hull_edge = Triangulation::ghost(F[nb]);
            edges2 += hull_edge ? 2 : 1;
            if(hull_edge)
            {
                ++hull;
                continue;
            }
            if(face.constrained[i] || u > w)
                continue;
            const int d = F[nb].v[j];
            if(incircle_raw(P[face.v[0]], P[face.v[1]], P[face.v[2]], P[d]) == Sign::Positive)
                rep.fail("illegal edge " + std::to_string(std::min(u, w)) + " " + std::to_string(std::max(u, w)));
        }
    }
    const int e = edges2 / 2;
    const int v = static_cast<int>(used.size());
    if(2 * e != 3 * tris + hull)
        rep.fail("euler: 2e != 3t + h");
    if(v - e + tris != 1)
        rep.fail("euler: v - e + t != 1");
    if(v != static_cast<int>(P.size()))
        rep.fail("vertices missing from the triangulation");
    return rep;
}

} // namespace vlcdt
