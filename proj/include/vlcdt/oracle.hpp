#pragma once

// Brute-force references. Rational arithmetic only; nothing here uses the
// floating-point filters of predicates.hpp.

#include "predicates.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace vlcdt::oracle
{

using Tri = std::array<int, 3>;

/// 3x3 determinant |ax ay 1; bx by 1; cx cy 1|
inline int det_orient(const Point& a, const Point& b, const Point& c)
{
    const Rational det = a.x * b.y - a.y * b.x + b.x * c.y - b.y * c.x + c.x * a.y - c.y * a.x;
    return det.sign();
}

/// 4x4 lifted determinant, positive iff d inside circle(a,b,c) for CCW a,b,c
inline int lifted_incircle(const Point& a, const Point& b, const Point& c, const Point& d)
{
    const std::array<const Point*, 4> p{&a, &b, &c, &d};
    Rational m[4][4];
    for(int i = 0; i < 4; ++i)
    {
        m[i][0] = p[i]->x;
        m[i][1] = p[i]->y;
        m[i][2] = p[i]->x * p[i]->x + p[i]->y * p[i]->y;
        m[i][3] = 1;
    }
    // Gaussian elimination on an exact field
    Rational det = 1;
    for(int col = 0; col < 4; ++col)
    {
        int piv = -1;
        for(int r = col; r < 4; ++r)
            if(m[r][col].sign() != 0)
            {
                piv = r;
                break;
            }
        if(piv < 0)
            return 0;
        if(piv != col)
        {
            for(int k = 0; k < 4; ++k)
                std::swap(m[piv][k], m[col][k]);
            det = -det;
        }
        det *= m[col][col];
        for(int r = col + 1; r < 4; ++r)
        {
            if(m[r][col].sign() == 0)
                continue;
            const Rational f = m[r][col] / m[col][col];
            for(int k = col; k < 4; ++k)
                m[r][k] -= f * m[col][k];
        }
    }
    return det.sign();
}

/// d strictly inside the circle through a, b, c (any orientation)
inline bool in_circle(const Point& a, const Point& b, const Point& c, const Point& d)
{
    return det_orient(a, b, c) * lifted_incircle(a, b, c, d) > 0;
}

/// in_circle with cocircular ties broken by ranks: the lifted point of
/// smallest rank is taken as the lowest
inline bool in_circle_ranked(const Point& a, const Point& b, const Point& c, const Point& d, const std::array<int, 4>& rank)
{
    const int o = det_orient(a, b, c);
    const int s = o * lifted_incircle(a, b, c, d);
    if(s != 0 || o == 0 || d == a || d == b || d == c)
        return s > 0;
    const int m = static_cast<int>(std::min_element(rank.begin(), rank.end()) - rank.begin());
    if(m == 3)
        return true;
    // with the lowest point on the circle, d is inside iff replacing it
    // flips the orientation
    std::array<Point, 3> q{a, b, c};
    q[m] = d;
    return det_orient(q[0], q[1], q[2]) * o < 0;
}

/// Tangency parameters lambda of the circles through a and b tangent to the
/// line of s at s.a + lambda (s.b - s.a), ascending. Empty when a or b is on
/// the line or they lie on opposite sides.
inline std::vector<QuadRoot> parabola_intersections(const SegmentSite& s, const Point& a, const Point& b)
{
    if(a == b)
        throw PreconditionError("parabola_intersections: a == b");
    const Rational dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
    const Rational L = dx * dx + dy * dy;
    auto cross = [&](const Point& p) { return dx * (p.y - s.a.y) - dy * (p.x - s.a.x); };
    const Rational ya = cross(a), yb = cross(b);
    if(ya.sign() == 0 || yb.sign() == 0 || ya.sign() != yb.sign())
        return {};
    // |P - p|^2 = lambda^2 L + 2 lambda d.(s.a - p) + |s.a - p|^2
    auto coeffs = [&](const Point& p, Rational& c1, Rational& c0) {
        const Rational ex = s.a.x - p.x, ey = s.a.y - p.y;
        c1 = 2 * (dx * ex + dy * ey);
        c0 = ex * ex + ey * ey;
    };
    Rational a1, a0, b1, b0;
    coeffs(a, a1, a0);
    coeffs(b, b1, b0);
    const Rational A = (yb - ya) * L;
    const Rational B = yb * a1 - ya * b1;
    const Rational C = yb * a0 - ya * b0;
    std::vector<QuadRoot> out;
    if(A.sign() == 0)
    {
        if(B.sign() == 0)
            return {};
        out.push_back(QuadRoot::rational(-C / B));
        return out;
    }
    const Rational D = B * B - 4 * A * C;
    if(D.sign() < 0)
        return {};
    if(D.sign() == 0)
    {
        out.push_back(QuadRoot::rational(-B / (2 * A)));
        return out;
    }
    const Rational al = -B / (2 * A);
    const Rational be = Rational(1) / (2 * A);
    QuadRoot r1{al, be, D}, r2{al, -be, D};
    if(compare(r1, r2) > 0)
        std::swap(r1, r2);
    out.push_back(r1);
    out.push_back(r2);
    return out;
}

/// Independent tangent circle test: centre computed in the input plane over
/// Q(sqrt(D)). Returns +1 when c is strictly inside.
inline int tangent_incircle(const SegmentSite& s, const Point& a, const Point& b, bool high, const Point& c)
{
    const std::vector<QuadRoot> roots = parabola_intersections(s, a, b);
    if(roots.empty())
        throw NoTangentCircle();
    const QuadRoot& lam = high ? roots.back() : roots.front();
    const Rational D = lam.disc;
    const QSqrt l(lam.alpha, lam.beta, D);
    const Rational dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
    const Rational ya = dx * (a.y - s.a.y) - dy * (a.x - s.a.x);
    const QSqrt px = QSqrt::rational(s.a.x, D) + l * dx;
    const QSqrt py = QSqrt::rational(s.a.y, D) + l * dy;
    const QSqrt ex = px - QSqrt::rational(a.x, D), ey = py - QSqrt::rational(a.y, D);
    const QSqrt rho = (ex * ex + ey * ey) / (2 * ya);
    const QSqrt cx = px + rho * Rational(-dy);
    const QSqrt cy = py + rho * dx;
    const Rational k = c.x * c.x + c.y * c.y - a.x * a.x - a.y * a.y;
    const QSqrt val = QSqrt::rational(k, D) - (cx * (2 * (c.x - a.x)) + cy * (2 * (c.y - a.y)));
    return -val.sign();
}

/// CDT of a cavity by recursion on chains: for the chain i..j pick the
/// vertex k whose circle with i and j holds no other chain vertex. Returns
/// counterclockwise triangles of cavity indices.
inline std::vector<Tri> cavity_cdt(const std::vector<Point>& P, std::vector<int> rank = {})
{
    const int n = static_cast<int>(P.size());
    if(rank.empty())
    {
        // first occurrence of each point
        for(int k = 0; k < n; ++k)
            rank.push_back(static_cast<int>(std::find(P.begin(), P.end(), P[k]) - P.begin()));
    }
    auto inside = [&](int i, int b, int j, int k) {
        return in_circle_ranked(P[i], P[b], P[j], P[k], {rank[i], rank[b], rank[j], rank[k]});
    };
    std::vector<Tri> out;
    std::vector<std::pair<int, int>> stack{{0, n - 1}};
    while(!stack.empty())
    {
        const auto [i, j] = stack.back();
        stack.pop_back();
        if(j - i < 2)
            continue;
        int best = -1;
        for(int k = i + 1; k < j; ++k)
        {
            if(P[k] == P[i] || P[k] == P[j])
                continue;
            if(best < 0 || inside(i, best, j, k))
                best = k;
        }
        if(best < 0)
            throw std::logic_error("cavity_cdt: no candidate");
        // the winner must have an empty circle among i..j
        for(int k = i + 1; k < j; ++k)
            if(k != best && P[k] != P[best] && inside(i, best, j, k))
                throw std::logic_error("cavity_cdt: chain circle not empty");
        Tri t{i, best, j};
        if(det_orient(P[i], P[best], P[j]) < 0)
            std::swap(t[1], t[2]);
        const auto m = std::min_element(t.begin(), t.end()) - t.begin();
        std::rotate(t.begin(), t.begin() + m, t.end());
        out.push_back(t);
        stack.push_back({i, best});
        stack.push_back({best, j});
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Sites of the true Voronoi cycle of segment s among `pts` (all strictly on
/// one side of s): the lower envelope of their parabolas over the segment,
/// left to right, as indices into `pts`. Throws when two parabolas touch
/// on the envelope.
inline std::vector<int> voronoi_cycle(const SegmentSite& s, const std::vector<Point>& pts)
{
    const Rational dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
    const Rational L2 = dx * dx + dy * dy;
    const int n = static_cast<int>(pts.size());
    std::vector<Rational> X(n), Y(n);
    for(int i = 0; i < n; ++i)
    {
        const Rational px = pts[i].x - s.a.x, py = pts[i].y - s.a.y;
        X[i] = dx * px + dy * py;
        Y[i] = abs(dx * py - dy * px);
        if(Y[i].sign() == 0)
            throw PreconditionError("voronoi_cycle: point on the segment line");
    }
    // 2 Yi Yj (h_i - h_j) = Yj((x - Xi)^2 + Yi^2) - Yi((x - Xj)^2 + Yj^2)
    auto diff = [&](int i, int j, Rational& A, Rational& B, Rational& C) {
        A = Y[j] - Y[i];
        B = 2 * (Y[i] * X[j] - Y[j] * X[i]);
        C = Y[j] * (X[i] * X[i] + Y[i] * Y[i]) - Y[i] * (X[j] * X[j] + Y[j] * Y[j]);
    };
    // lowest at x = 0, ties broken by the slope
    int cur = 0;
    for(int i = 1; i < n; ++i)
    {
        Rational A, B, C;
        diff(i, cur, A, B, C);
        if(C.sign() < 0 || (C.sign() == 0 && B.sign() < 0))
            cur = i;
    }
    std::vector<int> out{cur};
    QuadRoot x = QuadRoot::rational(Rational(0));
    while(true)
    {
        int next = -1;
        QuadRoot best;
        for(int o = 0; o < n; ++o)
        {
            if(o == cur || pts[o] == pts[cur])
                continue;
            Rational A, B, C;
            diff(cur, o, A, B, C);
            std::vector<QuadRoot> roots;
            if(A.sign() == 0)
            {
                if(B.sign() == 0)
                    continue;
                roots.push_back(QuadRoot::rational(-C / B));
            }
            else
            {
                const Rational D = B * B - 4 * A * C;
                if(D.sign() < 0)
                    continue;
                if(D.sign() == 0)
                {
                    const QuadRoot r = QuadRoot::rational(-B / (2 * A));
                    if(compare(r, x) > 0 && compare(r, L2) < 0)
                        throw PreconditionError("voronoi_cycle: tangent parabolas");
                    continue;
                }
                roots.push_back(QuadRoot{-B / (2 * A), Rational(1) / (2 * A), D});
                roots.push_back(QuadRoot{-B / (2 * A), Rational(-1) / (2 * A), D});
            }
            for(const QuadRoot& r : roots)
            {
                // o takes over where h_cur - h_o becomes positive
                const QuadRoot slope{2 * A * r.alpha + B, 2 * A * r.beta, r.disc};
                if(compare(slope, Rational(0)) <= 0)
                    continue;
                if(compare(r, x) <= 0 || compare(r, L2) >= 0)
                    continue;
                if(next < 0 || compare(r, best) < 0)
                {
                    next = o;
                    best = r;
                }
                else if(compare(r, best) == 0)
                    throw PreconditionError("voronoi_cycle: three parabolas meet");
            }
        }
        if(next < 0)
            break;
        cur = next;
        x = best;
        out.push_back(cur);
    }
    return out;
}

struct VoronoiVertex
{
    /// defining sites, sorted
    Tri sites;
    Point center;
};

struct VoronoiDiagram
{
    std::vector<VoronoiVertex> vertices;
    /// pairs of vertex indices sharing two sites
    std::vector<std::array<int, 2>> edges;
    /// site pairs with a single incident vertex (unbounded edges)
    std::vector<std::array<int, 2>> rays;
};

inline Point circumcenter(const Point& a, const Point& b, const Point& c)
{
    const Rational bx = b.x - a.x, by = b.y - a.y, cx = c.x - a.x, cy = c.y - a.y;
    const Rational d = 2 * (bx * cy - by * cx);
    const Rational b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    return Point(a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d);
}

/// Delaunay triangles by empty-circle enumeration. Cocircular groups are
/// fanned from their smallest index.
inline std::vector<Tri> delaunay_triangles(const std::vector<Point>& pts)
{
    const int n = static_cast<int>(pts.size());
    std::vector<Tri> out;
    for(int i = 0; i < n; ++i)
        for(int j = i + 1; j < n; ++j)
            for(int k = j + 1; k < n; ++k)
            {
                const int o = det_orient(pts[i], pts[j], pts[k]);
                if(o == 0)
                    continue;
                std::vector<int> on;
                bool empty = true;
                for(int l = 0; l < n && empty; ++l)
                {
                    if(l == i || l == j || l == k)
                        continue;
                    const int s = o * lifted_incircle(pts[i], pts[j], pts[k], pts[l]);
                    if(s > 0)
                        empty = false;
                    else if(s == 0)
                        on.push_back(l);
                }
                if(!empty)
                    continue;
                if(!on.empty())
                {
                    std::vector<int> group{i, j, k};
                    group.insert(group.end(), on.begin(), on.end());
                    const int m = *std::min_element(group.begin(), group.end());
                    if(m != i)
                        continue;
                    // j and k must be consecutive in the angular order around the circle
                    auto between = [&](int p, int q, int r) {
                        // r strictly inside the arc from p to q not containing i
                        return det_orient(pts[p], pts[q], pts[r]) * det_orient(pts[p], pts[q], pts[i]) < 0;
                    };
                    bool consecutive = true;
                    for(const int l : on)
                        if(between(j, k, l))
                            consecutive = false;
                    if(!consecutive)
                        continue;
                }
                Tri t{i, j, k};
                if(o < 0)
                    std::swap(t[1], t[2]);
                out.push_back(t);
            }
    std::sort(out.begin(), out.end());
    return out;
}

inline VoronoiDiagram naive_voronoi(const std::vector<Point>& pts)
{
    VoronoiDiagram vd;
    for(Tri t : delaunay_triangles(pts))
    {
        const Point c = circumcenter(pts[t[0]], pts[t[1]], pts[t[2]]);
        std::sort(t.begin(), t.end());
        vd.vertices.push_back({t, c});
    }
    std::map<std::array<int, 2>, std::vector<int>> by_pair;
    for(int v = 0; v < static_cast<int>(vd.vertices.size()); ++v)
    {
        const Tri& s = vd.vertices[v].sites;
        by_pair[{s[0], s[1]}].push_back(v);
        by_pair[{s[0], s[2]}].push_back(v);
        by_pair[{s[1], s[2]}].push_back(v);
    }
    for(const auto& [pair, vs] : by_pair)
    {
        if(vs.size() == 2)
            vd.edges.push_back({vs[0], vs[1]});
        else if(vs.size() == 1)
            vd.rays.push_back(pair);
    }
    return vd;
}

namespace detail
{

/// open segments pq and rs cross at a single interior point
inline bool proper_cross(const Point& p, const Point& q, const Point& r, const Point& s)
{
    const int o1 = det_orient(p, q, r), o2 = det_orient(p, q, s);
    const int o3 = det_orient(r, s, p), o4 = det_orient(r, s, q);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

} // namespace detail

/// Constrained Delaunay triangulation by gift wrapping: from every directed
/// front edge (i, j) take, among the vertices left of it that see the edge
/// without crossing a constraint, the one with the smallest circle. Returns
/// counterclockwise triangles.
inline std::vector<Tri> brute_force_cdt(
    const std::vector<Point>& pts,
    const std::vector<std::array<int, 2>>& constraints)
{
    const int n = static_cast<int>(pts.size());
    if(n < 3)
        return {};
    auto blocked = [&](int a, int b) {
        for(const auto& c : constraints)
        {
            if(c[0] == a || c[0] == b || c[1] == a || c[1] == b)
                continue;
            if(detail::proper_cross(pts[a], pts[b], pts[c[0]], pts[c[1]]))
                return true;
        }
        return false;
    };
    std::deque<std::array<int, 2>> front;
    for(const auto& c : constraints)
    {
        front.push_back({c[0], c[1]});
        front.push_back({c[1], c[0]});
    }
    {
        // a hull edge from the lowest-leftmost point
        int p = 0;
        for(int i = 1; i < n; ++i)
            if(pts[i] < pts[p])
                p = i;
        int q = p == 0 ? 1 : 0;
        for(int i = 0; i < n; ++i)
        {
            if(i == p || i == q)
                continue;
            const int o = det_orient(pts[p], pts[q], pts[i]);
            if(o < 0 || (o == 0 && pts[i] < pts[q]))
                q = i;
        }
        // everything is left of p->q or on it
        front.push_back({p, q});
    }
    std::set<std::array<int, 2>> owned;
    std::set<std::array<int, 2>> expanded;
    std::vector<Tri> out;
    while(!front.empty())
    {
        const auto e = front.front();
        front.pop_front();
        if(owned.count(e) || !expanded.insert(e).second)
            continue;
        const int i = e[0], j = e[1];
        int best = -1;
        for(int k = 0; k < n; ++k)
        {
            if(k == i || k == j || det_orient(pts[i], pts[j], pts[k]) <= 0)
                continue;
            if(blocked(i, k) || blocked(j, k))
                continue;
            if(best < 0)
            {
                best = k;
                continue;
            }
            if(in_circle_ranked(pts[i], pts[j], pts[best], pts[k], {i, j, best, k}))
                best = k;
        }
        if(best < 0)
            continue;
        const Tri t{i, j, best};
        owned.insert({i, j});
        owned.insert({j, best});
        owned.insert({best, i});
        Tri r = t;
        const auto m = std::min_element(r.begin(), r.end()) - r.begin();
        std::rotate(r.begin(), r.begin() + m, r.end());
        out.push_back(r);
        front.push_back({best, j});
        front.push_back({i, best});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace vlcdt::oracle
