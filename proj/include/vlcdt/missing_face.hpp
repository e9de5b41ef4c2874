#pragma once

// Classification of the faces of a Voronoi-like graph against the true
// Voronoi regions of the sites of its cycle.
//
// Case 1: the face meets the open Voronoi region of its site. Case 2: it
// does not. Membership is decided exactly at witness points (near the true
// Voronoi vertices of the site, near the corners and edges of the face and
// just below its arc). Grid sampling in doubles is reported alongside.

#include "cdt.hpp"
#include "oracle.hpp"
#include "vlg.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace vlcdt
{

struct FaceClass
{
    int node = -1;
    int site = -1;
    bool endpoint = false;
    int klass = 2;
    int witnesses = 0;
    int hits = 0;
    int samples_in_face = 0;
    int samples_in_region = 0;
};

struct MissingFaceReport
{
    std::vector<FaceClass> faces;
    /// sites whose Voronoi region meets the domain but own no case-1 face
    std::vector<int> missing_sites;
    int advisory_disagreements = 0;
    int resolution = 0;

    const FaceClass* face(int node) const
    {
        for(const FaceClass& f : faces)
            if(f.node == node)
                return &f;
        return nullptr;
    }

    void write(std::ostream& os) const
    {
        os << "faces " << faces.size() << " missing " << missing_sites.size() << " advisory_disagreements "
           << advisory_disagreements << '\n';
        for(const FaceClass& f : faces)
            os << "face " << f.node << " site " << f.site << " case " << f.klass << (f.endpoint ? " endpoint" : "")
               << " hits " << f.hits << '/' << f.witnesses << " samples " << f.samples_in_region << '/'
               << f.samples_in_face << '\n';
        for(const int s : missing_sites)
            os << "missing site " << s << '\n';
    }
};

struct MissingFaceOptions
{
    /// grid resolution per axis for advisory sampling, 0 disables it
    int resolution = 48;
    /// site set S as indices into the graph's sites; empty means the sites
    /// of the cycle
    std::vector<int> sites;
};

namespace detail
{

struct FaceGeometry
{
    int node = -1;
    FramePoint q;
    /// x coordinates of the boundary vertices from the left leaf to the right leaf
    std::vector<QuadRoot> xs;
    std::vector<double> fxs;
    std::vector<double> fys;
    /// rational corners (circumcentres), for witnesses
    std::vector<Point> corners;
    /// site across each straight edge
    std::vector<FramePoint> across;
};

inline Rational parabola_y(const FramePoint& q, const Rational& x)
{
    const Rational dx = x - q.X;
    return (dx * dx + q.Y * q.Y) / (2 * q.Y);
}

inline double parabola_y(double qx, double qy, double x)
{
    return ((x - qx) * (x - qx) + qy * qy) / (2 * qy);
}

/// y of the bisector of q and r at x; false for a vertical bisector
inline bool bisector_y(const FramePoint& q, const FramePoint& r, const Rational& x, Rational& y)
{
    const Rational dy = r.Y - q.Y;
    if(dy.sign() == 0)
        return false;
    y = (r.X * r.X + r.Y * r.Y - q.X * q.X - q.Y * q.Y - 2 * x * (r.X - q.X)) / (2 * dy);
    return true;
}

inline Point frame_circumcenter(const FramePoint& a, const FramePoint& b, const FramePoint& c)
{
    return oracle::circumcenter(Point(a.X, a.Y), Point(b.X, b.Y), Point(c.X, c.Y));
}

/// exact parity test with an upward vertical ray
inline bool inside_face(const FaceGeometry& f, const Point& p)
{
    bool in = false;
    auto spans = [&](const QuadRoot& u, const QuadRoot& v) {
        const bool uv = compare(u, v) <= 0;
        const QuadRoot& lo = uv ? u : v;
        const QuadRoot& hi = uv ? v : u;
        return compare(lo, p.x) <= 0 && compare(hi, p.x) > 0;
    };
    for(std::size_t k = 0; k + 1 < f.xs.size(); ++k)
    {
        if(!spans(f.xs[k], f.xs[k + 1]))
            continue;
        Rational y;
        if(bisector_y(f.q, f.across[k], p.x, y) && y > p.y)
            in = !in;
    }
    if(spans(f.xs.front(), f.xs.back()) && parabola_y(f.q, p.x) > p.y)
        in = !in;
    return in;
}

inline bool inside_face(const FaceGeometry& f, double x, double y)
{
    bool in = false;
    auto spans = [&](double u, double v) { return std::min(u, v) <= x && std::max(u, v) > x; };
    for(std::size_t k = 0; k + 1 < f.fxs.size(); ++k)
    {
        if(!spans(f.fxs[k], f.fxs[k + 1]))
            continue;
        const double x0 = f.fxs[k], x1 = f.fxs[k + 1];
        const double t = (x - x0) / (x1 - x0);
        if(f.fys[k] + t * (f.fys[k + 1] - f.fys[k]) > y)
            in = !in;
    }
    const double qx = f.q.X.convert_to<double>(), qy = f.q.Y.convert_to<double>();
    if(spans(f.fxs.front(), f.fxs.back()) && parabola_y(qx, qy, x) > y)
        in = !in;
    return in;
}

} // namespace detail

/// Classify every face of `g` against the Voronoi diagram of the sites on
/// its cycle. Endpoint faces are reported as case 1 without witnesses.
inline MissingFaceReport missing_face_report(const VlGraph& g, const MissingFaceOptions& opt = {})
{
    MissingFaceReport rep;
    rep.resolution = opt.resolution;
    const std::vector<int> cyc = g.cycle_nodes();
    const Rational L2 = g.frame().length2();

    std::vector<int> site_ids = opt.sites;
    for(const int x : cyc)
        site_ids.push_back(g.site_of(x));
    std::sort(site_ids.begin(), site_ids.end());
    site_ids.erase(std::unique(site_ids.begin(), site_ids.end()), site_ids.end());
    const int ns = static_cast<int>(site_ids.size());
    std::vector<FramePoint> fp;
    std::vector<Point> pts;
    for(const int s : site_ids)
    {
        FramePoint f = g.frame().map(g.sites()[s]);
        if(g.side() < 0)
            f.Y = -f.Y;
        pts.emplace_back(f.X, f.Y);
        fp.push_back(std::move(f));
    }
    auto local = [&](int site) {
        return static_cast<int>(std::lower_bound(site_ids.begin(), site_ids.end(), site) - site_ids.begin());
    };
    auto in_open_region = [&](int w, const Point& p) {
        const Rational dw = (p.x - pts[w].x) * (p.x - pts[w].x) + (p.y - pts[w].y) * (p.y - pts[w].y);
        for(int o = 0; o < ns; ++o)
        {
            if(o == w)
                continue;
            const Rational d = (p.x - pts[o].x) * (p.x - pts[o].x) + (p.y - pts[o].y) * (p.y - pts[o].y);
            if(!(dw < d))
                return false;
        }
        return true;
    };

    // cycle breakpoints and the domain below the cycle
    std::vector<QuadRoot> bps;
    for(std::size_t i = 0; i + 1 < cyc.size(); ++i)
        bps.push_back(g.leaf_t(cyc[i], cyc[i + 1]));
    auto in_domain = [&](const Point& p) {
        if(p.x.sign() <= 0 || !(p.x < L2))
            return false;
        for(std::size_t i = 1; i + 1 < cyc.size(); ++i)
            if(compare(bps[i - 1], p.x) <= 0 && compare(bps[i], p.x) > 0)
                return p.y < detail::parabola_y(g.parabola_of(cyc[i]), p.x);
        return false;
    };

    // true Voronoi vertices of the sites
    std::vector<std::vector<Point>> vvert(ns);
    std::vector<std::vector<Point>> vray(ns);
    if(ns >= 3)
    {
        try
        {
            const Triangulation dt = build_delaunay(pts, 1);
            const auto& F = dt.faces();
            for(const Face& f : F)
            {
                if(!f.alive)
                    continue;
                if(Triangulation::ghost(f))
                {
                    // hull edge f.v[1] -> f.v[0] seen from inside: the Voronoi
                    // edge leaves along its outward normal
                    const Point& a = pts[f.v[1]];
                    const Point& b = pts[f.v[0]];
                    const Rational nx = b.y - a.y, ny = a.x - b.x;
                    const Point mid((a.x + b.x) / 2, (a.y + b.y) / 2);
                    for(const int scale : {1, 16, 256})
                    {
                        const Point far(mid.x + nx * scale, mid.y + ny * scale);
                        vray[f.v[0]].push_back(far);
                        vray[f.v[1]].push_back(far);
                    }
                    continue;
                }
                const Point c = oracle::circumcenter(pts[f.v[0]], pts[f.v[1]], pts[f.v[2]]);
                for(const int v : f.v)
                    vvert[v].push_back(c);
            }
        }
        catch(const AllCollinear&)
        {}
    }
    auto toward = [](const Point& from, const Point& to, const Rational& eps) {
        return Point(from.x + eps * (to.x - from.x), from.y + eps * (to.y - from.y));
    };
    const std::array<Rational, 3> eps{Rational(1, 2), Rational(1, 64), Rational(1, 4096)};
    auto region_witnesses = [&](int w) {
        std::vector<Point> out;
        for(const Point& t : vvert[w])
            for(const Rational& e : eps)
                out.push_back(toward(t, pts[w], e));
        for(const Point& t : vray[w])
            for(const Rational& e : eps)
                out.push_back(toward(t, pts[w], e));
        return out;
    };

    // face geometry of the interior nodes
    std::vector<detail::FaceGeometry> geo;
    for(std::size_t i = 1; i + 1 < cyc.size(); ++i)
    {
        const int q = cyc[i];
        const std::vector<int> fan = face_fan(g, q);
        if(fan.empty())
            throw std::logic_error("missing_face_report: broken face of node " + std::to_string(q));
        detail::FaceGeometry f;
        f.node = q;
        f.q = g.parabola_of(q);
        const double qx = f.q.X.convert_to<double>(), qy = f.q.Y.convert_to<double>();
        auto leaf = [&](const QuadRoot& t) {
            f.xs.push_back(t);
            const double x = t.approx();
            f.fxs.push_back(x);
            f.fys.push_back(detail::parabola_y(qx, qy, x));
        };
        leaf(g.leaf_t(fan.front(), q));
        for(std::size_t k = 1; k < fan.size(); ++k)
        {
            const Point c = detail::frame_circumcenter(f.q, g.parabola_of(fan[k - 1]), g.parabola_of(fan[k]));
            f.xs.push_back(QuadRoot::rational(c.x));
            f.fxs.push_back(c.fx);
            f.fys.push_back(c.fy);
            f.corners.push_back(c);
        }
        leaf(g.leaf_t(q, fan.back()));
        for(const int x : fan)
            f.across.push_back(g.parabola_of(x));
        geo.push_back(std::move(f));
    }

    auto rational_inside = [](const QuadRoot& a, const QuadRoot& b, double frac, Rational& out) {
        const double lo = std::min(a.approx(), b.approx()), hi = std::max(a.approx(), b.approx());
        out = Rational(lo + frac * (hi - lo));
        const bool ab = compare(a, b) <= 0;
        return compare(ab ? a : b, out) < 0 && compare(ab ? b : a, out) > 0;
    };

    std::vector<int> site_case1(ns, 0);
    for(const int x : {cyc.front(), cyc.back()})
    {
        FaceClass fc;
        fc.node = x;
        fc.site = g.site_of(x);
        fc.endpoint = true;
        fc.klass = 1;
        rep.faces.push_back(fc);
        site_case1[local(fc.site)] = 1;
    }
    for(const detail::FaceGeometry& f : geo)
    {
        FaceClass fc;
        fc.node = f.node;
        fc.site = g.site_of(f.node);
        const int w = local(fc.site);
        const Point& pw = pts[w];
        std::vector<Point> wit = region_witnesses(w);
        for(const Point& c : f.corners)
            for(const Rational& e : eps)
                wit.push_back(toward(c, pw, e));
        for(const double frac : {0.25, 0.5, 0.75})
        {
            Rational x;
            if(rational_inside(f.xs.front(), f.xs.back(), frac, x))
            {
                const Rational y = detail::parabola_y(f.q, x);
                for(const int k : {6, 16})
                    wit.emplace_back(x, y - abs(y) / Rational(Integer(1) << k) - Rational(1, Integer(1) << 40));
            }
            for(std::size_t k = 0; k + 1 < f.xs.size(); ++k)
            {
                Rational y;
                if(!rational_inside(f.xs[k], f.xs[k + 1], frac, x) || !detail::bisector_y(f.q, f.across[k], x, y))
                    continue;
                for(const Rational& e : {eps[1], eps[2]})
                    wit.push_back(toward(Point(x, y), pw, e));
            }
        }
        for(const Point& p : wit)
        {
            ++fc.witnesses;
            if(detail::inside_face(f, p) && in_open_region(w, p))
                ++fc.hits;
        }
        fc.klass = fc.hits > 0 ? 1 : 2;
        if(fc.klass == 1)
            site_case1[w] = 1;
        rep.faces.push_back(fc);
    }

    for(int w = 0; w < ns; ++w)
    {
        if(site_case1[w])
            continue;
        for(const Point& p : region_witnesses(w))
            if(in_domain(p) && in_open_region(w, p))
            {
                rep.missing_sites.push_back(site_ids[w]);
                break;
            }
    }

    if(opt.resolution > 0)
    {
        double ymin = 0, ymax = 0;
        for(const detail::FaceGeometry& f : geo)
            for(std::size_t k = 0; k < f.fys.size(); ++k)
            {
                ymin = std::min(ymin, f.fys[k]);
                ymax = std::max(ymax, f.fys[k]);
            }
        const double L = L2.convert_to<double>();
        const int R = opt.resolution;
        for(int ix = 0; ix < R; ++ix)
            for(int iy = 0; iy < R; ++iy)
            {
                const double x = L * (ix + 0.5) / R;
                const double y = ymin + (ymax - ymin) * (iy + 0.5) / R;
                int owner = -1;
                double best = std::numeric_limits<double>::infinity();
                for(int o = 0; o < ns; ++o)
                {
                    const double d = (x - pts[o].fx) * (x - pts[o].fx) + (y - pts[o].fy) * (y - pts[o].fy);
                    if(d < best)
                    {
                        best = d;
                        owner = o;
                    }
                }
                for(std::size_t k = 0; k < geo.size(); ++k)
                    if(detail::inside_face(geo[k], x, y))
                    {
                        FaceClass& fc = rep.faces[k + 2];
                        ++fc.samples_in_face;
                        if(local(fc.site) == owner)
                            ++fc.samples_in_region;
                    }
            }
        for(std::size_t k = 2; k < rep.faces.size(); ++k)
            if((rep.faces[k].samples_in_region > 0) != (rep.faces[k].klass == 1))
                ++rep.advisory_disagreements;
    }
    return rep;
}

} // namespace vlcdt
