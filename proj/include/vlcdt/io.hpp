#pragma once

// Text mesh files and SVG rendering.
//
// File layout (index base 0 or 1, fixed by the first point index):
//
//   N            point count
//   i x y        one line per point, exact decimal or p/q coordinates
//
//   M            constraint count
//   i a b        one line per constraint
//
//   T            triangle count (triangulation files only)
//   t a b c f0 f1 f2
//
// fk is 1 when the edge opposite vertex k is constrained. Blank lines and
// lines starting with '#' are ignored.

#include "cdt.hpp"
#include "oracle.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace vlcdt
{

struct ParseError : std::runtime_error
{
    ParseError(int line, const std::string& m)
        : std::runtime_error("ParseError: line " + std::to_string(line) + ": " + m)
        , line(line)
    {}
    int line;
};

struct MeshFile
{
    std::vector<Point> points;
    std::vector<std::array<int, 2>> segments;
    std::vector<Tri> triangles;
    std::vector<std::array<bool, 3>> flags;
    bool has_triangles = false;
    int base = 0;
};

namespace detail
{

class LineReader
{
public:
    explicit LineReader(std::istream& is)
        : m_is(is)
    {}

    /// next non-blank, non-comment line split into fields
    bool next(std::vector<std::string>& fields)
    {
        std::string line;
        while(std::getline(m_is, line))
        {
            ++m_line;
            const auto hash = line.find('#');
            if(hash != std::string::npos)
                line.erase(hash);
            std::istringstream ss(line);
            fields.clear();
            std::string f;
            while(ss >> f)
                fields.push_back(f);
            if(!fields.empty())
                return true;
        }
        return false;
    }

    int line() const
    {
        return m_line;
    }

private:
    std::istream& m_is;
    int m_line = 0;
};

inline long long parse_int(const std::string& s, int line)
{
    std::size_t used = 0;
    long long v = 0;
    try
    {
        v = std::stoll(s, &used);
    }
    catch(const std::exception&)
    {
        throw ParseError(line, "expected an integer, got '" + s + "'");
    }
    if(used != s.size())
        throw ParseError(line, "expected an integer, got '" + s + "'");
    return v;
}

inline int parse_count(LineReader& r, const char* what, bool required)
{
    std::vector<std::string> f;
    if(!r.next(f))
    {
        if(required)
            throw ParseError(r.line(), std::string("missing ") + what + " header");
        return -1;
    }
    if(f.size() != 1)
        throw ParseError(r.line(), std::string("malformed ") + what + " header");
    const long long n = parse_int(f[0], r.line());
    if(n < 0 || n > 100000000)
        throw ParseError(r.line(), std::string("bad ") + what + " count");
    return static_cast<int>(n);
}

} // namespace detail

inline MeshFile read_mesh(std::istream& is)
{
    using detail::parse_int;
    detail::LineReader r(is);
    MeshFile m;
    std::vector<std::string> f;
    const int n = detail::parse_count(r, "point", true);
    for(int i = 0; i < n; ++i)
    {
        if(!r.next(f))
            throw ParseError(r.line(), "expected " + std::to_string(n) + " points");
        if(f.size() != 3)
            throw ParseError(r.line(), "point line needs 'i x y'");
        const long long idx = parse_int(f[0], r.line());
        if(i == 0)
        {
            if(idx != 0 && idx != 1)
                throw ParseError(r.line(), "first point index must be 0 or 1");
            m.base = static_cast<int>(idx);
        }
        if(idx != i + m.base)
            throw ParseError(r.line(), "point indices must be consecutive");
        try
        {
            m.points.emplace_back(parse_rational(f[1]), parse_rational(f[2]));
        }
        catch(const std::invalid_argument& e)
        {
            throw ParseError(r.line(), e.what());
        }
    }
    auto vertex = [&](const std::string& s) {
        const long long v = parse_int(s, r.line()) - m.base;
        if(v < 0 || v >= n)
            throw ParseError(r.line(), "vertex index out of range: " + s);
        return static_cast<int>(v);
    };
    const int segs = detail::parse_count(r, "constraint", false);
    for(int i = 0; i < segs; ++i)
    {
        if(!r.next(f))
            throw ParseError(r.line(), "expected " + std::to_string(segs) + " constraints");
        if(f.size() != 3)
            throw ParseError(r.line(), "constraint line needs 'i a b'");
        if(parse_int(f[0], r.line()) != i + m.base)
            throw ParseError(r.line(), "constraint indices must be consecutive");
        m.segments.push_back({vertex(f[1]), vertex(f[2])});
    }
    if(segs < 0)
        return m;
    const int tris = detail::parse_count(r, "triangle", false);
    if(tris < 0)
        return m;
    m.has_triangles = true;
    for(int i = 0; i < tris; ++i)
    {
        if(!r.next(f))
            throw ParseError(r.line(), "expected " + std::to_string(tris) + " triangles");
        if(f.size() != 4 && f.size() != 7)
            throw ParseError(r.line(), "triangle line needs 't a b c [f0 f1 f2]'");
        if(parse_int(f[0], r.line()) != i + m.base)
            throw ParseError(r.line(), "triangle indices must be consecutive");
        m.triangles.push_back({vertex(f[1]), vertex(f[2]), vertex(f[3])});
        std::array<bool, 3> fl{false, false, false};
        if(f.size() == 7)
            for(int k = 0; k < 3; ++k)
            {
                const long long v = parse_int(f[4 + k], r.line());
                if(v != 0 && v != 1)
                    throw ParseError(r.line(), "constraint flag must be 0 or 1");
                fl[k] = v == 1;
            }
        m.flags.push_back(fl);
    }
    if(r.next(f))
        throw ParseError(r.line(), "trailing content");
    return m;
}

inline MeshFile read_mesh_file(const std::string& path)
{
    std::ifstream is(path);
    if(!is)
        throw ParseError(0, "cannot open " + path);
    return read_mesh(is);
}

inline MeshFile to_mesh(const Triangulation& t, int base = 0)
{
    MeshFile m;
    m.base = base;
    m.points = t.points();
    m.segments = t.constraints();
    m.has_triangles = true;
    for(const Face& f : t.faces())
    {
        if(!f.alive || Triangulation::ghost(f))
            continue;
        const Tri v = Triangulation::rotate_min(f.v);
        const int shift = static_cast<int>(std::find(f.v.begin(), f.v.end(), v[0]) - f.v.begin());
        m.triangles.push_back(v);
        m.flags.push_back({f.constrained[shift], f.constrained[(shift + 1) % 3], f.constrained[(shift + 2) % 3]});
    }
    std::vector<std::size_t> idx(m.triangles.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return m.triangles[x] < m.triangles[y]; });
    std::vector<Tri> tr;
    std::vector<std::array<bool, 3>> fl;
    for(const std::size_t i : idx)
    {
        tr.push_back(m.triangles[i]);
        fl.push_back(m.flags[i]);
    }
    m.triangles = std::move(tr);
    m.flags = std::move(fl);
    return m;
}

inline void write_mesh(std::ostream& os, const MeshFile& m)
{
    const int b = m.base;
    os << m.points.size() << '\n';
    for(std::size_t i = 0; i < m.points.size(); ++i)
        os << i + b << ' ' << format_rational(m.points[i].x) << ' ' << format_rational(m.points[i].y) << '\n';
    os << '\n' << m.segments.size() << '\n';
    for(std::size_t i = 0; i < m.segments.size(); ++i)
        os << i + b << ' ' << m.segments[i][0] + b << ' ' << m.segments[i][1] + b << '\n';
    if(!m.has_triangles)
        return;
    os << '\n' << m.triangles.size() << '\n';
    for(std::size_t i = 0; i < m.triangles.size(); ++i)
    {
        const Tri& t = m.triangles[i];
        os << i + b << ' ' << t[0] + b << ' ' << t[1] + b << ' ' << t[2] + b;
        for(const bool f : m.flags[i])
            os << ' ' << (f ? 1 : 0);
        os << '\n';
    }
}

/// Triangulation of a file's triangle section with ghosts on the hull.
/// Throws std::logic_error when the triangles do not form a consistently
/// oriented manifold.
inline Triangulation to_triangulation(const MeshFile& m)
{
    Triangulation t(m.points);
    std::vector<std::array<int, 3>> fresh(m.triangles.begin(), m.triangles.end());
    std::set<std::array<int, 2>> directed;
    for(const Tri& tr : m.triangles)
        for(int i = 0; i < 3; ++i)
            if(!directed.insert({tr[i], tr[(i + 1) % 3]}).second)
                throw std::logic_error("edge " + std::to_string(tr[i]) + " " + std::to_string(tr[(i + 1) % 3]) +
                                       " used twice in the same direction");
    for(const auto& e : directed)
        if(!directed.count({e[1], e[0]}))
            fresh.push_back({e[1], e[0], Triangulation::Infinite});
    t.replace({}, fresh);
    auto& F = t.faces();
    for(std::size_t k = 0; k < m.triangles.size(); ++k)
        for(int i = 0; i < 3; ++i)
        {
            if(!m.flags[k][i])
                continue;
            Face& f = F[k];
            f.constrained[i] = true;
            const int g = f.nb[i];
            if(g >= 0 && Triangulation::ghost(F[g]))
                F[g].constrained[t.slot_of(g, f.v[(i + 2) % 3], f.v[(i + 1) % 3])] = true;
        }
    t.set_last(0);
    return t;
}

/// Every constraint listed in the file is a constrained edge and vice versa
inline ValidationReport verify_mesh_constraints(const MeshFile& m, const Triangulation& t)
{
    ValidationReport rep;
    std::set<std::array<int, 2>> listed;
    for(auto s : m.segments)
    {
        std::sort(s.begin(), s.end());
        listed.insert(s);
    }
    const auto flagged = t.constraints();
    const std::set<std::array<int, 2>> have(flagged.begin(), flagged.end());
    for(const auto& e : listed)
        if(!have.count(e))
            rep.fail("constraint " + std::to_string(e[0]) + " " + std::to_string(e[1]) + " is not a constrained edge");
    for(const auto& e : have)
        if(!listed.count(e))
            rep.fail("constrained edge " + std::to_string(e[0]) + " " + std::to_string(e[1]) + " is not listed");
    return rep;
}

struct SvgOptions
{
    double width = 800;
    /// sample the parabolic cycle arcs of each constraint's two cavities
    bool arcs = false;
    int samples_per_arc = 24;
};

namespace detail
{

/// Polylines of the lower envelope of the cavity sites of (a, b) on each side
inline std::vector<std::vector<std::array<double, 2>>> cycle_polylines(
    const std::vector<Point>& pts,
    const std::vector<std::array<int, 2>>& constraints,
    int a,
    int b,
    int samples)
{
    std::vector<std::vector<std::array<double, 2>>> out;
    Triangulation t = build_delaunay(pts, 1);
    for(const auto& c : constraints)
    {
        if((c[0] == a && c[1] == b) || (c[0] == b && c[1] == a))
            continue;
        insert_segment(t, c[0], c[1], 1);
    }
    const SegmentCavities sc = find_cavities(t, a, b);
    if(sc.existing)
        return out;
    const SegmentSite s{pts[a], pts[b]};
    const SegmentFrame fr(s);
    for(const auto* chain : {&sc.left, &sc.right})
    {
        std::vector<Point> inner;
        for(std::size_t i = 1; i + 1 < chain->size(); ++i)
            inner.push_back(pts[(*chain)[i]]);
        const std::vector<int> env = oracle::voronoi_cycle(s, inner);
        const int sigma = chain == &sc.left ? 1 : -1;
        std::vector<FramePoint> fp;
        for(const int k : env)
        {
            FramePoint p = fr.map(inner[k]);
            p.Y *= sigma;
            fp.push_back(p);
        }
        std::vector<double> cut{0.0};
        for(std::size_t k = 0; k + 1 < fp.size(); ++k)
        {
            QuadRoot r;
            breakpoint(fp[k], fp[k + 1], r);
            cut.push_back(r.approx());
        }
        cut.push_back(fr.length2().convert_to<double>());
        std::vector<std::array<double, 2>> line;
        for(std::size_t k = 0; k < fp.size(); ++k)
        {
            const double qx = fp[k].X.convert_to<double>(), qy = fp[k].Y.convert_to<double>();
            for(int j = 0; j <= samples; ++j)
            {
                const double X = cut[k] + (cut[k + 1] - cut[k]) * j / samples;
                const double H = ((X - qx) * (X - qx) + qy * qy) / (2 * qy);
                double x, y;
                fr.unmap_approx(X, sigma * H, x, y);
                line.push_back({x, y});
            }
        }
        out.push_back(std::move(line));
    }
    return out;
}

} // namespace detail

inline void write_svg(std::ostream& os, const Triangulation& t, const SvgOptions& opt = {})
{
    const auto& P = t.points();
    double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
    for(std::size_t i = 0; i < P.size(); ++i)
    {
        if(i == 0)
        {
            x0 = x1 = P[i].fx;
            y0 = y1 = P[i].fy;
        }
        x0 = std::min(x0, P[i].fx);
        x1 = std::max(x1, P[i].fx);
        y0 = std::min(y0, P[i].fy);
        y1 = std::max(y1, P[i].fy);
    }
    const double span = std::max({x1 - x0, y1 - y0, 1e-12});
    const double margin = 0.05 * span;
    const double scale = opt.width / (span + 2 * margin);
    const double h = (y1 - y0 + 2 * margin) * scale;
    auto X = [&](double x) { return (x - x0 + margin) * scale; };
    auto Y = [&](double y) { return h - (y - y0 + margin) * scale; };
    const double r = std::max(1.0, opt.width / 400);

    os << std::setprecision(10);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << h << "\">\n";
    os << "<g id=\"edges\" stroke=\"#555\" stroke-width=\"" << r / 2 << "\">\n";
    std::set<std::array<int, 2>> drawn;
    for(const Face& f : t.faces())
    {
        if(!f.alive || Triangulation::ghost(f))
            continue;
        for(int i = 0; i < 3; ++i)
        {
            std::array<int, 2> e{f.v[(i + 1) % 3], f.v[(i + 2) % 3]};
            std::sort(e.begin(), e.end());
            if(!drawn.insert(e).second)
                continue;
            os << "<line class=\"" << (f.constrained[i] ? "constraint" : "edge") << "\" x1=\"" << X(P[e[0]].fx)
               << "\" y1=\"" << Y(P[e[0]].fy) << "\" x2=\"" << X(P[e[1]].fx) << "\" y2=\"" << Y(P[e[1]].fy) << "\""
               << (f.constrained[i] ? " stroke=\"#c00\" stroke-width=\"" + std::to_string(r) + "\"" : "") << "/>\n";
        }
    }
    os << "</g>\n";
    if(opt.arcs)
    {
        os << "<g id=\"arcs\" fill=\"none\" stroke=\"#06c\" stroke-width=\"" << r / 2 << "\">\n";
        for(const auto& c : t.constraints())
        {
            std::vector<std::vector<std::array<double, 2>>> lines;
            try
            {
                lines = detail::cycle_polylines(P, t.constraints(), c[0], c[1], opt.samples_per_arc);
            }
            catch(const std::exception&)
            {
                continue;
            }
            for(const auto& line : lines)
            {
                os << "<polyline class=\"arc\" points=\"";
                for(const auto& p : line)
                    os << X(p[0]) << ',' << Y(p[1]) << ' ';
                os << "\"/>\n";
            }
        }
        os << "</g>\n";
    }
    os << "<g id=\"points\" fill=\"#000\">\n";
    for(const Point& p : P)
        os << "<circle class=\"point\" cx=\"" << X(p.fx) << "\" cy=\"" << Y(p.fy) << "\" r=\"" << r << "\"/>\n";
    os << "</g>\n</svg>\n";
}

} // namespace vlcdt
