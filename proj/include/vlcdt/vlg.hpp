#pragma once

// Local Voronoi checks and validation of Voronoi-like graphs.

#include "cycle_core.hpp"
#include "report.hpp"

#include <numeric>
#include <optional>

namespace vlcdt
{

enum class LocalStatus
{
    NearestLocallyVoronoi,
    FarthestLocallyVoronoi,
    Violation
};

inline const char* to_string(LocalStatus s)
{
    switch(s)
    {
    case LocalStatus::NearestLocallyVoronoi:
        return "NearestLocallyVoronoi";
    case LocalStatus::FarthestLocallyVoronoi:
        return "FarthestLocallyVoronoi";
    default:
        return "Violation";
    }
}

struct DegreeMismatch : std::logic_error
{
    explicit DegreeMismatch(int degree)
        : std::logic_error("DegreeMismatch: degree " + std::to_string(degree))
    {}
};

struct LocalCheckResult
{
    /// dual triangle of the vertex (graph nodes)
    Tri vertex{};
    LocalStatus status = LocalStatus::Violation;
    /// predicate evaluations in the order they were made
    std::vector<std::string> witness;
};

/// A graph vertex given geometrically: incident face sites in
/// counterclockwise order around it and the direction of the edge between
/// consecutive faces (edge k separates sites k and k+1).
struct LocalVertex
{
    std::vector<Point> sites;
    Point position;
    std::vector<std::array<Rational, 2>> edges;
};

/// Nearest type: the vertex is the circumcentre of its sites, the sites are
/// counterclockwise and each edge runs along the bisector of its two faces
/// away from the third site. Farthest type: same with every edge pointing
/// towards the third site.
inline LocalCheckResult check_locally_voronoi(const LocalVertex& v)
{
    LocalCheckResult r;
    r.vertex = {0, 1, 2};
    const int deg = static_cast<int>(v.sites.size());
    if(deg != 3 || v.edges.size() != 3)
        throw DegreeMismatch(deg != 3 ? deg : static_cast<int>(v.edges.size()));
    auto d2 = [&](const Point& s) {
        const Rational dx = v.position.x - s.x, dy = v.position.y - s.y;
        return Rational(dx * dx + dy * dy);
    };
    const Rational r0 = d2(v.sites[0]);
    const bool centre = d2(v.sites[1]) == r0 && d2(v.sites[2]) == r0;
    r.witness.push_back(std::string("equidistant ") + (centre ? "yes" : "no"));
    const Sign o = orient2d(v.sites[0], v.sites[1], v.sites[2]);
    r.witness.push_back(std::string("orient ") + to_string(o));
    if(!centre || o != Sign::Positive)
        return r;
    int out = 0, in = 0;
    for(int k = 0; k < 3; ++k)
    {
        const Point& s = v.sites[k];
        const Point& t = v.sites[(k + 1) % 3];
        const Point& u = v.sites[(k + 2) % 3];
        const auto& e = v.edges[k];
        const Rational along = e[0] * (t.x - s.x) + e[1] * (t.y - s.y);
        const Rational toward = e[0] * (u.x - s.x) + e[1] * (u.y - s.y);
        const int st = along.sign() != 0 ? 0 : -toward.sign();
        r.witness.push_back("edge " + std::to_string(k) + (along.sign() != 0 ? " off bisector" : st > 0 ? " outward" : st < 0 ? " inward" : " null"));
        out += st > 0;
        in += st < 0;
    }
    if(out == 3)
        r.status = LocalStatus::NearestLocallyVoronoi;
    else if(in == 3)
        r.status = LocalStatus::FarthestLocallyVoronoi;
    return r;
}

/// Internal vertex of a graph (a dual triangle of three point nodes). Its
/// position is the circumcentre; each incident edge leads to the vertex
/// across the dual edge, which lies on the correct side of the bisector iff
/// the opposite node is not inside the circle (tangent circle for leaves).
inline LocalCheckResult check_locally_voronoi(const VlGraph& g, const Tri& t)
{
    LocalCheckResult r;
    r.vertex = t;
    for(const int x : t)
        if(x == VlGraph::S)
            throw std::logic_error("check_locally_voronoi: leaf vertex");
    const Sign o = orient2d(g.point_of(t[0]), g.point_of(t[1]), g.point_of(t[2]));
    const Sign oriented = g.side() > 0 ? o : -o;
    r.witness.push_back(std::string("orient ") + to_string(oriented));
    if(oriented != Sign::Positive)
        return r;
    int out = 0, in = 0;
    for(int i = 0; i < 3; ++i)
    {
        const int a = t[i], b = t[(i + 1) % 3], c = t[(i + 2) % 3];
        const int w = g.apex(b, a);
        if(w == VlGraph::None && a == g.p1() && b == g.pn())
        {
            r.witness.push_back("edge " + std::to_string(a) + "-" + std::to_string(b) + " to Gamma");
            ++out;
            continue;
        }
        if(w == VlGraph::None)
        {
            r.witness.push_back("edge " + std::to_string(a) + "-" + std::to_string(b) + " open");
            throw DegreeMismatch(2);
        }
        Sign s;
        if(w == VlGraph::S)
            s = g.conflict_sign(Tri{b, a, VlGraph::S}, c);
        else
            s = g.conflict_sign(t, w);
        r.witness.push_back("edge " + std::to_string(a) + "-" + std::to_string(b) + " across " +
                            (w == VlGraph::S ? std::string("S") : std::to_string(w)) + ": " + to_string(s));
        out += s != Sign::Positive;
        in += s == Sign::Positive;
    }
    if(out == 3)
        r.status = LocalStatus::NearestLocallyVoronoi;
    else if(in == 3)
        r.status = LocalStatus::FarthestLocallyVoronoi;
    return r;
}

struct VlValidation
{
    ValidationReport report;
    std::vector<LocalCheckResult> violations;
    int internal_vertices = 0;
    int leaves = 0;
    int components = 0;
};

/// Nodes around `q` in counterclockwise order, from the left neighbour to
/// the right neighbour. The endpoint nodes start (p1) or end (pn) with the
/// other endpoint, across the segment. Empty when the star is broken.
inline std::vector<int> face_fan(const VlGraph& g, int q)
{
    std::vector<int> out;
    int x = q == g.p1() ? g.pn() : g.apex(q, VlGraph::S);
    while(x != VlGraph::S)
    {
        if(x == VlGraph::None || out.size() > g.size() + 1)
            return {};
        out.push_back(x);
        if(q == g.pn() && x == g.p1())
            break;
        x = g.apex(q, x);
    }
    return out;
}

/// Locally Voronoi internal vertices, acyclic graph, one face per arc
/// and consistent leaves along the cycle.
inline VlValidation validate_vlgraph(const VlGraph& g)
{
    VlValidation v;
    ValidationReport& rep = v.report;
    const std::vector<Tri> all = g.all_triangles();
    if(all.empty())
        return v;
    for(const Tri& t : all)
        for(int i = 0; i < 3; ++i)
            if(g.apex(t[(i + 1) % 3], t[(i + 2) % 3]) != t[i])
                rep.fail("triangle record of " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " +
                         std::to_string(t[2]) + " is inconsistent");

    std::vector<int> cyc;
    try
    {
        cyc = g.cycle_nodes();
    }
    catch(const std::logic_error& e)
    {
        rep.fail(e.what());
        return v;
    }
    std::vector<char> on(g.node_count(), 0);
    for(const int x : cyc)
    {
        if(on[x])
            rep.fail("node " + std::to_string(x) + " appears twice on the cycle");
        on[x] = 1;
    }

    // vertices and edges of the graph: triangles, and shared node pairs
    std::unordered_map<std::uint64_t, int> id;
    for(std::size_t k = 0; k < all.size(); ++k)
        id[VlGraph::canonical_key(all[k])] = static_cast<int>(k);
    std::vector<int> parent(all.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for(std::size_t k = 0; k < all.size(); ++k)
    {
        const Tri& t = all[k];
        for(int i = 0; i < 3; ++i)
        {
            const int a = t[i], b = t[(i + 1) % 3];
            if(a == VlGraph::S || b == VlGraph::S || a > b)
                continue;
            const int c = g.apex(b, a);
            if(c == VlGraph::None)
                continue;
            const int other = id.at(VlGraph::canonical_key(Tri{b, a, c}));
            const int ra = find(static_cast<int>(k)), rb = find(other);
            if(ra == rb)
                rep.fail("cycle in the graph through edge " + std::to_string(a) + "-" + std::to_string(b));
            else
                parent[ra] = rb;
        }
    }
    for(std::size_t k = 0; k < all.size(); ++k)
        v.components += find(static_cast<int>(k)) == static_cast<int>(k);

    for(const Tri& t : all)
    {
        if(t[0] == VlGraph::S)
        {
            ++v.leaves;
            continue;
        }
        for(const int x : t)
            if(!on[x])
                rep.fail("node " + std::to_string(x) + " has a face but no arc");
        ++v.internal_vertices;
        try
        {
            LocalCheckResult r = check_locally_voronoi(g, t);
            if(r.status != LocalStatus::NearestLocallyVoronoi)
            {
                rep.fail("vertex " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) +
                         ": " + to_string(r.status));
                v.violations.push_back(std::move(r));
            }
        }
        catch(const DegreeMismatch& e)
        {
            rep.fail(e.what());
        }
    }

    // one face per arc: the star of each node is a single fan through S
    std::vector<int> incident(g.node_count(), 0);
    for(const Tri& t : all)
        for(const int x : t)
            if(x != VlGraph::S)
                ++incident[x];
    for(std::size_t i = 0; i < cyc.size(); ++i)
    {
        const int q = cyc[i];
        const std::vector<int> fan = face_fan(g, q);
        const int expect = static_cast<int>(fan.size()) + (q == g.p1() || q == g.pn() ? 0 : 1);
        if(fan.empty() || expect != incident[q])
        {
            rep.fail("face of node " + std::to_string(q) + " is not a single fan");
            continue;
        }
        if(i > 0 && fan.front() != cyc[i - 1])
            rep.fail("face of node " + std::to_string(q) + " starts at the wrong leaf");
        if(i + 1 < cyc.size() && fan.back() != cyc[i + 1])
            rep.fail("face of node " + std::to_string(q) + " ends at the wrong leaf");
    }

    // consecutive leaves: breakpoints strictly increase along the cycle
    std::optional<QuadRoot> prev;
    for(std::size_t i = 0; i + 1 < cyc.size(); ++i)
    {
        QuadRoot t;
        try
        {
            t = g.leaf_t(cyc[i], cyc[i + 1]);
        }
        catch(const std::logic_error& e)
        {
            rep.fail(e.what());
            prev.reset();
            continue;
        }
        if(prev && compare(*prev, t) >= 0)
            rep.fail("arc of node " + std::to_string(cyc[i]) + " is empty or reversed");
        prev = t;
    }
    return v;
}

inline void write_report(std::ostream& os, const VlValidation& v)
{
    os << "vlgraph " << (v.report.pass ? "PASS" : "FAIL") << " internal " << v.internal_vertices << " leaves "
       << v.leaves << " components " << v.components << '\n';
    for(const std::string& f : v.report.failures)
        os << "  " << f << '\n';
    for(const LocalCheckResult& r : v.violations)
    {
        os << "  vertex " << r.vertex[0] << ' ' << r.vertex[1] << ' ' << r.vertex[2] << ' ' << to_string(r.status)
           << '\n';
        for(const std::string& w : r.witness)
            os << "    " << w << '\n';
    }
}

} // namespace vlcdt
