#pragma once

#include "cycle_core.hpp"
#include "vlg.hpp"

#include <cstdlib>
#include <map>

namespace vlcdt
{

/// Vertex sequence p1..pn left after removing the triangles crossed by the
/// segment p1 pn. Interior vertices lie strictly on one side; points may
/// repeat.
struct Cavity
{
    std::vector<Point> vertices;
    SegmentSite segment;
    /// tie-break rank per vertex for cocircular sites; empty means the
    /// order of first occurrence
    std::vector<int> ranks;
};

struct NotACavity : std::runtime_error
{
    explicit NotACavity(const std::string& m)
        : std::runtime_error("NotACavity: " + m)
    {}
};

struct CavityOptions
{
    /// keep an auxiliary arc that coincides with a later arc of the cycle
    bool skip_overlap_deletion = false;
    /// validate the graph and the cycle after every step
    bool check = false;
};

inline bool check_env()
{
    const char* v = std::getenv("VLG_CHECK");
    return v && std::string(v) == "1";
}

/// Cavity with its distinct sites resolved
struct CavitySites
{
    std::vector<Point> sites;
    std::vector<int> occurrence_site;
    std::vector<int> rank;
    int side = 1;
};

inline CavitySites resolve_sites(const Cavity& c)
{
    const std::size_t n = c.vertices.size();
    if(n < 2)
        throw NotACavity("fewer than two vertices");
    if(c.vertices.front() != c.segment.a || c.vertices.back() != c.segment.b)
        throw NotACavity("first and last vertex must be the segment endpoints");
    if(c.segment.a == c.segment.b)
        throw NotACavity("degenerate segment");
    if(!c.ranks.empty() && c.ranks.size() != n)
        throw NotACavity("one rank per vertex");
    CavitySites out;
    std::map<std::pair<Rational, Rational>, int> id;
    for(const Point& p : c.vertices)
    {
        const auto [it, fresh] = id.emplace(std::make_pair(p.x, p.y), static_cast<int>(out.sites.size()));
        if(fresh)
        {
            out.sites.push_back(p);
            out.rank.push_back(c.ranks.empty() ? it->second : c.ranks[out.occurrence_site.size()]);
        }
        out.occurrence_site.push_back(it->second);
    }
    int side = 0;
    for(std::size_t i = 1; i + 1 < n; ++i)
    {
        const int o = static_cast<int>(orient2d(c.segment.a, c.segment.b, c.vertices[i]));
        if(o == 0)
            throw NotACavity("vertex " + std::to_string(i) + " on the segment line");
        if(side == 0)
            side = o;
        else if(o != side)
            throw NotACavity("vertices on both sides of the segment");
    }
    out.side = side == 0 ? 1 : side;
    return out;
}

/// The s-cycle of a cavity: one arc per vertex in cavity order plus the
/// Gamma arc. Each interior vertex must have a tangent circle avoiding both
/// neighbours, i.e. its arc between the two breakpoints is non-empty.
inline SiteCycle derive_cycle(const Cavity& c)
{
    const CavitySites cs = resolve_sites(c);
    const int n = static_cast<int>(c.vertices.size());
    const SegmentFrame frame(c.segment);
    std::vector<FramePoint> par;
    for(const Point& p : c.vertices)
    {
        FramePoint f = frame.map(p);
        if(cs.side < 0)
            f.Y = -f.Y;
        par.push_back(std::move(f));
    }
    auto bp = [&](int i, int j) {
        if(i == 0)
            return QuadRoot::rational(Rational(0));
        if(j == n - 1)
            return QuadRoot::rational(frame.length2());
        QuadRoot t;
        if(!breakpoint(par[i], par[j], t))
            throw NotACavity("no tangent circle through vertices " + std::to_string(i) + " and " +
                             std::to_string(j));
        return t;
    };
    for(int i = 1; i + 1 < n; ++i)
    {
        if(c.vertices[i] == c.vertices[i - 1] || c.vertices[i] == c.vertices[i + 1])
            throw NotACavity("consecutive repeated vertex " + std::to_string(i));
        if(compare(bp(i - 1, i), bp(i, i + 1)) >= 0)
            throw NotACavity("vertex " + std::to_string(i) + " has no empty tangent circle");
    }
    SiteCycle out;
    out.p_site = c.segment;
    for(int i = 0; i < n; ++i)
        out.arcs.push_back(Arc{cs.occurrence_site[i], i, ArcKind::Bisector, false});
    out.arcs.push_back(Arc{-1, n, ArcKind::Gamma, false});
    out.gamma_count = 1;
    return out;
}

struct RetriangulationResult
{
    /// triangles as cavity vertex indices, counterclockwise in the plane
    std::vector<Tri> triangles;
    std::vector<StepStats> steps;
    std::uint64_t total_ops = 0;
    int splits = 0;
    int deletions = 0;
    int charges = 0;
};

/// Hooks into a run, for instrumentation and tests
struct CavityHooks
{
    std::function<void(const CycleBuilder&, const StepStats&, const std::vector<int>& inserted)> on_step;
    std::function<void(const CycleBuilder&, int aux, bool kept)> on_split_state;
};

/// Phase-1 neighbours: deleting the order back to front from the vertex list
/// (restricted to `active`, which must contain 0 and n-1) records each
/// vertex's neighbours at the time of its insertion.
inline std::vector<std::array<int, 2>> record_neighbours(
    int n,
    const std::vector<int>& active,
    const std::vector<int>& order)
{
    std::vector<int> lft(n, -1), rgt(n, -1);
    for(std::size_t i = 0; i < active.size(); ++i)
    {
        if(i > 0)
            lft[active[i]] = active[i - 1];
        if(i + 1 < active.size())
            rgt[active[i]] = active[i + 1];
    }
    std::vector<std::array<int, 2>> nb(n, {-1, -1});
    for(auto it = order.rbegin(); it != order.rend(); ++it)
    {
        const int v = *it;
        nb[v] = {lft[v], rgt[v]};
        rgt[lft[v]] = rgt[v];
        lft[rgt[v]] = lft[v];
    }
    return nb;
}

/// Runs phase 2 for the given insertion order of interior occurrences of
/// `active` (sorted occurrence indices including both endpoints).
inline CycleBuilder run_cavity_order(
    const Cavity& c,
    const CavitySites& cs,
    const std::vector<int>& active,
    const std::vector<int>& order,
    Rng& rng,
    const CavityOptions& opt,
    std::vector<StepStats>& steps,
    const CavityHooks& hooks = {})
{
    const int n = static_cast<int>(c.vertices.size());
    CycleBuilder b(c.segment, cs.sites, cs.occurrence_site, cs.side);
    b.graph().set_ranks(cs.rank);
    if(order.empty())
        return b;
    const std::vector<std::array<int, 2>> nb = record_neighbours(n, active, order);
    std::vector<int> rank(n, -1);
    for(std::size_t k = 0; k < order.size(); ++k)
        rank[order[k]] = static_cast<int>(k);
    if(hooks.on_split_state)
        b.on_split_state = hooks.on_split_state;
    if(opt.skip_overlap_deletion)
    {
        b.overlap_probe = [&](const CycleBuilder& cb, int v, int w, int u, bool aux_right) {
            // the auxiliary arc lies between v and u (or w and v); it is an
            // arc of the final cycle if the first vertex inserted between
            // them is an occurrence of the same site
            const int lo = aux_right ? v : w;
            const int hi = aux_right ? u : v;
            const int site = cs.occurrence_site[aux_right ? w : u];
            int best = -1;
            for(int o = lo + 1; o < hi; ++o)
                if(rank[o] >= 0 && !cb.inserted(o) && (best < 0 || rank[o] < rank[best]))
                    best = o;
            return best >= 0 && cs.occurrence_site[best] == site ? best : -1;
        };
    }
    std::vector<int> inserted{0, n - 1};
    b.start(order[0]);
    inserted.push_back(order[0]);
    StepStats first;
    first.step_index = 3;
    first.merge_curve_length = 3;
    steps.push_back(first);
    if(hooks.on_step)
        hooks.on_step(b, first, inserted);
    for(std::size_t k = 1; k < order.size(); ++k)
    {
        const int v = order[k];
        StepStats st = b.insert(v, nb[v][0], nb[v][1], rng);
        st.step_index = static_cast<int>(k) + 3;
        inserted.push_back(v);
        steps.push_back(st);
        if(opt.check)
        {
            std::vector<int> expect = inserted;
            std::sort(expect.begin(), expect.end());
            if(b.cycle_occurrences() != expect)
                throw std::logic_error("cycle after step " + std::to_string(st.step_index) +
                                       " differs from the derived cycle");
            const VlValidation val = validate_vlgraph(b.graph());
            if(!val.report.pass)
                throw std::logic_error("graph after step " + std::to_string(st.step_index) +
                                       " is not Voronoi-like: " + val.report.failures.front());
        }
        if(hooks.on_step)
            hooks.on_step(b, st, inserted);
    }
    b.overlap_probe = nullptr;
    b.on_split_state = nullptr;
    return b;
}

/// Triangles of a finished run as cavity indices, counterclockwise
inline std::vector<Tri> cavity_triangles(const CycleBuilder& b)
{
    std::vector<Tri> out;
    for(const Tri& t : b.graph().triangles())
    {
        Tri k{b.key_of(t[0]), b.key_of(t[1]), b.key_of(t[2])};
        if(b.graph().side() < 0)
            std::swap(k[1], k[2]);
        const auto m = std::min_element(k.begin(), k.end()) - k.begin();
        std::rotate(k.begin(), k.begin() + m, k.end());
        out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<int> random_order(int n, Rng& rng)
{
    std::vector<int> order;
    for(int i = 1; i + 1 < n; ++i)
        order.push_back(i);
    rng.shuffle(order);
    return order;
}

/// Constrained Delaunay triangulation of a cavity by randomized incremental
/// construction of the Voronoi-like graph of its s-cycle.
inline RetriangulationResult retriangulate(
    const Cavity& c,
    std::uint64_t seed,
    const CavityOptions& opt = {},
    const CavityHooks& hooks = {})
{
    derive_cycle(c);
    const CavitySites cs = resolve_sites(c);
    const int n = static_cast<int>(c.vertices.size());
    RetriangulationResult res;
    if(n < 3)
        return res;
    Rng rng(seed);
    const std::vector<int> order = random_order(n, rng);
    std::vector<int> active(n);
    for(int i = 0; i < n; ++i)
        active[i] = i;
    CavityOptions o = opt;
    o.check = o.check || check_env();
    const CycleBuilder b = run_cavity_order(c, cs, active, order, rng, o, res.steps, hooks);
    res.triangles = cavity_triangles(b);
    for(const StepStats& st : res.steps)
    {
        res.total_ops += st.ops;
        if(st.outcome == OutcomeKind::Split)
            ++res.splits;
        if(st.outcome == OutcomeKind::Split && !st.inside_split && !st.overlap_kept)
            ++res.deletions;
        res.charges += st.charges_emitted;
    }
    res.total_ops += 3;
    return res;
}

/// Delaunay retriangulation of the star of a deleted point site q. `link` is
/// the counterclockwise cycle of q's neighbours in a Delaunay triangulation
/// of `pts` and must be in strictly convex position. The link vertices are
/// removed in random order and put back; q labels the ghost triangles
/// outside the current link polygon. Returns counterclockwise triangles over `pts` indices.
inline std::vector<Tri> chew_delete(const std::vector<Point>& pts, int q, const std::vector<int>& link, Rng& rng)
{
    const int m = static_cast<int>(link.size());
    if(m < 3)
        throw PreconditionError("chew_delete: link has fewer than 3 vertices");
    for(int i = 0; i < m; ++i)
        if(orient2d(pts[link[i]], pts[link[(i + 1) % m]], pts[link[(i + 2) % m]]) != Sign::Positive)
            throw PreconditionError("chew_delete: link is not in convex position");
    std::unordered_map<std::uint64_t, int> apex;
    auto key = [](int a, int b) { return VlGraph::key(a, b); };
    auto add = [&](int a, int b, int c) {
        apex[key(a, b)] = c;
        apex[key(b, c)] = a;
        apex[key(c, a)] = b;
    };
    auto rem = [&](const Tri& t) {
        apex.erase(key(t[0], t[1]));
        apex.erase(key(t[1], t[2]));
        apex.erase(key(t[2], t[0]));
    };
    auto get = [&](int a, int b) {
        const auto it = apex.find(key(a, b));
        return it == apex.end() ? VlGraph::None : it->second;
    };
    // triangles on q are hull ghosts: x conflicts when it lies outside their edge
    auto conflict = [&](const Tri& t, int x) {
        for(int e = 0; e < 3; ++e)
            if(t[(e + 2) % 3] == q)
                return orient2d(pts[t[e]], pts[t[(e + 1) % 3]], pts[x]) == Sign::Positive;
        return incircle_ranked(pts[t[0]], pts[t[1]], pts[t[2]], pts[x], {t[0], t[1], t[2], x}) == Sign::Positive;
    };
    std::vector<int> perm(m);
    for(int i = 0; i < m; ++i)
        perm[i] = i;
    rng.shuffle(perm);
    std::vector<int> lft(m), rgt(m);
    for(int i = 0; i < m; ++i)
    {
        lft[i] = (i + m - 1) % m;
        rgt[i] = (i + 1) % m;
    }
    std::vector<std::array<int, 2>> nb(m);
    for(int k = m - 1; k >= 3; --k)
    {
        const int i = perm[k];
        nb[i] = {lft[i], rgt[i]};
        rgt[lft[i]] = rgt[i];
        lft[rgt[i]] = lft[i];
    }
    {
        const int i = perm[0];
        const int a = link[i], b = link[rgt[i]], c = link[rgt[rgt[i]]];
        add(a, b, c);
        add(b, a, q);
        add(c, b, q);
        add(a, c, q);
    }
    for(int k = 3; k < m; ++k)
    {
        const int i = perm[k];
        const int x = link[i];
        const int L = link[nb[i][0]], R = link[nb[i][1]];
        const Tri leaf{R, L, q};
        if(get(R, L) != q)
            throw std::logic_error("chew_delete: lost link edge");
        if(!conflict(leaf, x))
            throw NotAVoronoiRegion("link vertex " + std::to_string(x) + " does not reach the region");
        std::vector<Tri> region;
        std::vector<Tri> stack{leaf};
        std::unordered_set<std::uint64_t> seen{VlGraph::canonical_key(leaf)};
        while(!stack.empty())
        {
            const Tri t = stack.back();
            stack.pop_back();
            region.push_back(t);
            for(int e = 0; e < 3; ++e)
            {
                const int a = t[e], b = t[(e + 1) % 3];
                if(a == q || b == q)
                    continue;
                const int c = get(b, a);
                if(c == VlGraph::None)
                    continue;
                const Tri nt{b, a, c};
                if(!seen.insert(VlGraph::canonical_key(nt)).second)
                    continue;
                if(conflict(nt, x))
                    stack.push_back(nt);
            }
        }
        std::unordered_set<std::uint64_t> in;
        for(const Tri& t : region)
            in.insert(VlGraph::canonical_key(t));
        std::vector<std::array<int, 2>> bnd;
        for(const Tri& t : region)
            for(int e = 0; e < 3; ++e)
            {
                const int a = t[e], b = t[(e + 1) % 3];
                const int c = get(b, a);
                if(c == VlGraph::None || !in.count(VlGraph::canonical_key({b, a, c})))
                    bnd.push_back({a, b});
            }
        for(const Tri& t : region)
            rem(t);
        for(const auto& e : bnd)
            add(e[0], e[1], x);
    }
    std::vector<Tri> out;
    for(const auto& [k, c] : apex)
    {
        const int a = static_cast<int>(k >> 32) - 2;
        const int b = static_cast<int>(k & 0xffffffffu) - 2;
        if(a == q || b == q || c == q)
            continue;
        if(a < b && a < c)
            out.push_back({a, b, c});
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Charges of step i (backwards analysis): for every v in {v3..vi} taken as
/// the last insertion into the cavity subsequence P_i, the triangles of
/// CDT(P_i) created by deleting the auxiliary arc of v's insertion are
/// charged once. Returns the charge count per charged triangle (keyed by
/// cavity index triples).
inline std::map<Tri, int> charge_audit(const Cavity& c, const std::vector<int>& prefix, std::uint64_t seed)
{
    const CavitySites cs = resolve_sites(c);
    const int n = static_cast<int>(c.vertices.size());
    std::vector<int> active{0, n - 1};
    active.insert(active.end(), prefix.begin(), prefix.end());
    std::sort(active.begin(), active.end());
    std::map<Tri, int> charges;
    for(std::size_t k = 0; k < prefix.size(); ++k)
    {
        std::vector<int> order;
        for(std::size_t j = 0; j < prefix.size(); ++j)
            if(j != k)
                order.push_back(prefix[j]);
        order.push_back(prefix[k]);
        Rng rng(seed + k);
        std::vector<StepStats> steps;
        std::vector<Tri> hole;
        CavityHooks hooks;
        hooks.on_step = [&](const CycleBuilder& b, const StepStats& st, const std::vector<int>& ins) {
            if(ins.size() != active.size() || st.charges_emitted == 0)
                return;
            for(const Tri& t : b.graph().last_hole())
            {
                Tri key{b.key_of(t[0]), b.key_of(t[1]), b.key_of(t[2])};
                std::sort(key.begin(), key.end());
                hole.push_back(key);
            }
        };
        run_cavity_order(c, cs, active, order, rng, CavityOptions{}, steps, hooks);
        for(const Tri& t : hole)
            ++charges[t];
    }
    return charges;
}

} // namespace vlcdt
