#pragma once

#include "predicates.hpp"
#include "random.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace vlcdt
{

enum class ArcKind
{
    Bisector,
    Gamma
};

/// Arc of a site-cycle. Gamma arcs carry no site.
struct Arc
{
    int site = -1;
    int occurrence = -1;
    ArcKind kind = ArcKind::Bisector;
    bool auxiliary = false;

    friend bool operator==(const Arc& a, const Arc& b)
    {
        return a.site == b.site && a.occurrence == b.occurrence && a.kind == b.kind &&
               a.auxiliary == b.auxiliary;
    }
};

struct SiteCycle
{
    std::vector<Arc> arcs;
    SegmentSite p_site;
    int gamma_count = 0;

    bool bounded() const
    {
        return gamma_count == 0;
    }

    /// distinct sites in order of first appearance
    std::vector<int> sites() const
    {
        std::vector<int> out;
        for(const Arc& a : arcs)
            if(a.kind == ArcKind::Bisector &&
               std::find(out.begin(), out.end(), a.site) == out.end())
                out.push_back(a.site);
        return out;
    }
};

enum class OutcomeKind
{
    Simple,
    Absorbing,
    Split,
    Outside
};

inline const char* to_string(OutcomeKind k)
{
    switch(k)
    {
    case OutcomeKind::Simple:
        return "Simple";
    case OutcomeKind::Absorbing:
        return "Absorbing";
    case OutcomeKind::Split:
        return "Split";
    default:
        return "Outside";
    }
}

struct InsertOutcome
{
    OutcomeKind kind = OutcomeKind::Simple;
    /// arcs deleted by an absorbing insertion
    int absorbed = 0;
    /// node whose arc was split, and the node created for the auxiliary part
    int split_node = -1;
    int aux_node = -1;
    /// triangles created (edges of the merge curve)
    int merge_length = 0;
    /// fan steps of the interleaved split search
    int split_walk = 0;
};

struct NeighborNotOnCycle : std::runtime_error
{
    explicit NeighborNotOnCycle(const std::string& m)
        : std::runtime_error("NeighborNotOnCycle: " + m)
    {}
};

struct NotAVoronoiRegion : std::runtime_error
{
    explicit NotAVoronoiRegion(const std::string& m)
        : std::runtime_error("NotAVoronoiRegion: " + m)
    {}
};

struct InvalidCycle : std::runtime_error
{
    explicit InvalidCycle(const std::string& m)
        : std::runtime_error("InvalidCycle: " + m)
    {}
};

struct OpCounters
{
    std::uint64_t created = 0;
    std::uint64_t deleted = 0;
    std::uint64_t conflict_tests = 0;
    std::uint64_t fan_steps = 0;

    std::uint64_t total() const
    {
        return created + deleted + conflict_tests + fan_steps;
    }
};

using Tri = std::array<int, 3>;

/// Voronoi-like graph of a cycle of point sites around a segment, held as its
/// dual: a triangle mesh over arc nodes plus the segment node S. Triangles
/// are stored as directed edge -> apex, all in the same combinatorial
/// orientation. A triangle (x, y, S) is the leaf of the graph where the arcs
/// of x and y meet; the arc order along the cycle is left to right from the
/// node of the segment start to the node of the segment end.
class VlGraph
{
public:
    static constexpr int S = -1;
    static constexpr int None = -2;

    VlGraph() = default;

    /// `side` is +1 when the sites lie left of a->b, -1 otherwise.
    VlGraph(const SegmentSite& seg, std::vector<Point> sites, int site_a, int site_b, int side)
        : m_seg(seg)
        , m_frame(seg)
        , m_sites(std::move(sites))
        , m_side(side)
    {
        m_par.reserve(m_sites.size());
        for(const Point& p : m_sites)
        {
            FramePoint f = m_frame.map(p);
            if(side < 0)
                f.Y = -f.Y;
            m_par.push_back(std::move(f));
        }
        m_rank.resize(m_sites.size());
        std::iota(m_rank.begin(), m_rank.end(), 0);
        m_p1 = add_node(site_a);
        m_pn = add_node(site_b);
    }

    /// Tie-break ranks of the sites (default: site index)
    void set_ranks(std::vector<int> rank)
    {
        if(rank.size() != m_sites.size())
            throw std::logic_error("set_ranks: one rank per site");
        m_rank = std::move(rank);
    }

    int add_node(int site, bool aux = false)
    {
        m_node_site.push_back(site);
        m_aux.push_back(aux ? 1 : 0);
        m_left.push_back(None);
        m_right.push_back(None);
        return static_cast<int>(m_node_site.size()) - 1;
    }

    /// C3: the two perpendicular arcs of the endpoints and the arc of v
    void initialize(int v)
    {
        add(m_p1, m_pn, v);
        add(m_p1, v, S);
        add(v, m_pn, S);
    }

    int p1() const
    {
        return m_p1;
    }
    int pn() const
    {
        return m_pn;
    }
    int side() const
    {
        return m_side;
    }
    const SegmentSite& segment() const
    {
        return m_seg;
    }
    const SegmentFrame& frame() const
    {
        return m_frame;
    }
    int node_count() const
    {
        return static_cast<int>(m_node_site.size());
    }
    int site_of(int node) const
    {
        return m_node_site[node];
    }
    const Point& point_of(int node) const
    {
        return m_sites[m_node_site[node]];
    }
    const FramePoint& parabola_of(int node) const
    {
        return m_par[m_node_site[node]];
    }
    int rank_of(int node) const
    {
        return m_rank[m_node_site[node]];
    }

    const std::vector<Point>& sites() const
    {
        return m_sites;
    }
    bool is_aux(int node) const
    {
        return m_aux[node] != 0;
    }
    void set_aux(int node, bool aux)
    {
        m_aux[node] = aux ? 1 : 0;
    }
    int right_of(int node) const
    {
        return m_right[node];
    }
    int left_of(int node) const
    {
        return m_left[node];
    }
    bool on_cycle(int node) const
    {
        return node == m_p1 ? m_right[node] != None : m_left[node] != None;
    }
    const OpCounters& counters() const
    {
        return m_ops;
    }
    OpCounters& counters()
    {
        return m_ops;
    }

    int apex(int a, int b) const
    {
        const auto it = m_apex.find(key(a, b));
        return it == m_apex.end() ? None : it->second;
    }

    bool has_triangle(int a, int b, int c) const
    {
        return apex(a, b) == c;
    }

    /// node sequence of the cycle from p1 to pn
    std::vector<int> cycle_nodes() const
    {
        std::vector<int> out{m_p1};
        int x = m_p1;
        while(x != m_pn)
        {
            x = m_right[x];
            if(x == None || out.size() > m_node_site.size())
                throw std::logic_error("cycle is broken");
            out.push_back(x);
        }
        return out;
    }

    /// triangles not involving S, each once, rotated to start at the
    /// smallest node
    std::vector<Tri> triangles() const
    {
        std::vector<Tri> out;
        for(const auto& [k, c] : m_apex)
        {
            const int a = static_cast<int>(k >> 32) - 2;
            const int b = static_cast<int>(k & 0xffffffffu) - 2;
            if(a == S || b == S || c == S)
                continue;
            if(a < b && a < c)
                out.push_back({a, b, c});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// all triangles including leaves, each once, rotated to start at the
    /// smallest entry (S first for leaves)
    std::vector<Tri> all_triangles() const
    {
        std::vector<Tri> out;
        for(const auto& [k, c] : m_apex)
        {
            const int a = static_cast<int>(k >> 32) - 2;
            const int b = static_cast<int>(k & 0xffffffffu) - 2;
            if(a < b && a < c)
                out.push_back({a, b, c});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// leaves (x, y, S) in cycle order
    std::vector<std::array<int, 2>> leaves() const
    {
        std::vector<std::array<int, 2>> out;
        const std::vector<int> cyc = cycle_nodes();
        for(std::size_t i = 0; i + 1 < cyc.size(); ++i)
            out.push_back({cyc[i], cyc[i + 1]});
        return out;
    }

    std::size_t size() const
    {
        return m_apex.size() / 3;
    }

    /// Tangency abscissa of the leaf where the arcs of x and y meet
    QuadRoot leaf_t(int x, int y) const
    {
        if(x == m_p1)
            return QuadRoot::rational(Rational(0));
        if(y == m_pn)
            return QuadRoot::rational(m_frame.length2());
        QuadRoot t;
        if(!breakpoint(parabola_of(x), parabola_of(y), t))
            throw std::logic_error("arcs of nodes " + std::to_string(x) + " and " +
                                   std::to_string(y) + " do not meet");
        return t;
    }

    /// Sign of "the site of v lies inside the empty circle of triangle t",
    /// with the tangent circle used for leaves.
    Sign conflict_sign(const Tri& t, int v) const
    {
        ++m_ops.conflict_tests;
        int x = t[0], y = t[1];
        if(t[0] == S)
        {
            x = t[1];
            y = t[2];
        }
        else if(t[1] == S)
        {
            x = t[2];
            y = t[0];
        }
        else if(t[2] != S)
        {
            const Sign s = incircle_ranked(point_of(t[0]), point_of(t[1]), point_of(t[2]), point_of(v),
                                           {rank_of(t[0]), rank_of(t[1]), rank_of(t[2]), rank_of(v)});
            return m_side > 0 ? s : -s;
        }
        if(x == m_p1 && y == m_pn)
            return Sign::Negative;
        const QuadRoot tt = leaf_t(x, y);
        const int ref = x == m_p1 ? y : x;
        return inside_tangent_circle(parabola_of(ref), tt, parabola_of(v));
    }

    bool conflict(const Tri& t, int v) const
    {
        return conflict_sign(t, v) == Sign::Positive;
    }

    /// Arc insertion of node v between the recorded neighbours W and U.
    /// On Split the auxiliary node is returned in the outcome and left in
    /// place; the caller deletes it.
    InsertOutcome insert(int v, int W, int U)
    {
        if(!on_cycle(W) || !on_cycle(U))
            throw NeighborNotOnCycle("node " + std::to_string(on_cycle(W) ? U : W));
        if(apex(W, U) != S)
            throw NeighborNotOnCycle("nodes " + std::to_string(W) + " and " + std::to_string(U) +
                                     " are not consecutive");
        InsertOutcome out;
        const Tri leaf{W, U, S};
        if(conflict(leaf, v))
        {
            const std::vector<Tri> region = flood(leaf, v);
            int nleaves = 0;
            for(const Tri& t : region)
                if(t[0] == S || t[1] == S || t[2] == S)
                    ++nleaves;
            const std::vector<std::array<int, 2>> bnd = carve(region);
            for(const auto& e : bnd)
                add(e[0], e[1], v);
            out.merge_length = static_cast<int>(bnd.size());
            out.kind = nleaves == 1 ? OutcomeKind::Simple : OutcomeKind::Absorbing;
            out.absorbed = nleaves - 1;
            return out;
        }

        // walk W's fan clockwise and U's fan counterclockwise, interleaved
        const bool walk_w = W != m_p1;
        const bool walk_u = U != m_pn;
        std::vector<Tri> fw, fu;
        int xw = U, xu = W;
        bool wdone = !walk_w, udone = !walk_u;
        int found = 0;
        while(!found && !(wdone && udone))
        {
            if(!wdone)
            {
                const int y = apex(xw, W);
                ++m_ops.fan_steps;
                ++out.split_walk;
                if(y == S)
                    wdone = true;
                else
                {
                    fw.push_back({W, y, xw});
                    xw = y;
                    if(conflict(fw.back(), v))
                        found = 1;
                }
            }
            if(!found && !udone)
            {
                const int y = apex(U, xu);
                ++m_ops.fan_steps;
                ++out.split_walk;
                if(y == S)
                    udone = true;
                else
                {
                    fu.push_back({U, xu, y});
                    xu = y;
                    if(conflict(fu.back(), v))
                        found = 2;
                }
            }
        }
        if(!found)
        {
            out.kind = OutcomeKind::Outside;
            return out;
        }
        const int z = found == 1 ? W : U;
        std::vector<Tri>& fan = found == 1 ? fw : fu;
        const Tri first = fan.back();
        fan.pop_back();
        const std::vector<Tri> region = flood(first, v);
        for(const Tri& t : region)
            if(t[0] == S || t[1] == S || t[2] == S)
                throw std::logic_error("split region reaches the cycle");
        const std::vector<std::array<int, 2>> bnd = carve(region);

        const int zn = add_node(site_of(z), true);
        fan.push_back(leaf);
        for(const Tri& t : fan)
        {
            remove(t[0], t[1], t[2]);
            add(t[0] == z ? zn : t[0], t[1] == z ? zn : t[1], t[2] == z ? zn : t[2]);
        }
        for(auto e : bnd)
        {
            relink(e, z, zn);
            add(e[0], e[1], v);
        }
        if(found == 1)
        {
            add(W, v, S);
            add(v, zn, S);
        }
        else
        {
            add(zn, v, S);
            add(v, U, S);
        }
        out.kind = OutcomeKind::Split;
        out.split_node = z;
        out.aux_node = zn;
        out.merge_length = static_cast<int>(bnd.size()) + 2;
        return out;
    }

    /// v lands inside the arc of W (both recorded neighbours map to W). The
    /// arc is split; the part right of v becomes a new, non-auxiliary node.
    InsertOutcome insert_inside(int v, int W)
    {
        if(!on_cycle(W))
            throw NeighborNotOnCycle("node " + std::to_string(W));
        InsertOutcome out;
        const int nxt = m_right[W];
        std::vector<Tri> fan;
        int x = nxt;
        for(;;)
        {
            const int y = apex(x, W);
            ++m_ops.fan_steps;
            if(y == S)
                break;
            fan.push_back({W, y, x});
            x = y;
        }
        std::size_t first = fan.size();
        for(std::size_t i = 0; i < fan.size(); ++i)
            if(conflict(fan[i], v))
            {
                first = i;
                break;
            }
        if(first == fan.size())
        {
            out.kind = OutcomeKind::Outside;
            return out;
        }
        const std::vector<Tri> region = flood(fan[first], v);
        const std::vector<std::array<int, 2>> bnd = carve(region);
        const int zn = add_node(site_of(W), false);
        fan.resize(first);
        fan.push_back({W, nxt, S});
        for(const Tri& t : fan)
        {
            remove(t[0], t[1], t[2]);
            add(t[0] == W ? zn : t[0], t[1] == W ? zn : t[1], t[2] == W ? zn : t[2]);
        }
        for(auto e : bnd)
        {
            relink(e, W, zn);
            add(e[0], e[1], v);
        }
        add(W, v, S);
        add(v, zn, S);
        out.kind = OutcomeKind::Split;
        out.split_node = W;
        out.aux_node = zn;
        out.merge_length = static_cast<int>(bnd.size()) + 2;
        return out;
    }

    /// Nodes around z in counterclockwise order, starting at its right
    /// neighbour: [right, S, left, y1, ..., yk].
    std::vector<int> link(int z) const
    {
        std::vector<int> out{m_right[z]};
        int x = m_right[z];
        for(;;)
        {
            const int y = apex(z, x);
            if(y == None)
                throw std::logic_error("open star around node " + std::to_string(z));
            if(y == out.front())
                break;
            out.push_back(y);
            x = y;
            if(out.size() > m_apex.size())
                throw std::logic_error("star walk does not close");
        }
        return out;
    }

    /// Removes the arc of z and re-covers its face by the neighbouring
    /// faces, as deletion of a point site from a Voronoi diagram (Chew's
    /// randomized algorithm on the star of z). Returns the number of
    /// triangles created, not counting the new leaf.
    int delete_node(int z, Rng& rng)
    {
        if(z == m_p1 || z == m_pn)
            throw std::logic_error("endpoint arcs are not deletable");
        const std::vector<int> lk = link(z);
        for(std::size_t i = 0; i < lk.size(); ++i)
            remove(z, lk[i], lk[(i + 1) % lk.size()]);
        const int nxt = lk[0];
        const int prv = lk[2];
        std::vector<int> chain{prv};
        chain.insert(chain.end(), lk.begin() + 3, lk.end());
        chain.push_back(nxt);
        const int m = static_cast<int>(chain.size());
        add(prv, nxt, S);
        if(m == 2)
            return 0;
        std::vector<int> lft(m), rgt(m);
        for(int i = 0; i < m; ++i)
        {
            lft[i] = i - 1;
            rgt[i] = i + 1;
        }
        std::vector<int> perm;
        for(int i = 1; i + 1 < m; ++i)
            perm.push_back(i);
        rng.shuffle(perm);
        std::vector<std::array<int, 2>> nb(m);
        for(auto it = perm.rbegin(); it != perm.rend(); ++it)
        {
            const int i = *it;
            nb[i] = {lft[i], rgt[i]};
            rgt[lft[i]] = rgt[i];
            lft[rgt[i]] = lft[i];
        }
        m_hole.clear();
        m_track_hole = true;
        for(const int i : perm)
        {
            const int x = chain[i];
            const int L = chain[nb[i][0]];
            const int R = chain[nb[i][1]];
            const int c = apex(L, R);
            if(c == None)
                throw std::logic_error("deletion lost edge");
            const Tri t{L, R, c};
            if(conflict(t, x))
            {
                const std::vector<Tri> region = flood(t, x);
                const std::vector<std::array<int, 2>> bnd = carve(region);
                for(const auto& e : bnd)
                {
                    if(e[0] == L && e[1] == R)
                        continue;
                    add(e[0], e[1], x);
                }
            }
            else
                add(L, x, R);
        }
        m_track_hole = false;
        return m - 2;
    }

    /// Triangles filling the hole of the last delete_node call
    std::vector<Tri> last_hole() const
    {
        std::vector<Tri> out;
        for(const Tri& t : m_hole)
            if(apex(t[0], t[1]) == t[2] && t[0] != S && t[1] != S && t[2] != S)
                out.push_back(t);
        return out;
    }

    /// Triangle set identity on sites (for comparisons across runs)
    std::vector<Tri> site_triangles() const
    {
        std::vector<Tri> out;
        for(const Tri& t : triangles())
        {
            Tri s{site_of(t[0]), site_of(t[1]), site_of(t[2])};
            std::sort(s.begin(), s.end());
            out.push_back(s);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Conflict region of v grown from a conflicting triangle; edges on the
    /// cycle (those with S) are never crossed.
    std::vector<Tri> flood(const Tri& start, int v) const
    {
        std::vector<Tri> out;
        std::vector<Tri> stack{start};
        std::unordered_set<std::uint64_t> seen{canonical_key(start)};
        while(!stack.empty())
        {
            const Tri t = stack.back();
            stack.pop_back();
            out.push_back(t);
            for(int i = 0; i < 3; ++i)
            {
                const int a = t[i], b = t[(i + 1) % 3];
                if(a == S || b == S)
                    continue;
                const int c = apex(b, a);
                if(c == None)
                    continue;
                const Tri n{b, a, c};
                if(!seen.insert(canonical_key(n)).second)
                    continue;
                if(conflict(n, v))
                    stack.push_back(n);
            }
        }
        return out;
    }

    /// Removes a region and returns its boundary edges (directed as in the
    /// removed triangles).
    std::vector<std::array<int, 2>> carve(const std::vector<Tri>& region)
    {
        std::unordered_set<std::uint64_t> in;
        for(const Tri& t : region)
            in.insert(canonical_key(t));
        std::vector<std::array<int, 2>> bnd;
        for(const Tri& t : region)
            for(int i = 0; i < 3; ++i)
            {
                const int a = t[i], b = t[(i + 1) % 3];
                const int c = apex(b, a);
                if(c == None || !in.count(canonical_key(Tri{b, a, c})))
                    bnd.push_back({a, b});
            }
        for(const Tri& t : region)
            remove(t[0], t[1], t[2]);
        return bnd;
    }

    void add(int a, int b, int c)
    {
        put(a, b, c);
        put(b, c, a);
        put(c, a, b);
        ++m_ops.created;
        if(m_track_hole)
            m_hole.push_back({a, b, c});
        if(c == S)
            set_leaf(a, b);
        else if(a == S)
            set_leaf(b, c);
        else if(b == S)
            set_leaf(c, a);
    }

    void remove(int a, int b, int c)
    {
        erase(a, b);
        erase(b, c);
        erase(c, a);
        ++m_ops.deleted;
        if(c == S)
            clear_leaf(a, b);
        else if(a == S)
            clear_leaf(b, c);
        else if(b == S)
            clear_leaf(c, a);
    }

    static std::uint64_t key(int a, int b)
    {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a + 2)) << 32) |
               static_cast<std::uint32_t>(b + 2);
    }

    static std::uint64_t canonical_key(const Tri& t)
    {
        if(t[0] < t[1] && t[0] < t[2])
            return key(t[0], t[1]);
        if(t[1] < t[2])
            return key(t[1], t[2]);
        return key(t[2], t[0]);
    }

private:
    void put(int a, int b, int c)
    {
        if(!m_apex.emplace(key(a, b), c).second)
            throw std::logic_error("edge " + std::to_string(a) + "->" + std::to_string(b) +
                                   " already present");
    }

    void erase(int a, int b)
    {
        if(m_apex.erase(key(a, b)) != 1)
            throw std::logic_error("edge " + std::to_string(a) + "->" + std::to_string(b) +
                                   " missing");
    }

    void set_leaf(int x, int y)
    {
        m_right[x] = y;
        m_left[y] = x;
    }

    void clear_leaf(int x, int y)
    {
        if(m_right[x] == y)
            m_right[x] = None;
        if(m_left[y] == x)
            m_left[y] = None;
    }

    /// A boundary edge that touched z may now belong to the relabelled part.
    void relink(std::array<int, 2>& e, int z, int zn) const
    {
        if(e[1] == z && apex(z, e[0]) == None && apex(zn, e[0]) != None)
            e[1] = zn;
        if(e[0] == z && apex(e[1], z) == None && apex(e[1], zn) != None)
            e[0] = zn;
    }

    SegmentSite m_seg;
    SegmentFrame m_frame;
    std::vector<Point> m_sites;
    std::vector<int> m_rank;
    std::vector<FramePoint> m_par;
    int m_side = 1;
    int m_p1 = 0;
    int m_pn = 1;
    std::vector<int> m_node_site;
    std::vector<char> m_aux;
    std::vector<int> m_left;
    std::vector<int> m_right;
    std::unordered_map<std::uint64_t, int> m_apex;
    mutable OpCounters m_ops;
    std::vector<Tri> m_hole;
    bool m_track_hole = false;
};

/// Per-insertion record
struct StepStats
{
    int step_index = 0;
    OutcomeKind outcome = OutcomeKind::Simple;
    /// the inserted point coincides with a neighbouring arc's site
    bool alias = false;
    /// split of an arc whose both recorded neighbours belong to it
    bool inside_split = false;
    /// auxiliary arc kept because it coincides with a later arc
    bool overlap_kept = false;
    int merge_curve_length = 0;
    int absorbed = 0;
    int split_min_side = 0;
    int charges_emitted = 0;
    int deletion_cost = 0;
    std::uint64_t ops = 0;
};

/// Builds V_l of a cycle whose arcs are occurrences 0..n-1 of point sites
/// (occurrence 0 and n-1 are the segment endpoints), one occurrence at a
/// time, given each occurrence's neighbours at insertion time.
class CycleBuilder
{
public:
    CycleBuilder(
        const SegmentSite& seg,
        std::vector<Point> sites,
        std::vector<int> occurrence_site,
        int side)
        : m_occ_site(std::move(occurrence_site))
        , m_graph(seg, std::move(sites), m_occ_site.front(), m_occ_site.back(), side)
        , m_node(m_occ_site.size(), -1)
    {
        m_node.front() = m_graph.p1();
        m_node.back() = m_graph.pn();
        m_node_occ.resize(2);
        m_node_occ[m_graph.p1()] = {0};
        m_node_occ[m_graph.pn()] = {static_cast<int>(m_occ_site.size()) - 1};
    }

    const VlGraph& graph() const
    {
        return m_graph;
    }
    VlGraph& graph()
    {
        return m_graph;
    }
    int occurrence_count() const
    {
        return static_cast<int>(m_occ_site.size());
    }
    int node_of(int occ) const
    {
        return m_node[occ];
    }
    bool inserted(int occ) const
    {
        return m_node[occ] >= 0;
    }
    /// smallest occurrence carried by a node (-1 for auxiliary nodes)
    int key_of(int node) const
    {
        if(node < 0 || node >= static_cast<int>(m_node_occ.size()) || m_node_occ[node].empty())
            return -1;
        return *std::min_element(m_node_occ[node].begin(), m_node_occ[node].end());
    }
    const std::vector<int>& occurrences_of(int node) const
    {
        static const std::vector<int> none;
        return node < static_cast<int>(m_node_occ.size()) ? m_node_occ[node] : none;
    }

    /// C3 from the first interior occurrence
    void start(int occ)
    {
        const int v = new_node(occ);
        m_graph.initialize(v);
    }

    /// Called with the auxiliary node before it is deleted
    std::function<void(const CycleBuilder&, int aux, bool kept)> on_split_state;
    /// Returns an uninserted occurrence whose arc coincides with the auxiliary
    /// arc, or -1; the auxiliary node is then kept for that occurrence.
    std::function<int(const CycleBuilder&, int v_occ, int w_occ, int u_occ, bool aux_right)> overlap_probe;

    /// Inserts occurrence v between occurrences w and u (its neighbours among
    /// the occurrences present when it is inserted).
    StepStats insert(int v, int w, int u, Rng& rng)
    {
        StepStats st;
        const std::uint64_t ops0 = m_graph.counters().total();
        if(inserted(v))
        {
            st.overlap_kept = true;
            return st;
        }
        if(m_occ_site[v] == m_occ_site[w] || m_occ_site[v] == m_occ_site[u])
        {
            const int node = m_occ_site[v] == m_occ_site[w] ? m_node[w] : m_node[u];
            m_node[v] = node;
            m_node_occ[node].push_back(v);
            st.alias = true;
            return st;
        }
        const int W = m_node[w], U = m_node[u];
        if(W < 0 || U < 0)
            throw NeighborNotOnCycle("occurrence " + std::to_string(W < 0 ? w : u) + " not inserted");
        const int vn = new_node(v);
        if(W == U)
        {
            const InsertOutcome r = m_graph.insert_inside(vn, W);
            if(r.kind != OutcomeKind::Split)
                throw std::logic_error("inside insertion found no conflict");
            st.outcome = OutcomeKind::Split;
            st.inside_split = true;
            st.merge_curve_length = r.merge_length;
            std::vector<int>& occs = m_node_occ[W];
            std::vector<int> keep, move;
            for(const int o : occs)
                (o > v ? move : keep).push_back(o);
            occs = keep;
            m_node_occ.resize(m_graph.node_count());
            m_node_occ[r.aux_node] = move;
            for(const int o : move)
                m_node[o] = r.aux_node;
            st.ops = m_graph.counters().total() - ops0;
            return st;
        }
        const InsertOutcome r = m_graph.insert(vn, W, U);
        m_node_occ.resize(m_graph.node_count());
        st.outcome = r.kind;
        st.merge_curve_length = r.merge_length;
        st.absorbed = r.absorbed;
        st.split_min_side = r.split_walk;
        if(r.kind == OutcomeKind::Outside)
        {
            m_node[v] = -1;
            m_node_occ[vn].clear();
        }
        if(r.kind == OutcomeKind::Absorbing)
            drop_absorbed();
        if(r.kind == OutcomeKind::Split)
        {
            const bool aux_right = r.split_node == W;
            const int keep = overlap_probe ? overlap_probe(*this, v, w, u, aux_right) : -1;
            if(on_split_state)
                on_split_state(*this, r.aux_node, keep >= 0);
            if(keep >= 0)
            {
                m_graph.set_aux(r.aux_node, false);
                m_node[keep] = r.aux_node;
                m_node_occ[r.aux_node] = {keep};
                st.overlap_kept = true;
            }
            else
            {
                const std::uint64_t d0 = m_graph.counters().total();
                st.charges_emitted = m_graph.delete_node(r.aux_node, rng);
                st.deletion_cost = static_cast<int>(m_graph.counters().total() - d0);
                if(m_graph.apex(W, vn) != VlGraph::S || m_graph.apex(vn, U) != VlGraph::S)
                    throw std::logic_error("auxiliary deletion left v detached");
            }
        }
        st.ops = m_graph.counters().total() - ops0;
        return st;
    }

    /// Occurrences in cycle order, each node expanded to its occurrences
    std::vector<int> cycle_occurrences() const
    {
        std::vector<int> out;
        for(const int node : m_graph.cycle_nodes())
        {
            std::vector<int> occ = m_node_occ[node];
            std::sort(occ.begin(), occ.end());
            out.insert(out.end(), occ.begin(), occ.end());
        }
        return out;
    }

private:
    int new_node(int occ)
    {
        const int v = m_graph.add_node(m_occ_site[occ]);
        m_node_occ.resize(m_graph.node_count());
        m_node_occ[v] = {occ};
        m_node[occ] = v;
        return v;
    }

    void drop_absorbed()
    {
        for(int node = 0; node < static_cast<int>(m_node_occ.size()); ++node)
            if(!m_node_occ[node].empty() && !m_graph.on_cycle(node))
            {
                for(const int o : m_node_occ[node])
                    m_node[o] = -1;
                m_node_occ[node].clear();
            }
    }

    std::vector<int> m_occ_site;
    VlGraph m_graph;
    std::vector<int> m_node;
    std::vector<std::vector<int>> m_node_occ;
};

/// Site-level split relation and a topological order of it
struct SplitOrder
{
    std::vector<int> order;
    std::vector<std::pair<int, int>> relation;
};

/// Parabola of s splits the parabola of t: s lies strictly lower and the two
/// parabolas cross twice.
inline bool splits(const FramePoint& s, const FramePoint& t)
{
    if(sgn(s.Y) == 0 || sgn(t.Y) == 0 || sgn(s.Y) != sgn(t.Y))
        return false;
    const Rational ys = abs(s.Y), yt = abs(t.Y);
    if(!(ys < yt))
        return false;
    Rational A, B, C;
    detail::parabola_difference(FramePoint{s.X, ys}, FramePoint{t.X, yt}, A, B, C);
    return sgn(B * B - 4 * A * C) > 0;
}

inline SplitOrder compute_split_order(const std::vector<Point>& sites, const SegmentSite& p)
{
    const SegmentFrame frame(p);
    std::vector<FramePoint> par;
    for(const Point& q : sites)
    {
        par.push_back(frame.map(q));
        if(sgn(par.back().Y) == 0)
            throw PreconditionError("site on the line of the segment");
    }
    const int n = static_cast<int>(sites.size());
    SplitOrder out;
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<int>> succ(n);
    for(int s = 0; s < n; ++s)
        for(int t = 0; t < n; ++t)
            if(s != t && splits(par[s], par[t]))
            {
                out.relation.emplace_back(s, t);
                succ[s].push_back(t);
                ++indeg[t];
            }
    std::vector<int> ready;
    for(int s = 0; s < n; ++s)
        if(indeg[s] == 0)
            ready.push_back(s);
    while(!ready.empty())
    {
        const auto it = std::min_element(ready.begin(), ready.end());
        const int s = *it;
        ready.erase(it);
        out.order.push_back(s);
        for(const int t : succ[s])
            if(--indeg[t] == 0)
                ready.push_back(t);
    }
    if(static_cast<int>(out.order.size()) != n)
        throw std::logic_error("split relation has a cycle");
    return out;
}

namespace detail
{

inline int cycle_side(const SiteCycle& c, const std::vector<Point>& sites)
{
    for(const Arc& a : c.arcs)
        if(a.kind == ArcKind::Bisector)
        {
            const Sign o = orient2d(c.p_site.a, c.p_site.b, sites[a.site]);
            if(o != Sign::Zero)
                return static_cast<int>(o);
        }
    return 1;
}

/// Bisector arcs of a bounded-below cycle in order, validated
inline std::vector<Arc> cycle_bisector_arcs(const SiteCycle& c, const std::vector<Point>& sites)
{
    std::vector<Arc> arcs;
    int gammas = 0;
    for(const Arc& a : c.arcs)
    {
        if(a.kind == ArcKind::Gamma)
        {
            ++gammas;
            if(a.site != -1)
                throw InvalidCycle("Gamma arc carries a site");
            continue;
        }
        if(a.site < 0 || a.site >= static_cast<int>(sites.size()))
            throw InvalidCycle("arc site out of range");
        arcs.push_back(a);
    }
    if(gammas != c.gamma_count)
        throw InvalidCycle("gamma_count does not match the arcs");
    if(arcs.size() < 2)
        throw InvalidCycle("fewer than two bisector arcs");
    if(sites[arcs.front().site] != c.p_site.a || sites[arcs.back().site] != c.p_site.b)
        throw InvalidCycle("cycle must start and end at the segment endpoints");
    std::vector<int> occ;
    for(std::size_t i = 0; i < arcs.size(); ++i)
    {
        occ.push_back(arcs[i].occurrence);
        if(i > 0 && arcs[i].site == arcs[i - 1].site)
            throw InvalidCycle("consecutive arcs share a site");
    }
    std::sort(occ.begin(), occ.end());
    if(std::adjacent_find(occ.begin(), occ.end()) != occ.end())
        throw InvalidCycle("repeated occurrence id");
    return arcs;
}

} // namespace detail

/// V_l of a cycle built by inserting its sites in split order; each arc is
/// inserted between its nearest already present arcs.
inline CycleBuilder build_deterministic(
    const SiteCycle& cycle,
    const std::vector<Point>& sites,
    const SegmentSite& p,
    int* splits_seen = nullptr,
    const std::vector<int>& site_rank = {})
{
    const std::vector<Arc> arcs = detail::cycle_bisector_arcs(cycle, sites);
    const int n = static_cast<int>(arcs.size());
    std::vector<int> occ_site;
    for(const Arc& a : arcs)
        occ_site.push_back(a.site);
    const int side = detail::cycle_side(cycle, sites);
    CycleBuilder b(p, sites, occ_site, side);
    if(!site_rank.empty())
        b.graph().set_ranks(site_rank);
    if(n == 2)
        return b;
    std::vector<int> interior_sites;
    for(int i = 1; i + 1 < n; ++i)
        interior_sites.push_back(occ_site[i]);
    std::sort(interior_sites.begin(), interior_sites.end());
    interior_sites.erase(std::unique(interior_sites.begin(), interior_sites.end()), interior_sites.end());
    std::vector<Point> pts;
    for(const int s : interior_sites)
        pts.push_back(sites[s]);
    const SplitOrder so = compute_split_order(pts, p);
    std::vector<int> rank(sites.size(), 0);
    for(std::size_t k = 0; k < so.order.size(); ++k)
        rank[interior_sites[so.order[k]]] = static_cast<int>(k);
    std::vector<int> order;
    for(int i = 1; i + 1 < n; ++i)
        order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return rank[occ_site[x]] < rank[occ_site[y]];
    });
    Rng rng(0x5eed);
    std::vector<char> present(n, 0);
    present[0] = present[n - 1] = 1;
    b.start(order[0]);
    present[order[0]] = 1;
    int nsplit = 0;
    for(std::size_t k = 1; k < order.size(); ++k)
    {
        const int v = order[k];
        int w = v - 1, u = v + 1;
        while(!present[w])
            --w;
        while(!present[u])
            ++u;
        const StepStats st = b.insert(v, w, u, rng);
        if(st.outcome == OutcomeKind::Split && !st.inside_split)
            ++nsplit;
        present[v] = 1;
    }
    if(splits_seen)
        *splits_seen = nsplit;
    return b;
}

/// Occurrence-keyed view of a graph: arc keys along the cycle and triangles
/// as sorted key triples.
struct CycleSnapshot
{
    std::vector<int> cycle;
    std::vector<Tri> triangles;
};

inline CycleSnapshot snapshot(const CycleBuilder& b)
{
    CycleSnapshot s;
    for(const int node : b.graph().cycle_nodes())
        s.cycle.push_back(b.key_of(node));
    for(const Tri& t : b.graph().triangles())
    {
        Tri k{b.key_of(t[0]), b.key_of(t[1]), b.key_of(t[2])};
        std::sort(k.begin(), k.end());
        s.triangles.push_back(k);
    }
    std::sort(s.triangles.begin(), s.triangles.end());
    return s;
}

struct SubgraphReport
{
    bool pass = true;
    int shared_vertices = 0;
    int shared_edges = 0;
    int exempt_vertices = 0;
    std::vector<Tri> missing_vertices;
    std::vector<std::array<int, 2>> missing_edges;
};

/// Vertices (and edges) of the graph of the inner cycle whose incident
/// faces all belong to arcs shared with the outer cycle must appear in the
/// graph of the outer cycle. An arc is shared when it is present in both
/// cycles with the same neighbouring arcs. Within one run the cycle after a
/// later step is inner to the cycle after an earlier one.
inline SubgraphReport common_subgraph_check(const CycleSnapshot& inner, const CycleSnapshot& outer)
{
    auto neighbours = [](const std::vector<int>& cyc) {
        std::unordered_map<int, std::pair<int, int>> nb;
        for(std::size_t i = 0; i < cyc.size(); ++i)
            nb[cyc[i]] = {i > 0 ? cyc[i - 1] : -1, i + 1 < cyc.size() ? cyc[i + 1] : -1};
        return nb;
    };
    const auto ninner = neighbours(inner.cycle);
    const auto nouter = neighbours(outer.cycle);
    auto shared = [&](int k) {
        const auto a = ninner.find(k);
        const auto b = nouter.find(k);
        return a != ninner.end() && b != nouter.end() && a->second == b->second;
    };
    std::set<std::array<int, 2>> outer_edges;
    for(const Tri& t : outer.triangles)
        for(int i = 0; i < 3; ++i)
        {
            std::array<int, 2> e{t[i], t[(i + 1) % 3]};
            std::sort(e.begin(), e.end());
            outer_edges.insert(e);
        }
    std::set<std::array<int, 2>> inner_edges;
    SubgraphReport r;
    for(const Tri& t : inner.triangles)
    {
        for(int i = 0; i < 3; ++i)
        {
            std::array<int, 2> e{t[i], t[(i + 1) % 3]};
            std::sort(e.begin(), e.end());
            inner_edges.insert(e);
        }
        if(!(shared(t[0]) && shared(t[1]) && shared(t[2])))
        {
            ++r.exempt_vertices;
            continue;
        }
        ++r.shared_vertices;
        if(!std::binary_search(outer.triangles.begin(), outer.triangles.end(), t))
        {
            r.pass = false;
            r.missing_vertices.push_back(t);
        }
    }
    for(const auto& e : inner_edges)
    {
        if(!(shared(e[0]) && shared(e[1])))
            continue;
        ++r.shared_edges;
        if(!outer_edges.count(e))
        {
            r.pass = false;
            r.missing_edges.push_back(e);
        }
    }
    return r;
}

} // namespace vlcdt
