#include "support.hpp"
#include "vlcdt/cavity.hpp"

#include <gtest/gtest.h>

using namespace vlcdt;

namespace
{

Point P(const char* x, const char* y)
{
    return Point(x, y);
}

std::vector<Tri> sorted_triples(std::vector<Tri> ts)
{
    for(Tri& t : ts)
        std::sort(t.begin(), t.end());
    std::sort(ts.begin(), ts.end());
    return ts;
}

/// cycle p1, sites..., pn over the cavity a, sites..., b
SiteCycle cycle_of(const Cavity& c)
{
    return derive_cycle(c);
}

Cavity make_cavity(const SegmentSite& s, const std::vector<Point>& inner)
{
    Cavity c;
    c.segment = s;
    c.vertices.push_back(s.a);
    c.vertices.insert(c.vertices.end(), inner.begin(), inner.end());
    c.vertices.push_back(s.b);
    return c;
}

std::optional<Cavity> general_cavity(Rng& rng, int n, int min_size)
{
    for(int tries = 0; tries < 100; ++tries)
    {
        std::optional<Cavity> c = fixtures::random_cavity(rng, n, min_size);
        if(!c)
            continue;
        try
        {
            derive_cycle(*c);
            return c;
        }
        catch(const std::exception&)
        {}
    }
    return std::nullopt;
}

} // namespace

TEST(ArcInsert, ThirdArcGivesOneVertex)
{
    const SegmentSite s{P("0", "0"), P("4", "0")};
    const std::vector<Point> sites{s.a, s.b, P("2", "1")};
    CycleBuilder b(s, sites, {0, 2, 1}, 1);
    b.start(1);
    const auto tris = b.graph().triangles();
    ASSERT_EQ(tris.size(), 1u);
    EXPECT_EQ(sorted_triples(tris)[0], (Tri{0, 1, 2}));
    EXPECT_EQ(b.graph().cycle_nodes().size(), 3u);
    EXPECT_TRUE(validate_vlgraph(b.graph()).report.pass);
}

TEST(ArcInsert, SimpleAbsorbingAndSplit)
{
    // on [0,5] the parabola of (3,1) beats that of (1,3) right of 4-sqrt(6),
    // and the parabola of (1,1) beats it left of 1+sqrt(3)
    const SegmentSite s{P("0", "0"), P("5", "0")};
    const std::vector<Point> sites{s.a, s.b, P("1", "3"), P("3", "1"), P("1", "1")};
    VlGraph g(s, sites, 0, 1, 1);
    const int A = g.add_node(2);
    g.initialize(A);
    const int B = g.add_node(3);
    EXPECT_EQ(g.insert(B, A, g.pn()).kind, OutcomeKind::Simple);
    EXPECT_EQ(g.cycle_nodes(), (std::vector<int>{g.p1(), A, B, g.pn()}));
    const int X = g.add_node(4);
    const InsertOutcome r = g.insert(X, g.p1(), A);
    EXPECT_EQ(r.kind, OutcomeKind::Absorbing);
    EXPECT_EQ(r.absorbed, 1);
    EXPECT_EQ(g.cycle_nodes(), (std::vector<int>{g.p1(), X, B, g.pn()}));
    EXPECT_TRUE(validate_vlgraph(g).report.pass);
}

TEST(ArcInsert, SplitCreatesAuxiliaryArc)
{
    // on [0,10] the parabola of (3,1) dips below that of (1,3) on (4-sqrt 6, 4+sqrt 6)
    const SegmentSite s{P("0", "0"), P("10", "0")};
    const std::vector<Point> sites{s.a, s.b, P("1", "3"), P("3", "1")};
    VlGraph g(s, sites, 0, 1, 1);
    const int A = g.add_node(2);
    g.initialize(A);
    const int B = g.add_node(3);
    const InsertOutcome r = g.insert(B, A, g.pn());
    ASSERT_EQ(r.kind, OutcomeKind::Split);
    EXPECT_EQ(r.split_node, A);
    EXPECT_TRUE(g.is_aux(r.aux_node));
    EXPECT_EQ(g.site_of(r.aux_node), 2);
    EXPECT_EQ(g.cycle_nodes(), (std::vector<int>{g.p1(), A, B, r.aux_node, g.pn()}));
    Rng rng(1);
    g.delete_node(r.aux_node, rng);
    EXPECT_EQ(g.cycle_nodes(), (std::vector<int>{g.p1(), A, B, g.pn()}));
}

TEST(ArcInsert, NeighbourMustBeOnCycle)
{
    const SegmentSite s{P("0", "0"), P("4", "0")};
    const std::vector<Point> sites{s.a, s.b, P("1", "1"), P("3", "1")};
    VlGraph g(s, sites, 0, 1, 1);
    const int A = g.add_node(2);
    g.initialize(A);
    const int B = g.add_node(3);
    const int ghost = g.add_node(3);
    EXPECT_THROW(g.insert(B, A, ghost), NeighborNotOnCycle);
    EXPECT_THROW(g.insert(B, g.p1(), g.pn()), NeighborNotOnCycle);
}

TEST(ArcInsert, BuilderRecordsSplitAndAlias)
{
    // target cycle p1, A, B, A, pn: B splits the arc of A
    const SegmentSite s{P("0", "0"), P("10", "0")};
    const std::vector<Point> sites{s.a, s.b, P("1", "3"), P("3", "1")};
    const std::vector<int> occ{0, 2, 3, 2, 1};
    {
        CycleBuilder b(s, sites, occ, 1);
        Rng rng(1);
        int splits = 0;
        b.on_split_state = [&](const CycleBuilder& cb, int aux, bool kept) {
            ++splits;
            EXPECT_FALSE(kept);
            EXPECT_TRUE(cb.graph().is_aux(aux));
        };
        b.start(1);
        const StepStats st = b.insert(2, 1, 4, rng);
        EXPECT_EQ(st.outcome, OutcomeKind::Split);
        EXPECT_FALSE(st.inside_split);
        EXPECT_EQ(splits, 1);
        b.insert(3, 2, 4, rng);
        EXPECT_EQ(b.cycle_occurrences(), (std::vector<int>{0, 1, 2, 3, 4}));
    }
    {
        CycleBuilder b(s, sites, occ, 1);
        Rng rng(1);
        b.start(1);
        EXPECT_TRUE(b.insert(3, 1, 4, rng).alias);
        const StepStats st = b.insert(2, 1, 3, rng);
        EXPECT_TRUE(st.inside_split);
        EXPECT_EQ(b.cycle_occurrences(), (std::vector<int>{0, 1, 2, 3, 4}));
    }
}

TEST(DeleteRegion, SmallestDeletion)
{
    const SegmentSite s{P("0", "0"), P("6", "0")};
    const std::vector<Point> inner{P("1", "1"), P("3", "1.5"), P("5", "1")};
    const Cavity c = make_cavity(s, inner);
    const CavitySites cs = resolve_sites(c);
    CycleBuilder b(s, cs.sites, cs.occurrence_site, cs.side);
    Rng rng(3);
    b.start(2);
    b.insert(1, 0, 2, rng);
    b.insert(3, 2, 4, rng);
    VlGraph g = b.graph();
    const int mid = b.node_of(2);
    const std::size_t before = g.triangles().size();
    g.delete_node(mid, rng);
    EXPECT_EQ(g.triangles().size(), before - 1);
    EXPECT_TRUE(validate_vlgraph(g).report.pass);
}

TEST(DeleteRegion, AuxiliaryDeletionRestoresAVoronoiLikeGraph)
{
    Rng rng(61);
    int checked = 0;
    for(int i = 0; i < 200 && checked < 40; ++i)
    {
        const std::optional<Cavity> c = general_cavity(rng, 40, 8);
        if(!c)
            continue;
        CavityHooks hooks;
        hooks.on_split_state = [&](const CycleBuilder& b, int aux, bool) {
            VlGraph g = b.graph();
            std::vector<int> expect = g.cycle_nodes();
            expect.erase(std::find(expect.begin(), expect.end(), aux));
            Rng local(checked);
            const int created = g.delete_node(aux, local);
            EXPECT_EQ(static_cast<int>(g.last_hole().size()), created);
            EXPECT_EQ(g.cycle_nodes(), expect);
            EXPECT_TRUE(validate_vlgraph(g).report.pass);
            ++checked;
        };
        retriangulate(*c, rng.next(), {}, hooks);
    }
    EXPECT_GE(checked, 20);
}

TEST(SplitOrder, NestedParabolas)
{
    const SegmentSite s{P("-100", "0"), P("100", "0")};
    const SplitOrder so = compute_split_order({P("1", "10"), P("1", "1")}, s);
    EXPECT_EQ(so.relation, (std::vector<std::pair<int, int>>{{1, 0}}));
    EXPECT_EQ(so.order, (std::vector<int>{1, 0}));
}

TEST(SplitOrder, SingletonAndFlatChain)
{
    const SegmentSite s{P("0", "0"), P("10", "0")};
    const SplitOrder one = compute_split_order({P("3", "2")}, s);
    EXPECT_TRUE(one.relation.empty());
    EXPECT_EQ(one.order, (std::vector<int>{0}));
    const SplitOrder flat = compute_split_order({P("1", "1"), P("5", "1"), P("9", "1")}, s);
    EXPECT_TRUE(flat.relation.empty());
    EXPECT_EQ(flat.order, (std::vector<int>{0, 1, 2}));
    EXPECT_THROW(compute_split_order({P("3", "0")}, s), PreconditionError);
}

TEST(SplitOrder, AgreesWithIntersectionOracle)
{
    Rng rng(62);
    const SegmentSite s{P("0", "0"), P("1", "0")};
    for(int i = 0; i < 30; ++i)
    {
        std::vector<Point> pts = fixtures::random_points(rng, 12, 1.0, 0.5);
        for(Point& p : pts)
            if(sgn(p.y) == 0)
                p = Point(p.x, Rational(1, 3));
        const SplitOrder so = compute_split_order(pts, s);
        std::set<std::pair<int, int>> rel(so.relation.begin(), so.relation.end());
        std::vector<int> pos(pts.size());
        for(std::size_t k = 0; k < so.order.size(); ++k)
            pos[so.order[k]] = static_cast<int>(k);
        for(int a = 0; a < 12; ++a)
            for(int b = 0; b < 12; ++b)
            {
                if(a == b || pts[a] == pts[b])
                    continue;
                // a splits b iff a is lower and the parabolas meet twice
                const bool want = pts[a].y < pts[b].y && oracle::parabola_intersections(s, pts[a], pts[b]).size() == 2;
                EXPECT_EQ(rel.count({a, b}) > 0, want);
                if(want)
                    EXPECT_LT(pos[a], pos[b]);
            }
    }
}

TEST(BuildDeterministic, ThreeArcCycle)
{
    const SegmentSite s{P("0", "0"), P("4", "0")};
    const Cavity c = make_cavity(s, {P("2", "1")});
    const CavitySites cs = resolve_sites(c);
    const CycleBuilder b = build_deterministic(derive_cycle(c), cs.sites, s);
    EXPECT_EQ(b.graph().triangles().size(), 1u);
    const VlValidation v = validate_vlgraph(b.graph());
    EXPECT_TRUE(v.report.pass);
    EXPECT_EQ(v.internal_vertices, 1);
    EXPECT_EQ(v.components, 1);
}

TEST(BuildDeterministic, RejectsInvalidCycles)
{
    const SegmentSite s{P("0", "0"), P("4", "0")};
    const std::vector<Point> sites{s.a, s.b, P("2", "1")};
    SiteCycle c;
    c.p_site = s;
    c.arcs = {Arc{0, 0}, Arc{2, 1}, Arc{2, 2}, Arc{1, 3}, Arc{-1, 4, ArcKind::Gamma}};
    c.gamma_count = 1;
    EXPECT_THROW(build_deterministic(c, sites, s), InvalidCycle);
    c.arcs = {Arc{0, 0}, Arc{2, 1}, Arc{1, 1}, Arc{-1, 4, ArcKind::Gamma}};
    EXPECT_THROW(build_deterministic(c, sites, s), InvalidCycle);
    c.arcs = {Arc{0, 0}, Arc{2, 1}, Arc{1, 2}};
    EXPECT_THROW(build_deterministic(c, sites, s), InvalidCycle);
    c.arcs = {Arc{2, 0}, Arc{0, 1}, Arc{1, 2}, Arc{-1, 4, ArcKind::Gamma}};
    EXPECT_THROW(build_deterministic(c, sites, s), InvalidCycle);
}

TEST(BuildDeterministic, FlatChainMatchesDelaunay)
{
    // mutually non-splitting sites: the graph dual is the cavity's Delaunay triangulation
    const SegmentSite s{P("0", "0"), P("11", "0")};
    const std::vector<Point> inner{P("1", "1"), P("3", "1"), P("5", "1"), P("7", "1"), P("9", "1")};
    const Cavity c = make_cavity(s, inner);
    const CavitySites cs = resolve_sites(c);
    const CycleBuilder b = build_deterministic(derive_cycle(c), cs.sites, s);
    EXPECT_EQ(sorted_triples(snapshot(b).triangles), sorted_triples(oracle::cavity_cdt(c.vertices)));
}

TEST(BuildDeterministic, NoSplitsInSplitOrderAndOrderIndependent)
{
    Rng rng(63);
    int checked = 0;
    for(int i = 0; i < 80 && checked < 50; ++i)
    {
        const std::optional<Cavity> c = general_cavity(rng, 40, 6);
        if(!c)
            continue;
        const CavitySites cs = resolve_sites(*c);
        int splits = -1;
        const CycleBuilder b = build_deterministic(derive_cycle(*c), cs.sites, c->segment, &splits);
        EXPECT_EQ(splits, 0);
        const auto want = snapshot(b).triangles;
        EXPECT_EQ(want, sorted_triples(oracle::cavity_cdt(c->vertices)));
        for(std::uint64_t seed = 0; seed < 10; ++seed)
            EXPECT_EQ(sorted_triples(retriangulate(*c, seed).triangles), want);
        ++checked;
    }
    EXPECT_GE(checked, 40);
}

TEST(CommonSubgraph, IdenticalGraphs)
{
    Rng rng(64);
    const std::optional<Cavity> c = general_cavity(rng, 40, 8);
    ASSERT_TRUE(c);
    const CavitySites cs = resolve_sites(*c);
    const CycleSnapshot full = snapshot(build_deterministic(derive_cycle(*c), cs.sites, c->segment));
    const SubgraphReport r = common_subgraph_check(full, full);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.exempt_vertices, 0);
    EXPECT_EQ(r.shared_vertices, static_cast<int>(full.triangles.size()));
}

TEST(CommonSubgraph, ExemptVertex)
{
    const CycleSnapshot inner{{0, 7, 9}, {{0, 7, 9}}};
    const CycleSnapshot outer{{0, 3, 9}, {{0, 3, 9}}};
    const SubgraphReport r = common_subgraph_check(inner, outer);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.exempt_vertices, 1);
    EXPECT_EQ(r.shared_vertices, 0);
}

TEST(CommonSubgraph, MissingSharedVertexFails)
{
    const CycleSnapshot inner{{0, 3, 5, 9}, {{0, 3, 9}, {3, 5, 9}}};
    const CycleSnapshot outer{{0, 3, 5, 9}, {{0, 3, 5}, {0, 5, 9}}};
    const SubgraphReport r = common_subgraph_check(inner, outer);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.missing_vertices.size(), 2u);
}

TEST(CommonSubgraph, PrefixesOfRandomRuns)
{
    Rng rng(65);
    int pairs = 0;
    for(int i = 0; i < 60 && pairs < 40; ++i)
    {
        const std::optional<Cavity> c = general_cavity(rng, 32, 6);
        if(!c)
            continue;
        std::vector<CycleSnapshot> snaps;
        CavityHooks hooks;
        hooks.on_step = [&](const CycleBuilder& b, const StepStats&, const std::vector<int>&) {
            snaps.push_back(snapshot(b));
        };
        retriangulate(*c, rng.next(), {}, hooks);
        // the final cycle is inner to every earlier one
        for(const CycleSnapshot& earlier : snaps)
            EXPECT_TRUE(common_subgraph_check(snaps.back(), earlier).pass);
        ++pairs;
    }
    EXPECT_GE(pairs, 30);
}

TEST(CommonSubgraph, TrueVoronoiCycleInsideCavityCycle)
{
    Rng rng(66);
    int checked = 0;
    for(int i = 0; i < 100 && checked < 30; ++i)
    {
        const std::optional<Cavity> c = general_cavity(rng, 40, 6);
        if(!c)
            continue;
        const std::vector<Point> interior(c->vertices.begin() + 1, c->vertices.end() - 1);
        std::vector<int> env;
        try
        {
            env = oracle::voronoi_cycle(c->segment, interior);
        }
        catch(const PreconditionError&)
        {
            continue;
        }
        Cavity hat;
        hat.segment = c->segment;
        std::vector<int> occ{0};
        hat.vertices.push_back(c->segment.a);
        for(const int k : env)
        {
            hat.vertices.push_back(interior[k]);
            occ.push_back(k + 1);
        }
        hat.vertices.push_back(c->segment.b);
        occ.push_back(static_cast<int>(c->vertices.size()) - 1);
        const CavitySites hs = resolve_sites(hat);
        CycleSnapshot inner = snapshot(build_deterministic(derive_cycle(hat), hs.sites, hat.segment));
        // relabel by occurrence in the full cavity
        for(int& x : inner.cycle)
            x = occ[x];
        for(Tri& t : inner.triangles)
        {
            for(int& x : t)
                x = occ[x];
            std::sort(t.begin(), t.end());
        }
        std::sort(inner.triangles.begin(), inner.triangles.end());
        const CavitySites cs = resolve_sites(*c);
        const CycleSnapshot outer = snapshot(build_deterministic(derive_cycle(*c), cs.sites, c->segment));
        EXPECT_TRUE(common_subgraph_check(inner, outer).pass);
        ++checked;
    }
    EXPECT_EQ(checked, 30);
}
