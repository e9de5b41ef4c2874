#include "support.hpp"

#include <gtest/gtest.h>

using namespace vlcdt;

namespace
{

Point P(const char* x, const char* y)
{
    return Point(x, y);
}

std::vector<Point> square()
{
    return {P("0", "0"), P("1", "0"), P("1", "1"), P("0", "1")};
}

std::vector<Tri> oracle_cdt(const std::vector<Point>& pts, const std::vector<std::array<int, 2>>& cons)
{
    std::vector<Tri> ts = oracle::brute_force_cdt(pts, cons);
    for(Tri& t : ts)
        t = Triangulation::rotate_min(t);
    std::sort(ts.begin(), ts.end());
    return ts;
}

} // namespace

TEST(BuildDelaunay, SmallInputs)
{
    const Triangulation sq = build_delaunay(square(), 1);
    EXPECT_EQ(sq.triangles(), (std::vector<Tri>{{0, 1, 2}, {0, 2, 3}}));
    EXPECT_TRUE(verify_cdt(sq).pass);
    const Triangulation one = build_delaunay({P("0", "0"), P("2", "0"), P("1", "3")}, 1);
    EXPECT_EQ(one.triangles(), (std::vector<Tri>{{0, 1, 2}}));
    EXPECT_TRUE(verify_cdt(one).pass);
}

TEST(BuildDelaunay, RejectsBadInput)
{
    EXPECT_THROW(build_delaunay({P("0", "0"), P("1", "0"), P("0", "0"), P("0", "1")}, 1), DuplicatePoint);
    EXPECT_THROW(build_delaunay({P("0", "0"), P("1", "1"), P("2", "2"), P("3", "3")}, 1), AllCollinear);
    EXPECT_THROW(build_delaunay({P("0", "0"), P("1", "1")}, 1), AllCollinear);
}

TEST(BuildDelaunay, CollinearPrefixIsHandled)
{
    const std::vector<Point> pts{P("0", "0"), P("1", "0"), P("2", "0"), P("3", "0"), P("1.5", "1")};
    for(std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const Triangulation t = build_delaunay(pts, seed);
        EXPECT_TRUE(verify_cdt(t).pass);
        EXPECT_EQ(t.triangles().size(), 3u);
    }
}

TEST(BuildDelaunay, RandomMatchesOracleForEverySeed)
{
    Rng rng(31);
    for(int i = 0; i < 20; ++i)
    {
        const auto pts = fixtures::random_points(rng, 10 + static_cast<int>(rng.below(40)));
        const auto want = oracle::delaunay_triangles(pts);
        for(std::uint64_t seed = 0; seed < 3; ++seed)
        {
            const Triangulation t = build_delaunay(pts, seed);
            EXPECT_TRUE(verify_cdt(t).pass);
            EXPECT_EQ(t.triangles(), want);
        }
    }
}

TEST(BuildDelaunay, HundredPointsVerify)
{
    Rng rng(32);
    const Triangulation t = build_delaunay(fixtures::random_points(rng, 100), 9);
    const ValidationReport rep = verify_cdt(t);
    EXPECT_TRUE(rep.pass) << (rep.failures.empty() ? "" : rep.failures.front());
}

TEST(VerifyCdt, FlippedEdgeIsReported)
{
    Rng rng(33);
    const auto pts = fixtures::random_points(rng, 30);
    Triangulation t = build_delaunay(pts, 1);
    ASSERT_TRUE(fixtures::general_position(t));
    const auto& F = t.faces();
    for(int f = 0; f < static_cast<int>(F.size()); ++f)
    {
        if(!F[f].alive || Triangulation::ghost(F[f]))
            continue;
        for(int i = 0; i < 3; ++i)
        {
            const int g = F[f].nb[i];
            if(Triangulation::ghost(F[g]))
                continue;
            const int u = F[f].v[i];
            const int w = F[g].v[t.slot_of(g, F[f].v[(i + 2) % 3], F[f].v[(i + 1) % 3])];
            // the flipped quad must stay convex
            const int a = F[f].v[(i + 1) % 3], b = F[f].v[(i + 2) % 3];
            if(orient2d(pts[u], pts[a], pts[w]) != Sign::Positive || orient2d(pts[u], pts[b], pts[w]) != Sign::Negative)
                continue;
            detail::flip(t, f, i);
            const ValidationReport rep = verify_cdt(t);
            ASSERT_FALSE(rep.pass);
            const std::string want =
                "illegal edge " + std::to_string(std::min(u, w)) + " " + std::to_string(std::max(u, w));
            EXPECT_NE(std::find(rep.failures.begin(), rep.failures.end(), want), rep.failures.end());
            return;
        }
    }
    FAIL() << "no flippable edge";
}

TEST(InsertSegment, SquareDiagonal)
{
    Triangulation t = build_delaunay(square(), 1);
    const SegmentCavities sc = find_cavities(t, 1, 3);
    EXPECT_EQ(sc.crossed.size(), 2u);
    EXPECT_EQ(sc.left, (std::vector<int>{1, 0, 3}));
    EXPECT_EQ(sc.right, (std::vector<int>{1, 2, 3}));
    insert_segment(t, 1, 3, 4);
    EXPECT_EQ(t.triangles(), (std::vector<Tri>{{0, 1, 3}, {1, 2, 3}}));
    EXPECT_EQ(t.constraints(), (std::vector<std::array<int, 2>>{{1, 3}}));
    EXPECT_TRUE(verify_cdt(t).pass);
}

TEST(InsertSegment, IdempotentOnPresentConstraint)
{
    Rng rng(34);
    const fixtures::CdtInstance inst = fixtures::random_cdt_instance(rng, 40, 3);
    Triangulation t = build_delaunay(inst.points, 2);
    for(const auto& c : inst.constraints)
        insert_segment(t, c[0], c[1], 3);
    const auto before = t.triangles();
    const auto cons = t.constraints();
    for(const auto& c : inst.constraints)
        insert_segment(t, c[1], c[0], 99);
    EXPECT_EQ(t.triangles(), before);
    EXPECT_EQ(t.constraints(), cons);
}

TEST(InsertSegment, ExistingEdgeBecomesConstrained)
{
    Triangulation t = build_delaunay(square(), 1);
    insert_segment(t, 0, 1, 1);
    EXPECT_EQ(t.constraints(), (std::vector<std::array<int, 2>>{{0, 1}}));
    EXPECT_TRUE(verify_cdt(t).pass);
}

TEST(InsertSegment, RejectsSegmentThroughVertex)
{
    const std::vector<Point> pts{P("0", "0"), P("1", "0"), P("2", "0"), P("1", "1"), P("1", "-1")};
    Triangulation t = build_delaunay(pts, 1);
    try
    {
        insert_segment(t, 0, 2, 1);
        FAIL() << "expected SegmentThroughVertex";
    }
    catch(const SegmentThroughVertex& e)
    {
        EXPECT_EQ(e.vertex, 1);
    }
}

TEST(InsertSegment, RejectsCrossingConstraint)
{
    Triangulation t = build_delaunay(square(), 1);
    insert_segment(t, 1, 3, 1);
    EXPECT_THROW(insert_segment(t, 0, 2, 1), SegmentCrossesConstraint);
}

TEST(InsertSegment, MatchesBruteForceOracle)
{
    Rng rng(35);
    for(int i = 0; i < 40; ++i)
    {
        const fixtures::CdtInstance inst =
            fixtures::random_cdt_instance(rng, 8 + static_cast<int>(rng.below(40)), 1 + static_cast<int>(rng.below(5)));
        Triangulation t = build_delaunay(inst.points, rng.next());
        for(const auto& c : inst.constraints)
        {
            insert_segment(t, c[0], c[1], rng.next());
            const ValidationReport rep = verify_cdt(t);
            ASSERT_TRUE(rep.pass) << rep.failures.front();
        }
        EXPECT_EQ(t.triangles(), oracle_cdt(inst.points, inst.constraints));
    }
}

TEST(InsertSegment, SegmentAlongHull)
{
    // the right cavity is a single triangle below the segment
    const std::vector<Point> pts{P("0", "0"), P("2", "-0.5"), P("4", "0"), P("2", "3"), P("1", "1"), P("3", "1")};
    Triangulation t = build_delaunay(pts, 1);
    insert_segment(t, 0, 2, 1);
    EXPECT_TRUE(verify_cdt(t).pass);
    EXPECT_EQ(t.triangles(), oracle_cdt(pts, {{0, 2}}));
}
