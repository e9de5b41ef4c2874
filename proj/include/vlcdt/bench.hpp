#pragma once

// Benchmark families: one constrained segment inserted into a Delaunay
// triangulation, with the cost counters of both cavity runs.

#include "cdt.hpp"

#include <chrono>

namespace vlcdt
{

struct BenchRow
{
    std::string family;
    int n = 0;
    std::uint64_t seed = 0;
    std::uint64_t total_ops = 0;
    int charges = 0;
    int splits = 0;
    int deletions = 0;
    std::int64_t wall_ns = 0;
    /// vertices of both cavities, endpoints counted once per cavity
    int cavity_vertices = 0;
};

struct BenchInstance
{
    std::vector<Point> points;
    int a = 0;
    int b = 1;
};

inline const std::vector<std::string>& bench_families()
{
    static const std::vector<std::string> f{"band", "uniform"};
    return f;
}

/// band: n points in a strip of half-width about 8/n around the segment,
/// so almost every point lies on one of the two cavities.
/// uniform: n points in the unit square, segment between two points near
/// opposite corners.
inline BenchInstance bench_instance(const std::string& family, int n, Rng& rng)
{
    constexpr std::int64_t den = std::int64_t(1) << 30;
    auto coord = [&](std::int64_t lo, std::int64_t hi) {
        return Rational(lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo))), den);
    };
    BenchInstance inst;
    std::set<std::pair<Rational, Rational>> seen;
    auto add = [&](Point p) {
        if(seen.emplace(p.x, p.y).second)
        {
            inst.points.push_back(std::move(p));
            return true;
        }
        return false;
    };
    if(family == "band")
    {
        std::int64_t w = den;
        while(w > 1 && w * n > 8 * den)
            w /= 2;
        add(Point(Rational(-1, 64), Rational(0)));
        add(Point(Rational(65, 64), Rational(0)));
        while(static_cast<int>(inst.points.size()) < n)
        {
            Point p(coord(0, den), coord(-w, w + 1));
            if(sgn(p.y) != 0)
                add(std::move(p));
        }
    }
    else if(family == "uniform")
    {
        add(Point(coord(0, den / 16), coord(0, den / 16)));
        add(Point(coord(den - den / 16, den), coord(den - den / 16, den)));
        while(static_cast<int>(inst.points.size()) < n)
            add(Point(coord(0, den), coord(0, den)));
    }
    else
        throw std::invalid_argument("unknown family: " + family);
    return inst;
}

/// Runs one instance; degenerate draws (a point on the segment) are redrawn
inline BenchRow run_bench(const std::string& family, int n, std::uint64_t seed, const CavityOptions& opt = {})
{
    Rng rng(seed);
    while(true)
    {
        const BenchInstance inst = bench_instance(family, n, rng);
        Triangulation t = build_delaunay(inst.points, rng.next());
        std::vector<RetriangulationResult> stats;
        const auto t0 = std::chrono::steady_clock::now();
        try
        {
            insert_segment(t, inst.a, inst.b, seed, opt, &stats);
        }
        catch(const SegmentThroughVertex&)
        {
            continue;
        }
        const auto t1 = std::chrono::steady_clock::now();
        BenchRow row;
        row.family = family;
        row.n = n;
        row.seed = seed;
        row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
        for(const RetriangulationResult& r : stats)
        {
            row.total_ops += r.total_ops;
            row.charges += r.charges;
            row.splits += r.splits;
            row.deletions += r.deletions;
            row.cavity_vertices += static_cast<int>(r.steps.size()) + 2;
        }
        return row;
    }
}

inline const char* bench_csv_header()
{
    return "family,n,seed,total_ops,charges,splits,deletions,wall_ns";
}

inline void write_csv_row(std::ostream& os, const BenchRow& r)
{
    os << r.family << ',' << r.n << ',' << r.seed << ',' << r.total_ops << ',' << r.charges << ',' << r.splits
       << ',' << r.deletions << ',' << r.wall_ns << '\n';
}

inline double median(std::vector<double> v)
{
    if(v.empty())
        return 0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

} // namespace vlcdt
