// Command-line front end: build, insert, verify, bench, svg.
//
// Exit codes: 0 success, 2 parse error, 3 precondition rejection,
// 4 verification failure.

#include "vlcdt/bench.hpp"
#include "vlcdt/io.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <iostream>
#include <mutex>
#include <thread>

namespace
{

using namespace vlcdt;

constexpr int ExitParse = 2;
constexpr int ExitPrecondition = 3;
constexpr int ExitVerify = 4;

struct Failure
{
    int code;
    std::string message;
};

void write_file(const std::string& path, const MeshFile& m)
{
    std::ofstream os(path);
    if(!os)
        throw Failure{ExitParse, "cannot write " + path};
    write_mesh(os, m);
}

Triangulation load_triangulation(const MeshFile& m)
{
    if(!m.has_triangles)
        throw Failure{ExitParse, "ParseError: no triangle section"};
    try
    {
        return to_triangulation(m);
    }
    catch(const std::logic_error& e)
    {
        throw Failure{ExitVerify, std::string("verification failed: ") + e.what()};
    }
}

int cmd_build(const std::string& in, const std::string& out, std::uint64_t seed)
{
    const MeshFile m = read_mesh_file(in);
    Triangulation t = build_delaunay(m.points, seed);
    for(const auto& s : m.segments)
        insert_segment(t, s[0], s[1], seed);
    write_file(out, to_mesh(t, m.base));
    std::cout << "built " << t.triangles().size() << " triangles\n";
    return 0;
}

int cmd_insert(const std::string& in, const std::vector<long long>& seg, std::uint64_t seed, const std::string& out)
{
    const MeshFile m = read_mesh_file(in);
    Triangulation t = load_triangulation(m);
    const long long a = seg[0] - m.base, b = seg[1] - m.base;
    const long long n = static_cast<long long>(m.points.size());
    if(a < 0 || b < 0 || a >= n || b >= n || a == b)
        throw Failure{ExitPrecondition, "PreconditionError: invalid segment endpoints"};
    std::vector<RetriangulationResult> stats;
    insert_segment(t, static_cast<int>(a), static_cast<int>(b), seed, {}, &stats);
    const ValidationReport rep = verify_cdt(t);
    if(!rep.pass)
    {
        rep.write(std::cerr);
        throw Failure{ExitVerify, "verification failed after insertion"};
    }
    write_file(out, to_mesh(t, m.base));
    std::uint64_t ops = 0;
    for(const auto& r : stats)
        ops += r.total_ops;
    std::cout << "inserted " << seg[0] << ' ' << seg[1] << " ops " << ops << '\n';
    return 0;
}

int cmd_verify(const std::string& in)
{
    const MeshFile m = read_mesh_file(in);
    const Triangulation t = load_triangulation(m);
    ValidationReport rep = verify_cdt(t);
    rep.merge(verify_mesh_constraints(m, t));
    rep.write(std::cout);
    return rep.pass ? 0 : ExitVerify;
}

int cmd_bench(const std::string& family, const std::vector<int>& sizes, int seeds, std::uint64_t seed,
              const std::string& csv, int threads)
{
    const auto& fams = bench_families();
    if(std::find(fams.begin(), fams.end(), family) == fams.end())
        throw Failure{ExitPrecondition, "PreconditionError: unknown family " + family};
    for(const int n : sizes)
        if(n < 3)
            throw Failure{ExitPrecondition, "PreconditionError: sizes must be at least 3"};
    std::vector<std::pair<int, std::uint64_t>> jobs;
    for(const int n : sizes)
        for(int k = 0; k < seeds; ++k)
            jobs.emplace_back(n, seed + static_cast<std::uint64_t>(k));
    std::vector<BenchRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::string err;
    auto work = [&] {
        for(std::size_t j = next++; j < jobs.size(); j = next++)
        {
            try
            {
                rows[j] = run_bench(family, jobs[j].first, jobs[j].second);
            }
            catch(const std::exception& e)
            {
                std::lock_guard<std::mutex> lock(err_mutex);
                err = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for(int i = 1; i < std::max(1, threads); ++i)
        pool.emplace_back(work);
    work();
    for(std::thread& th : pool)
        th.join();
    if(!err.empty())
        throw std::runtime_error(err);

    std::ofstream os(csv);
    if(!os)
        throw Failure{ExitParse, "cannot write " + csv};
    os << bench_csv_header() << '\n';
    for(const BenchRow& r : rows)
        write_csv_row(os, r);

    std::cout << "n,median_ops_per_n,median_charges_per_n,median_splits\n";
    for(const int n : sizes)
    {
        std::vector<double> ops, ch, sp;
        for(const BenchRow& r : rows)
        {
            if(r.n != n)
                continue;
            ops.push_back(static_cast<double>(r.total_ops) / n);
            ch.push_back(static_cast<double>(r.charges) / n);
            sp.push_back(r.splits);
        }
        std::cout << n << ',' << median(ops) << ',' << median(ch) << ',' << median(sp) << '\n';
    }
    return 0;
}

int cmd_svg(const std::string& in, const std::string& out, bool arcs, double width)
{
    const MeshFile m = read_mesh_file(in);
    const Triangulation t = m.has_triangles ? load_triangulation(m) : build_delaunay(m.points, 0);
    std::ofstream os(out);
    if(!os)
        throw Failure{ExitParse, "cannot write " + out};
    SvgOptions opt;
    opt.arcs = arcs;
    opt.width = width;
    write_svg(os, t, opt);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Constrained Delaunay triangulation by Voronoi-like graphs"};
    app.require_subcommand(1);

    std::string in, out, family = "band", csv;
    std::vector<long long> seg;
    std::vector<int> sizes;
    std::uint64_t seed = 0;
    int seeds = 20, threads = 1;
    bool arcs = false;
    double width = 800;

    auto* build = app.add_subcommand("build", "Delaunay triangulation of a point file (constraints are inserted)");
    build->add_option("input", in, "point file")->required();
    build->add_option("-o,--output", out, "triangulation file")->required();
    build->add_option("--seed", seed, "random seed");

    auto* insert = app.add_subcommand("insert", "insert one constraint into a triangulation file");
    insert->add_option("input", in, "triangulation file")->required();
    insert->add_option("--seg", seg, "segment endpoints")->required()->expected(2);
    insert->add_option("--seed", seed, "random seed")->required();
    insert->add_option("-o,--output", out, "triangulation file")->required();

    auto* verify = app.add_subcommand("verify", "check a triangulation file");
    verify->add_option("input", in, "triangulation file")->required();

    auto* bench = app.add_subcommand("bench", "cost counters of random segment insertions");
    bench->add_option("--family", family, "band or uniform")->required();
    bench->add_option("--sizes", sizes, "point counts")->required()->delimiter(',');
    bench->add_option("--seeds", seeds, "instances per size");
    bench->add_option("--seed", seed, "first seed")->required();
    bench->add_option("--csv", csv, "output CSV")->required();
    bench->add_option("--threads", threads, "worker threads");

    auto* svg = app.add_subcommand("svg", "render a triangulation file");
    svg->add_option("input", in, "triangulation or point file")->required();
    svg->add_option("-o,--output", out, "SVG file")->required();
    svg->add_flag("--arcs", arcs, "draw the parabolic cycle arcs of every constraint");
    svg->add_option("--width", width, "image width");

    try
    {
        app.parse(argc, argv);
    }
    catch(const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch(const CLI::ParseError& e)
    {
        app.exit(e);
        return ExitParse;
    }

    try
    {
        if(*build)
            return cmd_build(in, out, seed);
        if(*insert)
            return cmd_insert(in, seg, seed, out);
        if(*verify)
            return cmd_verify(in);
        if(*bench)
            return cmd_bench(family, sizes, seeds, seed, csv, threads);
        if(*svg)
            return cmd_svg(in, out, arcs, width);
    }
    catch(const Failure& f)
    {
        std::cerr << f.message << '\n';
        return f.code;
    }
    catch(const ParseError& e)
    {
        std::cerr << e.what() << '\n';
        return ExitParse;
    }
    catch(const SegmentThroughVertex& e)
    {
        std::cerr << e.what() << '\n';
        return ExitPrecondition;
    }
    catch(const SegmentCrossesConstraint& e)
    {
        std::cerr << e.what() << '\n';
        return ExitPrecondition;
    }
    catch(const DuplicatePoint& e)
    {
        std::cerr << e.what() << '\n';
        return ExitPrecondition;
    }
    catch(const AllCollinear& e)
    {
        std::cerr << e.what() << '\n';
        return ExitPrecondition;
    }
    catch(const PreconditionError& e)
    {
        std::cerr << e.what() << '\n';
        return ExitPrecondition;
    }
    catch(const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
