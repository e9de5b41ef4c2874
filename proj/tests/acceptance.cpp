// Acceptance run: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--known-failures 6,...]
// Exit status is 0 when every failing criterion is listed as known.

#include "support.hpp"
#include "vlcdt/bench.hpp"
#include "vlcdt/missing_face.hpp"

#include <chrono>
#include <iostream>
#include <set>
#include <sstream>

using namespace vlcdt;

namespace
{

struct Outcome
{
    bool pass = true;
    std::string detail;
};

std::vector<Tri> normalized(std::vector<Tri> ts)
{
    for(Tri& t : ts)
        t = Triangulation::rotate_min(t);
    std::sort(ts.begin(), ts.end());
    return ts;
}

std::vector<Cavity> random_cavities(std::uint64_t seed, int count, int max_n, int min_n = 3, double sy = 1.0)
{
    Rng rng(seed);
    std::vector<Cavity> out;
    while(static_cast<int>(out.size()) < count)
    {
        const std::optional<Cavity> c = fixtures::random_cavity(rng, 2 * max_n, min_n, sy);
        if(c && static_cast<int>(c->vertices.size()) <= max_n)
            out.push_back(*c);
    }
    return out;
}

/// graphs seen by the validation hook
struct GraphTally
{
    int graphs = 0;
    int failures = 0;
    std::string first;

    CavityHooks hooks()
    {
        CavityHooks h;
        h.on_step = [this](const CycleBuilder& b, const StepStats&, const std::vector<int>&) {
            ++graphs;
            const VlValidation v = validate_vlgraph(b.graph());
            if(!v.report.pass || !v.violations.empty())
            {
                if(failures++ == 0)
                    first = v.report.failures.empty() ? "violation" : v.report.failures.front();
            }
        };
        return h;
    }
};

GraphTally tally;

Outcome criterion1()
{
    Rng rng(1001);
    int match = 0, total = 0;
    for(int i = 0; i < 200; ++i)
    {
        const int n = 8 + static_cast<int>(rng.below(57));
        const int m = 1 + static_cast<int>(rng.below(5));
        const fixtures::CdtInstance inst = fixtures::random_cdt_instance(rng, n, m);
        const std::vector<Tri> want = normalized(oracle::brute_force_cdt(inst.points, inst.constraints));
        for(std::uint64_t seed = 0; seed < 3; ++seed)
        {
            Triangulation t = build_delaunay(inst.points, seed);
            for(const auto& c : inst.constraints)
                insert_segment(t, c[0], c[1], seed * 7919 + c[0], {}, nullptr, tally.hooks());
            ++total;
            match += t.triangles() == want && verify_cdt(t).pass;
        }
    }
    return {match == total, std::to_string(match) + "/" + std::to_string(total) + " runs equal the oracle"};
}

Outcome criterion2()
{
    CavityHooks h = tally.hooks();
    for(const Cavity& c : random_cavities(1002, 200, 48))
        retriangulate(c, c.vertices.size(), {}, h);
    return {tally.failures == 0 && tally.graphs > 0,
            std::to_string(tally.graphs) + " graphs, " + std::to_string(tally.failures) + " failures" +
                (tally.first.empty() ? "" : " (" + tally.first + ")")};
}

std::vector<Cavity> uniqueness_cavities()
{
    return random_cavities(1003, 100, 32);
}

Outcome criterion3()
{
    int same = 0, dual = 0;
    for(const Cavity& c : uniqueness_cavities())
    {
        const std::vector<Tri> first = retriangulate(c, 0).triangles;
        bool ok = true;
        for(std::uint64_t seed = 1; seed < 20; ++seed)
            ok = ok && retriangulate(c, seed).triangles == first;
        same += ok;
        const CavitySites cs = resolve_sites(c);
        dual += cavity_triangles(build_deterministic(derive_cycle(c), cs.sites, c.segment)) == first;
    }
    return {same == 100 && dual == 100, std::to_string(same) + "/100 seed-independent, " + std::to_string(dual) +
                                            "/100 equal to the deterministic build"};
}

Outcome criterion4()
{
    Rng rng(1004);
    int max_charge = 0, audited = 0;
    for(const Cavity& c : uniqueness_cavities())
    {
        const int n = static_cast<int>(c.vertices.size());
        for(int r = 0; r < 3; ++r)
        {
            std::vector<int> prefix = random_order(n, rng);
            prefix.resize(1 + rng.below(prefix.size()));
            for(const auto& [t, k] : charge_audit(c, prefix, rng.next()))
                max_charge = std::max(max_charge, k);
            ++audited;
        }
    }
    // charged steps are rare; audit the vertex sets of steps that emitted charges
    int charged = 0, targeted = 0;
    for(const Cavity& c : random_cavities(1010, 200, 32, 8, 0.02))
    {
        std::vector<std::vector<int>> prefixes;
        CavityHooks h;
        h.on_step = [&](const CycleBuilder&, const StepStats& st, const std::vector<int>& ins) {
            if(st.charges_emitted > 0)
                prefixes.emplace_back(ins.begin() + 2, ins.end());
        };
        for(int r = 0; r < 5; ++r)
            retriangulate(c, rng.next(), {}, h);
        for(const std::vector<int>& prefix : prefixes)
        {
            for(const auto& [t, k] : charge_audit(c, prefix, rng.next()))
            {
                max_charge = std::max(max_charge, k);
                ++charged;
            }
            ++targeted;
        }
    }
    std::ostringstream d;
    d << audited << " random and " << targeted << " targeted audited steps, " << charged
      << " charged triangles, max charges " << max_charge;
    return {max_charge <= 2 && charged > 0, d.str()};
}

Outcome criterion5()
{
    const std::vector<int> sizes{128, 512, 2048, 8192};
    std::vector<double> med;
    std::ostringstream d;
    for(const int n : sizes)
    {
        std::vector<double> r;
        for(std::uint64_t seed = 0; seed < 20; ++seed)
            r.push_back(static_cast<double>(run_bench("band", n, seed).total_ops) / n);
        med.push_back(median(r));
        d << n << ":" << med.back() << " ";
    }
    const double ratio = med.back() / med.front();
    d << "ratio " << ratio;
    return {ratio <= 1.5, d.str()};
}

Outcome criterion6()
{
    Rng rng(1006);
    int instances = 0, missing = 0, splits = 0, aux2 = 0, aux1 = 0;
    while(instances < 50)
    {
        const std::optional<Cavity> c = fixtures::random_cavity(rng, 60, 8);
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
        hat.vertices.push_back(c->segment.a);
        for(const int i : env)
            hat.vertices.push_back(interior[i]);
        hat.vertices.push_back(c->segment.b);
        ++instances;
        const CavitySites cs = resolve_sites(hat);
        const MissingFaceReport r =
            missing_face_report(build_deterministic(derive_cycle(hat), cs.sites, hat.segment).graph());
        missing += !r.missing_sites.empty();
        CavityHooks h;
        h.on_split_state = [&](const CycleBuilder& b, int aux, bool) {
            ++splits;
            const FaceClass* f = missing_face_report(b.graph()).face(aux);
            if(f && f->klass == 2)
                ++aux2;
            else
                ++aux1;
        };
        for(std::uint64_t seed = 0; seed < 3; ++seed)
            retriangulate(*c, seed, {}, h);
    }
    std::ostringstream d;
    d << instances << " true cycles with " << missing << " missing faces; " << splits << " split states, " << aux2
      << " auxiliary faces case 2, " << aux1 << " case 1";
    return {missing == 0 && aux1 == 0, d.str()};
}

Outcome criterion7()
{
    Rng rng(1007);
    int pairs = 0, passed = 0, shared = 0;
    for(const Cavity& c : random_cavities(1008, 50, 32, 6))
    {
        std::vector<CycleSnapshot> snaps;
        CavityHooks h;
        h.on_step = [&](const CycleBuilder& b, const StepStats&, const std::vector<int>&) { snaps.push_back(snapshot(b)); };
        retriangulate(c, rng.next(), {}, h);
        for(int k = 0; k < 2; ++k)
        {
            // C_n is inner to C_i
            const CycleSnapshot& ci = snaps[rng.below(snaps.size())];
            ++pairs;
            const SubgraphReport r = common_subgraph_check(snaps.back(), ci);
            passed += r.pass;
            shared += r.shared_vertices;
        }
    }
    return {passed == pairs,
            std::to_string(passed) + "/" + std::to_string(pairs) + " pairs, " + std::to_string(shared) + " shared vertices"};
}

Outcome criterion8()
{
    constexpr int calls = 100000;
    Rng rng(1009);
    int orient_bad = 0, incircle_bad = 0, tangent_bad = 0, tangent_calls = 0;
    auto q = [&](int i) {
        // dyadic grid points and non-dyadic rationals
        if(i % 2 == 0)
            return Point(fixtures::random_rational(rng, 4, 8), fixtures::random_rational(rng, 4, 8));
        return Point(fixtures::random_rational(rng, 3, 3 + i % 11), fixtures::random_rational(rng, 3, 7));
    };
    for(int i = 0; i < calls; ++i)
    {
        const Point a = q(i), b = q(i), c = q(i), d = q(i);
        orient_bad += static_cast<int>(orient2d(a, b, c)) != oracle::det_orient(a, b, c);
        const Sign got = orient2d(a, b, c) == Sign::Positive ? incircle(a, b, c, d) : incircle_raw(a, b, c, d);
        incircle_bad += static_cast<int>(got) != oracle::lifted_incircle(a, b, c, d);
    }
    const SegmentSite s{Point("-1/3", "0"), Point("5/2", "2/7")};
    while(tangent_calls < calls)
    {
        const int i = tangent_calls;
        const Point a = q(i), b = q(i + 1), c = q(i);
        const Sign sa = orient2d(s.a, s.b, a);
        if(a == b || sa == Sign::Zero || sa != orient2d(s.a, s.b, b) || sa != orient2d(s.a, s.b, c))
            continue;
        const bool high = i % 2 == 0;
        const auto w = high ? TangencySelector::HighTangency : TangencySelector::LowTangency;
        tangent_bad += static_cast<int>(tangent_incircle(s, a, b, w, c)) != oracle::tangent_incircle(s, a, b, high, c);
        ++tangent_calls;
    }
    std::ostringstream d;
    d << "disagreements orient " << orient_bad << ", incircle " << incircle_bad << ", tangent " << tangent_bad
      << " over " << calls << " calls each";
    return {orient_bad + incircle_bad + tangent_bad == 0, d.str()};
}

} // namespace

int main(int argc, char** argv)
{
    std::set<int> known;
    for(int i = 1; i + 1 < argc; ++i)
        if(std::string(argv[i]) == "--known-failures")
        {
            std::stringstream ss(argv[i + 1]);
            for(std::string tok; std::getline(ss, tok, ',');)
                known.insert(std::stoi(tok));
        }
    const std::vector<Outcome (*)()> criteria{criterion1, criterion2, criterion3, criterion4,
                                              criterion5, criterion6, criterion7, criterion8};
    int unexpected = 0;
    for(std::size_t k = 0; k < criteria.size(); ++k)
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = criteria[k]();
        }
        catch(const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const int id = static_cast<int>(k) + 1;
        std::cout << "criterion " << id << ' ' << (o.pass ? "PASS" : "FAIL") << ": " << o.detail << " ["
                  << static_cast<int>(secs + 0.5) << " s]" << (o.pass || !known.count(id) ? "" : " (known)")
                  << std::endl;
        unexpected += !o.pass && !known.count(id);
    }
    return unexpected == 0 ? 0 : 1;
}
