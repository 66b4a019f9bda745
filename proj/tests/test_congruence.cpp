#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "szeta/congruence.hpp"
#include "oracles.hpp"

using namespace szeta;

TEST_CASE("trace sets of the basic groups") {
    TraceSetDescriptor sl2 = trace_set(GroupDescriptor::modular());
    for (std::int64_t n = -2; n <= 40; ++n) CHECK(sl2.contains(n) == (n >= 3));

    TraceSetDescriptor g3 = trace_set(GroupDescriptor::principal_congruence(3));
    for (std::int64_t n = 3; n <= 120; ++n)
        CHECK(g3.contains(n) == (n % 9 == 2 || n % 9 == 7));

    // Gamma_1(p^2) has the same trace set as Gamma(p): build it as custom
    TraceSetDescriptor g1p2;
    g1p2.modulus = 9;
    g1p2.residues = {2, 7};
    GroupDescriptor custom = GroupDescriptor::custom_trace_set(g1p2);
    for (std::int64_t n = 3; n <= 200; ++n)
        CHECK(trace_set(custom).contains(n) == g3.contains(n));
}

TEST_CASE("descriptor algebra agrees with pointwise logic") {
    TraceSetDescriptor a = TraceSetDescriptor::principal_congruence(2);  // mod 4
    TraceSetDescriptor b = TraceSetDescriptor::principal_congruence(3);  // mod 9
    TraceSetDescriptor c;
    c.modulus = 5;
    c.residues = {1, 2};
    c.exceptions = {6, 11};
    std::int64_t L = 3 * 4 * 9 * 5;
    auto check_all = [&](const TraceSetDescriptor& got, auto pred) {
        for (std::int64_t n = 3; n <= L; ++n) CHECK(got.contains(n) == pred(n));
    };
    check_all(a.intersect(b), [&](std::int64_t n) { return a.contains(n) && b.contains(n); });
    check_all(a.unite(b), [&](std::int64_t n) { return a.contains(n) || b.contains(n); });
    check_all(a.difference(b), [&](std::int64_t n) { return a.contains(n) && !b.contains(n); });
    check_all(c.intersect(a), [&](std::int64_t n) { return c.contains(n) && a.contains(n); });
    check_all(c.unite(a), [&](std::int64_t n) { return c.contains(n) || a.contains(n); });
    check_all(c.difference(a), [&](std::int64_t n) { return c.contains(n) && !a.contains(n); });
    check_all(a.difference(c), [&](std::int64_t n) { return a.contains(n) && !c.contains(n); });
    // difference against a set with exceptions needs the inclusion patch
    TraceSetDescriptor d = a.difference(c);
    CHECK(d.contains(6));  // 6 = 2 mod 4 in a; 6 excepted from c
    // iterated combinations stay exact
    check_all(a.difference(c).unite(b), [&](std::int64_t n) {
        return (a.contains(n) && !c.contains(n)) || b.contains(n);
    });
}

TEST_CASE("descriptor emptiness and witnesses") {
    TraceSetDescriptor e = TraceSetDescriptor::empty_set();
    CHECK(e.empty());
    CHECK_FALSE(e.smallest().has_value());
    TraceSetDescriptor g3 = TraceSetDescriptor::principal_congruence(3);
    CHECK_FALSE(g3.empty());
    CHECK(g3.smallest() == 7);  // 7 = -2 mod 9 is the first trace >= 3
    TraceSetDescriptor all = TraceSetDescriptor::all_traces();
    CHECK(all.smallest() == 3);
}

TEST_CASE("hat sets reproduce the ordering examples") {
    GroupDescriptor g3 = GroupDescriptor::principal_congruence(3);
    GroupDescriptor sl2 = GroupDescriptor::modular();

    auto ok = condition_check({g3, sl2});
    REQUIRE(ok.size() == 2);
    CHECK(ok[0].nonempty);
    CHECK(ok[1].nonempty);
    CHECK(ok[0].witness == 7);
    CHECK(ok[1].witness == 3);

    auto bad = condition_check({sl2, g3});
    REQUIRE(bad.size() == 2);
    CHECK(bad[0].nonempty);
    CHECK(bad[0].witness == 3);
    CHECK_FALSE(bad[1].nonempty);

    // Gamma(p) then Gamma_1(p^2): identical trace sets, second hat set empty
    TraceSetDescriptor g1p2;
    g1p2.modulus = 9;
    g1p2.residues = {2, 7};
    auto same = condition_check({g3, GroupDescriptor::custom_trace_set(g1p2)});
    CHECK(same[0].nonempty);
    CHECK_FALSE(same[1].nonempty);
}

TEST_CASE("pairwise coprime families satisfy the condition") {
    std::vector<GroupDescriptor> gs{GroupDescriptor::principal_congruence(3),
                                    GroupDescriptor::principal_congruence(4),
                                    GroupDescriptor::principal_congruence(5),
                                    GroupDescriptor::modular()};
    for (const auto& r : condition_check(gs)) CHECK(r.nonempty);

    // hat sets are disjoint and their union is the union of the originals
    auto hats = hat_sets(gs);
    for (std::int64_t n = 3; n <= 3600 + 3; ++n) {
        int hat_hits = 0;
        bool any = false;
        for (std::size_t j = 0; j < gs.size(); ++j) {
            if (hats[j].contains(n)) ++hat_hits;
            any = any || trace_set(gs[j]).contains(n);
        }
        CHECK(hat_hits == (any ? 1 : 0));
    }
}

TEST_CASE("psl2 element orders") {
    CHECK(psl2_element_order(Mat2{1, 0, 0, 1}, 5) == 1);
    CHECK(psl2_element_order(Mat2{1, 1, 0, 1}, 3) == 3);
    CHECK_THROWS_AS(psl2_element_order(Mat2{2, 0, 0, 1}, 5), ValidationError);
    // brute-force iteration oracle
    for (std::int64_t N : {2, 3, 4, 5}) {
        for (const auto& m : sl2_elements(N)) {
            Mat2 pw = m;
            std::int64_t f = 1;
            Mat2 id{1, 0, 0, 1};
            Mat2 neg = Mat2{N - 1, 0, 0, N - 1}.mod(N);
            while (!(pw == id || pw == neg)) {
                pw = pw.mul(m).mod(N);
                ++f;
            }
            CHECK(psl2_element_order(m, N) == f);
        }
    }
}

TEST_CASE("psl2 group orders against brute enumeration") {
    CHECK(psl2_group_order(2) == 6);
    CHECK(psl2_group_order(3) == 12);
    for (std::int64_t N : {2, 3, 4, 5, 6}) {
        std::int64_t sl2 = static_cast<std::int64_t>(sl2_elements(N).size());
        CHECK(psl2_group_order(N) == (N > 2 ? sl2 / 2 : sl2));
    }
}

TEST_CASE("frobenius lifts land in the principal trace set") {
    ClassEnumerator classes;
    for (std::int64_t N = 2; N <= 5; ++N) {
        std::int64_t NN = N * N;
        for (std::int64_t n0 = 3; n0 <= 60; ++n0) {
            for (const auto& d : frobenius_classes(N, n0, classes)) {
                CHECK(d.lift_count * d.f == psl2_group_order(N));
                std::int64_t r = ((d.lifted_trace % NN) + NN) % NN;
                bool ok = r == ((2 % NN) + NN) % NN || r == ((-2 % NN) + NN) % NN;
                CHECK(ok);
            }
        }
    }
}

TEST_CASE("covering table for Gamma(2): smallest entry and the orbit oracle") {
    MultiplicityTable t = multiplicity_table_congruence(2, 60);
    // nonzero entries only at n = +-2 mod 4
    std::int64_t first = 0;
    for (std::int64_t n = 3; n <= 60; ++n) {
        if (t.m_of(n).numerator() != 0) {
            CHECK(n % 4 == 2);
            if (first == 0) first = n;
        }
    }
    CHECK(first == 6);
    // the n=6 entry: the trace-6 class with content 2 maps to the identity
    // mod 2; orbits of right multiplication by the identity on PSL2(Z/2)
    // are singletons, so the lift count is |G| = 6
    std::map<std::array<std::int64_t, 4>, int> orbit_index;
    auto G = sl2_elements(2);
    std::int64_t orbits = 0;
    std::set<std::size_t> used;
    for (std::size_t i = 0; i < G.size(); ++i) {
        if (used.count(i)) continue;
        // right-multiply by identity: orbit is {g}
        used.insert(i);
        ++orbits;
    }
    CHECK(orbits == 6);
    CHECK(t.m_of(6) == Rational(6));

    // simulation for a nontrivial Frobenius: the trace-3 class mod 2 has
    // order 3, orbits of right multiplication by it have size 3
    Mat2 g{1, 1, 1, 2};
    std::int64_t f = psl2_element_order(g, 2);
    CHECK(f == 3);
    std::map<std::array<std::int64_t, 4>, std::size_t> idx;
    for (std::size_t i = 0; i < G.size(); ++i)
        idx[{G[i].p, G[i].q, G[i].r, G[i].s}] = i;
    std::set<std::size_t> seen;
    std::int64_t orbit_count = 0;
    for (std::size_t i = 0; i < G.size(); ++i) {
        if (seen.count(i)) continue;
        ++orbit_count;
        Mat2 cur = G[i];
        std::int64_t size = 0;
        while (true) {
            auto key = std::array<std::int64_t, 4>{cur.p, cur.q, cur.r, cur.s};
            if (seen.count(idx[key])) break;
            seen.insert(idx[key]);
            ++size;
            cur = cur.mul(g).mod(2);
        }
        CHECK(size == f);
    }
    CHECK(orbit_count == 6 / f);
    // hence two lifted classes of trace lucas(3,3) = 18
    ClassEnumerator classes;
    auto fd = frobenius_classes(2, 3, classes);
    REQUIRE(fd.size() == 1);
    CHECK(fd[0].f == 3);
    CHECK(fd[0].lift_count == 2);
    CHECK(fd[0].lifted_trace == 18);
}

TEST_CASE("covering tables fill their trace sets exactly") {
    // nonzero entries coincide with the trace-set membership, both ways
    MultiplicityTable t2 = multiplicity_table_congruence(2, 60);
    TraceSetDescriptor d2 = TraceSetDescriptor::principal_congruence(2);
    for (std::int64_t n = 3; n <= 60; ++n)
        CHECK((t2.m_of(n).numerator() != 0) == d2.contains(n));
    MultiplicityTable t3 = multiplicity_table_congruence(3, 200);
    TraceSetDescriptor d3 = TraceSetDescriptor::principal_congruence(3);
    for (std::int64_t n = 3; n <= 200; ++n)
        CHECK((t3.m_of(n).numerator() != 0) == d3.contains(n));
}

TEST_CASE("covering tables for Gamma(3)") {
    MultiplicityTable t = multiplicity_table_congruence(3, 200);
    for (std::int64_t n = 3; n <= 200; ++n) {
        if (t.m_of(n).numerator() != 0) CHECK((n % 9 == 2 || n % 9 == 7));
    }
    // trace-3 class has order 2 mod 3 (M^2 = -I), lifting to 12/2 = 6
    // classes of trace 7
    ClassEnumerator classes;
    auto fd = frobenius_classes(3, 3, classes);
    REQUIRE(fd.size() == 1);
    CHECK(fd[0].f == 2);
    CHECK(fd[0].lift_count == 6);
    CHECK(fd[0].lifted_trace == 7);
    CHECK(t.p_of(7) >= 6);
}

TEST_CASE("covering tables satisfy the prime geodesic theorem upstairs") {
    // the leading li(x) term does not depend on the group: the f=1 base
    // classes arrive at rate li(x)/|G| and each contributes |G| lifts
    for (std::int64_t N : {2LL, 3LL}) {
        MultiplicityTable t = multiplicity_table_congruence(N, 110);
        double ratio = static_cast<double>(pi_gamma(1e4, t)) / li(1e4);
        CHECK(ratio > 0.8);
        CHECK(ratio < 1.1);
    }
}

TEST_CASE("chebotarev counts partition pi_gamma") {
    ClassEnumerator classes;
    MultiplicityTable t = multiplicity_table_sl2z(110);
    for (std::int64_t N : {2, 3}) {
        auto conj = psl2_conjugacy_classes(N);
        double x = 1e4;
        std::int64_t total = 0;
        for (const auto& cls : conj)
            total += chebotarev_count(N, cls.front(), x, classes);
        CHECK(total == pi_gamma(x, t));
    }
    // identity class: counted classes have trace = +-2 mod N
    for (std::int64_t N : {2, 3}) {
        double x = 2000.0;
        double X = upper_cutoff(x);
        std::int64_t direct = 0;
        for (std::int64_t n0 = 3; static_cast<double>(n0) < X; ++n0) {
            for (const auto& cls : classes.primitive_classes(n0)) {
                if (psl2_conjugate(cls.matrix(), Mat2{1, 0, 0, 1}, N)) {
                    std::int64_t r = ((n0 % N) + N) % N;
                    bool ok = r == ((2 % N) + N) % N || r == ((-2 % N) + N) % N;
                    CHECK(ok);
                    ++direct;
                }
            }
        }
        CHECK(chebotarev_count(N, Mat2{1, 0, 0, 1}, x, classes) == direct);
    }
}

TEST_CASE("chebotarev equidistribution at desk scale, N=2") {
    ClassEnumerator classes;
    auto conj = psl2_conjugacy_classes(2);
    double x = 1e4;
    std::int64_t G = psl2_group_order(2);
    std::int64_t total = 0;
    std::vector<std::int64_t> counts;
    for (const auto& cls : conj) {
        counts.push_back(chebotarev_count(2, cls.front(), x, classes));
        total += counts.back();
    }
    for (std::size_t i = 0; i < conj.size(); ++i) {
        double measured = static_cast<double>(counts[i]) / static_cast<double>(total);
        double predicted = static_cast<double>(conj[i].size()) / static_cast<double>(G);
        CHECK(measured == doctest::Approx(predicted).epsilon(0.25));
    }
}

TEST_CASE("group descriptor JSON round trip") {
    for (const GroupDescriptor& g :
         {GroupDescriptor::modular(), GroupDescriptor::principal_congruence(4)}) {
        GroupDescriptor back = GroupDescriptor::from_json(g.to_json());
        CHECK(back.kind == g.kind);
        CHECK(back.N == g.N);
        for (std::int64_t n = 3; n <= 60; ++n)
            CHECK(trace_set(back).contains(n) == trace_set(g).contains(n));
    }
    TraceSetDescriptor c;
    c.modulus = 7;
    c.residues = {1, 3};
    c.exceptions = {8};
    GroupDescriptor g = GroupDescriptor::custom_trace_set(c);
    GroupDescriptor back = GroupDescriptor::from_json(g.to_json());
    for (std::int64_t n = 3; n <= 100; ++n)
        CHECK(trace_set(back).contains(n) == trace_set(g).contains(n));
}
