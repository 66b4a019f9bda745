#include "szeta/congruence.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>

namespace szeta {

std::vector<TraceSetDescriptor> hat_sets(const std::vector<GroupDescriptor>& groups) {
    if (groups.empty()) throw ValidationError("hat_sets needs at least one group");
    std::vector<TraceSetDescriptor> out;
    TraceSetDescriptor seen = TraceSetDescriptor::empty_set();
    for (const auto& g : groups) {
        TraceSetDescriptor tr = trace_set(g);
        out.push_back(tr.difference(seen));
        seen = seen.unite(tr);
    }
    return out;
}

std::vector<ConditionResult> condition_check(const std::vector<GroupDescriptor>& groups) {
    std::vector<ConditionResult> out;
    for (const auto& hat : hat_sets(groups)) {
        ConditionResult r;
        r.nonempty = !hat.empty();
        if (r.nonempty) r.witness = hat.smallest();
        out.push_back(r);
    }
    return out;
}

std::int64_t psl2_element_order(const Mat2& m, std::int64_t N) {
    if (N < 2) throw ValidationError("modulus must be >= 2");
    Mat2 a = m.mod(N);
    if (((a.det() % N) + N) % N != 1 % N)
        throw ValidationError("matrix determinant is not 1 mod N");
    Mat2 id{1, 0, 0, 1};
    Mat2 neg = Mat2{-1, 0, 0, -1}.mod(N);
    Mat2 pw = a;
    std::int64_t cap = psl2_group_order(N) + 1;
    for (std::int64_t f = 1; f <= cap; ++f) {
        if (pw == id || pw == neg) return f;
        pw = pw.mul(a).mod(N);
    }
    throw std::logic_error("element order not found");
}

std::int64_t psl2_group_order(std::int64_t N) {
    if (N < 2) throw ValidationError("modulus must be >= 2");
    std::int64_t order = N * N * N;
    std::int64_t M = N;
    for (std::int64_t p = 2; p * p <= M; ++p) {
        if (M % p != 0) continue;
        order = order / (p * p) * (p * p - 1);
        while (M % p == 0) M /= p;
    }
    if (M > 1) order = order / (M * M) * (M * M - 1);
    if (N > 2) order /= 2;
    return order;
}

const std::vector<Mat2>& sl2_elements(std::int64_t N) {
    if (N < 2 || N > 12) throw ValidationError("group enumeration supports 2 <= N <= 12");
    static std::map<std::int64_t, std::vector<Mat2>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    std::vector<Mat2> out;
    for (std::int64_t p = 0; p < N; ++p)
        for (std::int64_t q = 0; q < N; ++q)
            for (std::int64_t r = 0; r < N; ++r)
                for (std::int64_t s = 0; s < N; ++s)
                    if (((p * s - q * r) % N + N) % N == 1 % N)
                        out.push_back(Mat2{p, q, r, s});
    return cache.emplace(N, std::move(out)).first->second;
}

namespace {

Mat2 inverse_mod(const Mat2& m, std::int64_t N) {
    // det = 1 mod N, so the adjugate is the inverse
    return Mat2{m.s, -m.q, -m.r, m.p}.mod(N);
}

bool proj_equal(const Mat2& a, const Mat2& b, std::int64_t N) {
    if (a == b) return true;
    Mat2 nb = Mat2{-b.p, -b.q, -b.r, -b.s}.mod(N);
    return a == nb;
}

}  // namespace

bool psl2_conjugate(const Mat2& a, const Mat2& b, std::int64_t N) {
    Mat2 am = a.mod(N), bm = b.mod(N);
    for (const auto& u : sl2_elements(N)) {
        Mat2 c = u.mul(am).mul(inverse_mod(u, N)).mod(N);
        if (proj_equal(c, bm, N)) return true;
    }
    return false;
}

std::vector<std::vector<Mat2>> psl2_conjugacy_classes(std::int64_t N) {
    // one representative per +-pair
    std::vector<Mat2> proj;
    for (const auto& m : sl2_elements(N)) {
        Mat2 neg = Mat2{-m.p, -m.q, -m.r, -m.s}.mod(N);
        if (m <= neg) proj.push_back(m);
    }
    std::vector<std::vector<Mat2>> classes;
    std::vector<bool> used(proj.size(), false);
    for (std::size_t i = 0; i < proj.size(); ++i) {
        if (used[i]) continue;
        std::vector<Mat2> cls;
        for (std::size_t j = i; j < proj.size(); ++j) {
            if (!used[j] && psl2_conjugate(proj[i], proj[j], N)) {
                used[j] = true;
                cls.push_back(proj[j]);
            }
        }
        classes.push_back(std::move(cls));
    }
    return classes;
}

std::vector<FrobeniusData> frobenius_classes(std::int64_t N, std::int64_t n0,
                                             ClassEnumerator& classes) {
    std::int64_t G = psl2_group_order(N);
    std::vector<FrobeniusData> out;
    for (const auto& cls : classes.primitive_classes(n0)) {
        FrobeniusData d;
        d.n0 = n0;
        d.base = cls;
        d.N = N;
        d.f = psl2_element_order(cls.matrix(), N);
        d.lift_count = G / d.f;
        if (d.lift_count * d.f != G)
            throw std::logic_error("element order does not divide group order");
        auto lifted = lucas_trace_leq(n0, d.f, std::numeric_limits<std::int64_t>::max() / 4);
        if (!lifted) throw CoverageError("lifted trace overflows");
        d.lifted_trace = *lifted;
        // lifts land in Tr Gbar(N): a nontrivial cross-check of f
        std::int64_t NN = N * N;
        std::int64_t res = ((d.lifted_trace % NN) + NN) % NN;
        if (res != 2 % NN && res != ((NN - 2) % NN))
            throw std::logic_error("lifted trace not congruent to +-2 mod N^2");
        out.push_back(d);
    }
    return out;
}

MultiplicityTable multiplicity_table_congruence(std::int64_t N, std::int64_t n_max) {
    if (N < 2) throw ValidationError("principal congruence level must be >= 2");
    if (n_max < 3) throw ValidationError("n_max must be >= 3");
    if (n_max > 20000)
        throw CoverageError("congruence table needs base class data beyond supported range");
    MultiplicityTable t;
    t.group = GroupDescriptor::principal_congruence(N);
    t.n_max = n_max;
    t.p.assign(n_max + 1, 0);
    t.m.assign(n_max + 1, Rational(0));
    ClassEnumerator classes;
    // Base traces n0 <= n_max suffice: lifted traces only grow with f.
    for (std::int64_t n0 = 3; n0 <= n_max; ++n0) {
        for (const auto& d : frobenius_classes(N, n0, classes)) {
            if (d.lifted_trace <= n_max) t.p[d.lifted_trace] += d.lift_count;
            // m over powers of each lift: trace lucas(n0, f*j), weight 1/j
            for (std::int64_t j = 1;; ++j) {
                auto tr = lucas_trace_leq(n0, d.f * j, n_max);
                if (!tr) break;
                t.m[*tr] += Rational(d.lift_count, j);
            }
        }
    }
    return t;
}

std::int64_t chebotarev_count(std::int64_t N, const Mat2& target, double x,
                              ClassEnumerator& classes) {
    if (((target.det() % N) + N) % N != 1 % N)
        throw ValidationError("target determinant is not 1 mod N");
    double X = upper_cutoff(x);
    if (X > 20000.0) throw CoverageError("chebotarev_count beyond supported class data");
    std::int64_t count = 0;
    for (std::int64_t n0 = 3; static_cast<double>(n0) < X; ++n0)
        for (const auto& cls : classes.primitive_classes(n0))
            if (psl2_conjugate(cls.matrix(), target, N)) ++count;
    return count;
}

}  // namespace szeta
