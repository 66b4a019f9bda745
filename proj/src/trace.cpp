#include "szeta/trace.hpp"

#include <algorithm>
#include <cmath>

namespace szeta {

namespace {

bool is_perfect_square(std::int64_t v) {
    if (v < 0) return false;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c)
        if (c * c == v) return true;
    return false;
}

}  // namespace

TraceValue::TraceValue(std::int64_t n) : n_(n) {
    if (n < 3) throw ValidationError("trace value must be >= 3");
    if (is_perfect_square(n * n - 4))
        throw ValidationError("n^2-4 is a perfect square");  // impossible for n >= 3
}

UnitValue epsilon(TraceValue n, double precision) {
    if (!(precision > 0.0) || precision > 1e-6)
        throw ValidationError("precision must lie in (0, 1e-6]");
    if (precision < 1e-55)
        throw ValidationError("precision beyond the 60-digit evaluation mode");
    double nd = static_cast<double>(n.value());
    // eps = n/2 * (1 + sqrt(1 - 4/n^2)) is stable for all n
    double eps = 0.5 * nd * (1.0 + std::sqrt(1.0 - 4.0 / (nd * nd)));
    double log_eps = std::acosh(0.5 * nd);
    UnitValue u{n, eps, log_eps, precision, false, BigFloat(0), BigFloat(0)};
    if (precision < 1e-15) {
        u.has_big = true;
        u.eps_big = epsilon_big(n.value());
        u.log_eps_big = log_epsilon_big(n.value());
    }
    return u;
}

double delta(TraceValue n) {
    double e = epsilon(n).eps;
    double e2 = e * e;
    return e2 / (e2 - 1.0);
}

BigFloat epsilon_big(std::int64_t n) {
    BigFloat nn(n);
    return (nn + sqrt(nn * nn - 4)) / 2;
}

BigFloat log_epsilon_big(std::int64_t n) { return log(epsilon_big(n)); }

BigInt lucas_trace(TraceValue n0, std::int64_t k) {
    if (k < 0) throw ValidationError("lucas_trace requires k >= 0");
    BigInt a = 2, b = n0.value();
    for (std::int64_t i = 0; i < k; ++i) {
        BigInt next = n0.value() * b - a;
        a = b;
        b = next;
    }
    return a;  // t_k
}

std::optional<std::int64_t> lucas_trace_leq(std::int64_t n0, std::int64_t k,
                                            std::int64_t bound) {
    std::int64_t a = 2, b = n0;
    for (std::int64_t i = 0; i < k; ++i) {
        if (b > bound && i > 0) return std::nullopt;  // sequence only grows
        std::int64_t next = n0 * b - a;
        a = b;
        b = next;
    }
    if (a > bound) return std::nullopt;
    return a;
}

std::int64_t lucas_u(std::int64_t n0, std::int64_t k, std::int64_t bound) {
    // U_1 = 1, U_2 = n0, U_{k+1} = n0 U_k - U_{k-1}
    std::int64_t a = 0, b = 1;
    for (std::int64_t i = 1; i < k; ++i) {
        std::int64_t next = n0 * b - a;
        a = b;
        b = next;
        if (b > bound) throw CoverageError("lucas_u exceeds requested bound");
    }
    return b;
}

std::vector<std::pair<std::int64_t, std::int64_t>> power_routes(std::int64_t n) {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t n0 = 3; n0 * n0 - 2 <= n; ++n0) {
        for (std::int64_t k = 2;; ++k) {
            auto t = lucas_trace_leq(n0, k, n);
            if (!t) break;
            if (*t == n) out.emplace_back(n0, k);
        }
    }
    return out;
}

std::optional<PowerRelation> power_decomposition(TraceValue n) {
    // scan bases ascending: the smallest base admitting a relation is core
    for (std::int64_t n0 = 3; n0 * n0 - 2 <= n.value(); ++n0) {
        for (std::int64_t k = 2;; ++k) {
            auto t = lucas_trace_leq(n0, k, n.value());
            if (!t) break;
            if (*t == n.value()) return PowerRelation{n.value(), n0, k};
        }
    }
    return std::nullopt;
}

bool CoreTraceIndex::is_core(std::int64_t n) const { return find(n) == nullptr; }

const PowerRelation* CoreTraceIndex::find(std::int64_t n) const {
    auto it = std::lower_bound(non_core.begin(), non_core.end(), n,
                               [](const PowerRelation& r, std::int64_t v) { return r.n < v; });
    if (it != non_core.end() && it->n == n) return &*it;
    return nullptr;
}

CoreTraceIndex build_core_index(std::int64_t x) {
    if (x < 3) throw ValidationError("core index bound must be >= 3");
    CoreTraceIndex idx;
    idx.bound = x;
    std::vector<PowerRelation> found;
    // Bases ascending; a non-core base was itself generated from its core
    // root earlier, so skipping it keeps every relation in core-base form.
    auto known = [&](std::int64_t v) {
        return std::any_of(found.begin(), found.end(),
                           [v](const PowerRelation& r) { return r.n == v; });
    };
    for (std::int64_t n0 = 3; n0 * n0 - 2 <= x; ++n0) {
        if (known(n0)) continue;
        for (std::int64_t k = 2;; ++k) {
            auto t = lucas_trace_leq(n0, k, x);
            if (!t) break;
            if (!known(*t)) found.push_back(PowerRelation{*t, n0, k});
        }
    }
    std::sort(found.begin(), found.end(),
              [](const PowerRelation& a, const PowerRelation& b) { return a.n < b.n; });
    idx.non_core = std::move(found);
    return idx;
}

double upper_cutoff(double x) {
    if (!(x > 0.0)) throw ValidationError("upper_cutoff requires x > 0");
    double r = std::sqrt(x);
    return r + 1.0 / r;
}

}  // namespace szeta
