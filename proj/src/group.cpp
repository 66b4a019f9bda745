#include "szeta/group.hpp"

#include <algorithm>
#include <numeric>

namespace szeta {

namespace {

constexpr std::int64_t kModulusCap = 10'000'000;

// lift residues to a multiple L of the modulus
std::set<std::int64_t> lift(const std::set<std::int64_t>& res, std::int64_t mod,
                            std::int64_t L) {
    std::set<std::int64_t> out;
    for (std::int64_t r : res)
        for (std::int64_t v = r % mod; v < L; v += mod) out.insert(v);
    return out;
}

// Drop corrections that no longer matter and push floors back to 3 so that
// all descriptors share the same floor (the band is absorbed into exceptions
// when the floor was raised).
TraceSetDescriptor canonical(TraceSetDescriptor d) {
    if (d.floor_n > 3) {
        for (std::int64_t n = 3; n < d.floor_n; ++n) {
            if (d.residues.count(((n % d.modulus) + d.modulus) % d.modulus))
                d.exceptions.insert(n);
            d.inclusions.erase(n);
        }
        d.floor_n = 3;
    }
    d.floor_n = std::max<std::int64_t>(d.floor_n, 3);
    std::set<std::int64_t> exc, inc;
    for (std::int64_t e : d.exceptions) {
        std::int64_t r = ((e % d.modulus) + d.modulus) % d.modulus;
        if (e >= d.floor_n && d.residues.count(r)) exc.insert(e);
    }
    for (std::int64_t i : d.inclusions) {
        std::int64_t r = ((i % d.modulus) + d.modulus) % d.modulus;
        if (i >= d.floor_n && (!d.residues.count(r) || exc.count(i))) inc.insert(i);
        // an inclusion shadowed by an exception keeps membership: drop both
        if (exc.count(i)) exc.erase(i), inc.erase(i);
    }
    d.exceptions = std::move(exc);
    d.inclusions = std::move(inc);
    return d;
}

}  // namespace

bool TraceSetDescriptor::contains(std::int64_t n) const {
    if (n < floor_n) return false;
    if (inclusions.count(n)) return true;
    std::int64_t r = ((n % modulus) + modulus) % modulus;
    return residues.count(r) != 0 && exceptions.count(n) == 0;
}

TraceSetDescriptor TraceSetDescriptor::all_traces() { return TraceSetDescriptor{}; }

TraceSetDescriptor TraceSetDescriptor::principal_congruence(std::int64_t N) {
    if (N < 2) throw ValidationError("principal congruence level must be >= 2");
    TraceSetDescriptor d;
    d.modulus = N * N;
    d.residues = {2 % d.modulus, ((-2 % d.modulus) + d.modulus) % d.modulus};
    return d;
}

TraceSetDescriptor TraceSetDescriptor::empty_set() {
    TraceSetDescriptor d;
    d.residues.clear();
    return d;
}

TraceSetDescriptor TraceSetDescriptor::intersect(const TraceSetDescriptor& o) const {
    TraceSetDescriptor a = canonical(*this), b = canonical(o);
    std::int64_t L = std::lcm(a.modulus, b.modulus);
    if (L > kModulusCap) throw ValidationError("lcm modulus too large");
    TraceSetDescriptor out;
    out.modulus = L;
    out.residues.clear();
    auto ra = lift(a.residues, a.modulus, L), rb = lift(b.residues, b.modulus, L);
    std::set_intersection(ra.begin(), ra.end(), rb.begin(), rb.end(),
                          std::inserter(out.residues, out.residues.begin()));
    for (std::int64_t e : a.exceptions)
        if (b.contains(e)) out.exceptions.insert(e);
    for (std::int64_t e : b.exceptions)
        if (a.contains(e) || a.exceptions.count(e)) out.exceptions.insert(e);
    for (std::int64_t i : a.inclusions)
        if (b.contains(i)) out.inclusions.insert(i);
    for (std::int64_t i : b.inclusions)
        if (a.contains(i)) out.inclusions.insert(i);
    return canonical(out);
}

TraceSetDescriptor TraceSetDescriptor::unite(const TraceSetDescriptor& o) const {
    TraceSetDescriptor a = canonical(*this), b = canonical(o);
    std::int64_t L = std::lcm(a.modulus, b.modulus);
    if (L > kModulusCap) throw ValidationError("lcm modulus too large");
    TraceSetDescriptor out;
    out.modulus = L;
    out.residues.clear();
    auto ra = lift(a.residues, a.modulus, L), rb = lift(b.residues, b.modulus, L);
    std::set_union(ra.begin(), ra.end(), rb.begin(), rb.end(),
                   std::inserter(out.residues, out.residues.begin()));
    for (std::int64_t e : a.exceptions)
        if (!b.contains(e)) out.exceptions.insert(e);
    for (std::int64_t e : b.exceptions)
        if (!a.contains(e)) out.exceptions.insert(e);
    for (std::int64_t i : a.inclusions) out.inclusions.insert(i);
    for (std::int64_t i : b.inclusions) out.inclusions.insert(i);
    return canonical(out);
}

TraceSetDescriptor TraceSetDescriptor::difference(const TraceSetDescriptor& o) const {
    TraceSetDescriptor a = canonical(*this), b = canonical(o);
    std::int64_t L = std::lcm(a.modulus, b.modulus);
    if (L > kModulusCap) throw ValidationError("lcm modulus too large");
    TraceSetDescriptor out;
    out.modulus = L;
    out.residues.clear();
    auto ra = lift(a.residues, a.modulus, L), rb = lift(b.residues, b.modulus, L);
    std::set_difference(ra.begin(), ra.end(), rb.begin(), rb.end(),
                        std::inserter(out.residues, out.residues.begin()));
    // members of A killed by the residue subtraction but absent from B
    for (std::int64_t e : b.exceptions)
        if (a.contains(e)) out.inclusions.insert(e);
    for (std::int64_t e : a.exceptions) out.exceptions.insert(e);
    // inclusions of B must be removed even where the residues survived
    for (std::int64_t i : b.inclusions)
        if (a.contains(i)) out.exceptions.insert(i);
    for (std::int64_t i : a.inclusions)
        if (!b.contains(i)) out.inclusions.insert(i);
    return canonical(out);
}

bool TraceSetDescriptor::empty() const {
    // finitely many exceptions cannot exhaust an infinite residue class
    return residues.empty() && inclusions.empty();
}

std::optional<std::int64_t> TraceSetDescriptor::smallest() const {
    if (empty()) return std::nullopt;
    std::int64_t hi = floor_n + modulus;
    if (!exceptions.empty()) hi = std::max(hi, *exceptions.rbegin() + modulus + 1);
    for (std::int64_t n = floor_n; n <= hi; ++n)
        if (contains(n)) return n;
    throw std::logic_error("nonempty descriptor without witness");
}

nlohmann::ordered_json TraceSetDescriptor::to_json() const {
    nlohmann::ordered_json j;
    j["modulus"] = modulus;
    j["residues"] = residues;
    j["floor"] = floor_n;
    j["exceptions"] = exceptions;
    if (!inclusions.empty()) j["inclusions"] = inclusions;
    return j;
}

TraceSetDescriptor TraceSetDescriptor::from_json(const nlohmann::json& j) {
    TraceSetDescriptor d;
    d.modulus = j.value("modulus", std::int64_t{1});
    if (d.modulus < 1) throw ValidationError("modulus must be >= 1");
    d.residues.clear();
    for (auto v : j.value("residues", std::vector<std::int64_t>{0}))
        d.residues.insert(((v % d.modulus) + d.modulus) % d.modulus);
    d.floor_n = j.value("floor", std::int64_t{3});
    for (auto v : j.value("exceptions", std::vector<std::int64_t>{})) d.exceptions.insert(v);
    for (auto v : j.value("inclusions", std::vector<std::int64_t>{})) d.inclusions.insert(v);
    return canonical(d);
}

GroupDescriptor GroupDescriptor::modular() { return GroupDescriptor{}; }

GroupDescriptor GroupDescriptor::principal_congruence(std::int64_t N) {
    if (N < 2) throw ValidationError("principal congruence level must be >= 2");
    GroupDescriptor g;
    g.kind = Kind::PrincipalCongruence;
    g.N = N;
    return g;
}

GroupDescriptor GroupDescriptor::custom_trace_set(TraceSetDescriptor d) {
    GroupDescriptor g;
    g.kind = Kind::CustomTraceSet;
    g.custom = std::move(d);
    return g;
}

std::string GroupDescriptor::name() const {
    switch (kind) {
        case Kind::ModularGroup: return "SL2Z";
        case Kind::PrincipalCongruence: return "Gamma(" + std::to_string(N) + ")";
        case Kind::CustomTraceSet: return "Custom";
    }
    return "?";
}

nlohmann::ordered_json GroupDescriptor::to_json() const {
    nlohmann::ordered_json j;
    switch (kind) {
        case Kind::ModularGroup: j["kind"] = "SL2Z"; break;
        case Kind::PrincipalCongruence:
            j["kind"] = "Gamma";
            j["N"] = N;
            break;
        case Kind::CustomTraceSet:
            j["kind"] = "Custom";
            j.update(custom.to_json());
            break;
    }
    return j;
}

GroupDescriptor GroupDescriptor::from_json(const nlohmann::json& j) {
    std::string kind = j.value("kind", "SL2Z");
    if (kind == "SL2Z") return modular();
    if (kind == "Gamma") return principal_congruence(j.at("N").get<std::int64_t>());
    if (kind == "Custom") return custom_trace_set(TraceSetDescriptor::from_json(j));
    throw ValidationError("unknown group kind: " + kind);
}

TraceSetDescriptor trace_set(const GroupDescriptor& g) {
    switch (g.kind) {
        case GroupDescriptor::Kind::ModularGroup:
            return TraceSetDescriptor::all_traces();
        case GroupDescriptor::Kind::PrincipalCongruence:
            return TraceSetDescriptor::principal_congruence(g.N);
        case GroupDescriptor::Kind::CustomTraceSet: return g.custom;
    }
    throw std::logic_error("bad group kind");
}

}  // namespace szeta
