// group.hpp -- trace-set descriptors (finite unions of residue classes with
// finite corrections) and the group descriptors built on them.
//
// Tr SL2(Z) = {n >= 3}; Tr Gbar(N) = {n >= 3, n = +-2 mod N^2}.  Descriptors
// are closed under intersection/union/difference by lifting both operands to
// the lcm modulus; the finite correction sets absorb whatever the residue
// algebra cannot express (set-difference against an exception, floor bands).
#ifndef SZETA_GROUP_HPP
#define SZETA_GROUP_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "szeta/numeric.hpp"

#include "json.hpp"

namespace szeta {

struct TraceSetDescriptor {
    std::int64_t modulus = 1;
    std::set<std::int64_t> residues{0};
    std::int64_t floor_n = 3;
    std::set<std::int64_t> exceptions;  // members removed from the classes
    std::set<std::int64_t> inclusions;  // members added outside the classes

    bool contains(std::int64_t n) const;

    static TraceSetDescriptor all_traces();
    static TraceSetDescriptor principal_congruence(std::int64_t N);
    static TraceSetDescriptor empty_set();

    TraceSetDescriptor intersect(const TraceSetDescriptor& o) const;
    TraceSetDescriptor unite(const TraceSetDescriptor& o) const;
    TraceSetDescriptor difference(const TraceSetDescriptor& o) const;

    bool empty() const;
    std::optional<std::int64_t> smallest() const;

    nlohmann::ordered_json to_json() const;
    static TraceSetDescriptor from_json(const nlohmann::json& j);
};

struct GroupDescriptor {
    enum class Kind { ModularGroup, PrincipalCongruence, CustomTraceSet };

    Kind kind = Kind::ModularGroup;
    std::int64_t N = 0;  // PrincipalCongruence only
    TraceSetDescriptor custom;

    static GroupDescriptor modular();
    static GroupDescriptor principal_congruence(std::int64_t N);
    static GroupDescriptor custom_trace_set(TraceSetDescriptor d);

    std::string name() const;
    nlohmann::ordered_json to_json() const;
    static GroupDescriptor from_json(const nlohmann::json& j);
};

TraceSetDescriptor trace_set(const GroupDescriptor& g);

}  // namespace szeta

#endif
