// congruence.hpp -- trace sets of congruence subgroups, the hat-set
// condition, finite Frobenius data over Z/N and covering multiplicities for
// the principal congruence subgroups.
//
// Gbar(N) is normal in SL2(Z) with quotient PSL2(Z/N).  A primitive class
// of trace n0 whose image has order f in the quotient lifts to |G|/f
// primitive Gbar(N)-classes, each of trace lucas_trace(n0, f): the lifts
// correspond to orbits of right multiplication by the Frobenius image.
#ifndef SZETA_CONGRUENCE_HPP
#define SZETA_CONGRUENCE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "szeta/class_numbers.hpp"
#include "szeta/group.hpp"

namespace szeta {

// hat_T_j = Tr G_j minus the union of the preceding trace sets
std::vector<TraceSetDescriptor> hat_sets(const std::vector<GroupDescriptor>& groups);

struct ConditionResult {
    bool nonempty = false;
    std::optional<std::int64_t> witness;
};

// nonemptiness of each hat set with its smallest witness
std::vector<ConditionResult> condition_check(const std::vector<GroupDescriptor>& groups);

// smallest f >= 1 with M^f = +-I mod N; rejects det != 1 mod N
std::int64_t psl2_element_order(const Mat2& m, std::int64_t N);

// |PSL2(Z/N)| = N^3 prod (1 - p^-2), halved for N > 2
std::int64_t psl2_group_order(std::int64_t N);

// all of SL2(Z/N), cached per N (N <= 12)
const std::vector<Mat2>& sl2_elements(std::int64_t N);

// conjugacy in PSL2(Z/N) by brute force over the group
bool psl2_conjugate(const Mat2& a, const Mat2& b, std::int64_t N);

// conjugacy classes of PSL2(Z/N); each class lists SL2 matrices mod N with
// one representative per +-pair
std::vector<std::vector<Mat2>> psl2_conjugacy_classes(std::int64_t N);

struct FrobeniusData {
    std::int64_t n0 = 0;      // base trace
    SL2Class base;            // the primitive SL2(Z) class
    std::int64_t N = 0;
    std::int64_t f = 0;       // order of the image in PSL2(Z/N)
    std::int64_t lift_count = 0;   // |G|/f
    std::int64_t lifted_trace = 0; // lucas_trace(n0, f)
};

// Frobenius data for every primitive class of trace n0.
std::vector<FrobeniusData> frobenius_classes(std::int64_t N, std::int64_t n0,
                                             ClassEnumerator& classes);

// Covering multiplicity table for Gbar(N) up to n_max.
MultiplicityTable multiplicity_table_congruence(std::int64_t N, std::int64_t n_max);

// Primitive SL2(Z) classes with norm < x whose image in PSL2(Z/N) is
// conjugate to the target.
std::int64_t chebotarev_count(std::int64_t N, const Mat2& target, double x,
                              ClassEnumerator& classes);

}  // namespace szeta

#endif
