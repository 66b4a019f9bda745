// quadform.hpp -- integral indefinite binary quadratic forms, Gauss
// reduction and narrow class numbers via reduction cycles.
//
// A form (a,b,c) of discriminant D = b^2-4ac > 0 (non-square) is reduced
// when 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b.  The rho step
// (a,b,c) -> (c, r, (r^2-D)/(4c)) permutes the reduced forms of fixed D;
// its orbits ("cycles") are exactly the proper equivalence classes, so the
// narrow class number h+(D) is the number of cycles.
#ifndef SZETA_QUADFORM_HPP
#define SZETA_QUADFORM_HPP

#include <compare>
#include <cstdint>
#include <vector>

#include "szeta/numeric.hpp"

namespace szeta {

struct QuadForm {
    std::int64_t a = 0, b = 0, c = 0;

    std::int64_t disc() const { return b * b - 4 * a * c; }
    std::int64_t content() const;
    bool is_primitive() const { return content() == 1; }
    bool is_reduced() const;

    auto operator<=>(const QuadForm&) const = default;
};

// D > 0, non-square, D = 0 or 1 mod 4; throws ValidationError otherwise.
void validate_discriminant(std::int64_t D);

// One rho step (input need not be reduced).
QuadForm rho(const QuadForm& f);

// Reduced form properly equivalent to the input; identity on reduced forms.
QuadForm reduce(QuadForm f);

struct ReductionCycle {
    std::vector<QuadForm> forms;  // closed under rho, first form is minimal
    const QuadForm& canonical() const { return forms.front(); }
};

// All reduced primitive forms of discriminant D, sorted.
std::vector<QuadForm> reduced_primitive_forms(std::int64_t D);

// Partition of the reduced primitive forms into rho cycles.
std::vector<ReductionCycle> class_cycles(std::int64_t D);

// h+(D) = number of cycles.
std::int64_t narrow_class_number(std::int64_t D);

}  // namespace szeta

#endif
