#ifndef ORDAUTO_ORDINAL_HPP
#define ORDAUTO_ORDINAL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ordauto/errors.hpp"

namespace ordauto {

// An ordinal below epsilon_0 in Cantor normal form:
//   w^{e_1}*c_1 + ... + w^{e_k}*c_k   with e_1 > e_2 > ... > e_k, c_i >= 1.
// The empty term list is 0. Every operation returns normal form; values are
// immutable after construction.
class Ordinal {
  public:
    struct Term;

    Ordinal() = default;                 // zero
    Ordinal(uint64_t n);                 // finite ordinal (implicit on purpose)

    static Ordinal omega();
    // w^e as a single CNF term; throws DepthError past the nesting budget.
    static Ordinal omega_power(const Ordinal& exponent);
    // Interprets `raw` as an ordinal sum, left to right, and normalizes.
    // Zero coefficients are allowed and dropped.
    static Ordinal from_terms(const std::vector<Term>& raw);

    bool is_zero() const { return terms_.empty(); }
    bool is_finite() const;
    // Value of a finite ordinal; throws RangeError on infinite input.
    uint64_t finite_value() const;
    bool is_limit() const;      // > 0 with no finite part
    bool is_successor() const;  // > 0 with a finite part
    // Predecessor of a successor ordinal.
    Ordinal predecessor() const;

    const std::vector<Term>& terms() const { return terms_; }
    const Ordinal& leading_exponent() const;  // pre: != 0
    // CNF nesting depth: 0 for 0, 1 + max exponent depth otherwise.
    int depth() const;

    std::string str() const;

  private:
    std::vector<Term> terms_;
    friend Ordinal add(const Ordinal&, const Ordinal&);
    friend Ordinal left_subtract(const Ordinal&, const Ordinal&);
    friend Ordinal multiply(const Ordinal&, const Ordinal&);
    friend int compare(const Ordinal&, const Ordinal&);
};

struct Ordinal::Term {
    Ordinal exponent;
    uint64_t coefficient = 0;
};

// Total order: -1, 0, +1.
int compare(const Ordinal& a, const Ordinal& b);

inline bool operator==(const Ordinal& a, const Ordinal& b) { return compare(a, b) == 0; }
inline bool operator!=(const Ordinal& a, const Ordinal& b) { return compare(a, b) != 0; }
inline bool operator<(const Ordinal& a, const Ordinal& b) { return compare(a, b) < 0; }
inline bool operator<=(const Ordinal& a, const Ordinal& b) { return compare(a, b) <= 0; }
inline bool operator>(const Ordinal& a, const Ordinal& b) { return compare(a, b) > 0; }
inline bool operator>=(const Ordinal& a, const Ordinal& b) { return compare(a, b) >= 0; }

// Ordinal sum a + b. Low terms of a below the leading exponent of b are absorbed.
Ordinal add(const Ordinal& a, const Ordinal& b);

// The unique g with a + g = b; throws UnderflowError when a > b.
Ordinal left_subtract(const Ordinal& a, const Ordinal& b);

// Ordinal product, left-distributive over the right argument's CNF.
Ordinal multiply(const Ordinal& a, const Ordinal& b);

// card(a): Finite(a) below w, aleph_0 otherwise (everything below eps_0 is countable).
struct Cardinality {
    bool finite = true;
    uint64_t value = 0;  // meaningful when finite

    std::string str() const;
};

bool operator==(const Cardinality& a, const Cardinality& b);
inline bool operator!=(const Cardinality& a, const Cardinality& b) { return !(a == b); }
// Strict comparison: every finite < aleph0; aleph0 == aleph0.
bool operator<(const Cardinality& a, const Cardinality& b);

Cardinality cardinality(const Ordinal& a);

// Configurable CNF nesting budget (process-wide, default 8).
int cnf_depth_budget();
void set_cnf_depth_budget(int budget);

// ASCII literal grammar:
//   ordinal := term ('+' term)*
//   term    := 'w' ['^' factor] ['*' nat] | nat
//   factor  := 'w' | nat | '(' ordinal ')'
// e.g. "w^2*3+w+5" is w^2*3 + w + 5. Parsing normalizes.
Ordinal parse_ordinal(std::string_view text);
std::string format(const Ordinal& a);

// All (head, tail) pairs with head + tail == n and tail a "CNF suffix" of n.
// Every ordinal b <= n satisfies left_subtract(b, n) == tail for exactly one
// of the returned tails. Includes (0, n) and (n, 0). Ordered by decreasing tail.
std::vector<std::pair<Ordinal, Ordinal>> suffix_splits(const Ordinal& n);

// The unique e with e + e == a, when it exists.
std::optional<Ordinal> half_of_sum(const Ordinal& a);

// The unique a with multiply(a, a) == g, when it exists.
std::optional<Ordinal> ordinal_sqrt(const Ordinal& g);

// k-th element of the canonical fundamental sequence of a limit ordinal
// (f[k] increases to f as k grows).
Ordinal fundamental_sequence(const Ordinal& f, uint64_t k);

}  // namespace ordauto

#endif
