#pragma once

// Countable ordinals below epsilon_0 in Cantor normal form.
//
// An ordinal is the sum  w^e1*c1 + w^e2*c2 + ... + w^ek*ck  with
// e1 > e2 > ... > ek (themselves ordinals) and every ci >= 1. The empty sum
// is 0. Values are immutable and share their term list, so copies are cheap
// and safe to pass between threads.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace finforce {

using Natural = boost::multiprecision::cpp_int;

class Ordinal;

struct OrdinalParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class Ordinal {
public:
    struct Term;

    Ordinal() = default;
    Ordinal(std::uint64_t n);  // NOLINT: naturals embed implicitly
    static Ordinal from_natural(const Natural& n);

    /// w^exponent * coefficient. Throws on a zero coefficient.
    static Ordinal monomial(const Ordinal& exponent, const Natural& coefficient = 1);
    static Ordinal omega() { return monomial(Ordinal{1}); }

    /// Builds from terms; exponents must strictly decrease and coefficients be positive.
    static Ordinal from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const;
    bool is_zero() const { return !terms_; }
    bool is_finite() const;
    bool is_limit() const;      // nonzero with no finite part
    bool is_successor() const;  // finite part nonzero

    /// The finite part (coefficient of w^0).
    Natural finite_part() const;
    /// Leading exponent; 0 for the zero ordinal.
    Ordinal leading_exponent() const;

    std::string str() const;

    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
    friend bool operator==(const Ordinal& a, const Ordinal& b);

private:
    explicit Ordinal(std::shared_ptr<const std::vector<Term>> t) : terms_(std::move(t)) {}
    std::shared_ptr<const std::vector<Term>> terms_;
};

struct Ordinal::Term {
    Ordinal exponent;
    Natural coefficient;
    friend bool operator==(const Term&, const Term&) = default;
};

using Node = Ordinal;
using Height = Ordinal;

Ordinal parse_ordinal(std::string_view text);
std::string to_string(const Ordinal& a);

std::strong_ordering ord_cmp(const Ordinal& a, const Ordinal& b);
Ordinal ord_add(const Ordinal& a, const Ordinal& b);
inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return ord_add(a, b); }

/// The unique d with a + d = b. Requires a <= b.
Ordinal ord_sub_left(const Ordinal& b, const Ordinal& a);

/// w * a. On CNF each exponent e becomes 1 + e.
Ordinal omega_mul(const Ordinal& a);

struct HeightSplit {
    Height height;
    Natural offset;
    friend bool operator==(const HeightSplit&, const HeightSplit&) = default;
};

/// g = w*height + offset with offset finite.
HeightSplit height_split(const Ordinal& g);
Height height_of(const Ordinal& g);
Ordinal node_at(const Height& height, const Natural& offset);

/// True iff w*x = x, i.e. x has no term with a finite exponent.
bool is_omega_fixed(const Ordinal& x);

}  // namespace finforce
