#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hier {

// Ordinal below w^w in Cantor normal form: sum of w^exp * coeff with
// strictly decreasing exponents and positive coefficients.
class Ordinal {
public:
    struct Term {
        std::uint32_t exp;
        std::uint64_t coeff;
        bool operator==(const Term&) const = default;
    };

    Ordinal() = default;
    Ordinal(std::uint64_t n);  // NOLINT: finite ordinals convert implicitly

    // Throws std::invalid_argument unless terms are canonical.
    static Ordinal from_terms(std::vector<Term> terms);
    static Ordinal omega_pow(std::uint32_t exp, std::uint64_t coeff = 1);
    static Ordinal omega() { return omega_pow(1); }

    const std::vector<Term>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_finite() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exp == 0); }
    bool is_limit() const { return !terms_.empty() && terms_.back().exp > 0; }
    bool is_successor() const { return !terms_.empty() && terms_.back().exp == 0; }

    // Finite part n in the decomposition lambda + n.
    std::uint64_t finite_part() const;
    // The limit-or-zero part lambda.
    Ordinal limit_part() const;
    // Only valid when is_finite().
    std::uint64_t to_finite() const;

    // true when the finite part is odd; limits and 0 are even.
    bool odd() const { return finite_part() % 2 == 1; }
    bool same_parity(const Ordinal& o) const { return odd() == o.odd(); }

    Ordinal succ() const { return *this + Ordinal(1); }
    // Predecessor of a successor ordinal.
    Ordinal pred() const;

    friend Ordinal operator+(const Ordinal& a, const Ordinal& b);
    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
    friend bool operator==(const Ordinal& a, const Ordinal& b) = default;

    // "w^2*3 + w + 4"; "0" for zero.
    std::string str() const;
    // Accepts the output of str() and a few spelling variants ("w^1", "w*2",
    // "omega"). Throws std::invalid_argument on malformed input.
    static Ordinal parse(std::string_view text);

private:
    std::vector<Term> terms_;
};

enum class Cmp { LT, EQ, GT };

Cmp ord_compare(const Ordinal& a, const Ordinal& b);
Ordinal ord_add(const Ordinal& a, const Ordinal& b);
// 0 for even, 1 for odd.
int ord_parity(const Ordinal& a);

}  // namespace hier
