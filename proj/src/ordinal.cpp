#include "hier/ordinal.hpp"

#include <cctype>
#include <stdexcept>

namespace hier {

Ordinal::Ordinal(std::uint64_t n) {
    if (n > 0) terms_.push_back({0, n});
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].coeff == 0) throw std::invalid_argument("ordinal: zero coefficient");
        if (i > 0 && terms[i].exp >= terms[i - 1].exp)
            throw std::invalid_argument("ordinal: exponents must strictly decrease");
    }
    Ordinal o;
    o.terms_ = std::move(terms);
    return o;
}

Ordinal Ordinal::omega_pow(std::uint32_t exp, std::uint64_t coeff) {
    if (coeff == 0) return {};
    return from_terms({{exp, coeff}});
}

std::uint64_t Ordinal::finite_part() const {
    return is_successor() ? terms_.back().coeff : 0;
}

Ordinal Ordinal::limit_part() const {
    Ordinal o = *this;
    if (o.is_successor()) o.terms_.pop_back();
    return o;
}

std::uint64_t Ordinal::to_finite() const {
    if (!is_finite()) throw std::domain_error("ordinal: not finite: " + str());
    return finite_part();
}

Ordinal Ordinal::pred() const {
    if (!is_successor()) throw std::domain_error("ordinal: no predecessor: " + str());
    Ordinal o = *this;
    if (--o.terms_.back().coeff == 0) o.terms_.pop_back();
    return o;
}

Ordinal operator+(const Ordinal& a, const Ordinal& b) {
    if (b.is_zero()) return a;
    const auto lead = b.terms_.front().exp;
    Ordinal r;
    for (const auto& t : a.terms_) {
        if (t.exp < lead) break;
        r.terms_.push_back(t);
    }
    auto it = b.terms_.begin();
    if (!r.terms_.empty() && r.terms_.back().exp == lead) {
        r.terms_.back().coeff += it->coeff;
        ++it;
    }
    r.terms_.insert(r.terms_.end(), it, b.terms_.end());
    return r;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    const auto n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = a.terms_[i];
        const auto& y = b.terms_[i];
        if (x.exp != y.exp) return x.exp <=> y.exp;
        if (x.coeff != y.coeff) return x.coeff <=> y.coeff;
    }
    return a.terms_.size() <=> b.terms_.size();
}

std::string Ordinal::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& t : terms_) {
        if (!s.empty()) s += " + ";
        if (t.exp == 0) {
            s += std::to_string(t.coeff);
            continue;
        }
        s += "w";
        if (t.exp > 1) s += "^" + std::to_string(t.exp);
        if (t.coeff > 1) s += "*" + std::to_string(t.coeff);
    }
    return s;
}

namespace {

struct Lexer {
    std::string_view s;
    std::size_t i = 0;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    bool eat_word(std::string_view w) {
        skip();
        if (s.substr(i, w.size()) == w) {
            i += w.size();
            return true;
        }
        return false;
    }
    bool peek_digit() {
        skip();
        return i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]));
    }
    std::uint64_t number() {
        if (!peek_digit()) throw std::invalid_argument("ordinal: expected number");
        std::uint64_t v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
            ++i;
        }
        return v;
    }
    bool done() {
        skip();
        return i == s.size();
    }
};

}  // namespace

Ordinal Ordinal::parse(std::string_view text) {
    Lexer lx{text};
    Ordinal acc;
    bool first = true;
    while (first || lx.eat('+')) {
        first = false;
        Ordinal term;
        if (lx.eat_word("omega") || lx.eat_word("w")) {
            std::uint32_t e = 1;
            std::uint64_t c = 1;
            if (lx.eat('^')) e = static_cast<std::uint32_t>(lx.number());
            if (lx.eat('*')) c = lx.number();
            term = omega_pow(e, c);
        } else {
            term = Ordinal(lx.number());
        }
        acc = acc + term;
    }
    if (!lx.done()) throw std::invalid_argument("ordinal: trailing input in '" + std::string(text) + "'");
    return acc;
}

Cmp ord_compare(const Ordinal& a, const Ordinal& b) {
    auto c = a <=> b;
    if (c < 0) return Cmp::LT;
    if (c > 0) return Cmp::GT;
    return Cmp::EQ;
}

Ordinal ord_add(const Ordinal& a, const Ordinal& b) { return a + b; }

int ord_parity(const Ordinal& a) { return a.odd() ? 1 : 0; }

}  // namespace hier
