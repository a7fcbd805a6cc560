#include "finforce/ordinal.hpp"

#include <cctype>

namespace finforce {

namespace {

const std::vector<Ordinal::Term>& empty_terms() {
    static const std::vector<Ordinal::Term> empty;
    return empty;
}

std::strong_ordering cmp_natural(const Natural& a, const Natural& b) {
    if (a < b) return std::strong_ordering::less;
    if (b < a) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace

Ordinal::Ordinal(std::uint64_t n) {
    if (n != 0) {
        terms_ = std::make_shared<const std::vector<Term>>(std::vector<Term>{{Ordinal{}, Natural(n)}});
    }
}

Ordinal Ordinal::from_natural(const Natural& n) {
    if (n < 0) throw std::invalid_argument("negative natural");
    if (n == 0) return {};
    return Ordinal{std::make_shared<const std::vector<Term>>(std::vector<Term>{{Ordinal{}, n}})};
}

Ordinal Ordinal::monomial(const Ordinal& exponent, const Natural& coefficient) {
    if (coefficient <= 0) throw std::invalid_argument("ordinal coefficient must be positive");
    return Ordinal{std::make_shared<const std::vector<Term>>(std::vector<Term>{{exponent, coefficient}})};
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].coefficient <= 0) throw std::invalid_argument("ordinal coefficient must be positive");
        if (i > 0 && !(terms[i].exponent < terms[i - 1].exponent))
            throw std::invalid_argument("ordinal exponents must strictly decrease");
    }
    if (terms.empty()) return {};
    return Ordinal{std::make_shared<const std::vector<Term>>(std::move(terms))};
}

const std::vector<Ordinal::Term>& Ordinal::terms() const { return terms_ ? *terms_ : empty_terms(); }

bool Ordinal::is_finite() const {
    return !terms_ || (terms_->size() == 1 && terms_->front().exponent.is_zero());
}

bool Ordinal::is_limit() const { return terms_ && !terms_->back().exponent.is_zero(); }

bool Ordinal::is_successor() const { return terms_ && terms_->back().exponent.is_zero(); }

Natural Ordinal::finite_part() const {
    if (is_successor()) return terms_->back().coefficient;
    return 0;
}

Ordinal Ordinal::leading_exponent() const { return terms_ ? terms_->front().exponent : Ordinal{}; }

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    if (a.terms_ == b.terms_) return std::strong_ordering::equal;
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    const std::size_t n = std::min(ta.size(), tb.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (auto c = ta[i].exponent <=> tb[i].exponent; c != 0) return c;
        if (auto c = cmp_natural(ta[i].coefficient, tb[i].coefficient); c != 0) return c;
    }
    return ta.size() <=> tb.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) { return (a <=> b) == 0; }

std::strong_ordering ord_cmp(const Ordinal& a, const Ordinal& b) { return a <=> b; }

Ordinal ord_add(const Ordinal& a, const Ordinal& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    const Ordinal& lead = tb.front().exponent;
    std::vector<Ordinal::Term> out;
    out.reserve(ta.size() + tb.size());
    std::size_t i = 0;
    for (; i < ta.size() && ta[i].exponent > lead; ++i) out.push_back(ta[i]);
    std::size_t j = 0;
    if (i < ta.size() && ta[i].exponent == lead) {
        out.push_back({lead, ta[i].coefficient + tb[0].coefficient});
        j = 1;
    }
    for (; j < tb.size(); ++j) out.push_back(tb[j]);
    return Ordinal::from_terms(std::move(out));
}

Ordinal ord_sub_left(const Ordinal& b, const Ordinal& a) {
    if (b < a) throw std::invalid_argument("ord_sub_left: " + a.str() + " exceeds " + b.str());
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    std::size_t k = 0;
    while (k < ta.size() && k < tb.size() && ta[k] == tb[k]) ++k;
    std::vector<Ordinal::Term> out;
    if (k < tb.size()) {
        if (k < ta.size() && ta[k].exponent == tb[k].exponent) {
            out.push_back({tb[k].exponent, tb[k].coefficient - ta[k].coefficient});
        } else {
            out.push_back(tb[k]);
        }
        out.insert(out.end(), tb.begin() + static_cast<std::ptrdiff_t>(k) + 1, tb.end());
    }
    return Ordinal::from_terms(std::move(out));
}

Ordinal omega_mul(const Ordinal& a) {
    std::vector<Ordinal::Term> out;
    out.reserve(a.terms().size());
    for (const auto& t : a.terms()) out.push_back({ord_add(Ordinal{1}, t.exponent), t.coefficient});
    return Ordinal::from_terms(std::move(out));
}

HeightSplit height_split(const Ordinal& g) {
    HeightSplit out{Ordinal{}, g.finite_part()};
    std::vector<Ordinal::Term> high;
    for (const auto& t : g.terms()) {
        if (t.exponent.is_zero()) break;
        // 1 + e' = e: finite e drops by one, infinite e is unchanged.
        Ordinal e = t.exponent;
        if (e.is_finite()) e = Ordinal::from_natural(e.finite_part() - 1);
        high.push_back({e, t.coefficient});
    }
    out.height = Ordinal::from_terms(std::move(high));
    return out;
}

Height height_of(const Ordinal& g) { return height_split(g).height; }

Ordinal node_at(const Height& height, const Natural& offset) {
    return ord_add(omega_mul(height), Ordinal::from_natural(offset));
}

bool is_omega_fixed(const Ordinal& x) {
    for (const auto& t : x.terms())
        if (t.exponent.is_finite()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Text codec

namespace {

std::string natural_str(const Natural& n) { return n.str(); }

void print_ordinal(const Ordinal& a, std::string& out);

void print_exponent_atom(const Ordinal& e, std::string& out) {
    if (e.is_finite()) {
        out += natural_str(e.finite_part());
    } else if (e == Ordinal::omega()) {
        out += 'w';
    } else {
        out += '(';
        print_ordinal(e, out);
        out += ')';
    }
}

void print_ordinal(const Ordinal& a, std::string& out) {
    if (a.is_zero()) {
        out += '0';
        return;
    }
    bool first = true;
    for (const auto& t : a.terms()) {
        if (!first) out += '+';
        first = false;
        if (t.exponent.is_zero()) {
            out += natural_str(t.coefficient);
            continue;
        }
        out += 'w';
        if (t.exponent != Ordinal{1}) {
            out += '^';
            print_exponent_atom(t.exponent, out);
        }
        if (t.coefficient != 1) {
            out += '*';
            out += natural_str(t.coefficient);
        }
    }
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Ordinal parse_all() {
        Ordinal out = ordinal();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw OrdinalParseError("ordinal \"" + std::string(text_) + "\" at offset " + std::to_string(pos_) + ": " +
                                msg);
    }

    bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

    bool eat(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    Ordinal ordinal() {
        if (peek('0')) {
            ++pos_;
            return {};
        }
        std::vector<Ordinal::Term> terms;
        do {
            std::size_t start = pos_;
            Ordinal::Term t = term();
            if (!terms.empty() && !(t.exponent < terms.back().exponent)) {
                pos_ = start;
                fail("exponents must strictly decrease");
            }
            terms.push_back(std::move(t));
        } while (eat('+'));
        return Ordinal::from_terms(std::move(terms));
    }

    Natural nat() {
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("expected a natural");
        if (text_[pos_] == '0') fail("zero coefficient or leading zero");
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return Natural(std::string(text_.substr(start, pos_ - start)));
    }

    Natural coefficient_suffix() {
        if (!eat('*')) return 1;
        std::size_t start = pos_;
        Natural c = nat();
        if (c == 1) {
            pos_ = start;
            fail("non-canonical coefficient *1");
        }
        return c;
    }

    Ordinal::Term term() {
        if (!eat('w')) return {Ordinal{}, nat()};
        Ordinal exponent{1};
        if (eat('^')) {
            std::size_t start = pos_;
            exponent = atom();
            if (exponent.is_zero() || exponent == Ordinal{1}) {
                pos_ = start;
                fail("non-canonical exponent");
            }
        }
        return {exponent, coefficient_suffix()};
    }

    Ordinal atom() {
        if (eat('w')) return Ordinal::omega();
        if (eat('(')) {
            std::size_t start = pos_;
            Ordinal inner = ordinal();
            if (!eat(')')) fail("expected ')'");
            if (inner.is_finite() || inner == Ordinal::omega()) {
                pos_ = start;
                fail("non-canonical parenthesised exponent");
            }
            return inner;
        }
        return Ordinal::from_natural(nat());
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string Ordinal::str() const {
    std::string out;
    print_ordinal(*this, out);
    return out;
}

std::string to_string(const Ordinal& a) { return a.str(); }

Ordinal parse_ordinal(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace finforce
