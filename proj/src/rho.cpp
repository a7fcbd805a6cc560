#include "finforce/rho.hpp"
#include "finforce/errors.hpp"

#include <charconv>

namespace finforce {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::pair<Index, Index> key(Index a, Index b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

RhoOracle RhoOracle::constant(const Ordinal& c) {
    RhoOracle r;
    r.kind_ = Kind::constant;
    r.constant_ = c;
    return r;
}

RhoOracle RhoOracle::random(std::uint64_t seed) {
    RhoOracle r;
    r.kind_ = Kind::random;
    r.seed_ = seed;
    return r;
}

RhoOracle RhoOracle::parse(std::string_view spec) {
    if (spec == "zero") return zero();
    if (spec.substr(0, 6) == "const:") return constant(parse_ordinal(spec.substr(6)));
    if (spec.substr(0, 7) == "random:") {
        auto digits = spec.substr(7);
        std::uint64_t seed = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty())
            throw PreconditionError("bad rho seed in \"" + std::string(spec) + "\"");
        return random(seed);
    }
    throw PreconditionError("unknown rho spec \"" + std::string(spec) + "\" (want zero, const:<ord>, random:<seed>)");
}

std::string RhoOracle::spec() const {
    switch (kind_) {
        case Kind::zero: return "zero";
        case Kind::constant: return "const:" + constant_.str();
        case Kind::random: return "random:" + std::to_string(seed_);
    }
    return "zero";
}

Ordinal RhoOracle::base(Index a, Index b) const {
    switch (kind_) {
        case Kind::zero: return {};
        case Kind::constant: return constant_;
        case Kind::random: {
            auto [lo, hi] = key(a, b);
            std::uint64_t h = splitmix(seed_ ^ splitmix(lo * 0x100000001b3ULL + hi));
            // Mostly small naturals, sometimes w or w+k.
            std::uint64_t small = h % 7;
            if ((h >> 8) % 8 == 0) return Ordinal::omega() + Ordinal{small};
            return Ordinal{small};
        }
    }
    return {};
}

Ordinal RhoOracle::operator()(Index a, Index b) const {
    if (a == b) return {};
    auto it = table_.find(key(a, b));
    if (it != table_.end()) return it->second;
    return base(a, b);
}

void RhoOracle::set(Index a, Index b, const Ordinal& v) {
    if (a == b) {
        if (!v.is_zero()) throw PreconditionError("rho must vanish on the diagonal");
        return;
    }
    table_[key(a, b)] = v;
}

}  // namespace finforce
