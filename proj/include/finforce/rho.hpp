#pragma once

// The pairing function on indices. Four flavours share one type: all-zero,
// constant off the diagonal, seeded pseudo-random, and an explicit table.
// Table entries override whatever the base flavour would return.

#include "finforce/ordinal.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>

namespace finforce {

using Index = std::uint64_t;

class RhoOracle {
public:
    enum class Kind { zero, constant, random };

    RhoOracle() = default;
    static RhoOracle zero() { return {}; }
    static RhoOracle constant(const Ordinal& c);
    static RhoOracle random(std::uint64_t seed);

    /// "zero", "const:<ordinal>" or "random:<seed>".
    static RhoOracle parse(std::string_view spec);
    std::string spec() const;

    Kind kind() const { return kind_; }

    /// Symmetric, and 0 on the diagonal.
    Ordinal operator()(Index a, Index b) const;

    /// Pins rho(a,b) = rho(b,a) = v. Throws if a == b and v != 0.
    void set(Index a, Index b, const Ordinal& v);
    /// Explicit overrides, keyed with the smaller index first.
    const std::map<std::pair<Index, Index>, Ordinal>& table() const { return table_; }

private:
    Ordinal base(Index a, Index b) const;

    Kind kind_ = Kind::zero;
    Ordinal constant_;
    std::uint64_t seed_ = 0;
    std::map<std::pair<Index, Index>, Ordinal> table_;
};

}  // namespace finforce
