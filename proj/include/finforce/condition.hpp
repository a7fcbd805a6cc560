#pragma once

// Forcing conditions: a standard finite tree with an indexed family of
// standard functions that is rho-separated on every level. Every
// constructive operation here returns a condition below its input and
// re-checks that claim before returning.

#include "finforce/separation.hpp"

#include <vector>

namespace finforce {

struct Condition {
    StandardTree tree;
    Family F;

    IndexSet indices() const;
    friend bool operator==(const Condition& a, const Condition& b) { return a.tree == b.tree && a.F == b.F; }
};

Verdict validate_condition(const Condition& p, const RhoOracle& rho);

/// q <= p: q extends p.
bool leq(const Condition& q, const Condition& p);
/// Same, but says which clause fails.
Verdict explain_leq(const Condition& q, const Condition& p);

/// Throws std::logic_error unless `out` is a valid condition below `in`.
void check_extension(const Condition& out, const Condition& in, const RhoOracle& rho, const std::string& op);

/// Simple-extends the tree to ht[T] ∪ Z and downward-closes every map.
Condition extend_heights(const Condition& p, const HeightSet& Z, const RhoOracle& rho);

/// Ensures ht(x)+1 is a level and x has at least k immediate successors.
Condition widen_node(const Condition& p, const Node& x, std::size_t k, const RhoOracle& rho);

/// Inserts a successor level just below every limit level.
Condition hausdorffize(const Condition& p, const RhoOracle& rho);

/// Normalizes the tree, keeping heights and maps.
Condition normalize_condition(const Condition& p, const RhoOracle& rho);

/// Adds level alpha and a node on it above x.
Condition grow_node(const Condition& p, const Node& x, const Height& alpha, const RhoOracle& rho);

/// Adds index s with the empty map if it is new.
Condition add_index(const Condition& p, Index s);

/// Puts x into both the domain and the range of F(s).
Condition augment(const Condition& p, Index s, const Node& x, const RhoOracle& rho);

/// Pads every x in X to exactly n immediate successors, maps unchanged.
Condition fan_out_condition(const Condition& p, const NodeSet& X, std::size_t n, const RhoOracle& rho);

/// In the last condition of a descending trace, every agreement pair of
/// F(g), F(t) lies below an agreement pair from the first condition where
/// both indices occur. The closure is taken in the last condition's tree.
/// Throws unless consecutive entries satisfy order clauses (a) and (b).
bool strong_ad_containment(const std::vector<Condition>& trace, Index g, Index t);

}  // namespace finforce
