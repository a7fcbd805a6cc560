#pragma once

// Partial node maps on a standard finite tree.

#include "finforce/tree.hpp"

#include <utility>

namespace finforce {

using NodePair = std::pair<Node, Node>;
using PairSet = std::set<NodePair>;

/// A finite partial function between tree nodes. The host tree is supplied
/// per operation. Sources are unique; targets need not be, although every
/// standard function is injective.
class TreeMap {
public:
    TreeMap() = default;
    /// Throws PreconditionError when a source is repeated.
    static TreeMap from_pairs(const PairSet& pairs);

    std::optional<Node> at(const Node& x) const;
    /// The preimage of y; throws std::logic_error if y has two preimages.
    std::optional<Node> inv(const Node& y) const;
    /// f^m(x) for m = +1 or -1.
    std::optional<Node> apply(int m, const Node& x) const { return m > 0 ? at(x) : inv(x); }

    bool in_dom(const Node& x) const { return fwd_.count(x) != 0; }
    bool in_ran(const Node& y) const { return rev_.count(y) != 0; }
    NodeSet dom() const;
    NodeSet ran() const;
    PairSet pairs() const;
    const std::map<Node, Node>& forward() const { return fwd_; }
    std::size_t size() const { return fwd_.size(); }
    bool empty() const { return fwd_.empty(); }

    /// Adds x -> y. Throws if x already maps elsewhere.
    void insert(const Node& x, const Node& y);

    /// Pairs whose source lies in `nodes`.
    TreeMap restricted_to(const NodeSet& nodes) const;

    friend bool operator==(const TreeMap& a, const TreeMap& b) { return a.fwd_ == b.fwd_; }

private:
    std::map<Node, Node> fwd_;
    std::map<Node, NodeSet> rev_;
};

struct MapFlags {
    bool functional = true;
    bool strictly_increasing = true;
    bool injective = true;
    bool level_preserving = true;
    bool downwards_closed = true;
    bool fixed_point_free_off_root = true;
    bool standard = true;
};

/// Flags of a raw relation on t. Sources and targets must be nodes of t.
MapFlags classify_map(const StandardTree& t, const PairSet& f);
inline MapFlags classify_map(const StandardTree& t, const TreeMap& f) { return classify_map(t, f.pairs()); }
bool is_standard(const StandardTree& t, const TreeMap& f);

/// The downward closure of f in u, without checking preconditions.
TreeMap close_map_in(const StandardTree& u, const TreeMap& f);

/// Downward closure of a standard function on t into a simple extension u.
TreeMap downward_close_map(const StandardTree& t, const StandardTree& u, const TreeMap& f);

/// {(x,y) : f(x) = y = g(x)}.
PairSet agreement_pairs(const TreeMap& f, const TreeMap& g);

/// All same-level pairs lying below some member of S.
PairSet tensor_downward_closure(const StandardTree& t, const PairSet& S);

}  // namespace finforce
