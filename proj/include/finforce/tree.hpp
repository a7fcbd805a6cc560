#pragma once

// Standard finite trees.
//
// A tree is stored as a parent map: every non-root node points at its
// drop-down on the next occupied level below it. The strict order is the
// transitive closure of that map. All labels are ordinals; a node of height
// h is an ordinal in [w*h, w*(h+1)).

#include "finforce/errors.hpp"
#include "finforce/ordinal.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace finforce {

using NodeSet = std::set<Node>;
using HeightSet = std::set<Height>;

class StandardTree {
public:
    /// The one-node tree {0}.
    StandardTree();

    /// Builds from raw data without checking; call validate_tree afterwards.
    /// Nodes missing from `nodes` but named in `parents` are added.
    static StandardTree from_parents(const NodeSet& nodes, const std::map<Node, Node>& parents);

    bool contains(const Node& x) const { return nodes_.count(x) != 0; }
    const NodeSet& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    const std::map<Node, Node>& parent_map() const { return parent_; }

    /// Immediate-level parent; nullopt for the root or unknown nodes.
    std::optional<Node> parent(const Node& x) const;

    /// ht[T]: occupied heights, excluding 0.
    HeightSet heights() const;
    /// ht[T] together with 0.
    HeightSet levels() const;
    /// Largest element of ht[T]; 0 if the tree is just the root.
    Height max_height() const;
    bool has_level(const Height& h) const;

    /// T_h (empty when unoccupied).
    const NodeSet& level(const Height& h) const;

    /// ISucc_T(x): the nodes whose parent is x.
    const NodeSet& children(const Node& x) const;
    /// Succ_T(x): all nodes strictly above x.
    NodeSet successors(const Node& x) const;

    /// Least element of ht[T] strictly above h, if any.
    std::optional<Height> next_height(const Height& h) const;
    /// Largest element of ht[T] ∪ {0} strictly below h, if any.
    std::optional<Height> prev_height(const Height& h) const;

    bool less(const Node& x, const Node& y) const;
    bool leq(const Node& x, const Node& y) const { return x == y || less(x, y); }
    bool comparable(const Node& x, const Node& y) const { return leq(x, y) || leq(y, x); }

    /// Least node label at height h not already used (and not in `avoid`).
    Node fresh_node(const Height& h, const NodeSet& avoid = {}) const;

    // Unchecked mutators used by the constructions.
    void add_node(const Node& x, const Node& parent);
    void set_parent(const Node& x, const Node& parent);
    /// Adds a fresh node at height h with the given parent and returns it.
    Node add_fresh(const Node& parent, const Height& h);

    friend bool operator==(const StandardTree& a, const StandardTree& b) {
        return a.nodes_ == b.nodes_ && a.parent_ == b.parent_;
    }

private:
    void link(const Node& x, const Node& parent);
    void unlink(const Node& x);

    NodeSet nodes_;
    std::map<Node, Node> parent_;
    std::map<Node, NodeSet> children_;
    std::map<Height, NodeSet> levels_;
};

/// Checks the four clauses of a standard finite tree.
Verdict validate_tree(const StandardTree& t);

/// x restricted to height b: its unique ancestor on level b.
Node restrict(const StandardTree& t, const Node& x, const Height& b);
NodeSet restrict_set(const StandardTree& t, const NodeSet& X, const Height& b);

/// Largest common lower bound.
Node meet(const StandardTree& t, const Node& x, const Node& y);

/// Common height of X; throws on mixed levels or empty X.
Height common_level(const StandardTree& t, const NodeSet& X);

/// True iff x -> x restricted to b is injective on X.
bool unique_dropdowns(const StandardTree& t, const NodeSet& X, const Height& b);

NodeSet downward_closure(const StandardTree& t, const NodeSet& Y);

/// u extends t: t ⊆ u and the order of t is contained in the order of u.
bool is_extension(const StandardTree& t, const StandardTree& u);
bool is_simple_extension(const StandardTree& t, const StandardTree& u);

/// A simple extension with ht[U] = B, inserting one height at a time.
StandardTree simple_extend(const StandardTree& t, const HeightSet& B);

bool is_normal(const StandardTree& t);
bool is_hausdorff(const StandardTree& t);

/// Normal extension with the same heights.
StandardTree normalize(const StandardTree& t);

/// Pads every x in X up to exactly n immediate successors.
StandardTree fan_out(const StandardTree& t, const NodeSet& X, std::size_t n);

}  // namespace finforce
