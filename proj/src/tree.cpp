#include "finforce/tree.hpp"

#include <algorithm>

namespace finforce {

namespace {

const NodeSet& empty_nodes() {
    static const NodeSet empty;
    return empty;
}

std::string show(const Node& x) { return x.str(); }

}  // namespace

StandardTree::StandardTree() {
    nodes_.insert(Ordinal{});
    levels_[Ordinal{}].insert(Ordinal{});
}

StandardTree StandardTree::from_parents(const NodeSet& nodes, const std::map<Node, Node>& parents) {
    StandardTree t;
    t.nodes_.clear();
    t.levels_.clear();
    for (const auto& x : nodes) {
        t.nodes_.insert(x);
        t.levels_[height_of(x)].insert(x);
    }
    for (const auto& [c, p] : parents) {
        for (const auto& x : {c, p}) {
            if (t.nodes_.insert(x).second) t.levels_[height_of(x)].insert(x);
        }
        t.link(c, p);
    }
    return t;
}

std::optional<Node> StandardTree::parent(const Node& x) const {
    auto it = parent_.find(x);
    if (it == parent_.end()) return std::nullopt;
    return it->second;
}

HeightSet StandardTree::heights() const {
    HeightSet out;
    for (const auto& [h, xs] : levels_)
        if (!h.is_zero() && !xs.empty()) out.insert(h);
    return out;
}

HeightSet StandardTree::levels() const {
    HeightSet out;
    for (const auto& [h, xs] : levels_)
        if (!xs.empty()) out.insert(h);
    return out;
}

Height StandardTree::max_height() const {
    for (auto it = levels_.rbegin(); it != levels_.rend(); ++it)
        if (!it->second.empty()) return it->first;
    return {};
}

bool StandardTree::has_level(const Height& h) const {
    auto it = levels_.find(h);
    return it != levels_.end() && !it->second.empty();
}

const NodeSet& StandardTree::level(const Height& h) const {
    auto it = levels_.find(h);
    return it == levels_.end() ? empty_nodes() : it->second;
}

const NodeSet& StandardTree::children(const Node& x) const {
    auto it = children_.find(x);
    return it == children_.end() ? empty_nodes() : it->second;
}

NodeSet StandardTree::successors(const Node& x) const {
    NodeSet out;
    std::vector<Node> stack{x};
    while (!stack.empty()) {
        Node cur = stack.back();
        stack.pop_back();
        for (const auto& c : children(cur))
            if (out.insert(c).second) stack.push_back(c);
    }
    return out;
}

std::optional<Height> StandardTree::next_height(const Height& h) const {
    for (auto it = levels_.upper_bound(h); it != levels_.end(); ++it)
        if (!it->second.empty()) return it->first;
    return std::nullopt;
}

std::optional<Height> StandardTree::prev_height(const Height& h) const {
    auto it = levels_.lower_bound(h);
    while (it != levels_.begin()) {
        --it;
        if (!it->second.empty()) return it->first;
    }
    return std::nullopt;
}

bool StandardTree::less(const Node& x, const Node& y) const {
    if (!contains(x) || !contains(y)) return false;
    const Height hx = height_of(x);
    Node cur = y;
    while (height_of(cur) > hx) {
        auto p = parent(cur);
        if (!p) return false;
        cur = *p;
    }
    return cur == x && x != y;
}

Node StandardTree::fresh_node(const Height& h, const NodeSet& avoid) const {
    const NodeSet& used = level(h);
    Natural n = 0;
    // Offsets 0..size-1 all taken: skip straight past them.
    if (!used.empty() && *used.rbegin() == node_at(h, Natural(used.size() - 1))) n = used.size();
    for (;;) {
        Node x = node_at(h, n);
        if (!used.count(x) && !avoid.count(x)) return x;
        ++n;
    }
}

void StandardTree::link(const Node& x, const Node& parent) {
    parent_[x] = parent;
    children_[parent].insert(x);
}

void StandardTree::unlink(const Node& x) {
    auto it = parent_.find(x);
    if (it == parent_.end()) return;
    auto cit = children_.find(it->second);
    if (cit != children_.end()) {
        cit->second.erase(x);
        if (cit->second.empty()) children_.erase(cit);
    }
    parent_.erase(it);
}

void StandardTree::add_node(const Node& x, const Node& parent) {
    if (nodes_.insert(x).second) levels_[height_of(x)].insert(x);
    unlink(x);
    link(x, parent);
}

void StandardTree::set_parent(const Node& x, const Node& parent) {
    unlink(x);
    link(x, parent);
}

Node StandardTree::add_fresh(const Node& parent, const Height& h) {
    Node x = fresh_node(h);
    add_node(x, parent);
    return x;
}

// ---------------------------------------------------------------------------

Verdict validate_tree(const StandardTree& t) {
    if (!t.contains(Ordinal{})) return Violation{"tree(1)", "0 is not a node"};
    for (const auto& x : t.nodes()) {
        if (!x.is_zero() && height_of(x).is_zero())
            return Violation{"tree(1)", "node " + show(x) + " is a nonzero natural"};
    }
    if (t.parent(Ordinal{})) return Violation{"tree(3)", "root 0 has a parent"};
    const HeightSet lv = t.levels();
    for (const auto& x : t.nodes()) {
        if (x.is_zero()) continue;
        auto p = t.parent(x);
        if (!p) return Violation{"tree(4)", "node " + show(x) + " has nothing below it on level 0"};
        if (!t.contains(*p)) return Violation{"tree(2)", "parent " + show(*p) + " of " + show(x) + " is not a node"};
        const Height hx = height_of(x);
        const Height hp = height_of(*p);
        if (!(hp < hx))
            return Violation{"tree(3)", show(*p) + " below " + show(x) + " but its height is not smaller"};
        auto below = t.prev_height(hx);
        if (!below || *below != hp)
            return Violation{"tree(4)", "node " + show(x) + " skips level " + (below ? below->str() : "?") +
                                            " (parent " + show(*p) + ")"};
    }
    // Re-derive: every node reaches the root and meets every lower level on the way.
    for (const auto& x : t.nodes()) {
        auto want = lv.begin();
        std::vector<Height> seen;
        Node cur = x;
        std::size_t steps = 0;
        for (;;) {
            seen.push_back(height_of(cur));
            auto p = t.parent(cur);
            if (!p) break;
            cur = *p;
            if (++steps > t.size()) return Violation{"tree(2)", "cycle through " + show(x)};
        }
        if (!cur.is_zero()) return Violation{"tree(4)", "node " + show(x) + " does not reach the root"};
        std::reverse(seen.begin(), seen.end());
        for (const auto& h : seen) {
            if (want == lv.end() || *want != h)
                return Violation{"tree(4)", "node " + show(x) + " misses an occupied level below it"};
            ++want;
        }
    }
    return std::nullopt;
}

Node restrict(const StandardTree& t, const Node& x, const Height& b) {
    if (!t.contains(x)) throw PreconditionError("restrict: " + show(x) + " is not a node");
    if (!t.has_level(b)) throw PreconditionError("restrict: level " + b.str() + " is not occupied");
    if (height_of(x) < b) throw PreconditionError("restrict: level " + b.str() + " is above " + show(x));
    Node cur = x;
    while (height_of(cur) > b) cur = *t.parent(cur);
    return cur;
}

NodeSet restrict_set(const StandardTree& t, const NodeSet& X, const Height& b) {
    NodeSet out;
    for (const auto& x : X) out.insert(restrict(t, x, b));
    return out;
}

Node meet(const StandardTree& t, const Node& x, const Node& y) {
    if (!t.contains(x) || !t.contains(y)) throw PreconditionError("meet: argument is not a node");
    NodeSet below_x;
    for (Node cur = x;;) {
        below_x.insert(cur);
        auto p = t.parent(cur);
        if (!p) break;
        cur = *p;
    }
    for (Node cur = y;;) {
        if (below_x.count(cur)) return cur;
        auto p = t.parent(cur);
        if (!p) break;
        cur = *p;
    }
    return Ordinal{};
}

Height common_level(const StandardTree& t, const NodeSet& X) {
    if (X.empty()) throw PreconditionError("expected a nonempty level set");
    const Height h = height_of(*X.begin());
    for (const auto& x : X) {
        if (!t.contains(x)) throw PreconditionError(show(x) + " is not a node");
        if (height_of(x) != h) throw PreconditionError("set mixes levels " + h.str() + " and " + height_of(x).str());
    }
    return h;
}

bool unique_dropdowns(const StandardTree& t, const NodeSet& X, const Height& b) {
    if (X.empty()) return true;
    const Height a = common_level(t, X);
    if (!(b < a) || !t.has_level(b))
        throw PreconditionError("unique_dropdowns: " + b.str() + " is not an occupied level below " + a.str());
    NodeSet seen;
    for (const auto& x : X)
        if (!seen.insert(restrict(t, x, b)).second) return false;
    return true;
}

NodeSet downward_closure(const StandardTree& t, const NodeSet& Y) {
    NodeSet out;
    for (const auto& y : Y) {
        if (!t.contains(y)) throw PreconditionError("downward_closure: " + show(y) + " is not a node");
        for (Node cur = y;;) {
            if (!out.insert(cur).second) break;
            auto p = t.parent(cur);
            if (!p) break;
            cur = *p;
        }
    }
    return out;
}

bool is_extension(const StandardTree& t, const StandardTree& u) {
    for (const auto& x : t.nodes())
        if (!u.contains(x)) return false;
    for (const auto& [c, p] : t.parent_map())
        if (!u.less(p, c)) return false;
    // End-extension: the order of u restricted to t is the order of t.
    for (const auto& x : t.nodes()) {
        for (Node cur = x;;) {
            auto p = u.parent(cur);
            if (!p) break;
            cur = *p;
            if (t.contains(cur) && !t.less(cur, x))
                throw std::logic_error("is_extension: " + show(cur) + " <_u " + show(x) + " but not in t");
        }
    }
    return true;
}

bool is_simple_extension(const StandardTree& t, const StandardTree& u) {
    if (!is_extension(t, u)) return false;
    const HeightSet ht = t.heights();
    for (const auto& x : u.nodes()) {
        if (t.contains(x)) continue;
        if (ht.count(height_of(x))) return false;
    }
    if (ht.empty()) return true;
    const Height top = *ht.rbegin();
    for (const auto& a : u.heights()) {
        if (ht.count(a) || !(a < top)) continue;
        const Height b = *ht.upper_bound(a);
        if (!unique_dropdowns(u, t.level(b), a)) return false;
    }
    return true;
}

StandardTree simple_extend(const StandardTree& t, const HeightSet& B) {
    if (B.count(Ordinal{})) throw PreconditionError("simple_extend: 0 is not a valid height");
    for (const auto& h : t.heights())
        if (!B.count(h)) throw PreconditionError("simple_extend: height " + h.str() + " of the tree is missing");
    StandardTree u = t;
    for (const auto& a : B) {
        if (u.has_level(a)) continue;
        const Height top = u.max_height();
        if (top < a) {
            const Node x = *u.level(top).begin();
            u.add_fresh(x, a);
            continue;
        }
        const Height d = *u.next_height(a);
        const NodeSet above = u.level(d);
        for (const auto& x : above) {
            const Node below = *u.parent(x);
            const Node xm = u.fresh_node(a);
            u.add_node(xm, below);
            u.set_parent(x, xm);
        }
    }
    return u;
}

bool is_normal(const StandardTree& t) {
    // reach[x] = heights occupied by some successor of x.
    std::map<Node, HeightSet> reach;
    for (const auto& y : t.nodes()) {
        const Height hy = height_of(y);
        for (auto p = t.parent(y); p; p = t.parent(*p)) reach[*p].insert(hy);
    }
    const HeightSet ht = t.heights();
    for (const auto& x : t.nodes()) {
        const HeightSet& r = reach[x];
        for (auto it = ht.upper_bound(height_of(x)); it != ht.end(); ++it)
            if (!r.count(*it)) return false;
    }
    return true;
}

bool is_hausdorff(const StandardTree& t) {
    for (const auto& d : t.heights()) {
        if (!d.is_limit()) continue;
        const Height b = *t.prev_height(d);
        if (!unique_dropdowns(t, t.level(d), b)) return false;
    }
    return true;
}

StandardTree normalize(const StandardTree& t) {
    StandardTree u = t;
    for (const auto& h : t.levels()) {
        auto next = u.next_height(h);
        if (!next) break;
        const NodeSet here = u.level(h);
        for (const auto& x : here)
            if (u.children(x).empty()) u.add_fresh(x, *next);
    }
    return u;
}

StandardTree fan_out(const StandardTree& t, const NodeSet& X, std::size_t n) {
    if (X.empty()) return t;
    if (n == 0) throw PreconditionError("fan_out: n must be positive");
    const Height a = common_level(t, X);
    auto next = t.next_height(a);
    if (!next) throw PreconditionError("fan_out: level " + a.str() + " is the top level");
    for (const auto& x : X)
        if (t.children(x).size() > n)
            throw PreconditionError("fan_out: " + show(x) + " already has more than " + std::to_string(n) +
                                    " immediate successors");
    StandardTree u = t;
    for (const auto& x : X)
        while (u.children(x).size() < n) u.add_fresh(x, *next);
    return u;
}

}  // namespace finforce
