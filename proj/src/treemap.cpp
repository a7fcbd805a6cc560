#include "finforce/treemap.hpp"

namespace finforce {

TreeMap TreeMap::from_pairs(const PairSet& pairs) {
    TreeMap f;
    for (const auto& [x, y] : pairs) f.insert(x, y);
    return f;
}

std::optional<Node> TreeMap::at(const Node& x) const {
    auto it = fwd_.find(x);
    if (it == fwd_.end()) return std::nullopt;
    return it->second;
}

std::optional<Node> TreeMap::inv(const Node& y) const {
    auto it = rev_.find(y);
    if (it == rev_.end()) return std::nullopt;
    if (it->second.size() != 1) throw std::logic_error("map is not injective at " + y.str());
    return *it->second.begin();
}

NodeSet TreeMap::dom() const {
    NodeSet out;
    for (const auto& [x, y] : fwd_) out.insert(out.end(), x);
    return out;
}

NodeSet TreeMap::ran() const {
    NodeSet out;
    for (const auto& [y, xs] : rev_) out.insert(out.end(), y);
    return out;
}

PairSet TreeMap::pairs() const {
    PairSet out;
    for (const auto& p : fwd_) out.insert(out.end(), p);
    return out;
}

void TreeMap::insert(const Node& x, const Node& y) {
    auto [it, fresh] = fwd_.emplace(x, y);
    if (!fresh) {
        if (it->second == y) return;
        throw PreconditionError("map sends " + x.str() + " to both " + it->second.str() + " and " + y.str());
    }
    rev_[y].insert(x);
}

TreeMap TreeMap::restricted_to(const NodeSet& nodes) const {
    TreeMap out;
    for (const auto& [x, y] : fwd_)
        if (nodes.count(x)) out.insert(x, y);
    return out;
}

MapFlags classify_map(const StandardTree& t, const PairSet& f) {
    MapFlags out;
    std::map<Node, Node> first_target;
    std::map<Node, Node> first_source;
    NodeSet dom;
    for (const auto& [x, y] : f) {
        if (!t.contains(x) || !t.contains(y))
            throw PreconditionError("classify_map: pair (" + x.str() + "," + y.str() + ") leaves the tree");
        dom.insert(x);
        auto [it, fresh] = first_target.emplace(x, y);
        if (!fresh && it->second != y) out.functional = false;
        auto [jt, fresh2] = first_source.emplace(y, x);
        if (!fresh2 && jt->second != x) out.injective = false;
        if (height_of(x) != height_of(y)) out.level_preserving = false;
        if (x == y && !x.is_zero()) out.fixed_point_free_off_root = false;
    }
    // a0 < a1 forces f(a0) < f(a1): compare each pair against the pairs on its ancestors.
    std::map<Node, std::vector<Node>> targets;
    for (const auto& [x, y] : f) targets[x].push_back(y);
    for (const auto& [a1, b1] : f) {
        if (!out.strictly_increasing) break;
        NodeSet below_b1;
        for (auto p = t.parent(b1); p; p = t.parent(*p)) below_b1.insert(*p);
        for (auto a0 = t.parent(a1); a0; a0 = t.parent(*a0)) {
            auto it = targets.find(*a0);
            if (it == targets.end()) continue;
            for (const auto& b0 : it->second)
                if (!below_b1.count(b0)) out.strictly_increasing = false;
        }
    }
    for (const auto& x : dom) {
        for (auto p = t.parent(x); p; p = t.parent(*p))
            if (!dom.count(*p)) out.downwards_closed = false;
    }
    out.standard = out.functional && out.strictly_increasing && out.injective && out.level_preserving &&
                   out.downwards_closed && out.fixed_point_free_off_root;
    return out;
}

bool is_standard(const StandardTree& t, const TreeMap& f) { return classify_map(t, f).standard; }

TreeMap close_map_in(const StandardTree& u, const TreeMap& f) {
    TreeMap g;
    for (const auto& [x, y] : f.forward()) {
        Node a = x;
        Node b = y;
        for (;;) {
            g.insert(a, b);
            auto pa = u.parent(a);
            auto pb = u.parent(b);
            if (!pa || !pb) break;
            a = *pa;
            b = *pb;
        }
    }
    return g;
}

TreeMap downward_close_map(const StandardTree& t, const StandardTree& u, const TreeMap& f) {
    if (!is_standard(t, f)) throw PreconditionError("downward_close_map: map is not standard on the base tree");
    if (!is_simple_extension(t, u)) throw PreconditionError("downward_close_map: target is not a simple extension");
    return close_map_in(u, f);
}

PairSet agreement_pairs(const TreeMap& f, const TreeMap& g) {
    PairSet out;
    for (const auto& [x, y] : f.forward()) {
        auto gy = g.at(x);
        if (gy && *gy == y) out.insert(out.end(), {x, y});
    }
    return out;
}

PairSet tensor_downward_closure(const StandardTree& t, const PairSet& S) {
    PairSet out;
    for (const auto& [a, b] : S) {
        if (!t.contains(a) || !t.contains(b))
            throw PreconditionError("tensor_downward_closure: pair leaves the tree");
        if (height_of(a) != height_of(b))
            throw PreconditionError("tensor_downward_closure: (" + a.str() + "," + b.str() + ") is not same-level");
        Node c = a;
        Node d = b;
        for (;;) {
            if (!out.insert({c, d}).second) break;
            auto pc = t.parent(c);
            auto pd = t.parent(d);
            if (!pc || !pd) break;
            c = *pc;
            d = *pd;
        }
    }
    return out;
}

}  // namespace finforce
