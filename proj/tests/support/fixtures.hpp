#pragma once

#include "finforce/harness.hpp"

#include <initializer_list>
#include <utility>

namespace fx {

using namespace finforce;

inline Ordinal O(const char* s) { return parse_ordinal(s); }

inline NodeSet nodes(std::initializer_list<const char*> xs) {
    NodeSet out;
    for (auto x : xs) out.insert(O(x));
    return out;
}

inline StandardTree tree(std::initializer_list<std::pair<const char*, const char*>> child_parent) {
    NodeSet ns{Ordinal{}};
    std::map<Node, Node> parents;
    for (const auto& [c, p] : child_parent) {
        ns.insert(O(c));
        ns.insert(O(p));
        parents.emplace(O(c), O(p));
    }
    return StandardTree::from_parents(ns, parents);
}

inline TreeMap map(std::initializer_list<std::pair<const char*, const char*>> pairs) {
    TreeMap f;
    for (const auto& [x, y] : pairs) f.insert(O(x), O(y));
    return f;
}

// Levels 1 and 2: w and w+1 over the root, w*2 over w.
inline StandardTree t1() { return tree({{"w", "0"}, {"w+1", "0"}, {"w*2", "w"}}); }

inline Condition t1_condition() {
    Condition p;
    p.tree = t1();
    p.F.emplace(5, map({{"0", "0"}, {"w", "w+1"}}));
    return p;
}

}  // namespace fx
