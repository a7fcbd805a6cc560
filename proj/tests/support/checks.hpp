#pragma once

// Postcondition checks for the bijectivization steps and the lift, written
// against parent chains rather than the library's own checkers.

#include "generators.hpp"

#include <string>

namespace oracle {

using finforce::Condition;
using finforce::IndexSet;

inline NodeSet kids(const finforce::StandardTree& t, const NodeSet& X) {
    NodeSet out;
    for (const auto& [c, p] : t.parent_map())
        if (X.count(p)) out.insert(c);
    return out;
}

inline NodeSet cone(const finforce::StandardTree& t, const NodeSet& X) {
    NodeSet out;
    for (const auto& y : t.nodes())
        for (const auto& x : X)
            if (below(t, x, y)) out.insert(y);
    return out;
}

// The bullets shared by the one-level and whole-cone versions. `region` is
// ISucc(X) or Succ(X).
inline std::string shared_bullets(const Condition& p, const Condition& out, const finforce::RhoOracle& rho,
                                  const NodeSet& region) {
    if (auto v = finforce::validate_condition(out, rho)) return "output invalid: " + v->detail;
    if (!finforce::leq(out, p)) return "output not below input";
    if (out.tree.heights() != p.tree.heights()) return "heights changed";
    if (out.indices() != p.indices()) return "indices changed";
    for (const auto& z : out.tree.nodes())
        if (!p.tree.contains(z) && !region.count(z)) return "new node " + z.str() + " outside the region";
    for (const auto& [tau, g] : out.F)
        for (const auto& [z, w] : g.forward()) {
            if (p.F.at(tau).in_dom(z)) continue;
            if (!region.count(z) || !region.count(w)) return "new pair at " + z.str() + " outside the region";
        }
    return "";
}

inline std::string closure_bullet(const Condition& out, const NodeSet& X, const IndexSet& A, bool whole_cone) {
    for (auto tau : A) {
        const auto& g = out.F.at(tau);
        for (const auto& x : X) {
            auto y = g.at(x);
            if (!y || !X.count(*y)) continue;
            const NodeSet sx = whole_cone ? cone(out.tree, {x}) : kids(out.tree, {x});
            const NodeSet sy = whole_cone ? cone(out.tree, {*y}) : kids(out.tree, {*y});
            for (const auto& s : sx)
                if (!g.in_dom(s)) return "successor " + s.str() + " of " + x.str() + " not in the domain";
            for (const auto& s : sy)
                if (!g.in_ran(s)) return "successor " + s.str() + " of " + y->str() + " not in the range";
        }
    }
    return "";
}

inline std::string check_level(const Condition& p, const Condition& out, const finforce::RhoOracle& rho,
                               const NodeSet& X, const IndexSet& A) {
    const NodeSet Y = kids(out.tree, X);
    if (auto e = shared_bullets(p, out, rho, Y); !e.empty()) return e;
    for (const auto& x : X)
        if (kids(out.tree, {x}).empty()) return x.str() + " has no immediate successor";
    const auto sub = finforce::subfamily(out.F, A);
    const auto v = finforce::decide_separation(sub, Y);
    if (!finforce::is_witness(v)) return "successors not separated";
    if (!separated_tuple(raw(sub), std::get<finforce::WitnessOrder>(v).order)) return "witness order fails";
    return closure_bullet(out, X, A, false);
}

inline std::string check_cone(const Condition& p, const Condition& out, const finforce::RhoOracle& rho,
                              const NodeSet& X, const IndexSet& A) {
    if (auto e = shared_bullets(p, out, rho, cone(out.tree, X)); !e.empty()) return e;
    return closure_bullet(out, X, A, true);
}

inline std::string check_lift(const Condition& p, const finforce::LiftResult& r, const finforce::RhoOracle& rho,
                              const Height& alpha, const NodeSet& X, const IndexSet& A, const Node& b) {
    if (auto e = check_cone(p, r.cond, rho, X, A); !e.empty()) return e;
    const auto& u = r.cond.tree;
    if (!r.Y.count(b)) return "b missing from Y";
    for (const auto& y : r.Y)
        if (finforce::height_of(y) != u.max_height()) return y.str() + " is not on the top level";
    if (alpha == u.max_height()) return r.Y == X ? "" : "Y differs from X";
    NodeSet down;
    for (const auto& y : r.Y) down.insert(*dropdown(u, y, alpha));
    if (down.size() != r.Y.size()) return "drop-downs not unique";
    if (down != X) return "Y does not drop onto X";
    for (auto tau : A)
        if (!consistent(u, raw(finforce::Family{{tau, r.cond.F.at(tau)}}).at(tau), r.Y, alpha))
            return "Y not consistent for index " + std::to_string(tau);
    return "";
}

}  // namespace oracle

namespace gen {

struct LevelCase {
    Condition p;
    RhoOracle rho;
    Height alpha;
    NodeSet X;
    IndexSet A;
};

// A valid condition with a separated (X, A) on some level; below_top keeps
// alpha under the top level.
inline LevelCase level_case(std::uint64_t seed, bool below_top) {
    Rng rng(seed * 7919 + 13);
    GenBounds bounds;
    bounds.levels = 3;
    bounds.width = 4;
    bounds.indices = 4;
    bounds.steps = 24;
    bounds.rho = RhoOracle::random(seed);
    LevelCase c;
    c.rho = bounds.rho;
    c.p = gen_condition(seed, bounds);
    if (c.p.tree.heights().size() < 2) {
        const Height top = c.p.tree.max_height();
        c.p = extend_heights(c.p, {top + Ordinal{1}, top + Ordinal{2}}, c.rho);
    }
    const HeightSet ht = c.p.tree.heights();
    std::vector<Height> hs(ht.begin(), ht.end());
    if (below_top) hs.pop_back();
    c.alpha = hs[rng.below(hs.size())];
    // Extra relations on the chosen level, so X usually carries edges.
    for (int k = 0; k < 12; ++k) {
        const NodeSet lv = c.p.tree.level(c.alpha);
        const Index tau = rng.pick(c.p.indices());
        const Node x = rng.pick(lv);
        const auto px = c.p.tree.parent(x);
        const auto img = px ? c.p.F.at(tau).at(*px) : std::nullopt;
        if (!img) continue;
        std::vector<Node> ys;
        for (const auto& y : lv)
            if (c.p.tree.parent(y) == img) ys.push_back(y);
        if (ys.empty()) continue;
        if (auto q = try_link(c.p, tau, x, rng.pick(ys), c.rho)) c.p = *q;
    }
    const NodeSet level = c.p.tree.level(c.alpha);
    for (const auto& x : level)
        if (rng.chance(2, 3)) c.X.insert(x);
    if (c.X.empty()) c.X.insert(rng.pick(level));
    for (const auto& [tau, f] : c.p.F)
        if (rng.chance(3, 4)) c.A.insert(tau);
    while (!is_witness(decide_separation(subfamily(c.p.F, c.A), c.X))) {
        if (!c.A.empty() && (c.X.size() == 1 || rng.chance(1, 2))) {
            auto it = c.A.begin();
            std::advance(it, rng.below(c.A.size()));
            c.A.erase(it);
        } else {
            auto it = c.X.begin();
            std::advance(it, rng.below(c.X.size()));
            c.X.erase(it);
        }
    }
    return c;
}

}  // namespace gen
