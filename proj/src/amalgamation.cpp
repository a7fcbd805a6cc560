#include "finforce/amalgamation.hpp"

#include <deque>

namespace finforce {

namespace {

StandardTree below(const StandardTree& t, const Height& h) {
    NodeSet nodes;
    std::map<Node, Node> parents;
    for (const auto& x : t.nodes()) {
        if (!(height_of(x) < h)) continue;
        nodes.insert(x);
        if (auto p = t.parent(x)) parents.emplace(x, *p);
    }
    return StandardTree::from_parents(nodes, parents);
}

Height top_of(const StandardTree& t) {
    HeightSet ht = t.heights();
    return ht.empty() ? Height{} : *ht.rbegin();
}

Node down_to(const StandardTree& t, const Node& x, const Height& h) {
    return h.is_zero() ? Node{} : restrict(t, x, h);
}

// Closure of `seed` under F(tau)^{+-1}, tau in A.
NodeSet closure(const Family& F, const IndexSet& A, const Node& seed) {
    NodeSet out{seed};
    std::deque<Node> queue{seed};
    while (!queue.empty()) {
        Node x = queue.front();
        queue.pop_front();
        for (auto tau : A) {
            for (int m : {1, -1}) {
                auto y = F.at(tau).apply(m, x);
                if (y && out.insert(*y).second) queue.push_back(*y);
            }
        }
    }
    return out;
}

template <class K>
bool is_bijection(const std::map<K, K>& m, const std::set<K>& from, const std::set<K>& to) {
    if (m.size() != from.size()) return false;
    std::set<K> seen;
    for (const auto& [a, b] : m) {
        if (!from.count(a) || !to.count(b) || !seen.insert(b).second) return false;
    }
    return seen.size() == to.size();
}

}  // namespace

Verdict validate_matched_pair(const MatchedPair& mp, const RhoOracle& rho) {
    const StandardTree& TA = mp.pA.tree;
    const StandardTree& TB = mp.pB.tree;
    if (auto v = validate_condition(mp.pA, rho)) return Violation{"matched(pA)", v->clause + ": " + v->detail};
    if (auto v = validate_condition(mp.pB, rho)) return Violation{"matched(pB)", v->clause + ": " + v->detail};
    if (!is_omega_fixed(mp.alpha) || !is_omega_fixed(mp.beta) || !(mp.alpha < mp.beta))
        return Violation{"matched(1)", "need omega-fixed alpha < beta"};
    if (!TA.heights().count(mp.alpha)) return Violation{"matched(1)", "alpha is not a level of pA"};
    if (!TB.heights().count(mp.beta)) return Violation{"matched(1)", "beta is not a level of pB"};
    if (!is_normal(TA) || !is_normal(TB)) return Violation{"matched(normal)", "trees must be normal"};
    if (!mp.pA.F.count(0) || !mp.pB.F.count(0)) return Violation{"matched(root index)", "0 must be an index of both"};
    if (!TA.contains(mp.xA) || height_of(mp.xA) < mp.alpha) return Violation{"matched(x)", "xA must sit at or above alpha"};
    if (!TB.contains(mp.xB) || height_of(mp.xB) < mp.beta) return Violation{"matched(x)", "xB must sit at or above beta"};

    if (below(TA, mp.alpha) != mp.common || below(TB, mp.beta) != mp.common)
        return Violation{"matched(4a)", "trees do not agree below alpha and beta"};
    for (const auto& x : TA.nodes())
        if (!(x < mp.beta)) return Violation{"matched(4a)", x.str() + " of pA is not below beta"};

    if (!is_bijection(mp.iso_nodes, TA.nodes(), TB.nodes())) return Violation{"matched(4b)", "node map is not a bijection"};
    for (const auto& [x, y] : mp.iso_nodes) {
        if (mp.common.contains(x) && x != y) return Violation{"matched(4b)", "node map moves " + x.str()};
        auto px = TA.parent(x);
        auto py = TB.parent(y);
        if (px.has_value() != py.has_value() || (px && mp.iso_nodes.at(*px) != *py))
            return Violation{"matched(4b)", "node map breaks the order at " + x.str()};
    }
    if (mp.iso_nodes.at(mp.xA) != mp.xB) return Violation{"matched(4c)", "xA is not sent to xB"};

    const IndexSet dA = mp.pA.indices();
    const IndexSet dB = mp.pB.indices();
    IndexSet both;
    for (auto t : dA)
        if (dB.count(t)) both.insert(t);
    if (both != mp.A) return Violation{"matched(4d)", "shared indices differ from A"};
    if (!is_bijection(mp.iso_indices, dA, dB)) return Violation{"matched(4e)", "index map is not a bijection"};
    for (auto t : mp.A)
        if (mp.iso_indices.at(t) != t) return Violation{"matched(4e)", "index map moves " + std::to_string(t)};

    for (const auto& [tau, f] : mp.pA.F) {
        const TreeMap& g = mp.pB.F.at(mp.iso_indices.at(tau));
        for (const auto& x : TA.nodes()) {
            const Node fx = mp.iso_nodes.at(x);
            for (int m : {1, -1}) {
                auto a = f.apply(m, x);
                auto b = g.apply(m, fx);
                if (a.has_value() != b.has_value() || (a && mp.iso_nodes.at(*a) != *b))
                    return Violation{"matched(4f)", "F(" + std::to_string(tau) + ") not transported at " + x.str()};
            }
        }
    }

    for (auto a : mp.A)
        for (auto b : mp.A)
            if (!(rho(a, b) < mp.alpha)) return Violation{"matched(rho)", "rho on A reaches alpha"};
    const Height maxT = top_of(mp.common);
    for (auto z : dA) {
        if (mp.A.count(z)) continue;
        for (auto t : dB) {
            if (mp.A.count(t)) continue;
            Height need = maxT;
            for (auto g : mp.A) need = std::max(need, std::min(rho(z, g), rho(t, g)));
            if (rho(z, t) < need)
                return Violation{"matched(rho)", "rho(" + std::to_string(z) + "," + std::to_string(t) + ") too small"};
        }
    }
    return std::nullopt;
}

MatchedPair build_matched_pair(const Condition& p, const Height& alpha, const Height& beta, const Node& x,
                               Index fresh_index_base, RhoOracle& rho, const std::optional<IndexSet>& shared) {
    if (auto v = validate_condition(p, rho)) throw PreconditionError("build_matched_pair: invalid condition: " + v->detail);
    if (!is_normal(p.tree)) throw PreconditionError("build_matched_pair: tree is not normal");
    if (!p.tree.heights().count(alpha)) throw PreconditionError("build_matched_pair: alpha is not a level of the tree");
    if (!is_omega_fixed(alpha) || !is_omega_fixed(beta)) throw PreconditionError("build_matched_pair: alpha and beta must be omega-fixed");
    if (!(alpha < beta)) throw PreconditionError("build_matched_pair: need alpha < beta");
    for (const auto& n : p.tree.nodes())
        if (!(n < beta)) throw PreconditionError("build_matched_pair: node " + n.str() + " is not below beta");
    if (!p.F.count(0)) throw PreconditionError("build_matched_pair: 0 must be an index");
    if (!p.tree.contains(x) || height_of(x) < alpha) throw PreconditionError("build_matched_pair: x must sit at or above alpha");

    MatchedPair mp;
    mp.alpha = alpha;
    mp.beta = beta;
    mp.pA = p;
    mp.xA = x;
    mp.common = below(p.tree, alpha);

    if (shared) {
        mp.A = *shared;
        if (!mp.A.count(0)) throw PreconditionError("build_matched_pair: shared indices must contain 0");
        for (auto t : mp.A)
            if (!p.F.count(t)) throw PreconditionError("build_matched_pair: shared index " + std::to_string(t) + " unknown");
        for (auto a : mp.A)
            for (auto b : mp.A)
                if (!(rho(a, b) < alpha)) throw PreconditionError("build_matched_pair: rho on shared indices reaches alpha");
    } else {
        mp.A = {0};
        for (const auto& [t, f] : p.F) {
            bool ok = true;
            for (auto a : mp.A) ok = ok && rho(t, a) < alpha;
            if (ok) mp.A.insert(t);
        }
    }

    auto shift = [&](const Height& h) { return h < alpha ? h : beta + ord_sub_left(h, alpha); };
    for (const auto& n : p.tree.nodes()) {
        const auto [h, off] = height_split(n);
        mp.iso_nodes.emplace(n, node_at(shift(h), off));
    }
    Index next = fresh_index_base;
    for (const auto& [t, f] : p.F) {
        if (mp.A.count(t)) {
            mp.iso_indices.emplace(t, t);
            continue;
        }
        if (p.F.count(next)) throw PreconditionError("build_matched_pair: fresh index " + std::to_string(next) + " is taken");
        mp.iso_indices.emplace(t, next++);
    }

    NodeSet nodes;
    std::map<Node, Node> parents;
    for (const auto& [c, par] : p.tree.parent_map()) parents.emplace(mp.iso_nodes.at(c), mp.iso_nodes.at(par));
    for (const auto& [a, b] : mp.iso_nodes) nodes.insert(b);
    mp.pB.tree = StandardTree::from_parents(nodes, parents);
    for (const auto& [t, f] : p.F) {
        TreeMap g;
        for (const auto& [a, b] : f.forward()) g.insert(mp.iso_nodes.at(a), mp.iso_nodes.at(b));
        mp.pB.F.emplace(mp.iso_indices.at(t), std::move(g));
    }
    mp.xB = mp.iso_nodes.at(x);

    // Copies see shifted rho among themselves and against the shared indices.
    for (const auto& [s, gs] : mp.iso_indices) {
        for (const auto& [t, gt] : mp.iso_indices) {
            if (s >= t || (mp.A.count(s) && mp.A.count(t))) continue;
            rho.set(gs, gt, shift(rho(s, t)));
        }
    }
    const Height maxT = top_of(mp.common);
    for (const auto& [z, gz] : mp.iso_indices) {
        if (mp.A.count(z)) continue;
        for (const auto& [t, gt] : mp.iso_indices) {
            if (mp.A.count(t)) continue;
            Height v = maxT;
            for (auto g : mp.A) v = std::max(v, std::min(rho(z, g), rho(gt, g)));
            rho.set(z, gt, v);
        }
    }

    if (auto v = validate_matched_pair(mp, rho))
        throw PreconditionError("build_matched_pair: " + v->clause + ": " + v->detail);
    return mp;
}

AmalgamationResult amalgamate_traced(const MatchedPair& mp, const RhoOracle& rho) {
    if (auto v = validate_matched_pair(mp, rho)) throw PreconditionError("amalgamate: " + v->clause + ": " + v->detail);
    const StandardTree& TA = mp.pA.tree;
    const StandardTree& TB = mp.pB.tree;
    const Height maxT = top_of(mp.common);
    AmalgamationRecord rec;

    std::map<Node, Node> back;
    for (const auto& [a, b] : mp.iso_nodes) back.emplace(b, a);

    rec.X_alpha = closure(mp.pA.F, mp.A, restrict(TA, mp.xA, mp.alpha));
    rec.X_beta = closure(mp.pB.F, mp.A, restrict(TB, mp.xB, mp.beta));
    NodeSet image;
    for (const auto& z : rec.X_alpha) image.insert(mp.iso_nodes.at(z));
    if (image != rec.X_beta) throw std::logic_error("amalgamate: closures are not matched by the node map");

    // Fresh chains above the common part, one per unmatched node on level beta.
    StandardTree tplus = TA;
    std::vector<Height> upper;
    for (const auto& h : TA.heights())
        if (!(h < mp.alpha)) upper.push_back(h);
    for (const auto& y : TB.level(mp.beta)) {
        if (rec.X_beta.count(y)) continue;
        Node cur = down_to(TB, y, maxT);
        auto& chain = rec.chains[y];
        for (const auto& h : upper) {
            cur = tplus.add_fresh(cur, h);
            chain.push_back(cur);
        }
    }
    for (const auto& n : tplus.nodes())
        if (!TA.contains(n)) rec.C.insert(n);

    const Height top = TA.max_height();
    rec.z_alpha = mp.xA;
    if (height_of(mp.xA) != top) {
        for (const auto& z : TA.level(top)) {
            if (TA.less(mp.xA, z)) {
                rec.z_alpha = z;
                break;
            }
        }
    }

    const Condition start{tplus, mp.pA.F};
    check_extension(start, mp.pA, rho, "amalgamate");
    LiftResult lift = lift_with_support(start, mp.alpha, rec.X_alpha, mp.A, rec.z_alpha, rho);
    rec.lifted = lift.cond;
    rec.X_alpha_plus = lift.Y;
    const StandardTree& U = rec.lifted.tree;
    for (const auto& h : U.heights()) {
        if (h < mp.alpha) continue;
        NodeSet s = restrict_set(U, rec.X_alpha_plus, h);
        rec.S.insert(s.begin(), s.end());
    }
    for (const auto& n : U.nodes())
        if (!(height_of(n) < mp.alpha) && !rec.S.count(n) && !rec.C.count(n)) rec.D.insert(n);

    // Glue pB on top of U.
    StandardTree W = U;
    for (const auto& y : TB.nodes()) {
        if (height_of(y) < mp.beta) continue;
        if (height_of(y) != mp.beta) {
            W.add_node(y, *TB.parent(y));
            continue;
        }
        if (!rec.X_beta.count(y)) {
            W.add_node(y, rec.chains.at(y).back());
            continue;
        }
        const Node src = back.at(y);
        std::optional<Node> under;
        for (const auto& u : rec.X_alpha_plus)
            if (U.leq(src, u)) under = u;
        if (!under) throw std::logic_error("amalgamate: nothing in the lifted set above " + src.str());
        W.add_node(y, *under);
    }

    Condition out;
    out.tree = W;
    out.F = rec.lifted.F;
    for (const auto& [tau, f] : mp.pB.F) {
        TreeMap closed = close_map_in(W, f);
        auto it = out.F.find(tau);
        if (it == out.F.end()) {
            out.F.emplace(tau, std::move(closed));
            continue;
        }
        for (const auto& [a, b] : closed.forward()) {
            auto cur = it->second.at(a);
            if (cur && *cur != b)
                throw std::logic_error("amalgamate: maps for shared index " + std::to_string(tau) + " disagree at " + a.str());
            if (!cur) it->second.insert(a, b);
        }
    }

    if (auto v = validate_condition(out, rho)) throw std::logic_error("amalgamate: result invalid, " + v->clause + ": " + v->detail);
    if (auto v = explain_leq(out, mp.pA)) throw std::logic_error("amalgamate: not below pA, " + v->clause + ": " + v->detail);
    if (auto v = explain_leq(out, mp.pB)) throw std::logic_error("amalgamate: not below pB, " + v->clause + ": " + v->detail);
    if (!out.tree.less(mp.xA, mp.xB)) throw std::logic_error("amalgamate: xA is not below xB");
    return {std::move(out), std::move(rec)};
}

Condition amalgamate(const MatchedPair& mp, const RhoOracle& rho) { return amalgamate_traced(mp, rho).cond; }

}  // namespace finforce
