#include "finforce/bijectivize.hpp"

#include <algorithm>

namespace finforce {

namespace {

std::vector<Node> sorted(const NodeSet& s) { return {s.begin(), s.end()}; }

NodeSet minus(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

bool subset(const NodeSet& a, const NodeSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

NodeSet children_of(const StandardTree& t, const NodeSet& X) {
    NodeSet out;
    for (const auto& x : X) out.insert(t.children(x).begin(), t.children(x).end());
    return out;
}

NodeSet successors_of(const StandardTree& t, const NodeSet& X) {
    NodeSet out;
    for (const auto& x : X) {
        NodeSet s = t.successors(x);
        out.insert(s.begin(), s.end());
    }
    return out;
}

NodeSet dom_in(const TreeMap& f, const NodeSet& s) {
    NodeSet out;
    for (const auto& x : s)
        if (f.in_dom(x)) out.insert(x);
    return out;
}

NodeSet ran_in(const TreeMap& f, const NodeSet& s) {
    NodeSet out;
    for (const auto& x : s)
        if (f.in_ran(x)) out.insert(x);
    return out;
}

void require_level_set(const Condition& p, const Height& alpha, const NodeSet& X, const IndexSet& A,
                       const std::string& op) {
    if (!p.tree.has_level(alpha) || alpha.is_zero()) throw PreconditionError(op + ": alpha must be a level of the tree");
    if (X.empty()) throw PreconditionError(op + ": X is empty");
    for (const auto& x : X)
        if (!p.tree.contains(x) || height_of(x) != alpha)
            throw PreconditionError(op + ": " + x.str() + " is not on level alpha");
    for (auto tau : A)
        if (!p.F.count(tau)) throw PreconditionError(op + ": index " + std::to_string(tau) + " is not in the family");
    auto verdict = decide_separation(subfamily(p.F, A), X);
    if (!is_witness(verdict)) throw PreconditionError(op + ": subfamily not separated on X: " + to_string(verdict));
}

Verdict common_bullets(const Condition& p, const Condition& out, const RhoOracle& rho, const NodeSet& cone,
                       const std::string& tag) {
    if (auto v = validate_condition(out, rho)) return Violation{tag + "(1)", v->clause + ": " + v->detail};
    if (auto v = explain_leq(out, p)) return Violation{tag + "(1)", v->clause + ": " + v->detail};
    if (out.tree.heights() != p.tree.heights()) return Violation{tag + "(2)", "heights changed"};
    if (out.indices() != p.indices()) return Violation{tag + "(2)", "index domain changed"};
    for (const auto& z : out.tree.nodes())
        if (!p.tree.contains(z) && !cone.count(z)) return Violation{tag + "(3)", "new node " + z.str() + " outside the cone"};
    for (const auto& [tau, g] : out.F) {
        const TreeMap& f = p.F.at(tau);
        for (const auto& [z, w] : g.forward()) {
            if (f.in_dom(z)) continue;
            if (!cone.count(z) || !cone.count(w))
                return Violation{tag + "(5)", "F(" + std::to_string(tau) + ") gains " + z.str() + " outside the cone"};
        }
    }
    return std::nullopt;
}

}  // namespace

BijectivizeResult bijectivize_level_traced(const Condition& p, const Height& alpha, const NodeSet& X,
                                           const IndexSet& A, const RhoOracle& rho) {
    require_level_set(p, alpha, X, A, "bijectivize_level");
    if (alpha == p.tree.max_height()) throw PreconditionError("bijectivize_level: alpha is the top level");

    BijectivizeRecord rec;
    rec.alpha = alpha;
    rec.beta = *p.tree.next_height(alpha);
    rec.order = std::get<WitnessOrder>(decide_separation(subfamily(p.F, A), X)).order;
    const std::size_t q = rec.order.size();
    std::size_t pb = 1;
    for (const auto& x : X) pb = std::max(pb, p.tree.children(x).size());
    rec.block = pb;

    Condition out{fan_out(p.tree, X, pb * q), p.F};

    rec.blocks.assign(q, std::vector<NodeSet>(q));
    for (std::size_t i = 0; i < q; ++i) {
        const NodeSet& old = p.tree.children(rec.order[i]);
        std::vector<Node> fresh = sorted(minus(out.tree.children(rec.order[i]), old));
        auto next = fresh.begin();
        NodeSet& own = rec.blocks[i][i];
        own = old;
        while (own.size() < pb) own.insert(*next++);
        for (std::size_t k = 0; k < q; ++k) {
            if (k == i) continue;
            while (rec.blocks[i][k].size() < pb) rec.blocks[i][k].insert(*next++);
        }
    }

    std::map<Node, std::size_t> pos;
    for (std::size_t i = 0; i < q; ++i) pos[rec.order[i]] = i;
    for (auto tau : A) {
        const TreeMap& f = p.F.at(tau);
        TreeMap& g = out.F.at(tau);
        for (std::size_t i = 0; i < q; ++i) {
            auto img = f.at(rec.order[i]);
            if (!img || !pos.count(*img)) continue;
            const std::size_t j = pos.at(*img);
            rec.edges.push_back({tau, i, j});
            const auto& Bi = rec.blocks[i];
            const auto& Bj = rec.blocks[j];

            NodeSet taken;
            std::vector<std::pair<Node, Node>> add;
            auto link = [&](const Node& x, const Node& y) {
                add.emplace_back(x, y);
                taken.insert(y);
            };
            for (const auto& x : out.tree.children(rec.order[i]))
                if (auto y = f.at(x)) taken.insert(*y);
            for (std::size_t k = 0; k < q; ++k) {
                if (k == i || k == j) continue;
                auto src = sorted(Bi[k]);
                auto dst = sorted(Bj[k]);
                for (std::size_t n = 0; n < src.size(); ++n) link(src[n], dst[n]);
            }
            auto own_free = sorted(minus(Bi[i], dom_in(f, Bi[i])));
            auto own_dst = sorted(Bj[i]);
            for (std::size_t n = 0; n < own_free.size(); ++n) link(own_free[n], own_dst[n]);
            auto need = sorted(minus(Bj[j], ran_in(f, Bj[j])));
            auto cross = sorted(Bi[j]);
            std::size_t n = 0;
            for (; n < need.size(); ++n) link(cross[n], need[n]);
            auto rest = sorted(minus(out.tree.children(rec.order[j]), taken));
            for (std::size_t r = 0; n < cross.size(); ++n, ++r) link(cross[n], rest.at(r));

            for (const auto& [x, y] : add) g.insert(x, y);
        }
    }

    check_extension(out, p, rho, "bijectivize_level");
    if (auto v = check_level_bullets(p, out, alpha, X, A, rho))
        throw std::logic_error("bijectivize_level: " + v->clause + ": " + v->detail);
    if (auto v = check_partition(p, out, rec)) throw std::logic_error("bijectivize_level: " + v->clause + ": " + v->detail);
    return {std::move(out), std::move(rec)};
}

Condition bijectivize_level(const Condition& p, const Height& alpha, const NodeSet& X, const IndexSet& A,
                            const RhoOracle& rho) {
    return bijectivize_level_traced(p, alpha, X, A, rho).cond;
}

Condition bijectivize_cone(const Condition& p, const Height& alpha, const NodeSet& X, const IndexSet& A,
                           const RhoOracle& rho) {
    require_level_set(p, alpha, X, A, "bijectivize_cone");
    Condition cur = p;
    NodeSet level = X;
    for (Height h = alpha; h != p.tree.max_height(); h = *p.tree.next_height(h)) {
        cur = bijectivize_level(cur, h, level, A, rho);
        level = children_of(cur.tree, level);
    }
    if (auto v = check_cone_bullets(p, cur, alpha, X, A, rho))
        throw std::logic_error("bijectivize_cone: " + v->clause + ": " + v->detail);
    return cur;
}

LiftResult lift_with_support(const Condition& p, const Height& alpha, const NodeSet& X, const IndexSet& A,
                             const Node& b, const RhoOracle& rho) {
    require_level_set(p, alpha, X, A, "lift_with_support");
    const Height top = p.tree.max_height();
    if (!p.tree.contains(b) || height_of(b) != top) throw PreconditionError("lift_with_support: b is not on the top level");
    if (!X.count(restrict(p.tree, b, alpha))) throw PreconditionError("lift_with_support: b does not lie above X");
    LiftResult out;
    out.cond = bijectivize_cone(p, alpha, X, A, rho);
    if (alpha == top)
        out.Y = X;
    else
        out.Y = one_key_lift(out.cond.tree, subfamily(out.cond.F, A), X, alpha, top, b);
    if (auto v = check_lift(p, out, alpha, X, A, b, rho))
        throw std::logic_error("lift_with_support: " + v->clause + ": " + v->detail);
    return out;
}

Verdict check_level_bullets(const Condition& p, const Condition& out, const Height& alpha, const NodeSet& X,
                            const IndexSet& A, const RhoOracle& rho) {
    (void)alpha;
    const NodeSet Y = children_of(out.tree, X);
    if (auto v = common_bullets(p, out, rho, Y, "level")) return v;
    for (const auto& x : X)
        if (out.tree.children(x).empty()) return Violation{"level(4)", x.str() + " has no immediate successor"};
    auto verdict = decide_separation(subfamily(out.F, A), Y);
    if (!is_witness(verdict)) return Violation{"level(6)", to_string(verdict)};
    for (auto tau : A) {
        const TreeMap& g = out.F.at(tau);
        for (const auto& x : X) {
            auto y = g.at(x);
            if (!y || !X.count(*y)) continue;
            for (const auto& s : out.tree.children(x))
                if (!g.in_dom(s)) return Violation{"level(7)", s.str() + " missing from the domain"};
            for (const auto& s : out.tree.children(*y))
                if (!g.in_ran(s)) return Violation{"level(7)", s.str() + " missing from the range"};
        }
    }
    return std::nullopt;
}

Verdict check_partition(const Condition& p, const Condition& out, const BijectivizeRecord& rec) {
    const std::size_t q = rec.order.size();
    for (std::size_t i = 0; i < q; ++i) {
        NodeSet all;
        for (const auto& blk : rec.blocks[i]) {
            if (blk.size() != rec.block) return Violation{"partition", "block of wrong size"};
            for (const auto& x : blk)
                if (!all.insert(x).second) return Violation{"partition", "blocks overlap at " + x.str()};
        }
        if (all != out.tree.children(rec.order[i])) return Violation{"partition", "blocks do not cover the successors"};
        if (!subset(p.tree.children(rec.order[i]), rec.blocks[i][i]))
            return Violation{"partition", "old successors outside the diagonal block"};
    }
    for (const auto& e : rec.edges) {
        const TreeMap& f = p.F.at(e.tau);
        const TreeMap& g = out.F.at(e.tau);
        const auto& Bi = rec.blocks[e.i];
        const auto& Bj = rec.blocks[e.j];
        for (std::size_t k = 0; k < q; ++k) {
            if (k == e.i || k == e.j) continue;
            NodeSet img;
            for (const auto& x : Bi[k]) {
                auto y = g.at(x);
                if (!y) return Violation{"partition(a)", x.str() + " not mapped"};
                img.insert(*y);
            }
            if (img != Bj[k]) return Violation{"partition(a)", "block image mismatch"};
        }
        for (const auto& x : Bi[e.i]) {
            if (f.in_dom(x)) continue;
            auto y = g.at(x);
            if (!y || !Bj[e.i].count(*y)) return Violation{"partition(b)", x.str() + " lands outside its block"};
        }
        for (const auto& y : Bj[e.j]) {
            if (f.in_ran(y)) continue;
            auto x = g.inv(y);
            if (!x || !Bi[e.j].count(*x)) return Violation{"partition(c)", y.str() + " hit from outside its block"};
        }
    }
    return std::nullopt;
}

Verdict check_cone_bullets(const Condition& p, const Condition& out, const Height& alpha, const NodeSet& X,
                           const IndexSet& A, const RhoOracle& rho) {
    (void)alpha;
    const NodeSet cone = successors_of(out.tree, X);
    if (auto v = common_bullets(p, out, rho, cone, "cone")) return v;
    for (auto tau : A) {
        const TreeMap& g = out.F.at(tau);
        for (const auto& x : X) {
            auto y = g.at(x);
            if (!y || !X.count(*y)) continue;
            for (const auto& s : out.tree.successors(x))
                if (!g.in_dom(s)) return Violation{"cone(5)", s.str() + " missing from the domain"};
            for (const auto& s : out.tree.successors(*y))
                if (!g.in_ran(s)) return Violation{"cone(5)", s.str() + " missing from the range"};
        }
    }
    return std::nullopt;
}

Verdict check_lift(const Condition& p, const LiftResult& out, const Height& alpha, const NodeSet& X,
                   const IndexSet& A, const Node& b, const RhoOracle& rho) {
    if (auto v = common_bullets(p, out.cond, rho, successors_of(out.cond.tree, X), "lift")) return v;
    const StandardTree& u = out.cond.tree;
    const Height top = u.max_height();
    for (const auto& y : out.Y)
        if (!u.contains(y) || height_of(y) != top) return Violation{"lift(5)", y.str() + " is not on the top level"};
    if (!out.Y.count(b)) return Violation{"lift(5)", "b missing"};
    if (alpha == top) {
        if (out.Y != X) return Violation{"lift(5)", "Y differs from X on the top level"};
        return std::nullopt;
    }
    if (!unique_dropdowns(u, out.Y, alpha)) return Violation{"lift(5)", "drop-downs not unique"};
    if (restrict_set(u, out.Y, alpha) != X) return Violation{"lift(5)", "Y does not drop onto X"};
    for (auto tau : A)
        if (!is_consistent(u, out.cond.F.at(tau), out.Y, alpha))
            return Violation{"lift(6)", "not consistent for F(" + std::to_string(tau) + ")"};
    return std::nullopt;
}

}  // namespace finforce
