#include "finforce/condition.hpp"

namespace finforce {

IndexSet Condition::indices() const {
    IndexSet out;
    for (const auto& [tau, f] : F) out.insert(out.end(), tau);
    return out;
}

Verdict validate_condition(const Condition& p, const RhoOracle& rho) {
    if (auto v = validate_tree(p.tree)) return Violation{"condition(1) " + v->clause, v->detail};
    for (const auto& [tau, f] : p.F) {
        for (const auto& [x, y] : f.forward())
            if (!p.tree.contains(x) || !p.tree.contains(y))
                return Violation{"condition(2)", "F(" + std::to_string(tau) + ") leaves the tree at " + x.str()};
        MapFlags fl = classify_map(p.tree, f);
        if (fl.standard) continue;
        std::string why = !fl.functional               ? "not a function"
                          : !fl.injective              ? "not injective"
                          : !fl.level_preserving       ? "not level preserving"
                          : !fl.strictly_increasing    ? "not strictly increasing"
                          : !fl.downwards_closed       ? "not downwards closed"
                                                       : "has a fixed point off the root";
        return Violation{"condition(2)", "F(" + std::to_string(tau) + ") " + why};
    }
    for (const auto& a : p.tree.heights()) {
        auto verdict = decide_rho_separation(p.F, p.tree.level(a), rho, a);
        if (!is_witness(verdict)) return Violation{"condition(3)", "level " + a.str() + ": " + to_string(verdict)};
    }
    return std::nullopt;
}

Verdict explain_leq(const Condition& q, const Condition& p) {
    if (!is_extension(p.tree, q.tree)) return Violation{"order(a)", "tree does not extend"};
    for (const auto& [tau, f] : p.F) {
        auto it = q.F.find(tau);
        if (it == q.F.end()) return Violation{"order(b)", "index " + std::to_string(tau) + " dropped"};
        for (const auto& [x, y] : f.forward()) {
            auto z = it->second.at(x);
            if (!z || *z != y)
                return Violation{"order(b)", "F(" + std::to_string(tau) + ") loses the pair at " + x.str()};
        }
    }
    for (auto g = p.F.begin(); g != p.F.end(); ++g) {
        for (auto t = std::next(g); t != p.F.end(); ++t) {
            NodeSet anchors;
            for (const auto& [z, w] : agreement_pairs(g->second, t->second)) anchors.insert(z);
            for (const auto& [x, y] : agreement_pairs(q.F.at(g->first), q.F.at(t->first))) {
                // Every map fixes the root once it is defined there; (0, 0) never counts.
                bool covered = x.is_zero();
                for (const auto& z : anchors) {
                    if (q.tree.leq(x, z)) {
                        covered = true;
                        break;
                    }
                }
                if (!covered)
                    return Violation{"order(c)", "F(" + std::to_string(g->first) + ") and F(" +
                                                     std::to_string(t->first) + ") newly agree at " + x.str()};
            }
        }
    }
    return std::nullopt;
}

bool leq(const Condition& q, const Condition& p) { return !explain_leq(q, p); }

void check_extension(const Condition& out, const Condition& in, const RhoOracle& rho, const std::string& op) {
    if (auto v = validate_condition(out, rho)) throw std::logic_error(op + ": output invalid, " + v->clause + ": " + v->detail);
    if (auto v = explain_leq(out, in)) throw std::logic_error(op + ": output not below input, " + v->clause + ": " + v->detail);
}

Condition extend_heights(const Condition& p, const HeightSet& Z, const RhoOracle& rho) {
    HeightSet B = p.tree.heights();
    for (const auto& z : Z) {
        if (z.is_zero()) throw PreconditionError("extend_heights: 0 is not a valid height");
        B.insert(z);
    }
    Condition out;
    out.tree = simple_extend(p.tree, B);
    for (const auto& [tau, f] : p.F) out.F.emplace(tau, close_map_in(out.tree, f));
    check_extension(out, p, rho, "extend_heights");
    return out;
}

Condition widen_node(const Condition& p, const Node& x, std::size_t k, const RhoOracle& rho) {
    if (!p.tree.contains(x)) throw PreconditionError("widen_node: " + x.str() + " is not a node");
    if (k == 0) throw PreconditionError("widen_node: k must be positive");
    Condition out = extend_heights(p, {height_of(x) + Ordinal{1}}, rho);
    if (out.tree.children(x).size() < k) out.tree = fan_out(out.tree, {x}, k);
    check_extension(out, p, rho, "widen_node");
    return out;
}

Condition hausdorffize(const Condition& p, const RhoOracle& rho) {
    HeightSet Z;
    for (const auto& d : p.tree.heights())
        if (d.is_limit() && !unique_dropdowns(p.tree, p.tree.level(d), *p.tree.prev_height(d)))
            Z.insert(*p.tree.prev_height(d) + Ordinal{1});
    if (Z.empty()) return p;
    Condition out = extend_heights(p, Z, rho);
    if (!is_hausdorff(out.tree)) throw std::logic_error("hausdorffize: output is not Hausdorff");
    return out;
}

Condition normalize_condition(const Condition& p, const RhoOracle& rho) {
    Condition out{normalize(p.tree), p.F};
    check_extension(out, p, rho, "normalize_condition");
    if (!is_normal(out.tree)) throw std::logic_error("normalize_condition: output is not normal");
    return out;
}

Condition grow_node(const Condition& p, const Node& x, const Height& alpha, const RhoOracle& rho) {
    if (!p.tree.contains(x)) throw PreconditionError("grow_node: " + x.str() + " is not a node");
    if (!(height_of(x) < alpha)) throw PreconditionError("grow_node: alpha must exceed the height of x");
    Condition out = normalize_condition(extend_heights(p, {alpha}, rho), rho);
    bool found = false;
    for (const auto& y : out.tree.level(alpha))
        if (out.tree.less(x, y)) found = true;
    if (!found) throw std::logic_error("grow_node: nothing above x on level alpha");
    check_extension(out, p, rho, "grow_node");
    return out;
}

Condition add_index(const Condition& p, Index s) {
    Condition out = p;
    out.F.emplace(s, TreeMap{});
    return out;
}

namespace {

void ensure_dom(Condition& c, Index s, const Node& x) {
    TreeMap& f = c.F.at(s);
    if (f.in_dom(x)) return;
    if (x.is_zero()) {
        f.insert(x, x);
        return;
    }
    const Node below = *c.tree.parent(x);
    ensure_dom(c, s, below);
    const Node image_below = *c.F.at(s).at(below);
    const Node z = c.tree.add_fresh(image_below, height_of(x));
    c.F.at(s).insert(x, z);
}

void ensure_ran(Condition& c, Index s, const Node& x) {
    TreeMap& f = c.F.at(s);
    if (f.in_ran(x)) return;
    if (x.is_zero()) {
        f.insert(x, x);
        return;
    }
    const Node below = *c.tree.parent(x);
    ensure_ran(c, s, below);
    const Node preimage_below = *c.F.at(s).inv(below);
    const Node z = c.tree.add_fresh(preimage_below, height_of(x));
    c.F.at(s).insert(z, x);
}

}  // namespace

Condition augment(const Condition& p, Index s, const Node& x, const RhoOracle& rho) {
    if (!p.tree.contains(x)) throw PreconditionError("augment: " + x.str() + " is not a node");
    Condition out = add_index(p, s);
    ensure_dom(out, s, x);
    ensure_ran(out, s, x);
    check_extension(out, p, rho, "augment");
    return out;
}

Condition fan_out_condition(const Condition& p, const NodeSet& X, std::size_t n, const RhoOracle& rho) {
    Condition out{fan_out(p.tree, X, n), p.F};
    check_extension(out, p, rho, "fan_out_condition");
    return out;
}

bool strong_ad_containment(const std::vector<Condition>& trace, Index g, Index t) {
    if (g == t) throw PreconditionError("strong_ad_containment: indices must differ");
    // Clauses (a) and (b) are preconditions; a clause (c) break shows up as a false answer.
    for (std::size_t i = 1; i < trace.size(); ++i) {
        auto v = explain_leq(trace[i], trace[i - 1]);
        if (v && v->clause != "order(c)")
            throw PreconditionError("strong_ad_containment: trace is not descending at step " + std::to_string(i));
    }
    const Condition* first = nullptr;
    for (const auto& c : trace) {
        if (c.F.count(g) && c.F.count(t)) {
            first = &c;
            break;
        }
    }
    if (!first) throw PreconditionError("strong_ad_containment: indices never occur together");
    const Condition& last = trace.back();
    const PairSet closure =
        tensor_downward_closure(last.tree, agreement_pairs(first->F.at(g), first->F.at(t)));
    for (const auto& pr : agreement_pairs(last.F.at(g), last.F.at(t)))
        if (!pr.first.is_zero() && !closure.count(pr)) return false;
    return true;
}

}  // namespace finforce
