#include "finforce/harness.hpp"

namespace finforce {

namespace {

const json& arg(const Step& s, const char* key) {
    auto it = s.args.find(key);
    if (it == s.args.end()) throw CodecError(s.op + ": missing argument '" + key + "'");
    return *it;
}

Ordinal ord_arg(const Step& s, const char* key) { return ordinal_from_json(arg(s, key), s.op + "." + key); }
NodeSet set_arg(const Step& s, const char* key) { return node_set_from_json(arg(s, key), s.op + "." + key); }

std::uint64_t nat_arg(const Step& s, const char* key) {
    const json& j = arg(s, key);
    if (!j.is_number_unsigned()) throw CodecError(s.op + "." + key + ": expected a natural number");
    return j.get<std::uint64_t>();
}

IndexSet index_set_arg(const Step& s, const char* key) {
    const json& j = arg(s, key);
    if (!j.is_array()) throw CodecError(s.op + "." + key + ": expected a list of indices");
    IndexSet out;
    for (const auto& e : j) {
        if (!e.is_number_unsigned()) throw CodecError(s.op + "." + key + ": expected a list of indices");
        out.insert(e.get<Index>());
    }
    return out;
}

json index_set_to_json(const IndexSet& A) {
    json out = json::array();
    for (auto a : A) out.push_back(a);
    return out;
}

Height beta_above(const Condition& p, const Height& alpha) {
    const Ordinal ww = parse_ordinal("w^w");
    for (std::uint64_t k = 1; k <= 64; ++k) {
        Ordinal b = Ordinal::from_terms({{ww, Natural(k)}});
        if (!(alpha < b)) continue;
        bool above = true;
        for (const auto& n : p.tree.nodes()) above = above && n < b;
        if (above) return b;
    }
    throw PreconditionError("no omega-fixed beta of the form w^w*k lies above the condition");
}

}  // namespace

Condition apply_step(const Condition& p, const Step& s, RhoOracle& rho) {
    const std::string& op = s.op;
    if (op == "extend_heights") {
        HeightSet Z = set_arg(s, "Z");
        return extend_heights(p, Z, rho);
    }
    if (op == "widen_node") return widen_node(p, ord_arg(s, "x"), nat_arg(s, "k"), rho);
    if (op == "hausdorffize") return hausdorffize(p, rho);
    if (op == "normalize_condition") return normalize_condition(p, rho);
    if (op == "grow_node") return grow_node(p, ord_arg(s, "x"), ord_arg(s, "alpha"), rho);
    if (op == "add_index") return add_index(p, nat_arg(s, "s"));
    if (op == "augment") return augment(p, nat_arg(s, "s"), ord_arg(s, "x"), rho);
    if (op == "fan_out_condition") return fan_out_condition(p, set_arg(s, "X"), nat_arg(s, "n"), rho);
    if (op == "bijectivize_level")
        return bijectivize_level(p, ord_arg(s, "alpha"), set_arg(s, "X"), index_set_arg(s, "A"), rho);
    if (op == "bijectivize_cone")
        return bijectivize_cone(p, ord_arg(s, "alpha"), set_arg(s, "X"), index_set_arg(s, "A"), rho);
    if (op == "lift_with_support")
        return lift_with_support(p, ord_arg(s, "alpha"), set_arg(s, "X"), index_set_arg(s, "A"), ord_arg(s, "b"), rho).cond;
    if (op == "link") {
        auto q = try_link(p, nat_arg(s, "tau"), ord_arg(s, "x"), ord_arg(s, "y"), rho);
        if (!q) throw PreconditionError("link: the pair cannot be added");
        return *q;
    }
    if (op == "amalgamate") {
        const Height alpha = ord_arg(s, "alpha");
        const Height beta = s.args.contains("beta") ? ord_arg(s, "beta") : beta_above(p, alpha);
        std::optional<IndexSet> shared;
        if (s.args.contains("A")) shared = index_set_arg(s, "A");
        MatchedPair mp = build_matched_pair(p, alpha, beta, ord_arg(s, "x"), nat_arg(s, "fresh_index_base"), rho, shared);
        return amalgamate(mp, rho);
    }
    throw CodecError("unknown operation '" + op + "'");
}

json scenario_to_json(const Scenario& s) {
    json j;
    j["rho"] = s.rho.spec();
    json table = json::array();
    for (const auto& [ab, v] : s.rho.table()) table.push_back({ab.first, ab.second, v.str()});
    j["rho_table"] = table;
    if (s.start) j["start"] = condition_to_json(*s.start);
    json steps = json::array();
    for (const auto& st : s.steps) {
        json e{{"op", st.op}, {"args", st.args}};
        if (!st.checks.empty()) e["checks"] = st.checks;
        steps.push_back(e);
    }
    j["steps"] = steps;
    return j;
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw CodecError("scenario: expected an object");
    Scenario s;
    if (auto it = j.find("rho"); it != j.end()) {
        if (!it->is_string()) throw CodecError("rho: expected an oracle spec string");
        s.rho = RhoOracle::parse(it->get<std::string>());
    }
    if (auto it = j.find("rho_table"); it != j.end()) {
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& e = (*it)[i];
            const std::string f = "rho_table[" + std::to_string(i) + "]";
            if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
                throw CodecError(f + ": expected [i, j, ordinal]");
            s.rho.set(e[0].get<Index>(), e[1].get<Index>(), ordinal_from_json(e[2], f + "[2]"));
        }
    }
    if (auto it = j.find("start"); it != j.end()) s.start = condition_from_json(*it).cond;
    if (auto it = j.find("steps"); it != j.end()) {
        if (!it->is_array()) throw CodecError("steps: expected a list");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& e = (*it)[i];
            const std::string f = "steps[" + std::to_string(i) + "]";
            if (!e.is_object() || !e.contains("op") || !e["op"].is_string()) throw CodecError(f + ": expected {op, args}");
            Step st;
            st.op = e["op"].get<std::string>();
            if (e.contains("args")) {
                if (!e["args"].is_object()) throw CodecError(f + ".args: expected an object");
                st.args = e["args"];
            }
            if (e.contains("checks")) {
                for (const auto& c : e["checks"]) {
                    if (!c.is_string()) throw CodecError(f + ".checks: expected strings");
                    st.checks.push_back(c.get<std::string>());
                }
            }
            s.steps.push_back(std::move(st));
        }
    }
    return s;
}

RunTrace run_scenario(const Scenario& s) {
    RunTrace t;
    t.rho = s.rho;
    Condition start;
    start.F.emplace(0, TreeMap{});
    t.conditions.push_back(s.start ? *s.start : start);
    if (auto v = validate_condition(t.conditions.back(), t.rho)) {
        t.ok = false;
        t.error = "start condition invalid: " + v->clause + ": " + v->detail;
        return t;
    }
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        const Step& st = s.steps[i];
        const std::string tag = "step " + std::to_string(i) + " " + st.op;
        try {
            Condition next = apply_step(t.conditions.back(), st, t.rho);
            if (auto v = validate_condition(next, t.rho)) throw std::logic_error("output invalid: " + v->detail);
            if (auto v = explain_leq(next, t.conditions.back())) throw std::logic_error("output not below input: " + v->detail);
            for (const auto& c : st.checks) {
                if (c == "normal" && !is_normal(next.tree)) throw std::logic_error("check failed: normal");
                if (c == "hausdorff" && !is_hausdorff(next.tree)) throw std::logic_error("check failed: hausdorff");
                if (c != "normal" && c != "hausdorff") throw CodecError("unknown check '" + c + "'");
            }
            t.log.push_back(tag + ": ok, " + std::to_string(next.tree.size()) + " nodes, " +
                            std::to_string(next.F.size()) + " indices");
            t.conditions.push_back(std::move(next));
        } catch (const std::exception& e) {
            t.ok = false;
            t.error = tag + ": " + e.what();
            t.log.push_back(t.error);
            return t;
        }
    }
    const IndexSet idx = t.conditions.back().indices();
    for (auto g = idx.begin(); g != idx.end(); ++g) {
        for (auto h = std::next(g); h != idx.end(); ++h) {
            bool ok = strong_ad_containment(t.conditions, *g, *h);
            t.pairs.push_back({*g, *h, ok});
            if (!ok) {
                t.ok = false;
                t.error = "agreement of " + std::to_string(*g) + " and " + std::to_string(*h) + " escapes its closure";
            }
        }
    }
    return t;
}

json trace_to_json(const RunTrace& t) {
    json j;
    j["ok"] = t.ok;
    if (!t.ok) j["error"] = t.error;
    j["log"] = t.log;
    json snaps = json::array();
    for (const auto& c : t.conditions) snaps.push_back(condition_to_json(c));
    j["conditions"] = snaps;
    json pairs = json::array();
    for (const auto& p : t.pairs) pairs.push_back({{"g", p.g}, {"t", p.t}, {"contained", p.contained}});
    j["strong_ad"] = pairs;
    return j;
}

Scenario random_scenario(std::uint64_t seed, const GenBounds& bounds) {
    Rng rng(seed);
    Scenario s;
    s.rho = bounds.rho;
    RhoOracle rho = bounds.rho;
    Condition cur;
    cur.F.emplace(0, TreeMap{});
    const std::vector<Height> pool = bounds.heights.empty()
                                         ? std::vector<Height>{parse_ordinal("1"), parse_ordinal("2"), parse_ordinal("w"),
                                                               parse_ordinal("w+1"), parse_ordinal("w^w"),
                                                               parse_ordinal("w^w+1")}
                                         : bounds.heights;
    const std::size_t nidx = std::max<std::size_t>(bounds.indices, 1);
    bool amalgamated = false;

    auto attempt = [&](Step st) {
        try {
            RhoOracle trial = rho;
            Condition next = apply_step(cur, st, trial);
            for (const auto& h : next.tree.levels())
                if (next.tree.level(h).size() > bounds.width * 4) return false;
            cur = std::move(next);
            rho = std::move(trial);
            s.steps.push_back(std::move(st));
            return true;
        } catch (const PreconditionError&) {
            return false;
        }
    };
    auto some_node = [&]() { return rng.pick(cur.tree.nodes()); };
    auto some_subset = [&](const NodeSet& level) {
        NodeSet out;
        for (const auto& x : level)
            if (rng.chance(1, 2)) out.insert(x);
        if (out.empty()) out.insert(rng.pick(level));
        return out;
    };
    auto some_indices = [&]() {
        IndexSet A;
        for (const auto& [tau, f] : cur.F)
            if (rng.chance(1, 2)) A.insert(tau);
        return A;
    };

    for (std::size_t k = 0; k < bounds.steps; ++k) {
        const std::uint64_t r = rng.below(13);
        if (r == 0 && cur.tree.heights().size() < bounds.levels) {
            attempt({"extend_heights", {{"Z", json::array({rng.pick(pool).str()})}}});
        } else if (r == 1) {
            attempt({"add_index", {{"s", rng.below(nidx)}}});
        } else if (r == 2 || r == 3) {
            attempt({"augment", {{"s", rng.below(nidx)}, {"x", some_node().str()}}});
        } else if (r == 4) {
            attempt({"widen_node", {{"x", some_node().str()}, {"k", 1 + rng.below(2)}}});
        } else if (r == 5 && cur.tree.heights().size() < bounds.levels) {
            const Node x = some_node();
            const Height a = rng.pick(pool);
            if (height_of(x) < a) attempt({"grow_node", {{"x", x.str()}, {"alpha", a.str()}}});
        } else if (r == 6) {
            attempt({"hausdorffize", json::object()});
        } else if (r == 7) {
            attempt({"normalize_condition", json::object()});
        } else if (r == 8) {
            const Node x = some_node();
            if (height_of(x) != cur.tree.max_height())
                attempt({"fan_out_condition",
                         {{"X", json::array({x.str()})}, {"n", cur.tree.children(x).size() + 1}}});
        } else if (r == 9 || r == 10) {
            if (cur.F.empty() || cur.tree.size() < 2) continue;
            const Index tau = rng.pick(cur.F).first;
            const Node x = some_node();
            const Node y = some_node();
            attempt({"link", {{"tau", tau}, {"x", x.str()}, {"y", y.str()}}});
        } else if (r == 11 && !cur.tree.heights().empty()) {
            const Height a = rng.pick(cur.tree.heights());
            const NodeSet X = some_subset(cur.tree.level(a));
            const IndexSet A = some_indices();
            if (rng.chance(1, 2)) {
                attempt({"bijectivize_cone", {{"alpha", a.str()}, {"X", node_set_to_json(X)}, {"A", index_set_to_json(A)}}});
            } else {
                std::vector<Node> tops;
                for (const auto& y : cur.tree.level(cur.tree.max_height()))
                    if (X.count(restrict(cur.tree, y, a))) tops.push_back(y);
                if (!tops.empty())
                    attempt({"lift_with_support", {{"alpha", a.str()},
                                                   {"X", node_set_to_json(X)},
                                                   {"A", index_set_to_json(A)},
                                                   {"b", tops[rng.below(tops.size())].str()}}});
            }
        } else if (r == 12 && !amalgamated) {
            std::vector<Height> fixed;
            for (const auto& h : cur.tree.heights())
                if (is_omega_fixed(h)) fixed.push_back(h);
            if (fixed.empty()) continue;
            const Height a = fixed[rng.below(fixed.size())];
            if (!is_normal(cur.tree)) attempt({"normalize_condition", json::object()});
            std::vector<Node> xs;
            for (const auto& n : cur.tree.nodes())
                if (!(height_of(n) < a)) xs.push_back(n);
            Index base = 100;
            if (!cur.F.empty()) base = std::max<Index>(base, cur.F.rbegin()->first + 1);
            amalgamated = attempt({"amalgamate", {{"alpha", a.str()},
                                                  {"x", xs[rng.below(xs.size())].str()},
                                                  {"fresh_index_base", base}}});
        }
    }
    return s;
}

}  // namespace finforce
