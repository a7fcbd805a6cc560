#include "finforce/harness.hpp"

#include <sstream>

namespace finforce {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw CodecError(field + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& field) {
    auto it = j.find(key);
    if (it == j.end()) fail(field, std::string("missing field '") + key + "'");
    return *it;
}

Index index_from_json(const json& j, const std::string& field) {
    if (!j.is_number_unsigned()) fail(field, "expected a natural number");
    return j.get<Index>();
}

std::pair<Node, Node> pair_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) fail(field, "expected a pair");
    return {ordinal_from_json(j[0], field + "[0]"), ordinal_from_json(j[1], field + "[1]")};
}

}  // namespace

Ordinal ordinal_from_json(const json& j, const std::string& field) {
    if (j.is_number_unsigned()) return Ordinal{j.get<std::uint64_t>()};
    if (!j.is_string()) fail(field, "expected an ordinal string");
    try {
        return parse_ordinal(j.get<std::string>());
    } catch (const OrdinalParseError& e) {
        fail(field, e.what());
    }
}

json node_set_to_json(const NodeSet& s) {
    json out = json::array();
    for (const auto& x : s) out.push_back(x.str());
    return out;
}

NodeSet node_set_from_json(const json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected a list of ordinals");
    NodeSet out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string f = field + "[" + std::to_string(i) + "]";
        if (!out.insert(ordinal_from_json(j[i], f)).second) fail(f, "duplicate entry");
    }
    return out;
}

json condition_to_json(const Condition& p, const RhoOracle& rho) {
    json j;
    j["nodes"] = node_set_to_json(p.tree.nodes());
    json parents = json::array();
    for (const auto& [c, par] : p.tree.parent_map()) parents.push_back({c.str(), par.str()});
    j["parents"] = parents;
    json indices = json::array();
    json maps = json::object();
    for (const auto& [tau, f] : p.F) {
        indices.push_back(tau);
        json pairs = json::array();
        for (const auto& [x, y] : f.forward()) pairs.push_back({x.str(), y.str()});
        maps[std::to_string(tau)] = pairs;
    }
    j["indices"] = indices;
    j["maps"] = maps;
    json table = json::array();
    for (const auto& [ab, v] : rho.table()) table.push_back({ab.first, ab.second, v.str()});
    j["rho"] = table;
    if (rho.kind() != RhoOracle::Kind::zero) j["rho_base"] = rho.spec();
    return j;
}

ConditionFile condition_from_json(const json& j) {
    if (!j.is_object()) fail("document", "expected an object");
    ConditionFile out;

    const NodeSet nodes = node_set_from_json(member(j, "nodes", "document"), "nodes");
    if (!nodes.count(Ordinal{})) fail("nodes", "0 must be listed");
    std::map<Node, Node> parents;
    const json& pj = member(j, "parents", "document");
    if (!pj.is_array()) fail("parents", "expected a list of pairs");
    for (std::size_t i = 0; i < pj.size(); ++i) {
        const std::string f = "parents[" + std::to_string(i) + "]";
        auto [c, par] = pair_from_json(pj[i], f);
        if (!nodes.count(c) || !nodes.count(par)) fail(f, "refers to an unlisted node");
        if (!parents.emplace(c, par).second) fail(f, "node " + c.str() + " has two parents");
    }
    for (const auto& x : nodes)
        if (!x.is_zero() && !parents.count(x)) fail("parents", "node " + x.str() + " has no parent");
    if (parents.count(Ordinal{})) fail("parents", "0 cannot have a parent");
    out.cond.tree = StandardTree::from_parents(nodes, parents);

    const json& ij = member(j, "indices", "document");
    if (!ij.is_array()) fail("indices", "expected a list");
    for (std::size_t i = 0; i < ij.size(); ++i) {
        const std::string f = "indices[" + std::to_string(i) + "]";
        if (!out.cond.F.emplace(index_from_json(ij[i], f), TreeMap{}).second) fail(f, "duplicate index");
    }
    const json& mj = member(j, "maps", "document");
    if (!mj.is_object()) fail("maps", "expected an object keyed by index");
    for (const auto& [key, pairs] : mj.items()) {
        const std::string f = "maps." + key;
        Index tau = 0;
        try {
            std::size_t used = 0;
            tau = std::stoull(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            fail(f, "key is not an index");
        }
        auto it = out.cond.F.find(tau);
        if (it == out.cond.F.end()) fail(f, "index not listed in indices");
        if (!pairs.is_array()) fail(f, "expected a list of pairs");
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const std::string pf = f + "[" + std::to_string(i) + "]";
            auto [x, y] = pair_from_json(pairs[i], pf);
            try {
                it->second.insert(x, y);
            } catch (const PreconditionError& e) {
                fail(pf, e.what());
            }
        }
    }

    if (auto base = j.find("rho_base"); base != j.end()) {
        if (!base->is_string()) fail("rho_base", "expected an oracle spec string");
        try {
            out.rho = RhoOracle::parse(base->get<std::string>());
        } catch (const std::exception& e) {
            fail("rho_base", e.what());
        }
    }
    if (auto rj = j.find("rho"); rj != j.end()) {
        if (!rj->is_array()) fail("rho", "expected a list of [i, j, ordinal]");
        for (std::size_t i = 0; i < rj->size(); ++i) {
            const std::string f = "rho[" + std::to_string(i) + "]";
            const json& e = (*rj)[i];
            if (!e.is_array() || e.size() != 3) fail(f, "expected [i, j, ordinal]");
            try {
                out.rho.set(index_from_json(e[0], f + "[0]"), index_from_json(e[1], f + "[1]"),
                            ordinal_from_json(e[2], f + "[2]"));
            } catch (const PreconditionError& ex) {
                fail(f, ex.what());
            }
        }
    }
    return out;
}

std::string encode_condition(const Condition& p, const RhoOracle& rho) {
    return condition_to_json(p, rho).dump(2) + "\n";
}

ConditionFile decode_condition(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CodecError(e.what());
    }
    return condition_from_json(j);
}

std::string export_dot(const Condition& p) {
    std::ostringstream os;
    auto q = [](const Node& x) { return "\"" + x.str() + "\""; };
    os << "digraph condition {\n  rankdir=BT;\n  node [shape=box];\n";
    for (const auto& h : p.tree.levels()) {
        os << "  { rank=same;";
        for (const auto& x : p.tree.level(h)) os << ' ' << q(x) << ';';
        os << " }\n";
    }
    for (const auto& [c, par] : p.tree.parent_map()) os << "  " << q(par) << " -> " << q(c) << ";\n";
    for (const auto& [tau, f] : p.F)
        for (const auto& [x, y] : f.forward())
            if (x != y) os << "  " << q(x) << " -> " << q(y) << " [style=dashed, constraint=false, label=\"" << tau << "\"];\n";
    os << "}\n";
    return os.str();
}

json matched_pair_to_json(const MatchedPair& mp, const RhoOracle& rho) {
    json j;
    j["pA"] = condition_to_json(mp.pA);
    j["pB"] = condition_to_json(mp.pB);
    j["alpha"] = mp.alpha.str();
    j["beta"] = mp.beta.str();
    j["common"] = condition_to_json(Condition{mp.common, {}});
    j["A"] = mp.A;
    json nodes = json::array();
    for (const auto& [a, b] : mp.iso_nodes) nodes.push_back({a.str(), b.str()});
    j["iso_nodes"] = nodes;
    json idx = json::array();
    for (const auto& [a, b] : mp.iso_indices) idx.push_back({a, b});
    j["iso_indices"] = idx;
    j["xA"] = mp.xA.str();
    j["xB"] = mp.xB.str();
    j["rho"] = condition_to_json(Condition{}, rho)["rho"];
    if (rho.kind() != RhoOracle::Kind::zero) j["rho_base"] = rho.spec();
    return j;
}

MatchedPair matched_pair_from_json(const json& j, RhoOracle& rho) {
    if (!j.is_object()) throw CodecError("matched pair: expected an object");
    auto need = [&](const char* k) -> const json& {
        if (!j.contains(k)) throw CodecError(std::string("matched pair: missing field '") + k + "'");
        return j.at(k);
    };
    MatchedPair mp;
    mp.pA = condition_from_json(need("pA")).cond;
    mp.pB = condition_from_json(need("pB")).cond;
    mp.alpha = ordinal_from_json(need("alpha"), "alpha");
    mp.beta = ordinal_from_json(need("beta"), "beta");
    mp.common = condition_from_json(need("common")).cond.tree;
    for (const auto& a : need("A")) {
        if (!a.is_number_unsigned()) throw CodecError("A: expected indices");
        mp.A.insert(a.get<Index>());
    }
    for (const auto& e : need("iso_nodes")) {
        if (!e.is_array() || e.size() != 2) throw CodecError("iso_nodes: expected pairs");
        mp.iso_nodes.emplace(ordinal_from_json(e[0], "iso_nodes"), ordinal_from_json(e[1], "iso_nodes"));
    }
    for (const auto& e : need("iso_indices")) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
            throw CodecError("iso_indices: expected pairs of indices");
        mp.iso_indices.emplace(e[0].get<Index>(), e[1].get<Index>());
    }
    mp.xA = ordinal_from_json(need("xA"), "xA");
    mp.xB = ordinal_from_json(need("xB"), "xB");
    json shell = condition_to_json(Condition{});
    if (j.contains("rho")) shell["rho"] = j["rho"];
    if (j.contains("rho_base")) shell["rho_base"] = j["rho_base"];
    rho = condition_from_json(shell).rho;
    return mp;
}

}  // namespace finforce
