#include "finforce/separation.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace finforce {

Family subfamily(const Family& fam, const IndexSet& A) {
    Family out;
    for (const auto& [tau, f] : fam)
        if (A.count(tau)) out.emplace(tau, f);
    return out;
}

std::vector<Relation> relations(const Family& fam, const Node& x, const Node& y) {
    std::vector<Relation> out;
    for (const auto& [tau, f] : fam) {
        for (int m : {1, -1}) {
            auto z = f.apply(m, x);
            if (z && *z == y) out.push_back({m, tau});
        }
    }
    return out;
}

namespace {

std::string show_rel(const Relation& r) {
    return "f" + std::to_string(r.tau) + (r.m > 0 ? "" : "^-1");
}

void require_injective(const std::vector<Node>& tuple) {
    NodeSet seen(tuple.begin(), tuple.end());
    if (seen.size() != tuple.size()) throw PreconditionError("tuple repeats a node");
}

// For each i, the triples (j, m, tau) with j < i and f_tau^m(a_i) = a_j.
std::vector<std::vector<std::pair<std::size_t, Relation>>> back_triples(const Family& fam,
                                                                        const std::vector<Node>& a) {
    std::map<Node, std::size_t> pos;
    for (std::size_t i = 0; i < a.size(); ++i) pos[a[i]] = i;
    std::vector<std::vector<std::pair<std::size_t, Relation>>> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (const auto& [tau, f] : fam) {
            for (int m : {1, -1}) {
                auto z = f.apply(m, a[i]);
                if (!z) continue;
                auto it = pos.find(*z);
                if (it != pos.end() && it->second < i) out[i].push_back({it->second, {m, tau}});
            }
        }
    }
    return out;
}

// Relations inside X, keyed by unordered pair (smaller node first, relations
// oriented from the smaller node).
std::map<std::pair<Node, Node>, std::vector<Relation>> relation_graph(const Family& fam, const NodeSet& X) {
    std::map<std::pair<Node, Node>, std::vector<Relation>> out;
    for (const auto& x : X) {
        for (const auto& [tau, f] : fam) {
            for (int m : {1, -1}) {
                auto y = f.apply(m, x);
                if (!y || *y == x || !X.count(*y) || !(x < *y)) continue;
                out[{x, *y}].push_back({m, tau});
            }
        }
    }
    return out;
}

std::vector<Node> forest_path(const std::map<Node, NodeSet>& adj, const Node& from, const Node& to) {
    std::map<Node, Node> prev;
    std::deque<Node> queue{from};
    prev.emplace(from, from);
    while (!queue.empty()) {
        Node cur = queue.front();
        queue.pop_front();
        if (cur == to) break;
        auto it = adj.find(cur);
        if (it == adj.end()) continue;
        for (const auto& nb : it->second)
            if (prev.emplace(nb, cur).second) queue.push_back(nb);
    }
    std::vector<Node> path{to};
    while (path.back() != from) path.push_back(prev.at(path.back()));
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<Node> canonical_loop(std::vector<Node> v) {
    auto least = std::min_element(v.begin(), v.end());
    std::rotate(v.begin(), least, v.end());
    if (v.size() > 2 && v.back() < v[1]) std::reverse(v.begin() + 1, v.end());
    v.push_back(v.front());
    return v;
}

}  // namespace

std::string to_string(const SeparationVerdict& v) {
    std::ostringstream os;
    if (auto* w = std::get_if<WitnessOrder>(&v)) {
        os << "separated order:";
        for (const auto& x : w->order) os << ' ' << x.str();
    } else if (auto* p = std::get_if<PairwiseViolation>(&v)) {
        os << "pairwise violation: " << show_rel(p->first) << " and " << show_rel(p->second) << " both send "
           << p->x.str() << " to " << p->y.str() << ", need rho >= " << p->required.str();
    } else {
        const auto& l = std::get<Loop>(v);
        os << "loop:";
        for (const auto& x : l.cycle) os << ' ' << x.str();
    }
    return os.str();
}

bool is_consistent(const StandardTree& t, const TreeMap& f, const NodeSet& X, const Height& b) {
    if (X.empty()) return true;
    const Height a = common_level(t, X);
    if (!(b < a)) throw PreconditionError("is_consistent: level " + b.str() + " is not below " + a.str());
    if (!unique_dropdowns(t, X, b)) throw PreconditionError("is_consistent: set lacks unique drop-downs");
    std::map<Node, Node> down;
    for (const auto& x : X) down.emplace(x, restrict(t, x, b));
    for (const auto& x : X) {
        auto low = f.at(down.at(x));
        if (!low) continue;
        for (const auto& y : X) {
            if (*low != down.at(y)) continue;
            auto high = f.at(x);
            if (!high || *high != y) return false;
        }
    }
    return true;
}

bool is_separated_tuple(const Family& fam, const std::vector<Node>& tuple) {
    require_injective(tuple);
    for (const auto& triples : back_triples(fam, tuple))
        if (triples.size() > 1) return false;
    return true;
}

bool is_rho_separated_tuple(const Family& fam, const std::vector<Node>& tuple, const RhoOracle& rho,
                            const Height& alpha) {
    require_injective(tuple);
    for (const auto& triples : back_triples(fam, tuple)) {
        for (std::size_t p = 0; p < triples.size(); ++p) {
            for (std::size_t q = p + 1; q < triples.size(); ++q) {
                if (triples[p].first != triples[q].first) return false;
                if (rho(triples[p].second.tau, triples[q].second.tau) < alpha) return false;
            }
        }
    }
    return true;
}

SeparationVerdict decide_rho_separation(const Family& fam, const NodeSet& X, const RhoOracle& rho,
                                        const Height& alpha) {
    for (const auto& x : X)
        if (height_of(x) != alpha) throw PreconditionError("decide_rho_separation: " + x.str() + " is off level");
    const auto graph = relation_graph(fam, X);

    // Clause 1: parallel relations need large rho.
    for (const auto& [xy, rels] : graph) {
        for (std::size_t p = 0; p < rels.size(); ++p)
            for (std::size_t q = p + 1; q < rels.size(); ++q)
                if (rho(rels[p].tau, rels[q].tau) < alpha)
                    return PairwiseViolation{xy.first, xy.second, rels[p], rels[q], alpha};
    }

    // Clause 2: the simple relation graph must be a forest.
    std::map<Node, Node> parent;
    for (const auto& x : X) parent.emplace(x, x);
    auto find = [&](Node x) {
        while (parent.at(x) != x) {
            parent[x] = parent.at(parent.at(x));
            x = parent.at(x);
        }
        return x;
    };
    std::map<Node, NodeSet> forest;
    for (const auto& [xy, rels] : graph) {
        const auto& [x, y] = xy;
        Node rx = find(x);
        Node ry = find(y);
        if (rx == ry) {
            auto path = forest_path(forest, x, y);
            return Loop{canonical_loop(path)};
        }
        parent[rx] = ry;
        forest[x].insert(y);
        forest[y].insert(x);
    }

    // Segment construction: grow each segment by the least node related to it.
    std::vector<Node> order;
    NodeSet listed;
    for (const auto& start : X) {
        if (listed.count(start)) continue;
        NodeSet frontier{start};
        while (!frontier.empty()) {
            Node next = *frontier.begin();
            frontier.erase(frontier.begin());
            if (!listed.insert(next).second) continue;
            order.push_back(next);
            auto it = forest.find(next);
            if (it == forest.end()) continue;
            for (const auto& nb : it->second)
                if (!listed.count(nb)) frontier.insert(nb);
        }
    }
    if (!is_rho_separated_tuple(fam, order, rho, alpha))
        throw std::logic_error("decide_rho_separation: constructed order is not rho-separated");
    return WitnessOrder{order};
}

SeparationVerdict decide_separation(const Family& fam, const NodeSet& X) {
    if (X.empty()) return WitnessOrder{};
    const Height alpha = height_of(*X.begin());
    if (alpha.is_zero()) {
        for (const auto& x : X)
            if (!x.is_zero()) throw PreconditionError("decide_separation: set mixes levels");
        return WitnessOrder{{Ordinal{}}};
    }
    return decide_rho_separation(fam, X, RhoOracle::zero(), alpha);
}

NodeSet one_key_lift(const StandardTree& t, const Family& fam, const NodeSet& X, const Height& alpha,
                     const Height& beta, const Node& b) {
    const HeightSet ht = t.heights();
    if (!ht.count(alpha) || !ht.count(beta) || !(alpha < beta))
        throw PreconditionError("one_key_lift: need levels alpha < beta of the tree");
    if (X.empty() || common_level(t, X) != alpha) throw PreconditionError("one_key_lift: X must lie on level alpha");
    if (!t.contains(b) || height_of(b) != beta) throw PreconditionError("one_key_lift: b must lie on level beta");
    if (!X.count(restrict(t, b, alpha))) throw PreconditionError("one_key_lift: b does not lie above X");
    for (const auto& x : X) {
        bool reaches = false;
        for (const auto& y : t.level(beta))
            if (t.less(x, y)) reaches = true;
        if (!reaches) throw PreconditionError("one_key_lift: " + x.str() + " has no successor on level beta");
    }
    auto verdict = decide_separation(fam, X);
    if (!is_witness(verdict)) throw PreconditionError("one_key_lift: family not separated on X: " + to_string(verdict));
    for (const auto& [tau, f] : fam) {
        for (const auto& x : X) {
            auto y = f.at(x);
            if (!y || !X.count(*y)) continue;
            for (const auto& s : t.successors(x))
                if (!f.in_dom(s)) throw PreconditionError("one_key_lift: closure fails for f" + std::to_string(tau));
            for (const auto& s : t.successors(*y))
                if (!f.in_ran(s)) throw PreconditionError("one_key_lift: closure fails for f" + std::to_string(tau));
        }
    }

    const std::vector<Node> a = std::get<WitnessOrder>(verdict).order;
    const std::size_t n = a.size();
    const auto back = back_triples(fam, a);
    const std::size_t nbar =
        static_cast<std::size_t>(std::find(a.begin(), a.end(), restrict(t, b, alpha)) - a.begin());

    // Descending chain from nbar along back-triples, carrying b along.
    std::vector<std::size_t> chain{nbar};
    std::vector<Node> c{b};
    while (!back[chain.back()].empty()) {
        const auto& [j, rel] = back[chain.back()].front();
        chain.push_back(j);
        c.push_back(*fam.at(rel.tau).apply(rel.m, c.back()));
    }

    std::vector<Node> bs(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!back[k].empty()) {
            const auto& [j, rel] = back[k].front();
            bs[k] = *fam.at(rel.tau).apply(-rel.m, bs[j]);
        } else if (k == chain.back()) {
            bs[k] = c.back();
        } else {
            for (const auto& y : t.level(beta)) {
                if (t.less(a[k], y)) {
                    bs[k] = y;
                    break;
                }
            }
        }
    }
    NodeSet Y(bs.begin(), bs.end());

    if (!Y.count(b) || restrict_set(t, Y, alpha) != X || !unique_dropdowns(t, Y, alpha))
        throw std::logic_error("one_key_lift: lifted set has the wrong shape");
    for (const auto& [tau, f] : fam)
        if (!is_consistent(t, f, Y, alpha)) throw std::logic_error("one_key_lift: lift not consistent for f" + std::to_string(tau));
    return Y;
}

}  // namespace finforce
