#include "finforce/harness.hpp"

namespace finforce {

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::optional<Condition> try_link(const Condition& p, Index tau, const Node& x, const Node& y, const RhoOracle& rho) {
    auto it = p.F.find(tau);
    if (it == p.F.end() || !p.tree.contains(x) || !p.tree.contains(y)) return std::nullopt;
    if (x == y || height_of(x) != height_of(y)) return std::nullopt;
    if (it->second.in_dom(x) || it->second.in_ran(y)) return std::nullopt;
    Condition q = p;
    TreeMap& f = q.F.at(tau);
    if (!f.in_dom(Ordinal{})) f.insert(Ordinal{}, Ordinal{});
    auto px = p.tree.parent(x);
    auto py = p.tree.parent(y);
    if (!px || !py) return std::nullopt;
    auto img = f.at(*px);
    if (!img || *img != *py) return std::nullopt;
    f.insert(x, y);
    if (validate_condition(q, rho) || !leq(q, p)) return std::nullopt;
    return q;
}

namespace {

std::vector<Height> default_heights() {
    std::vector<Height> out;
    for (const char* s : {"1", "2", "3", "4", "w", "w+1", "w+2", "w*2", "w*2+1", "w^2"}) out.push_back(parse_ordinal(s));
    return out;
}

bool within(const Condition& c, const GenBounds& b) {
    if (c.tree.heights().size() > b.levels) return false;
    for (const auto& h : c.tree.levels())
        if (c.tree.level(h).size() > b.width) return false;
    return true;
}

std::optional<Condition> random_link(const Condition& p, Rng& rng, const GenBounds& b) {
    if (p.F.empty() || p.tree.size() < 2) return std::nullopt;
    const Index tau = rng.pick(p.F).first;
    const TreeMap& f = p.F.at(tau);
    std::vector<std::pair<Node, Node>> options;
    for (const auto& x : p.tree.nodes()) {
        if (x.is_zero() || f.in_dom(x)) continue;
        const Node px = *p.tree.parent(x);
        std::optional<Node> img = px.is_zero() ? std::optional<Node>{Ordinal{}} : f.at(px);
        if (!img) continue;
        for (const auto& y : p.tree.children(*img))
            if (y != x && !f.in_ran(y)) options.emplace_back(x, y);
    }
    if (options.empty()) return std::nullopt;
    const auto& [x, y] = options[rng.below(options.size())];
    return try_link(p, tau, x, y, b.rho);
}

}  // namespace

Condition gen_condition(std::uint64_t seed, const GenBounds& bounds) {
    Rng rng(seed);
    const std::vector<Height> pool = bounds.heights.empty() ? default_heights() : bounds.heights;
    const std::size_t nidx = std::max<std::size_t>(bounds.indices, 1);
    Condition p;
    p.F.emplace(0, TreeMap{});

    for (std::size_t step = 0; step < bounds.steps; ++step) {
        std::optional<Condition> next;
        try {
            switch (rng.below(8)) {
                case 0:
                    next = extend_heights(p, {rng.pick(pool)}, bounds.rho);
                    break;
                case 1:
                    next = add_index(p, rng.below(nidx));
                    break;
                case 2:
                    next = augment(p, rng.below(nidx), rng.pick(p.tree.nodes()), bounds.rho);
                    break;
                case 3:
                    next = widen_node(p, rng.pick(p.tree.nodes()), 1 + rng.below(2), bounds.rho);
                    break;
                case 4: {
                    const Node x = rng.pick(p.tree.nodes());
                    const Height alpha = rng.pick(pool);
                    if (height_of(x) < alpha) next = grow_node(p, x, alpha, bounds.rho);
                    break;
                }
                case 5:
                    next = normalize_condition(p, bounds.rho);
                    break;
                default:
                    next = random_link(p, rng, bounds);
                    break;
            }
        } catch (const PreconditionError&) {
            next.reset();
        }
        if (next && within(*next, bounds)) p = std::move(*next);
    }
    if (auto v = validate_condition(p, bounds.rho)) throw std::logic_error("gen_condition: produced an invalid condition");
    return p;
}

}  // namespace finforce
