// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include "../support/checks.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace finforce;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Records the first failure and keeps counting.
struct Tally {
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first;
    void fail(const std::string& why) {
        if (failures++ == 0) first = why;
    }
    void expect(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

Outcome finish(const Tally& t, std::size_t need, const std::string& extra = "") {
    std::ostringstream os;
    os << t.cases << " cases";
    if (!extra.empty()) os << ", " << extra;
    if (t.failures) os << "; " << t.failures << " failures, first: " << t.first;
    if (t.cases < need) os << "; fewer than " << need << " cases";
    return {t.failures == 0 && t.cases >= need, os.str()};
}

std::string node_list(const NodeSet& X) {
    std::string s;
    for (const auto& x : X) s += (s.empty() ? "" : " ") + x.str();
    return "{" + s + "}";
}

// ---------------------------------------------------------------------------

// Fixed-point-free partial injections on {0..n-1}, as target-or-minus-one lists.
std::vector<std::vector<int>> partial_injections(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(n, -1);
    std::function<void(int, unsigned)> rec = [&](int i, unsigned used) {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        cur[i] = -1;
        rec(i + 1, used);
        for (int j = 0; j < n; ++j) {
            if (j == i || (used >> j & 1u)) continue;
            cur[i] = j;
            rec(i + 1, used | (1u << j));
        }
        cur[i] = -1;
    };
    rec(0, 0);
    return out;
}

void compare_separation(Tally& t, const Family& fam, const NodeSet& X, const RhoOracle& rho, const Height& alpha) {
    ++t.cases;
    const auto v = decide_rho_separation(fam, X, rho, alpha);
    const bool brute = oracle::brute_rho_separated(oracle::raw(fam), X, rho, alpha);
    if (is_witness(v) != brute) {
        t.fail("disagreement on " + node_list(X) + " at level " + alpha.str() + ": " + to_string(v));
        return;
    }
    if (is_witness(v) && !oracle::rho_separated_tuple(oracle::raw(fam), std::get<WitnessOrder>(v).order, rho, alpha))
        t.fail("witness order fails on " + node_list(X));
}

Outcome separation_equivalence() {
    Tally t;
    const Height alpha{1};
    for (int n = 1; n <= 4; ++n) {
        NodeSet X;
        std::vector<Node> a;
        for (int k = 0; k < n; ++k) {
            a.push_back(node_at(alpha, k));
            X.insert(a.back());
        }
        std::vector<TreeMap> maps;
        for (const auto& inj : partial_injections(n)) {
            TreeMap f;
            f.insert(Ordinal{}, Ordinal{});
            for (int i = 0; i < n; ++i)
                if (inj[i] >= 0) f.insert(a[i], a[inj[i]]);
            maps.push_back(f);
        }
        compare_separation(t, Family{}, X, RhoOracle::zero(), alpha);
        for (const auto& f : maps) compare_separation(t, Family{{0, f}}, X, RhoOracle::zero(), alpha);
        for (const auto& f : maps)
            for (const auto& g : maps)
                for (const Height& r : {Ordinal{}, alpha}) {
                    RhoOracle rho;
                    rho.set(0, 1, r);
                    compare_separation(t, Family{{0, f}, {1, g}}, X, rho, alpha);
                }
    }
    const std::size_t exhaustive = t.cases;

    Rng rng(101);
    for (int n = 0; n < 2000; ++n) {
        const auto tree = gen::random_tree(rng, 2, 6);
        const Height h = rng.pick(tree.heights());
        NodeSet X;
        for (const auto& x : tree.level(h))
            if (rng.chance(4, 5)) X.insert(x);
        if (X.empty()) X.insert(rng.pick(tree.level(h)));
        const auto fam = gen::random_family(rng, tree, 3, 4);
        const auto rho = gen::random_rho(rng, fam, {Ordinal{}, Ordinal{1}, h, h + Ordinal{1}});
        compare_separation(t, fam, X, rho, h);
    }
    return finish(t, exhaustive + 2000, std::to_string(exhaustive) + " exhaustive");
}

// ---------------------------------------------------------------------------

const std::vector<Height>& op_heights() {
    static const std::vector<Height> pool = [] {
        std::vector<Height> v;
        for (const char* s : {"1", "2", "3", "4", "7", "w", "w+1", "w+2", "w*2", "w*3+1", "w^2", "w^2+w"})
            v.push_back(parse_ordinal(s));
        return v;
    }();
    return pool;
}

Condition random_start(std::uint64_t seed, RhoOracle& rho) {
    GenBounds b;
    b.levels = 3;
    b.width = 4;
    b.indices = 4;
    b.steps = 20;
    b.rho = RhoOracle::random(seed);
    rho = b.rho;
    return gen_condition(seed, b);
}

Node above_in(const StandardTree& t, const NodeSet& X, Rng& rng) {
    std::vector<Node> tops;
    for (const auto& y : t.level(t.max_height()))
        for (const auto& x : X)
            if (oracle::below_eq(t, x, y)) tops.push_back(y);
    return tops.at(rng.below(tops.size()));
}

Outcome blanket_soundness() {
    Tally t;
    static const char* names[] = {"extend_heights", "widen_node",  "hausdorffize",      "normalize_condition",
                                  "grow_node",      "add_index",   "augment",           "fan_out_condition",
                                  "bijectivize_level", "bijectivize_cone", "lift_with_support", "amalgamate"};
    constexpr std::size_t nops = 12;
    std::vector<std::size_t> per(nops, 0);
    std::size_t skipped = 0;
    for (std::uint64_t seed = 0; t.cases < 1000 && seed < 5000; ++seed) {
        Rng rng(seed ^ 0x5eed);
        const std::size_t op = seed % nops;
        RhoOracle rho;
        Condition in;
        Condition out;
        try {
            switch (op) {
                case 0: {
                    in = random_start(seed, rho);
                    HeightSet Z;
                    for (std::size_t k = 1 + rng.below(2); k > 0; --k) Z.insert(rng.pick(op_heights()));
                    out = extend_heights(in, Z, rho);
                    break;
                }
                case 1:
                    in = random_start(seed, rho);
                    out = widen_node(in, rng.pick(in.tree.nodes()), 1 + rng.below(3), rho);
                    break;
                case 2:
                    in = random_start(seed, rho);
                    out = hausdorffize(in, rho);
                    break;
                case 3:
                    in = random_start(seed, rho);
                    out = normalize_condition(in, rho);
                    break;
                case 4: {
                    in = random_start(seed, rho);
                    const Node x = rng.pick(in.tree.nodes());
                    std::vector<Height> higher;
                    for (const auto& h : op_heights())
                        if (height_of(x) < h) higher.push_back(h);
                    if (higher.empty()) throw PreconditionError("no height above x");
                    out = grow_node(in, x, higher[rng.below(higher.size())], rho);
                    break;
                }
                case 5:
                    in = random_start(seed, rho);
                    out = add_index(in, rng.below(6));
                    break;
                case 6:
                    in = random_start(seed, rho);
                    out = augment(in, rng.below(6), rng.pick(in.tree.nodes()), rho);
                    break;
                case 7: {
                    in = random_start(seed, rho);
                    const auto levels = in.tree.levels();
                    const NodeSet& lv = in.tree.level(rng.pick(levels));
                    NodeSet X;
                    for (const auto& x : lv)
                        if (rng.chance(1, 2)) X.insert(x);
                    std::size_t most = 0;
                    for (const auto& x : X) most = std::max(most, in.tree.children(x).size());
                    out = fan_out_condition(in, X, most + rng.below(3), rho);
                    break;
                }
                case 8: {
                    auto c = gen::level_case(seed, true);
                    in = c.p;
                    rho = c.rho;
                    out = bijectivize_level(in, c.alpha, c.X, c.A, rho);
                    break;
                }
                case 9: {
                    auto c = gen::level_case(seed, false);
                    in = c.p;
                    rho = c.rho;
                    out = bijectivize_cone(in, c.alpha, c.X, c.A, rho);
                    break;
                }
                case 10: {
                    auto c = gen::level_case(seed, false);
                    rho = c.rho;
                    in = normalize_condition(c.p, rho);
                    out = lift_with_support(in, c.alpha, c.X, c.A, above_in(in.tree, c.X, rng), rho).cond;
                    break;
                }
                default: {
                    in = random_start(seed, rho);
                    in = add_index(in, 0);
                    const Height alpha = parse_ordinal("w^w");
                    in = normalize_condition(extend_heights(in, {alpha}, rho), rho);
                    auto mp = build_matched_pair(in, alpha, parse_ordinal("w^w*2"), rng.pick(in.tree.level(alpha)),
                                                 100, rho);
                    out = amalgamate(mp, rho);
                    break;
                }
            }
        } catch (const PreconditionError&) {
            ++skipped;
            continue;
        } catch (const std::exception& e) {
            ++t.cases;
            t.fail(std::string(names[op]) + " seed " + std::to_string(seed) + " threw: " + e.what());
            continue;
        }
        ++t.cases;
        ++per[op];
        if (auto v = validate_condition(out, rho))
            t.fail(std::string(names[op]) + " seed " + std::to_string(seed) + " invalid: " + v->clause + " " + v->detail);
        else if (auto w = explain_leq(out, in))
            t.fail(std::string(names[op]) + " seed " + std::to_string(seed) + " not below: " + w->clause + " " + w->detail);
    }
    std::ostringstream os;
    os << skipped << " unsatisfiable draws skipped; per op";
    for (std::size_t k = 0; k < nops; ++k) os << ' ' << per[k];
    Tally u = t;
    for (std::size_t k = 0; k < nops; ++k)
        if (per[k] == 0) u.fail(std::string("no satisfiable draw for ") + names[k]);
    return finish(u, 1000, os.str());
}

// ---------------------------------------------------------------------------

HeightSet with_inserted(Rng& rng, const StandardTree& t) {
    HeightSet B = t.heights();
    const std::size_t extra = 1 + rng.below(3);
    for (std::size_t k = 0; k < extra; ++k) B.insert(rng.pick(gen::height_pool()));
    return B;
}

std::string prop_meets(Rng& rng, std::size_t& inserted_hits) {
    const auto t = gen::random_tree(rng, 4, 3);
    const auto u = simple_extend(t, with_inserted(rng, t));
    for (const auto& a : t.nodes())
        for (const auto& b : t.nodes()) {
            if (meet(u, a, b) != meet(t, a, b)) return "meet changes in the extension";
            if (meet(t, a, b) != oracle::meet(t, a, b)) return "meet disagrees with the oracle";
        }
    const HeightSet old = t.heights();
    if (old.empty()) return "";
    const Height top = *old.rbegin();
    for (const auto& alpha : u.heights()) {
        if (old.count(alpha) || !(alpha < top)) continue;
        const Height beta = *old.upper_bound(alpha);
        for (const auto& a0 : u.level(alpha)) {
            std::vector<Node> up;
            for (const auto& y : u.level(beta))
                if (oracle::below(u, a0, y)) up.push_back(y);
            if (up.size() != 1) continue;
            const Node a0p = up[0];
            for (const auto& a1 : t.nodes()) {
                if (t.comparable(a0p, a1)) continue;
                ++inserted_hits;
                if (meet(u, a0, a1) != meet(t, a0p, a1)) return "inserted-level meet differs";
                if (oracle::meet(u, a0, a1) != oracle::meet(t, a0p, a1)) return "inserted-level meet differs (oracle)";
            }
        }
    }
    return "";
}

// The relation test in three readings: the library flags, the definition, and the meet criterion.
std::string prop_relation(Rng& rng, std::size_t& yes, std::size_t& no) {
    const auto t = gen::random_tree(rng, 3, 3);
    PairSet f = gen::random_closed_relation(rng, t);
    if (rng.chance(1, 2))
        for (const auto& pr : gen::random_map(rng, t, rng.chance(1, 2), true).pairs()) f.insert(pr);
    bool functional = true, increasing = true, criterion = true;
    for (const auto& [a0, b0] : f)
        for (const auto& [a1, b1] : f) {
            if (a0 == a1 && b0 != b1) functional = false;
            if (oracle::below(t, a0, a1) && !oracle::below(t, b0, b1)) increasing = false;
            if (height_of(oracle::meet(t, b0, b1)) < height_of(oracle::meet(t, a0, a1))) criterion = false;
        }
    const auto flags = classify_map(t, f);
    const bool lib = flags.functional && flags.strictly_increasing;
    (criterion ? yes : no) += 1;
    if ((functional && increasing) != criterion) return "meet criterion disagrees with the definition";
    if (lib != criterion) return "library flags disagree with the meet criterion";
    return "";
}

std::string prop_standard_meets(Rng& rng) {
    const auto t = gen::random_tree(rng, 4, 4);
    const auto f = gen::random_map(rng, t);
    if (!is_standard(t, f)) return "generated map not standard";
    for (const auto& [a0, b0] : f.forward())
        for (const auto& [a1, b1] : f.forward()) {
            if (height_of(meet(t, a0, a1)) != height_of(meet(t, b0, b1))) return "meet height not preserved";
            if (height_of(oracle::meet(t, a0, a1)) != height_of(oracle::meet(t, b0, b1)))
                return "meet height not preserved (oracle)";
        }
    return "";
}

NodeSet random_subset(Rng& rng, const NodeSet& lv) {
    NodeSet X;
    for (const auto& x : lv)
        if (rng.chance(2, 3)) X.insert(x);
    if (X.empty()) X.insert(rng.pick(lv));
    return X;
}

// Returns false when the premise does not hold.
bool prop_uniqueness(Rng& rng, std::string& err) {
    const auto t = gen::random_tree(rng, 3, 5);
    const auto fam = gen::random_family(rng, t, 3, 4);
    const Height h = rng.pick(t.heights());
    const NodeSet X = random_subset(rng, t.level(h));
    if (!is_witness(decide_separation(fam, X))) return false;
    if (!oracle::brute_separated(oracle::raw(fam), X)) {
        err = "library witness without a brute-force order";
        return true;
    }
    for (const auto& x : X)
        for (const auto& y : X) {
            std::size_t n = 0;
            for (const auto& [tau, f] : fam) n += (f.at(x) == y) + (f.inv(x) == y);
            if (n > 1 || relations(fam, x, y).size() > 1) err = "two relations between " + x.str() + " and " + y.str();
        }
    return true;
}

bool prop_strong_persistence(Rng& rng, std::string& err) {
    const auto t = gen::random_tree(rng, 3, 4);
    if (t.heights().size() < 2) return false;
    const auto fam = gen::random_family(rng, t, 3, 4);
    const HeightSet ht = t.heights();
    std::vector<Height> hs(ht.begin(), ht.end());
    const std::size_t i = rng.below(hs.size() - 1);
    const Height alpha = hs[i], beta = hs[i + 1 + rng.below(hs.size() - i - 1)];
    NodeSet X = random_subset(rng, t.level(alpha));
    while (!X.empty() && !is_witness(decide_separation(fam, X))) X.erase(std::next(X.begin(), rng.below(X.size())));
    NodeSet Y;
    for (const auto& b : t.level(beta))
        for (const auto& x : X)
            if (oracle::below(t, x, b)) Y.insert(b);
    if (Y.empty()) return false;
    if (!oracle::brute_separated(oracle::raw(fam), Y)) err = "not separated above " + node_list(X);
    else if (!is_witness(decide_separation(fam, Y))) err = "library misses the lifted order";
    return true;
}

bool prop_downward_persistence(Rng& rng, std::string& err) {
    const auto t = gen::random_tree(rng, 3, 4);
    if (t.heights().size() < 2) return false;
    const auto fam = gen::random_family(rng, t, 3, 4);
    const HeightSet ht = t.heights();
    std::vector<Height> hs(ht.begin(), ht.end());
    const std::size_t j = 1 + rng.below(hs.size() - 1);
    const Height beta = hs[j], alpha = hs[rng.below(j)];
    const auto rho = gen::random_rho(rng, fam, {Ordinal{}, alpha, beta});
    const NodeSet X = random_subset(rng, t.level(beta));
    NodeSet down;
    for (const auto& x : X) down.insert(*oracle::dropdown(t, x, alpha));
    if (down.size() != X.size()) return false;
    const auto rf = oracle::raw(fam);
    for (const auto& [tau, f] : fam) {
        const bool c = oracle::consistent(t, rf.at(tau), X, alpha);
        if (c != is_consistent(t, f, X, alpha)) {
            err = "consistency disagrees with the oracle";
            return true;
        }
        if (!c) return false;
    }
    if (!oracle::brute_rho_separated(rf, X, rho, beta)) return false;
    if (!oracle::brute_rho_separated(rf, down, rho, alpha)) err = "drop-downs of " + node_list(X) + " not separated";
    else if (!is_witness(decide_rho_separation(fam, down, rho, alpha))) err = "library disagrees below";
    return true;
}

bool prop_inserted_level(Rng& rng, std::string& err) {
    const auto t = gen::random_tree(rng, 3, 4);
    const auto fam = gen::random_family(rng, t, 3, 4);
    const HeightSet ht = t.heights();
    std::vector<Height> hs(ht.begin(), ht.end());
    if (hs.empty()) return false;
    const std::size_t j = rng.below(hs.size());
    const Height beta = hs[j];
    const Height prev = j == 0 ? Ordinal{} : hs[j - 1];
    // Something strictly between prev and beta.
    Height alpha = prev + Ordinal{1};
    if (!(alpha < beta)) return false;
    if (rng.chance(1, 2) && prev + Ordinal{2} < beta) alpha = prev + Ordinal{2};
    const auto rho = gen::random_rho(rng, fam, {Ordinal{}, alpha, beta});
    const auto rf = oracle::raw(fam);
    if (!oracle::brute_rho_separated(rf, t.level(beta), rho, beta)) return false;
    HeightSet B = t.heights();
    B.insert(alpha);
    const auto u = simple_extend(t, B);
    Family g;
    for (const auto& [tau, f] : fam) {
        g.emplace(tau, downward_close_map(t, u, f));
        if (!is_standard(u, g.at(tau))) {
            err = "closure not standard";
            return true;
        }
    }
    if (!oracle::brute_rho_separated(oracle::raw(g), u.level(alpha), rho, alpha)) err = "inserted level not separated";
    else if (!is_witness(decide_rho_separation(g, u.level(alpha), rho, alpha))) err = "library disagrees on the inserted level";
    return true;
}

Outcome prop_properties() {
    Tally t;
    std::ostringstream os;
    auto run = [&](const char* name, auto&& body) {
        Rng rng(std::hash<std::string>{}(name) & 0xffffff);
        std::size_t hits = 0, tries = 0;
        while (hits < 500 && tries < 100000) {
            ++tries;
            std::string err;
            if (!body(rng, err)) continue;
            ++hits;
            if (!err.empty()) t.fail(std::string(name) + ": " + err);
        }
        t.cases += hits;
        if (hits < 500) t.fail(std::string(name) + ": only " + std::to_string(hits) + " instances");
        os << ' ' << name << '=' << hits;
    };
    std::size_t inserted_hits = 0;
    run("meets", [&](Rng& rng, std::string& err) {
        err = prop_meets(rng, inserted_hits);
        return true;
    });
    if (inserted_hits < 500) t.fail("inserted-level meets: only " + std::to_string(inserted_hits) + " instances");
    std::size_t yes = 0, no = 0;
    run("relation", [&](Rng& rng, std::string& err) {
        err = prop_relation(rng, yes, no);
        return true;
    });
    if (yes < 50 || no < 50) t.fail("relation: one side of the biconditional is barely exercised");
    run("standard_meets", [&](Rng& rng, std::string& err) {
        err = prop_standard_meets(rng);
        return true;
    });
    run("uniqueness", prop_uniqueness);
    run("strong_persistence", prop_strong_persistence);
    run("downward_persistence", prop_downward_persistence);
    run("inserted_level", prop_inserted_level);
    os << " (inserted-level meet pairs " << inserted_hits << ", relation true/false " << yes << '/' << no << ')';
    return finish(t, 3500, os.str().substr(1));
}

// ---------------------------------------------------------------------------

Outcome lift_pipeline() {
    Tally t;
    for (std::uint64_t seed = 0; t.cases < 300 && seed < 2000; ++seed) {
        const auto c = gen::level_case(seed, false);
        const auto p = normalize_condition(c.p, c.rho);
        Rng rng(seed + 77);
        const Node b = above_in(p.tree, c.X, rng);
        ++t.cases;
        try {
            const auto r = lift_with_support(p, c.alpha, c.X, c.A, b, c.rho);
            const auto e = oracle::check_lift(p, r, c.rho, c.alpha, c.X, c.A, b);
            if (!e.empty()) t.fail("seed " + std::to_string(seed) + ": " + e);
            else if (auto v = check_lift(p, r, c.alpha, c.X, c.A, b, c.rho))
                t.fail("seed " + std::to_string(seed) + ": library check " + v->clause + " " + v->detail);
        } catch (const std::exception& e) {
            t.fail("seed " + std::to_string(seed) + " threw: " + e.what());
        }
    }
    return finish(t, 300);
}

Outcome level_bullets() {
    Tally t;
    std::size_t edges = 0, multi = 0;
    for (std::uint64_t seed = 0; t.cases < 300 && seed < 2000; ++seed) {
        const auto c = gen::level_case(seed + 5000, true);
        ++t.cases;
        try {
            const auto r = bijectivize_level_traced(c.p, c.alpha, c.X, c.A, c.rho);
            edges += !r.record.edges.empty();
            multi += r.record.block > 1;
            const auto e = oracle::check_level(c.p, r.cond, c.rho, c.X, c.A);
            if (!e.empty()) t.fail("seed " + std::to_string(seed) + ": " + e);
            else if (auto v = check_level_bullets(c.p, r.cond, c.alpha, c.X, c.A, c.rho))
                t.fail("seed " + std::to_string(seed) + ": " + v->clause + " " + v->detail);
            else if (auto w = check_partition(c.p, r.cond, r.record))
                t.fail("seed " + std::to_string(seed) + ": " + w->clause + " " + w->detail);
        } catch (const std::exception& e) {
            t.fail("seed " + std::to_string(seed) + " threw: " + e.what());
        }
    }
    return finish(t, 300, std::to_string(edges) + " with edges in X, " + std::to_string(multi) + " with p > 1");
}

Outcome matched_pairs() {
    Tally t;
    const std::vector<std::pair<const char*, const char*>> shapes{
        {"w^w", "w^w*2"}, {"w^w", "w^w*3"}, {"w^w*2", "w^w*3"}, {"w^(w+1)", "w^(w+1)*2"}};
    for (std::uint64_t seed = 0; t.cases < 200 && seed < 1000; ++seed) {
        Rng rng(seed * 31 + 7);
        const auto& [as, bs] = shapes[seed % shapes.size()];
        const Height alpha = parse_ordinal(as), beta = parse_ordinal(bs);
        RhoOracle rho;
        Condition p = add_index(random_start(seed, rho), 0);
        HeightSet Z{alpha};
        if (rng.chance(1, 2)) Z.insert(alpha + Ordinal{1 + rng.below(3)});
        p = normalize_condition(extend_heights(p, Z, rho), rho);
        std::vector<Node> xs;
        for (const auto& x : p.tree.nodes())
            if (!(height_of(x) < alpha)) xs.push_back(x);
        const Node x = xs[rng.below(xs.size())];
        std::optional<IndexSet> shared;
        if (rng.chance(1, 3)) shared = IndexSet{0};
        ++t.cases;
        try {
            const auto mp = build_matched_pair(p, alpha, beta, x, 1000, rho, shared);
            if (auto v = validate_matched_pair(mp, rho)) {
                t.fail("seed " + std::to_string(seed) + ": pair " + v->clause + " " + v->detail);
                continue;
            }
            const auto w = amalgamate(mp, rho);
            if (auto v = validate_condition(w, rho)) t.fail("seed " + std::to_string(seed) + ": " + v->clause + " " + v->detail);
            else if (auto la = explain_leq(w, mp.pA)) t.fail("seed " + std::to_string(seed) + ": not below pA, " + la->detail);
            else if (auto lb = explain_leq(w, mp.pB)) t.fail("seed " + std::to_string(seed) + ": not below pB, " + lb->detail);
            else if (!w.tree.less(mp.xA, mp.xB) || !oracle::below(w.tree, mp.xA, mp.xB))
                t.fail("seed " + std::to_string(seed) + ": xA not below xB");
        } catch (const std::exception& e) {
            t.fail("seed " + std::to_string(seed) + " threw: " + e.what());
        }
    }
    return finish(t, 200);
}

Outcome scenario_traces() {
    Tally t;
    std::size_t pairs = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GenBounds b;
        b.steps = 14;
        b.indices = 4;
        b.rho = RhoOracle::random(seed);
        ++t.cases;
        try {
            const auto s = random_scenario(seed, b);
            const auto r = run_scenario(s);
            if (!r.ok) {
                t.fail("seed " + std::to_string(seed) + ": " + r.error);
                continue;
            }
            for (const auto& pr : r.pairs) {
                ++pairs;
                if (!pr.contained) t.fail("seed " + std::to_string(seed) + ": pair escapes");
                // Recomputed here against the recorded snapshots.
                if (!strong_ad_containment(r.conditions, pr.g, pr.t)) t.fail("seed " + std::to_string(seed) + ": recheck");
            }
        } catch (const std::exception& e) {
            t.fail("seed " + std::to_string(seed) + " threw: " + e.what());
        }
    }
    return finish(t, 100, std::to_string(pairs) + " index pairs");
}

Outcome ordinal_kernel() {
    Tally t;
    Rng rng(8);
    for (int n = 0; n < 1000; ++n) {
        const auto a = oracle::random_poly(rng), b = oracle::random_poly(rng), c = oracle::random_poly(rng);
        const Ordinal A = oracle::to_ordinal(a), B = oracle::to_ordinal(b), C = oracle::to_ordinal(c);
        ++t.cases;
        const std::string tag = "case " + std::to_string(n) + " (" + A.str() + ")";
        const auto [h, off] = oracle::split(a);
        t.expect(height_split(A) == HeightSplit{oracle::to_ordinal(h), Natural(off)}, tag + ": split");
        t.expect(node_at(height_of(A), height_split(A).offset) == A, tag + ": node_at inverse");
        t.expect(A + B == oracle::to_ordinal(oracle::add(a, b)), tag + ": sum");
        t.expect((A + B) + C == A + (B + C), tag + ": associativity");
        t.expect((A + B) + C == oracle::to_ordinal(oracle::add(a, oracle::add(b, c))), tag + ": associativity vs oracle");
        t.expect(omega_mul(A + B) == omega_mul(A) + omega_mul(B), tag + ": distributivity");
        t.expect(omega_mul(A + B) == oracle::to_ordinal(oracle::omega_times(oracle::add(a, b))),
                 tag + ": distributivity vs oracle");
        const json j = json::parse(json(A.str()).dump());
        t.expect(ordinal_from_json(j, "x") == A, tag + ": json round trip");
        t.expect(parse_ordinal(A.str()) == A && A.str() == oracle::print(a), tag + ": text round trip");
    }
    return finish(t, 1000);
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit;  // seconds, 0 = none
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {"rho-separation equals brute force", 60, separation_equivalence},
        {"blanket soundness of the forcing operations", 0, blanket_soundness},
        {"tree, map and separation properties", 0, prop_properties},
        {"cone bijectivization with lifted support", 30, lift_pipeline},
        {"one-level bijectivization bullets and blocks", 0, level_bullets},
        {"matched-pair amalgamation", 60, matched_pairs},
        {"strong almost-disjointness on scenario traces", 0, scenario_traces},
        {"ordinal kernel", 10, ordinal_kernel},
    };
    int failed = 0;
    for (std::size_t k = 0; k < all.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = all[k].run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (all[k].limit > 0 && secs >= all[k].limit) {
            o.ok = false;
            o.detail += "; over the " + std::to_string(static_cast<int>(all[k].limit)) + " s budget";
        }
        failed += !o.ok;
        std::printf("%s %zu %s [%.2f s] %s\n", o.ok ? "PASS" : "FAIL", k + 1, all[k].name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
