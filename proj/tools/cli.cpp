// Command-line front end. Exit codes: 0 ok/true, 1 checked-false, 2 error.

#include "finforce/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace finforce;

namespace {

struct Global {
    std::string rho;
    std::uint64_t seed = 0;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Global& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(g.out);
    if (!os) throw std::runtime_error("cannot write " + g.out);
    os << text;
}

// The --rho flag replaces the file's base oracle; the file's table stays on top.
ConditionFile load(const Global& g, const std::string& path) {
    ConditionFile f = decode_condition(slurp(path));
    if (!g.rho.empty()) {
        RhoOracle r = RhoOracle::parse(g.rho);
        for (const auto& [ab, v] : f.rho.table()) r.set(ab.first, ab.second, v);
        f.rho = r;
    }
    return f;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

NodeSet parse_set(const std::string& s) {
    NodeSet out;
    for (const auto& t : split(s)) out.insert(parse_ordinal(t));
    return out;
}

IndexSet parse_indices(const std::string& s) {
    IndexSet out;
    for (const auto& t : split(s)) out.insert(std::stoull(t));
    return out;
}

int report(const Verdict& v) {
    if (!v) {
        std::cout << "ok\n";
        return 0;
    }
    std::cout << v->clause << ": " << v->detail << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite forcing conditions: validate, extend, amalgamate"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--rho", g.rho, "oracle: zero | const:<ordinal> | random:<seed>");
    app.add_option("--seed", g.seed, "seed for generators");
    app.add_option("--out", g.out, "write output here instead of stdout");

    std::string file, file2, alpha, beta, node, nodes, indices, heights;
    std::size_t k = 1;
    std::uint64_t index = 0, fresh = 1000;
    bool cone = false;
    GenBounds bounds;

    std::function<int()> action;
    auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };
    auto with_file = [&](CLI::App* s) { s->add_option("file", file, "condition file")->required(); };

    auto* validate = sub("validate", "check a condition");
    with_file(validate);
    validate->callback([&] {
        action = [&] {
            auto f = load(g, file);
            return report(validate_condition(f.cond, f.rho));
        };
    });

    auto* leqc = sub("leq", "is Q below P");
    leqc->add_option("q", file, "stronger condition")->required();
    leqc->add_option("p", file2, "weaker condition")->required();
    leqc->callback([&] {
        action = [&] { return report(explain_leq(load(g, file).cond, load(g, file2).cond)); };
    });

    auto* sep = sub("check-sep", "decide rho-separation on a level");
    with_file(sep);
    sep->add_option("--alpha", alpha, "level")->required();
    sep->add_option("--nodes", nodes, "comma-separated nodes (default: whole level)");
    sep->add_option("--indices", indices, "comma-separated indices (default: all)");
    sep->callback([&] {
        action = [&] {
            auto f = load(g, file);
            const Height a = parse_ordinal(alpha);
            const NodeSet X = nodes.empty() ? f.cond.tree.level(a) : parse_set(nodes);
            const Family fam = indices.empty() ? f.cond.F : subfamily(f.cond.F, parse_indices(indices));
            auto v = decide_rho_separation(fam, X, f.rho, a);
            std::cout << to_string(v) << "\n";
            return is_witness(v) ? 0 : 1;
        };
    });

    auto transform = [&](const char* name, const char* help, std::function<Condition(const ConditionFile&)> fn) {
        auto* s = sub(name, help);
        with_file(s);
        s->callback([&, fn] {
            action = [&, fn] {
                auto f = load(g, file);
                emit(g, encode_condition(fn(f), f.rho));
                return 0;
            };
        });
        return s;
    };

    transform("extend", "add levels", [&](const ConditionFile& f) { return extend_heights(f.cond, parse_set(heights), f.rho); })
        ->add_option("--heights", heights, "comma-separated heights")
        ->required();
    auto* widen = transform("widen", "give a node k immediate successors",
                            [&](const ConditionFile& f) { return widen_node(f.cond, parse_ordinal(node), k, f.rho); });
    widen->add_option("--node", node)->required();
    widen->add_option("--k", k)->required();
    transform("hausdorff", "insert successor levels below limits",
              [&](const ConditionFile& f) { return hausdorffize(f.cond, f.rho); });
    transform("normalize", "normalize the tree", [&](const ConditionFile& f) { return normalize_condition(f.cond, f.rho); });
    auto* grow = transform("grow", "put a node on level alpha above x", [&](const ConditionFile& f) {
        return grow_node(f.cond, parse_ordinal(node), parse_ordinal(alpha), f.rho);
    });
    grow->add_option("--node", node)->required();
    grow->add_option("--alpha", alpha)->required();
    transform("add-index", "add an index with the empty map", [&](const ConditionFile& f) { return add_index(f.cond, index); })
        ->add_option("--index", index)
        ->required();
    auto* aug = transform("augment", "put x in the domain and range of F(s)",
                          [&](const ConditionFile& f) { return augment(f.cond, index, parse_ordinal(node), f.rho); });
    aug->add_option("--index", index)->required();
    aug->add_option("--node", node)->required();
    auto* bij = transform("bijectivize", "make a separated subfamily bijective above X", [&](const ConditionFile& f) {
        const Height a = parse_ordinal(alpha);
        return cone ? bijectivize_cone(f.cond, a, parse_set(nodes), parse_indices(indices), f.rho)
                    : bijectivize_level(f.cond, a, parse_set(nodes), parse_indices(indices), f.rho);
    });
    bij->add_option("--alpha", alpha)->required();
    bij->add_option("--nodes", nodes)->required();
    bij->add_option("--indices", indices)->required();
    bij->add_flag("--cone", cone, "repeat up to the top level");

    auto* onekey = sub("one-key", "bijectivize the cone and lift X to the top through b");
    with_file(onekey);
    onekey->add_option("--alpha", alpha)->required();
    onekey->add_option("--nodes", nodes)->required();
    onekey->add_option("--indices", indices)->required();
    onekey->add_option("--b", node)->required();
    onekey->callback([&] {
        action = [&] {
            auto f = load(g, file);
            auto r = lift_with_support(f.cond, parse_ordinal(alpha), parse_set(nodes), parse_indices(indices),
                                       parse_ordinal(node), f.rho);
            json j{{"condition", condition_to_json(r.cond, f.rho)}, {"Y", node_set_to_json(r.Y)}};
            emit(g, j.dump(2) + "\n");
            return 0;
        };
    });

    auto* mpair = sub("match-pair", "build a shifted partner of a condition");
    with_file(mpair);
    mpair->add_option("--alpha", alpha)->required();
    mpair->add_option("--beta", beta)->required();
    mpair->add_option("--node", node)->required();
    mpair->add_option("--fresh-base", fresh, "first label for copied indices");
    mpair->add_option("--shared", indices, "comma-separated shared indices (default: greedy)");
    mpair->callback([&] {
        action = [&] {
            auto f = load(g, file);
            std::optional<IndexSet> shared;
            if (!indices.empty()) shared = parse_indices(indices);
            auto mp = build_matched_pair(f.cond, parse_ordinal(alpha), parse_ordinal(beta), parse_ordinal(node), fresh,
                                         f.rho, shared);
            emit(g, matched_pair_to_json(mp, f.rho).dump(2) + "\n");
            return 0;
        };
    });

    auto* amal = sub("amalgamate", "glue a matched pair into one condition");
    amal->add_option("file", file, "matched pair file")->required();
    amal->callback([&] {
        action = [&] {
            RhoOracle rho;
            auto mp = matched_pair_from_json(json::parse(slurp(file)), rho);
            emit(g, encode_condition(amalgamate(mp, rho), rho));
            return 0;
        };
    });

    auto* run = sub("run", "run a scenario");
    run->add_option("file", file, "scenario file")->required();
    run->callback([&] {
        action = [&] {
            Scenario s = scenario_from_json(json::parse(slurp(file)));
            if (!g.rho.empty()) s.rho = RhoOracle::parse(g.rho);
            RunTrace t = run_scenario(s);
            emit(g, trace_to_json(t).dump(2) + "\n");
            if (!t.ok) std::cerr << t.error << "\n";
            return t.ok ? 0 : 1;
        };
    });

    auto* gen = sub("gen", "generate a random condition");
    gen->add_option("--levels", bounds.levels);
    gen->add_option("--width", bounds.width);
    gen->add_option("--indices", bounds.indices);
    gen->add_option("--steps", bounds.steps);
    gen->callback([&] {
        action = [&] {
            if (!g.rho.empty()) bounds.rho = RhoOracle::parse(g.rho);
            emit(g, encode_condition(gen_condition(g.seed, bounds), bounds.rho));
            return 0;
        };
    });

    auto* dot = sub("export-dot", "render a condition as a DOT graph");
    with_file(dot);
    dot->callback([&] {
        action = [&] {
            emit(g, export_dot(load(g, file).cond));
            return 0;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        return action();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
