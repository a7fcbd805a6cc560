#pragma once

// File formats, the scenario runner, seeded generators and DOT output.

#include "finforce/amalgamation.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace finforce {

using json = nlohmann::json;

struct CodecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A condition together with the oracle it is meant to be read against.
struct ConditionFile {
    Condition cond;
    RhoOracle rho;
};

json condition_to_json(const Condition& p, const RhoOracle& rho = RhoOracle::zero());
ConditionFile condition_from_json(const json& j);
std::string encode_condition(const Condition& p, const RhoOracle& rho = RhoOracle::zero());
ConditionFile decode_condition(const std::string& text);

json node_set_to_json(const NodeSet& s);
NodeSet node_set_from_json(const json& j, const std::string& field);
Ordinal ordinal_from_json(const json& j, const std::string& field);

json matched_pair_to_json(const MatchedPair& mp, const RhoOracle& rho);
MatchedPair matched_pair_from_json(const json& j, RhoOracle& rho);

/// Deterministic DOT digraph: solid tree edges, dashed labelled map edges.
std::string export_dot(const Condition& p);

// ---------------------------------------------------------------------------

/// Small deterministic generator; same seed, same stream everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }
    template <class C>
    const typename C::value_type& pick(const C& c) {
        auto it = c.begin();
        std::advance(it, below(c.size()));
        return *it;
    }

private:
    std::uint64_t state_;
};

struct GenBounds {
    std::size_t levels = 3;   // heights besides 0
    std::size_t width = 4;    // nodes per level
    std::size_t indices = 3;  // size of the index pool 0..indices-1
    std::size_t steps = 16;
    std::vector<Height> heights;  // height pool; empty means a default mix
    RhoOracle rho;
};

/// Seeded random walk over the constructive operations.
Condition gen_condition(std::uint64_t seed, const GenBounds& bounds);

/// Tries to add x -> y to F(tau); keeps it only if the result is a valid
/// condition below p.
std::optional<Condition> try_link(const Condition& p, Index tau, const Node& x, const Node& y, const RhoOracle& rho);

// ---------------------------------------------------------------------------

struct Step {
    std::string op;
    json args = json::object();
    std::vector<std::string> checks;  // "normal", "hausdorff"
};

struct Scenario {
    RhoOracle rho;
    std::optional<Condition> start;
    std::vector<Step> steps;
};

struct PairReport {
    Index g;
    Index t;
    bool contained;
};

struct RunTrace {
    std::vector<Condition> conditions;
    std::vector<std::string> log;
    std::vector<PairReport> pairs;
    RhoOracle rho;  // after any table extensions made by the steps
    bool ok = true;
    std::string error;
};

json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const json& j);

/// Applies one step to p; the oracle may gain table entries.
Condition apply_step(const Condition& p, const Step& step, RhoOracle& rho);

RunTrace run_scenario(const Scenario& s);
json trace_to_json(const RunTrace& t);

/// Builds a scenario by walking forward from the empty condition, choosing
/// each step's arguments from the state reached so far.
Scenario random_scenario(std::uint64_t seed, const GenBounds& bounds);

}  // namespace finforce
