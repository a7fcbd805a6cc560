#pragma once

// Making a separated subfamily total and surjective on the cone above a
// level set: one level at a time, then the whole cone, then with a lifted
// support set on the top level.

#include "finforce/condition.hpp"

namespace finforce {

/// What bijectivize_level built, for checking the block properties.
struct BijectivizeRecord {
    Height alpha;
    Height beta;
    std::vector<Node> order;                   // a_0..a_{q-1}, separated
    std::size_t block = 0;                     // p
    std::vector<std::vector<NodeSet>> blocks;  // blocks[i][k] = X^i_k
    struct Edge {
        Index tau;
        std::size_t i;
        std::size_t j;
    };
    std::vector<Edge> edges;  // F(tau)(a_i) = a_j inside X, tau in A
};

struct BijectivizeResult {
    Condition cond;
    BijectivizeRecord record;
};

BijectivizeResult bijectivize_level_traced(const Condition& p, const Height& alpha, const NodeSet& X,
                                           const IndexSet& A, const RhoOracle& rho);
Condition bijectivize_level(const Condition& p, const Height& alpha, const NodeSet& X, const IndexSet& A,
                            const RhoOracle& rho);

/// Repeats bijectivize_level on successive levels up to the top.
Condition bijectivize_cone(const Condition& p, const Height& alpha, const NodeSet& X, const IndexSet& A,
                           const RhoOracle& rho);

struct LiftResult {
    Condition cond;
    NodeSet Y;
};

/// bijectivize_cone followed by one_key_lift to the top level through b.
LiftResult lift_with_support(const Condition& p, const Height& alpha, const NodeSet& X, const IndexSet& A,
                             const Node& b, const RhoOracle& rho);

/// The seven postconditions of one bijectivization step.
Verdict check_level_bullets(const Condition& p, const Condition& out, const Height& alpha, const NodeSet& X,
                            const IndexSet& A, const RhoOracle& rho);
/// Block partition shape and the three block transfer properties.
Verdict check_partition(const Condition& p, const Condition& out, const BijectivizeRecord& rec);
/// Postconditions of the whole-cone version.
Verdict check_cone_bullets(const Condition& p, const Condition& out, const Height& alpha, const NodeSet& X,
                           const IndexSet& A, const RhoOracle& rho);
/// Postconditions of lift_with_support.
Verdict check_lift(const Condition& p, const LiftResult& out, const Height& alpha, const NodeSet& X,
                   const IndexSet& A, const Node& b, const RhoOracle& rho);

}  // namespace finforce
