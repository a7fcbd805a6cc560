#pragma once

// Two isomorphic conditions that agree below alpha (resp. beta) are glued
// into one common extension in which x^alpha lies below x^beta.

#include "finforce/bijectivize.hpp"

#include <optional>

namespace finforce {

struct MatchedPair {
    Condition pA;
    Condition pB;
    Height alpha;
    Height beta;
    StandardTree common;  // pA.tree below alpha, equal to pB.tree below beta
    IndexSet A;           // shared indices
    std::map<Node, Node> iso_nodes;
    std::map<Index, Index> iso_indices;
    Node xA;
    Node xB;
};

/// Checks the thinning properties and the rho premises.
Verdict validate_matched_pair(const MatchedPair& mp, const RhoOracle& rho);

/// Builds the partner of p by shifting every height >= alpha up to beta and
/// relabelling non-shared indices from fresh_index_base. The oracle gains
/// table entries for the new indices. `shared` defaults to a greedy maximal
/// set containing 0 with pairwise rho below alpha.
MatchedPair build_matched_pair(const Condition& p, const Height& alpha, const Height& beta, const Node& x,
                               Index fresh_index_base, RhoOracle& rho,
                               const std::optional<IndexSet>& shared = std::nullopt);

struct AmalgamationRecord {
    NodeSet X_alpha;
    NodeSet X_beta;
    std::map<Node, std::vector<Node>> chains;  // y -> C_y, bottom first
    Node z_alpha;
    Condition lifted;  // (U, G)
    NodeSet X_alpha_plus;
    NodeSet S;
    NodeSet C;
    NodeSet D;
};

struct AmalgamationResult {
    Condition cond;
    AmalgamationRecord record;
};

AmalgamationResult amalgamate_traced(const MatchedPair& mp, const RhoOracle& rho);
Condition amalgamate(const MatchedPair& mp, const RhoOracle& rho);

}  // namespace finforce
