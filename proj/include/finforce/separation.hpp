#pragma once

// Consistency, separation and rho-separation of indexed map families on a
// single tree level, plus the lifting construction that transfers a
// separated set to a higher level.

#include "finforce/rho.hpp"
#include "finforce/treemap.hpp"

#include <string>
#include <variant>
#include <vector>

namespace finforce {

using Family = std::map<Index, TreeMap>;
using IndexSet = std::set<Index>;

/// The members of `fam` whose index lies in A.
Family subfamily(const Family& fam, const IndexSet& A);

/// f_tau^m sends one node to another.
struct Relation {
    int m = 1;
    Index tau = 0;
    friend auto operator<=>(const Relation&, const Relation&) = default;
};

/// Every (m,tau) with f_tau^m(x) = y.
std::vector<Relation> relations(const Family& fam, const Node& x, const Node& y);

struct WitnessOrder {
    std::vector<Node> order;
};
struct PairwiseViolation {
    Node x;
    Node y;
    Relation first;
    Relation second;
    Height required;
};
struct Loop {
    std::vector<Node> cycle;  // first == last
};
using SeparationVerdict = std::variant<WitnessOrder, PairwiseViolation, Loop>;

inline bool is_witness(const SeparationVerdict& v) { return std::holds_alternative<WitnessOrder>(v); }
std::string to_string(const SeparationVerdict& v);

/// Upward transfer: for x,y in X, f(x|b) = y|b implies f(x) = y.
bool is_consistent(const StandardTree& t, const TreeMap& f, const NodeSet& X, const Height& b);

bool is_separated_tuple(const Family& fam, const std::vector<Node>& tuple);
bool is_rho_separated_tuple(const Family& fam, const std::vector<Node>& tuple, const RhoOracle& rho,
                            const Height& alpha);

/// Decides rho-separation of X (one level alpha) and explains the answer.
SeparationVerdict decide_rho_separation(const Family& fam, const NodeSet& X, const RhoOracle& rho,
                                        const Height& alpha);

/// Plain separation: rho-separation against the all-zero oracle.
SeparationVerdict decide_separation(const Family& fam, const NodeSet& X);

/// Lifts a separated X on level alpha to a set Y on level beta containing b
/// with Y|alpha = X and every member of fam consistent between X and Y.
NodeSet one_key_lift(const StandardTree& t, const Family& fam, const NodeSet& X, const Height& alpha,
                     const Height& beta, const Node& b);

}  // namespace finforce
