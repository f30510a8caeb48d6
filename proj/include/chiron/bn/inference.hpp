#pragma once

// Exact posterior inference under hard evidence: a brute-force enumeration
// oracle and a variable-elimination engine that must agree, plus per-variable
// MAP extraction.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chiron/bn/network.hpp"

namespace chiron::bn {

/// Node name -> observed state index.
using HardEvidence = Assignment;

struct Posterior {
    std::string node;
    std::vector<double> distribution;

    friend bool operator==(const Posterior&, const Posterior&) = default;
};

/// Non-negative table over the joint states of `scope`, mixed radix with the
/// last scope variable varying fastest (the CPT layout).
struct Factor {
    std::vector<NodeIndex> scope;
    std::vector<std::size_t> cardinalities;
    std::vector<double> table;

    static Factor scalar(double value);
    /// P(node | parents) with scope (parents..., node).
    static Factor from_cpt(const IndexedNetwork& net, NodeIndex node);

    bool contains(NodeIndex var) const;
    std::size_t size() const noexcept { return table.size(); }
};

Factor multiply(const Factor& a, const Factor& b);
Factor sum_out(const Factor& f, NodeIndex var);
/// Restricts `var` to `state` and drops it from the scope.
Factor reduce(const Factor& f, NodeIndex var, StateIndex state);

/// Posterior by summing the joint over every evidence-consistent full
/// assignment. Exponential; the reference oracle for small networks.
Posterior enumerate_posterior(const NetworkSpec& spec, const HardEvidence& evidence, std::string_view query);

/// Production path. Eliminates hidden variables in greedy min-degree order.
Posterior eliminate_posterior(const NetworkSpec& spec, const HardEvidence& evidence, std::string_view query);

/// Same, with an explicit elimination order over node names. Names not
/// needing elimination are skipped; hidden variables the order omits are
/// eliminated afterwards in declaration order.
Posterior eliminate_posterior(const NetworkSpec& spec, const HardEvidence& evidence, std::string_view query,
                              std::span<const std::string> elimination_order);

/// One posterior per node in declaration order.
std::vector<Posterior> posterior_all(const NetworkSpec& spec, const HardEvidence& evidence);

/// Argmax; ties go to the lowest state index.
StateIndex map_state(const Posterior& posterior);

}  // namespace chiron::bn
