#pragma once

// Discrete Bayesian network model: node/CPT types, structural validation,
// the canonical text format, joint probability and ancestral sampling.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chiron::bn {

using StateIndex = std::size_t;
using NodeIndex = std::size_t;

/// Probability normalization tolerance applied on load. Rows are never
/// renormalized.
inline constexpr double kRowSumTolerance = 1e-9;

/// Conditional probability table. One row per parent-state combination
/// (mixed radix, last parent varying fastest), one column per own state.
struct Cpt {
    std::vector<std::vector<double>> rows;

    std::size_t row_count() const noexcept { return rows.size(); }

    friend bool operator==(const Cpt&, const Cpt&) = default;
};

struct NodeSpec {
    std::string name;
    std::vector<std::string> states;
    std::vector<std::string> parents;
    Cpt cpt;

    std::size_t state_count() const noexcept { return states.size(); }
    std::optional<StateIndex> state_index(std::string_view label) const;

    friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct NetworkSpec {
    std::string name;
    std::string version;
    std::vector<NodeSpec> nodes;

    std::optional<NodeIndex> index_of(std::string_view node_name) const;
    /// Throws Error(UnknownReference) when absent.
    const NodeSpec& node(std::string_view node_name) const;

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// Node name -> state index. Full when it covers every node, partial otherwise.
using Assignment = std::map<std::string, StateIndex, std::less<>>;

enum class ViolationKind {
    EmptyName,
    TooFewStates,
    DuplicateState,
    DuplicateParent,
    SelfParent,
    UnknownParent,
    DuplicateNode,
    RowCount,
    RowWidth,
    ProbabilityRange,
    RowSum,
    Cycle,
};

struct Violation {
    ViolationKind kind;
    std::string node;
    std::optional<std::size_t> row;
    std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Reports every violated structural or numeric invariant. Empty iff valid.
ValidationReport validate_network(const NetworkSpec& spec);

/// Mixed-radix CPT row address with the last parent varying fastest.
/// Throws Error(InvalidArgument) on arity mismatch or out-of-range states.
std::size_t cpt_row_index(std::span<const std::size_t> parent_sizes,
                          std::span<const StateIndex> parent_states);
std::size_t cpt_row_index(const NetworkSpec& spec, const NodeSpec& node,
                          std::span<const StateIndex> parent_states);

/// Parses network-file text and validates it. Throws Error with code
/// Syntax, DuplicateNode, UnknownReference, Normalization or InvalidNetwork.
NetworkSpec parse_network(std::string_view text);

/// Structural parse only: the JSON shape is checked, invariants are not.
/// Used by tooling that wants to report every violation at once.
NetworkSpec parse_network_unchecked(std::string_view text);

/// Canonical text form: 2-space indentation, fixed key order, probabilities
/// with at most 12 significant digits.
std::string serialize_network(const NetworkSpec& spec);

/// Resolved, index-based view of a structurally valid network. Holds a
/// reference to the network; the network must outlive it.
class IndexedNetwork {
public:
    /// Throws Error(UnknownReference) for unresolved parents and
    /// Error(InvalidNetwork) for cycles or mis-shaped CPTs.
    explicit IndexedNetwork(const NetworkSpec& spec);

    const NetworkSpec& spec() const noexcept { return *spec_; }
    std::size_t size() const noexcept { return parents_.size(); }
    std::size_t cardinality(NodeIndex node) const noexcept { return cardinality_[node]; }
    std::span<const NodeIndex> parents(NodeIndex node) const noexcept { return parents_[node]; }
    std::span<const NodeIndex> topological_order() const noexcept { return order_; }

    /// P(node = state | parents as given by `full`), `full` indexed by node.
    double conditional(NodeIndex node, std::span<const StateIndex> full, StateIndex state) const;

private:
    const NetworkSpec* spec_;
    std::vector<std::vector<NodeIndex>> parents_;
    std::vector<std::size_t> cardinality_;
    std::vector<NodeIndex> order_;
};

/// Product of CPT entries for a full assignment. Throws Error(InvalidArgument)
/// for partial assignments and Error(InvalidState) for out-of-range states.
double joint_probability(const NetworkSpec& spec, const Assignment& full);

/// Ancestral sample in topological order. Bit-reproducible for a fixed seed.
Assignment forward_sample(const NetworkSpec& spec, std::uint64_t seed);
Assignment forward_sample(const NetworkSpec& spec, std::mt19937_64& rng);

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
/// Independent of the standard library's distribution implementations.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Index drawn from a discrete distribution by inverse CDF.
std::size_t sample_categorical(std::span<const double> weights, std::mt19937_64& rng);

}  // namespace chiron::bn
