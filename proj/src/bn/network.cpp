#include "chiron/bn/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "chiron/error.hpp"

namespace chiron::bn {

std::optional<StateIndex> NodeSpec::state_index(std::string_view label) const {
    for (StateIndex i = 0; i < states.size(); ++i) {
        if (states[i] == label) return i;
    }
    return std::nullopt;
}

std::optional<NodeIndex> NetworkSpec::index_of(std::string_view node_name) const {
    for (NodeIndex i = 0; i < nodes.size(); ++i) {
        if (nodes[i].name == node_name) return i;
    }
    return std::nullopt;
}

const NodeSpec& NetworkSpec::node(std::string_view node_name) const {
    auto idx = index_of(node_name);
    if (!idx) throw Error(ErrorCode::UnknownReference, "unknown node '" + std::string(node_name) + "'");
    return nodes[*idx];
}

namespace {

Violation violation(ViolationKind kind, const std::string& node, std::string message,
                    std::optional<std::size_t> row = std::nullopt) {
    return Violation{kind, node, row, std::move(message)};
}

// Returns one directed cycle as a node-name path (first == last), or empty.
std::vector<std::string> find_cycle(const NetworkSpec& spec) {
    const std::size_t n = spec.nodes.size();
    std::unordered_map<std::string_view, NodeIndex> index;
    for (NodeIndex i = 0; i < n; ++i) index.emplace(spec.nodes[i].name, i);

    // Edges parent -> child; a cycle in this relation is a cycle in the DAG.
    std::vector<std::vector<NodeIndex>> children(n);
    for (NodeIndex i = 0; i < n; ++i) {
        for (const auto& p : spec.nodes[i].parents) {
            auto it = index.find(p);
            if (it != index.end()) children[it->second].push_back(i);
        }
    }

    enum class Mark { White, Grey, Black };
    std::vector<Mark> mark(n, Mark::White);
    std::vector<NodeIndex> stack;
    std::vector<std::string> cycle;

    std::function<bool(NodeIndex)> visit = [&](NodeIndex v) {
        mark[v] = Mark::Grey;
        stack.push_back(v);
        for (NodeIndex c : children[v]) {
            if (mark[c] == Mark::Grey) {
                auto from = std::find(stack.begin(), stack.end(), c);
                for (auto it = from; it != stack.end(); ++it) cycle.push_back(spec.nodes[*it].name);
                cycle.push_back(spec.nodes[c].name);
                return true;
            }
            if (mark[c] == Mark::White && visit(c)) return true;
        }
        stack.pop_back();
        mark[v] = Mark::Black;
        return false;
    };
    for (NodeIndex i = 0; i < n; ++i) {
        if (mark[i] == Mark::White && visit(i)) break;
    }
    return cycle;
}

}  // namespace

ValidationReport validate_network(const NetworkSpec& spec) {
    ValidationReport report;

    std::set<std::string_view> seen;
    for (const auto& node : spec.nodes) {
        if (!seen.insert(node.name).second) {
            report.push_back(violation(ViolationKind::DuplicateNode, node.name,
                                       "duplicate node '" + node.name + "'"));
        }
    }

    for (const auto& node : spec.nodes) {
        if (node.name.empty()) {
            report.push_back(violation(ViolationKind::EmptyName, node.name, "node with empty name"));
        }
        if (node.states.size() < 2) {
            report.push_back(violation(ViolationKind::TooFewStates, node.name,
                                       "node '" + node.name + "' declares fewer than 2 states"));
        }
        std::set<std::string_view> labels;
        for (const auto& s : node.states) {
            if (!labels.insert(s).second) {
                report.push_back(violation(ViolationKind::DuplicateState, node.name,
                                           "node '" + node.name + "' repeats state '" + s + "'"));
            }
        }

        bool parents_resolved = true;
        std::size_t expected_rows = 1;
        std::set<std::string_view> parent_names;
        for (const auto& p : node.parents) {
            if (!parent_names.insert(p).second) {
                report.push_back(violation(ViolationKind::DuplicateParent, node.name,
                                           "node '" + node.name + "' lists parent '" + p + "' twice"));
            }
            if (p == node.name) {
                report.push_back(violation(ViolationKind::SelfParent, node.name,
                                           "node '" + node.name + "' names itself as parent"));
                parents_resolved = false;
                continue;
            }
            auto idx = spec.index_of(p);
            if (!idx) {
                report.push_back(violation(ViolationKind::UnknownParent, node.name,
                                           "node '" + node.name + "' references unknown parent '" + p + "'"));
                parents_resolved = false;
                continue;
            }
            expected_rows *= spec.nodes[*idx].states.size();
        }

        if (parents_resolved && node.cpt.rows.size() != expected_rows) {
            std::ostringstream msg;
            msg << "node '" << node.name << "' has " << node.cpt.rows.size() << " CPT rows, expected "
                << expected_rows;
            report.push_back(violation(ViolationKind::RowCount, node.name, msg.str()));
        }

        for (std::size_t r = 0; r < node.cpt.rows.size(); ++r) {
            const auto& row = node.cpt.rows[r];
            if (row.size() != node.states.size()) {
                std::ostringstream msg;
                msg << "node '" << node.name << "' row " << r << " has " << row.size()
                    << " entries, expected " << node.states.size();
                report.push_back(violation(ViolationKind::RowWidth, node.name, msg.str(), r));
                continue;
            }
            bool in_range = true;
            double sum = 0.0;
            for (double v : row) {
                if (!std::isfinite(v) || v < 0.0 || v > 1.0) in_range = false;
                sum += v;
            }
            if (!in_range) {
                std::ostringstream msg;
                msg << "node '" << node.name << "' row " << r << " has an entry outside [0, 1]";
                report.push_back(violation(ViolationKind::ProbabilityRange, node.name, msg.str(), r));
            }
            if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
                std::ostringstream msg;
                msg.precision(12);
                msg << "node '" << node.name << "' row " << r << " sums to " << sum << ", not 1";
                report.push_back(violation(ViolationKind::RowSum, node.name, msg.str(), r));
            }
        }
    }

    auto cycle = find_cycle(spec);
    if (!cycle.empty()) {
        std::string path;
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            if (i) path += " -> ";
            path += cycle[i];
        }
        report.push_back(violation(ViolationKind::Cycle, cycle.front(), "directed cycle: " + path));
    }
    return report;
}

std::size_t cpt_row_index(std::span<const std::size_t> parent_sizes,
                          std::span<const StateIndex> parent_states) {
    if (parent_sizes.size() != parent_states.size()) {
        throw Error(ErrorCode::InvalidArgument, "parent state count does not match parent arity");
    }
    std::size_t row = 0;
    for (std::size_t i = 0; i < parent_sizes.size(); ++i) {
        if (parent_states[i] >= parent_sizes[i]) {
            throw Error(ErrorCode::InvalidArgument, "parent state index out of range");
        }
        row = row * parent_sizes[i] + parent_states[i];
    }
    return row;
}

std::size_t cpt_row_index(const NetworkSpec& spec, const NodeSpec& node,
                          std::span<const StateIndex> parent_states) {
    std::vector<std::size_t> sizes;
    sizes.reserve(node.parents.size());
    for (const auto& p : node.parents) sizes.push_back(spec.node(p).state_count());
    return cpt_row_index(sizes, parent_states);
}

IndexedNetwork::IndexedNetwork(const NetworkSpec& spec) : spec_(&spec) {
    const std::size_t n = spec.nodes.size();
    parents_.resize(n);
    cardinality_.resize(n);
    for (NodeIndex i = 0; i < n; ++i) {
        const auto& node = spec.nodes[i];
        cardinality_[i] = node.states.size();
        for (const auto& p : node.parents) {
            auto idx = spec.index_of(p);
            if (!idx) {
                throw Error(ErrorCode::UnknownReference,
                            "node '" + node.name + "' references unknown parent '" + p + "'");
            }
            parents_[i].push_back(*idx);
        }
    }
    for (NodeIndex i = 0; i < n; ++i) {
        std::size_t rows = 1;
        for (NodeIndex p : parents_[i]) rows *= cardinality_[p];
        const auto& cpt = spec.nodes[i].cpt;
        bool shaped = cpt.rows.size() == rows;
        for (const auto& row : cpt.rows) shaped = shaped && row.size() == cardinality_[i];
        if (!shaped) {
            throw Error(ErrorCode::InvalidNetwork, "node '" + spec.nodes[i].name + "' has a mis-shaped CPT");
        }
    }

    // Kahn's algorithm; ties resolved by declaration order.
    std::vector<std::size_t> pending(n);
    std::vector<std::vector<NodeIndex>> children(n);
    for (NodeIndex i = 0; i < n; ++i) {
        pending[i] = parents_[i].size();
        for (NodeIndex p : parents_[i]) children[p].push_back(i);
    }
    std::vector<NodeIndex> ready;
    for (NodeIndex i = n; i-- > 0;) {
        if (pending[i] == 0) ready.push_back(i);
    }
    while (!ready.empty()) {
        NodeIndex v = ready.back();
        ready.pop_back();
        order_.push_back(v);
        for (NodeIndex c : children[v]) {
            if (--pending[c] == 0) {
                ready.push_back(c);
                std::sort(ready.begin(), ready.end(), std::greater<>());
            }
        }
    }
    if (order_.size() != n) throw Error(ErrorCode::InvalidNetwork, "network contains a directed cycle");
}

double IndexedNetwork::conditional(NodeIndex node, std::span<const StateIndex> full, StateIndex state) const {
    std::size_t row = 0;
    for (NodeIndex p : parents_[node]) row = row * cardinality_[p] + full[p];
    return spec_->nodes[node].cpt.rows[row][state];
}

double joint_probability(const NetworkSpec& spec, const Assignment& full) {
    IndexedNetwork net(spec);
    std::vector<StateIndex> states(net.size());
    for (NodeIndex i = 0; i < net.size(); ++i) {
        const auto& node = spec.nodes[i];
        auto it = full.find(node.name);
        if (it == full.end()) {
            throw Error(ErrorCode::InvalidArgument, "assignment does not cover node '" + node.name + "'");
        }
        if (it->second >= node.state_count()) {
            throw Error(ErrorCode::InvalidState, "state index out of range for node '" + node.name + "'");
        }
        states[i] = it->second;
    }
    if (full.size() != net.size()) {
        throw Error(ErrorCode::UnknownReference, "assignment names a node outside the network");
    }
    double p = 1.0;
    for (NodeIndex i = 0; i < net.size(); ++i) p *= net.conditional(i, states, states[i]);
    return p;
}

std::size_t sample_categorical(std::span<const double> weights, std::mt19937_64& rng) {
    const double u = unit_uniform(rng);
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        cumulative += weights[i];
        last_positive = i;
        if (u < cumulative) return i;
    }
    // Row sums may fall a few ulps short of 1.
    return last_positive;
}

Assignment forward_sample(const NetworkSpec& spec, std::mt19937_64& rng) {
    IndexedNetwork net(spec);
    std::vector<StateIndex> states(net.size(), 0);
    for (NodeIndex v : net.topological_order()) {
        std::size_t row = 0;
        for (NodeIndex p : net.parents(v)) row = row * net.cardinality(p) + states[p];
        states[v] = sample_categorical(spec.nodes[v].cpt.rows[row], rng);
    }
    Assignment out;
    for (NodeIndex i = 0; i < net.size(); ++i) out.emplace(spec.nodes[i].name, states[i]);
    return out;
}

Assignment forward_sample(const NetworkSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return forward_sample(spec, rng);
}

}  // namespace chiron::bn
