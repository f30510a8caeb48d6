#include "chiron/bn/inference.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "chiron/error.hpp"

namespace chiron::bn {

namespace {

using DenseEvidence = std::vector<std::optional<StateIndex>>;

DenseEvidence resolve_evidence(const IndexedNetwork& net, const HardEvidence& evidence) {
    DenseEvidence dense(net.size());
    for (const auto& [name, state] : evidence) {
        auto idx = net.spec().index_of(name);
        if (!idx) throw Error(ErrorCode::UnknownReference, "evidence names unknown node '" + name + "'");
        if (state >= net.cardinality(*idx)) {
            throw Error(ErrorCode::InvalidState, "evidence state index out of range for node '" + name + "'");
        }
        dense[*idx] = state;
    }
    return dense;
}

NodeIndex resolve_query(const IndexedNetwork& net, std::string_view query) {
    auto idx = net.spec().index_of(query);
    if (!idx) throw Error(ErrorCode::UnknownReference, "query names unknown node '" + std::string(query) + "'");
    return *idx;
}

[[noreturn]] void impossible_evidence() {
    throw Error(ErrorCode::ImpossibleEvidence, "evidence has probability zero under the model");
}

Posterior point_mass(const IndexedNetwork& net, NodeIndex node, StateIndex state) {
    Posterior p{net.spec().nodes[node].name, std::vector<double>(net.cardinality(node), 0.0)};
    p.distribution[state] = 1.0;
    return p;
}

std::vector<double> normalized(std::vector<double> weights) {
    double z = 0.0;
    for (double w : weights) z += w;
    if (!(z > 0.0) || !std::isfinite(z)) impossible_evidence();
    for (double& w : weights) w /= z;
    return weights;
}

// Ancestral closure of the query and the evidenced nodes. Everything else is
// barren: its CPT factors sum to one and cannot change the posterior.
std::vector<bool> relevant_nodes(const IndexedNetwork& net, NodeIndex query, const DenseEvidence& evidence) {
    std::vector<bool> keep(net.size(), false);
    std::vector<NodeIndex> frontier{query};
    for (NodeIndex i = 0; i < net.size(); ++i) {
        if (evidence[i]) frontier.push_back(i);
    }
    while (!frontier.empty()) {
        NodeIndex v = frontier.back();
        frontier.pop_back();
        if (keep[v]) continue;
        keep[v] = true;
        for (NodeIndex p : net.parents(v)) frontier.push_back(p);
    }
    return keep;
}

// Greedy min-degree over the interaction graph of the current factors; ties
// go to the lowest node index.
NodeIndex pick_min_degree(const std::vector<Factor>& factors, const std::vector<NodeIndex>& hidden) {
    NodeIndex best = hidden.front();
    std::size_t best_degree = static_cast<std::size_t>(-1);
    for (NodeIndex v : hidden) {
        std::set<NodeIndex> neighbours;
        for (const auto& f : factors) {
            if (!f.contains(v)) continue;
            for (NodeIndex u : f.scope) {
                if (u != v) neighbours.insert(u);
            }
        }
        if (neighbours.size() < best_degree || (neighbours.size() == best_degree && v < best)) {
            best = v;
            best_degree = neighbours.size();
        }
    }
    return best;
}

void eliminate(std::vector<Factor>& factors, NodeIndex var) {
    std::vector<Factor> rest;
    std::optional<Factor> product;
    for (auto& f : factors) {
        if (f.contains(var)) {
            product = product ? multiply(*product, f) : std::move(f);
        } else {
            rest.push_back(std::move(f));
        }
    }
    if (product) rest.push_back(sum_out(*product, var));
    factors = std::move(rest);
}

Posterior run_elimination(const IndexedNetwork& net, const DenseEvidence& evidence, NodeIndex query,
                          const std::vector<NodeIndex>* order) {
    const auto keep = relevant_nodes(net, query, evidence);

    std::vector<Factor> factors;
    for (NodeIndex i = 0; i < net.size(); ++i) {
        if (!keep[i]) continue;
        Factor f = Factor::from_cpt(net, i);
        for (NodeIndex v : std::vector<NodeIndex>(f.scope)) {
            if (evidence[v]) f = reduce(f, v, *evidence[v]);
        }
        factors.push_back(std::move(f));
    }

    const bool query_observed = evidence[query].has_value();
    std::vector<NodeIndex> hidden;
    for (NodeIndex i = 0; i < net.size(); ++i) {
        if (keep[i] && !evidence[i] && i != query) hidden.push_back(i);
    }

    if (order) {
        for (NodeIndex v : *order) {
            auto it = std::find(hidden.begin(), hidden.end(), v);
            if (it == hidden.end()) continue;
            hidden.erase(it);
            eliminate(factors, v);
        }
        for (NodeIndex v : hidden) eliminate(factors, v);
    } else {
        while (!hidden.empty()) {
            NodeIndex v = pick_min_degree(factors, hidden);
            hidden.erase(std::find(hidden.begin(), hidden.end(), v));
            eliminate(factors, v);
        }
    }

    // What remains is scalars (the evidence likelihood up to the query's
    // factors) and factors over the query alone. Scalars cancel under
    // normalization and only matter when one of them is zero.
    std::optional<Factor> query_factor;
    for (auto& f : factors) {
        if (f.scope.empty()) {
            if (!(f.table[0] > 0.0)) impossible_evidence();
            continue;
        }
        query_factor = query_factor ? multiply(*query_factor, f) : std::move(f);
    }

    if (query_observed) return point_mass(net, query, *evidence[query]);

    // The query's own CPT is always kept, so a query factor exists here.
    return Posterior{net.spec().nodes[query].name, normalized(std::move(query_factor->table))};
}

}  // namespace

Posterior enumerate_posterior(const NetworkSpec& spec, const HardEvidence& evidence, std::string_view query) {
    const IndexedNetwork net(spec);
    const DenseEvidence dense = resolve_evidence(net, evidence);
    const NodeIndex q = resolve_query(net, query);

    std::vector<NodeIndex> free;
    std::vector<StateIndex> states(net.size(), 0);
    for (NodeIndex i = 0; i < net.size(); ++i) {
        if (dense[i]) {
            states[i] = *dense[i];
        } else {
            free.push_back(i);
        }
    }

    std::vector<double> weights(net.cardinality(q), 0.0);
    while (true) {
        double joint = 1.0;
        for (NodeIndex i = 0; i < net.size(); ++i) joint *= net.conditional(i, states, states[i]);
        weights[states[q]] += joint;

        std::size_t d = free.size();
        while (d > 0) {
            const NodeIndex v = free[d - 1];
            if (++states[v] < net.cardinality(v)) break;
            states[v] = 0;
            --d;
        }
        if (d == 0) break;
    }
    return Posterior{spec.nodes[q].name, normalized(std::move(weights))};
}

Posterior eliminate_posterior(const NetworkSpec& spec, const HardEvidence& evidence, std::string_view query) {
    const IndexedNetwork net(spec);
    return run_elimination(net, resolve_evidence(net, evidence), resolve_query(net, query), nullptr);
}

Posterior eliminate_posterior(const NetworkSpec& spec, const HardEvidence& evidence, std::string_view query,
                              std::span<const std::string> elimination_order) {
    const IndexedNetwork net(spec);
    std::vector<NodeIndex> order;
    for (const auto& name : elimination_order) order.push_back(resolve_query(net, name));
    return run_elimination(net, resolve_evidence(net, evidence), resolve_query(net, query), &order);
}

std::vector<Posterior> posterior_all(const NetworkSpec& spec, const HardEvidence& evidence) {
    const IndexedNetwork net(spec);
    const DenseEvidence dense = resolve_evidence(net, evidence);
    std::vector<Posterior> out;
    out.reserve(net.size());
    for (NodeIndex i = 0; i < net.size(); ++i) out.push_back(run_elimination(net, dense, i, nullptr));
    return out;
}

StateIndex map_state(const Posterior& posterior) {
    StateIndex best = 0;
    for (StateIndex i = 1; i < posterior.distribution.size(); ++i) {
        if (posterior.distribution[i] > posterior.distribution[best]) best = i;
    }
    return best;
}

}  // namespace chiron::bn
