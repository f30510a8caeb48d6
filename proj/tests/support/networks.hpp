#pragma once

#include <string>
#include <vector>

#include "chiron/bn/network.hpp"

namespace chiron::testing {

inline bn::NodeSpec make_node(std::string name, std::vector<std::string> states, std::vector<std::string> parents,
                              std::vector<std::vector<double>> rows) {
    return bn::NodeSpec{std::move(name), std::move(states), std::move(parents), bn::Cpt{std::move(rows)}};
}

inline bn::NetworkSpec single_node_network() {
    return bn::NetworkSpec{"single", "1", {make_node("A", {"Present", "Absent"}, {}, {{0.3, 0.7}})}};
}

// A -> B with P(A=0)=0.5, P(B=0|A=0)=b0, P(B=0|A=1)=b1.
inline bn::NetworkSpec chain_network(double b0, double b1) {
    return bn::NetworkSpec{"chain",
                           "1",
                           {make_node("A", {"a0", "a1"}, {}, {{0.5, 0.5}}),
                            make_node("B", {"b0", "b1"}, {"A"}, {{b0, 1.0 - b0}, {b1, 1.0 - b1}})}};
}

inline constexpr const char* kSingleNodeText = R"({
  "name": "single",
  "version": "1",
  "nodes": [
    {
      "name": "A",
      "states": ["Present", "Absent"],
      "parents": [],
      "cpt": [
        [0.3, 0.7]
      ]
    }
  ]
}
)";

}  // namespace chiron::testing
