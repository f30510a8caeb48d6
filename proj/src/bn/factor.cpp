#include <algorithm>
#include <array>

#include "chiron/bn/inference.hpp"
#include "chiron/error.hpp"

namespace chiron::bn {

namespace {

std::vector<std::size_t> own_strides(const Factor& f) {
    std::vector<std::size_t> strides(f.scope.size());
    std::size_t s = 1;
    for (std::size_t i = f.scope.size(); i-- > 0;) {
        strides[i] = s;
        s *= f.cardinalities[i];
    }
    return strides;
}

// Stride of each variable of `over` inside `f`'s table, 0 when f ignores it.
std::vector<std::size_t> strides_over(const Factor& f, std::span<const NodeIndex> over) {
    const auto own = own_strides(f);
    std::vector<std::size_t> out(over.size(), 0);
    for (std::size_t i = 0; i < over.size(); ++i) {
        auto it = std::find(f.scope.begin(), f.scope.end(), over[i]);
        if (it != f.scope.end()) out[i] = own[static_cast<std::size_t>(it - f.scope.begin())];
    }
    return out;
}

std::size_t table_size(std::span<const std::size_t> cards) {
    std::size_t n = 1;
    for (auto c : cards) n *= c;
    return n;
}

// Mixed-radix counter over `cards` that tracks linear offsets into several
// tables at once.
template <std::size_t N>
class Odometer {
public:
    Odometer(std::span<const std::size_t> cards, std::array<std::vector<std::size_t>, N> strides)
        : cards_(cards), strides_(std::move(strides)), digits_(cards.size(), 0) {}

    std::size_t offset(std::size_t table) const noexcept { return offsets_[table]; }

    void next() noexcept {
        for (std::size_t d = cards_.size(); d-- > 0;) {
            if (++digits_[d] < cards_[d]) {
                for (std::size_t t = 0; t < N; ++t) offsets_[t] += strides_[t][d];
                return;
            }
            digits_[d] = 0;
            for (std::size_t t = 0; t < N; ++t) offsets_[t] -= strides_[t][d] * (cards_[d] - 1);
        }
    }

private:
    std::span<const std::size_t> cards_;
    std::array<std::vector<std::size_t>, N> strides_;
    std::vector<std::size_t> digits_;
    std::array<std::size_t, N> offsets_{};
};

}  // namespace

Factor Factor::scalar(double value) {
    Factor f;
    f.table = {value};
    return f;
}

Factor Factor::from_cpt(const IndexedNetwork& net, NodeIndex node) {
    Factor f;
    for (NodeIndex p : net.parents(node)) {
        f.scope.push_back(p);
        f.cardinalities.push_back(net.cardinality(p));
    }
    f.scope.push_back(node);
    f.cardinalities.push_back(net.cardinality(node));
    f.table.reserve(table_size(f.cardinalities));
    for (const auto& row : net.spec().nodes[node].cpt.rows) {
        f.table.insert(f.table.end(), row.begin(), row.end());
    }
    return f;
}

bool Factor::contains(NodeIndex var) const {
    return std::find(scope.begin(), scope.end(), var) != scope.end();
}

Factor multiply(const Factor& a, const Factor& b) {
    Factor out;
    out.scope = a.scope;
    out.cardinalities = a.cardinalities;
    for (std::size_t i = 0; i < b.scope.size(); ++i) {
        if (!a.contains(b.scope[i])) {
            out.scope.push_back(b.scope[i]);
            out.cardinalities.push_back(b.cardinalities[i]);
        }
    }
    const std::size_t n = table_size(out.cardinalities);
    out.table.resize(n);
    Odometer<2> it(out.cardinalities, {strides_over(a, out.scope), strides_over(b, out.scope)});
    for (std::size_t i = 0; i < n; ++i, it.next()) {
        out.table[i] = a.table[it.offset(0)] * b.table[it.offset(1)];
    }
    return out;
}

Factor sum_out(const Factor& f, NodeIndex var) {
    auto pos = std::find(f.scope.begin(), f.scope.end(), var);
    if (pos == f.scope.end()) return f;

    Factor out;
    for (std::size_t i = 0; i < f.scope.size(); ++i) {
        if (f.scope[i] == var) continue;
        out.scope.push_back(f.scope[i]);
        out.cardinalities.push_back(f.cardinalities[i]);
    }
    out.table.assign(table_size(out.cardinalities), 0.0);
    Odometer<1> it(f.cardinalities, {strides_over(out, f.scope)});
    for (std::size_t i = 0; i < f.table.size(); ++i, it.next()) {
        out.table[it.offset(0)] += f.table[i];
    }
    return out;
}

Factor reduce(const Factor& f, NodeIndex var, StateIndex state) {
    auto pos = std::find(f.scope.begin(), f.scope.end(), var);
    if (pos == f.scope.end()) return f;
    const auto p = static_cast<std::size_t>(pos - f.scope.begin());
    if (state >= f.cardinalities[p]) throw Error(ErrorCode::InvalidState, "reduce: state index out of range");

    Factor out;
    for (std::size_t i = 0; i < f.scope.size(); ++i) {
        if (i == p) continue;
        out.scope.push_back(f.scope[i]);
        out.cardinalities.push_back(f.cardinalities[i]);
    }
    const std::size_t base = state * own_strides(f)[p];
    const std::size_t n = table_size(out.cardinalities);
    out.table.resize(n);
    Odometer<1> it(out.cardinalities, {strides_over(f, out.scope)});
    for (std::size_t i = 0; i < n; ++i, it.next()) out.table[i] = f.table[base + it.offset(0)];
    return out;
}

}  // namespace chiron::bn
