#include "capdeg/constructions.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "capdeg/error.hpp"

namespace capdeg {

GroupSpec::GroupSpec(std::vector<std::uint32_t> moduli) : moduli_(std::move(moduli)), order_(1) {
    if (moduli_.empty()) {
        throw InvalidArgument("group needs at least one modulus");
    }
    for (auto m : moduli_) {
        if (m < 1) {
            throw InvalidArgument("group moduli must be positive");
        }
        if (order_ > std::numeric_limits<std::uint32_t>::max() / m) {
            throw ResourceLimit("group order overflows 32 bits");
        }
        order_ *= m;
    }
}

GroupSpec GroupSpec::parse(const std::string& text) {
    std::vector<std::uint32_t> moduli;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        unsigned long value = 0;
        try {
            value = std::stoul(item, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("bad group modulus '" + item + "'");
        }
        if (used != item.size() || value == 0 || value > std::numeric_limits<std::uint32_t>::max()) {
            throw InvalidArgument("bad group modulus '" + item + "'");
        }
        moduli.push_back(static_cast<std::uint32_t>(value));
    }
    return GroupSpec(std::move(moduli));
}

GroupSpec GroupSpec::power(int n) const {
    if (n < 1) {
        throw InvalidArgument("group power must be at least 1");
    }
    std::vector<std::uint32_t> moduli;
    for (int i = 0; i < n; ++i) {
        moduli.insert(moduli.end(), moduli_.begin(), moduli_.end());
    }
    return GroupSpec(std::move(moduli));
}

GroupElement GroupSpec::decode(std::uint32_t code) const {
    if (code >= order_) {
        throw InvalidArgument("group element code out of range");
    }
    GroupElement out(moduli_.size());
    for (std::size_t i = moduli_.size(); i-- > 0;) {
        out[i] = code % moduli_[i];
        code /= moduli_[i];
    }
    return out;
}

std::uint32_t GroupSpec::encode(const GroupElement& element) const {
    if (element.size() != moduli_.size()) {
        throw InvalidArgument("group element has the wrong number of components");
    }
    std::uint32_t code = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        if (element[i] >= moduli_[i]) {
            throw InvalidArgument("group element component out of range");
        }
        code = code * moduli_[i] + element[i];
    }
    return code;
}

std::uint32_t GroupSpec::add(std::uint32_t a, std::uint32_t b) const {
    if (moduli_.size() == 1) {
        return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) + b) % order_);
    }
    std::uint32_t code = 0;
    std::uint32_t place = 1;
    for (std::size_t i = moduli_.size(); i-- > 0;) {
        const std::uint32_t m = moduli_[i];
        const std::uint32_t digit = (a % m + b % m) % m;
        code += digit * place;
        place *= m;
        a /= m;
        b /= m;
    }
    return code;
}

std::uint32_t GroupSpec::negate(std::uint32_t a) const {
    std::uint32_t code = 0;
    std::uint32_t place = 1;
    for (std::size_t i = moduli_.size(); i-- > 0;) {
        const std::uint32_t m = moduli_[i];
        const std::uint32_t digit = (m - a % m) % m;
        code += digit * place;
        place *= m;
        a /= m;
    }
    return code;
}

std::string GroupSpec::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += std::to_string(moduli_[i]);
    }
    return out;
}

GroundSubset::GroundSubset(GroupSpec group, int dimension, std::vector<std::vector<std::uint32_t>> elements)
    : group_(std::move(group)), dimension_(dimension), elements_(std::move(elements)) {
    if (dimension_ < 1) {
        throw InvalidArgument("ground subset dimension must be positive");
    }
    for (const auto& e : elements_) {
        if (e.size() != static_cast<std::size_t>(dimension_)) {
            throw InvalidArgument("ground subset element has the wrong dimension");
        }
        for (auto g : e) {
            if (g >= group_.order()) {
                throw InvalidArgument("ground subset element outside the group");
            }
        }
    }
    std::sort(elements_.begin(), elements_.end());
    if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end()) {
        throw InvalidArgument("ground subset elements must be pairwise distinct");
    }
}

std::vector<Vertex> GroundSubset::as_vertices() const {
    if (dimension_ != 2) {
        throw InvalidArgument("only dimension-2 subsets correspond to corner-hypergraph vertices");
    }
    std::vector<Vertex> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) {
        out.push_back(e[0] * group_.order() + e[1]);
    }
    return out;
}

Hypergraph corner_hypergraph(const GroupSpec& group) {
    return kcorner_hypergraph(group, 2);
}

Hypergraph kcorner_hypergraph(const GroupSpec& group, int k) {
    if (k < 2) {
        throw InvalidArgument("corner dimension must be at least 2");
    }
    const std::uint64_t m = group.order();
    std::uint64_t count = 1;
    for (int i = 0; i < k; ++i) {
        count *= m;
        if (count > std::numeric_limits<Vertex>::max()) {
            throw ResourceLimit("corner hypergraph has too many vertices");
        }
    }
    const auto kk = static_cast<std::size_t>(k);
    std::vector<Label> labels(count);
    std::vector<std::vector<std::uint32_t>> coords(count, std::vector<std::uint32_t>(kk));
    for (std::uint64_t v = 0; v < count; ++v) {
        std::uint64_t rest = v;
        for (std::size_t i = kk; i-- > 0;) {
            coords[v][i] = static_cast<std::uint32_t>(rest % m);
            rest /= m;
        }
        labels[v] = Label(coords[v].begin(), coords[v].end());
    }
    auto index_of = [&](const std::vector<std::uint32_t>& x) {
        std::uint64_t idx = 0;
        for (auto c : x) {
            idx = idx * m + c;
        }
        return static_cast<Vertex>(idx);
    };
    std::vector<Vertex> flat;
    flat.reserve(count * (m - 1) * (kk + 1));
    for (std::uint64_t v = 0; v < count; ++v) {
        for (std::uint32_t lambda = 1; lambda < m; ++lambda) {
            flat.push_back(static_cast<Vertex>(v));
            for (std::size_t i = 0; i < kk; ++i) {
                auto x = coords[v];
                x[i] = group.add(x[i], lambda);
                flat.push_back(index_of(x));
            }
        }
    }
    return Hypergraph(k + 1, std::move(labels), TupleSet::from_flat(k + 1, std::move(flat)));
}

Hypergraph capset_hypergraph() {
    std::vector<std::vector<Vertex>> edges;
    std::vector<Vertex> perm{0, 1, 2};
    do {
        edges.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return Hypergraph(3, {{0}, {1}, {2}}, edges);
}

bool is_apfree(const GroundSubset& s) {
    const GroupSpec& g = s.group();
    const int d = s.dimension();
    std::set<std::vector<std::uint32_t>> members(s.elements().begin(), s.elements().end());
    auto shift = [&](const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& step) {
        std::vector<std::uint32_t> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i] = g.add(x[i], step[i]);
        }
        return y;
    };
    // Enumerate steps as d-tuples of group elements, skipping zero.
    std::vector<std::uint32_t> step(static_cast<std::size_t>(d), 0);
    for (const auto& x : s.elements()) {
        for (const auto& y : s.elements()) {
            if (x == y) {
                continue;
            }
            for (int i = 0; i < d; ++i) {
                step[static_cast<std::size_t>(i)] = g.subtract(y[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)]);
            }
            const auto z = shift(y, step);
            if (z != x && z != y && members.contains(z)) {
                return false;
            }
        }
    }
    return true;
}

bool is_cornerfree(const GroundSubset& t) {
    if (t.dimension() != 2) {
        throw InvalidArgument("corner-freeness is defined for dimension-2 subsets");
    }
    const GroupSpec& g = t.group();
    const std::uint64_t m = g.order();
    std::vector<bool> member(m * m, false);
    for (const auto& e : t.elements()) {
        member[e[0] * m + e[1]] = true;
    }
    for (const auto& e : t.elements()) {
        for (std::uint32_t lambda = 1; lambda < m; ++lambda) {
            if (member[g.add(e[0], lambda) * m + e[1]] && member[e[0] * m + g.add(e[1], lambda)]) {
                return false;
            }
        }
    }
    return true;
}

GroundSubset lift_apfree_to_cornerfree(const GroundSubset& s) {
    if (s.dimension() != 1) {
        throw InvalidArgument("lift expects a dimension-1 subset");
    }
    if (!is_apfree(s)) {
        throw InvalidArgument("input set contains a three-term arithmetic progression");
    }
    const GroupSpec& g = s.group();
    // A step d with 2d = 0 gives the degenerate progression (a, a + d, a), which
    // is_apfree ignores but which lifts to a corner.
    std::set<std::uint32_t> members;
    for (const auto& e : s.elements()) {
        members.insert(e[0]);
    }
    for (std::uint32_t d = 1; d < g.order(); ++d) {
        if (g.add(d, d) != 0) {
            continue;
        }
        for (std::uint32_t a : members) {
            if (members.contains(g.add(a, d))) {
                throw InvalidArgument("input set contains two elements differing by an element of order two");
            }
        }
    }
    std::vector<std::vector<std::uint32_t>> out;
    out.reserve(static_cast<std::size_t>(g.order()) * s.size());
    for (std::uint32_t y = 0; y < g.order(); ++y) {
        for (const auto& d : s.elements()) {
            out.push_back({g.add(y, d[0]), y});
        }
    }
    GroundSubset t(g, 2, std::move(out));
    if (!is_cornerfree(t)) {
        throw VerificationFailure("lifted set is not corner-free");
    }
    return t;
}

}  // namespace capdeg
