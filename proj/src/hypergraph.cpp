#include "capdeg/hypergraph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "capdeg/error.hpp"

namespace capdeg {

namespace {

bool tuple_less(std::span<const Vertex> a, std::span<const Vertex> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::uint64_t checked_pow(std::uint64_t base, int n, std::uint64_t cap, const char* what) {
    std::uint64_t out = 1;
    for (int i = 0; i < n; ++i) {
        if (base != 0 && out > cap / base) {
            throw ResourceLimit(std::string(what) + " exceeds the configured cap of " + std::to_string(cap));
        }
        out *= base;
    }
    if (out > cap) {
        throw ResourceLimit(std::string(what) + " exceeds the configured cap of " + std::to_string(cap));
    }
    return out;
}

}  // namespace

TupleSet TupleSet::from_flat(int arity, std::vector<Vertex> flat) {
    if (arity <= 0) {
        throw InvalidArgument("tuple arity must be positive");
    }
    const auto k = static_cast<std::size_t>(arity);
    if (flat.size() % k != 0) {
        throw InvalidArgument("flat tuple data is not a multiple of the arity");
    }
    const std::size_t count = flat.size() / k;
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto at = [&](std::size_t i) { return std::span<const Vertex>(flat.data() + i * k, k); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return tuple_less(at(a), at(b)); });

    TupleSet out(arity);
    out.data_.reserve(flat.size());
    for (std::size_t idx = 0; idx < count; ++idx) {
        auto t = at(order[idx]);
        if (idx > 0 && std::ranges::equal(t, at(order[idx - 1]))) {
            continue;
        }
        out.data_.insert(out.data_.end(), t.begin(), t.end());
    }
    return out;
}

TupleSet TupleSet::from_tuples(int arity, const std::vector<std::vector<Vertex>>& tuples) {
    std::vector<Vertex> flat;
    flat.reserve(tuples.size() * static_cast<std::size_t>(std::max(arity, 0)));
    for (const auto& t : tuples) {
        if (t.size() != static_cast<std::size_t>(arity)) {
            throw InvalidArgument("tuple has " + std::to_string(t.size()) + " entries, expected " +
                                  std::to_string(arity));
        }
        flat.insert(flat.end(), t.begin(), t.end());
    }
    return from_flat(arity, std::move(flat));
}

std::optional<std::size_t> TupleSet::find(std::span<const Vertex> tuple) const {
    if (tuple.size() != static_cast<std::size_t>(arity_)) {
        return std::nullopt;
    }
    std::size_t lo = 0;
    std::size_t hi = size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (tuple_less((*this)[mid], tuple)) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo < size() && std::ranges::equal((*this)[lo], tuple)) {
        return lo;
    }
    return std::nullopt;
}

bool is_constant(std::span<const Vertex> tuple) {
    return std::adjacent_find(tuple.begin(), tuple.end(), std::not_equal_to<>()) == tuple.end();
}

Hypergraph::Hypergraph(int arity, std::vector<Label> labels, TupleSet edges)
    : arity_(arity), labels_(std::move(labels)), edges_(std::move(edges)) {
    if (arity_ < 2) {
        throw InvalidArgument("hypergraph arity must be at least 2");
    }
    if (edges_.arity() != arity_ && !edges_.empty()) {
        throw InvalidArgument("edge arity does not match hypergraph arity");
    }
    if (edges_.empty()) {
        edges_ = TupleSet(arity_);
    }
    std::set<Label> seen;
    for (const auto& label : labels_) {
        if (!seen.insert(label).second) {
            throw InvalidArgument("vertex labels must be pairwise distinct");
        }
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        auto edge = edges_[e];
        for (Vertex v : edge) {
            if (v >= labels_.size()) {
                throw InvalidArgument("edge refers to vertex " + std::to_string(v) + " but there are only " +
                                      std::to_string(labels_.size()) + " vertices");
            }
        }
        if (is_constant(edge)) {
            throw InvalidArgument("edges must not be constant tuples (v,...,v)");
        }
    }
}

Hypergraph::Hypergraph(int arity, std::vector<Label> labels, const std::vector<std::vector<Vertex>>& edges)
    : Hypergraph(arity, std::move(labels), TupleSet::from_tuples(arity, edges)) {}

Hypergraph Hypergraph::edgeless(int arity, std::size_t vertex_count) {
    std::vector<Label> labels(vertex_count);
    for (std::size_t v = 0; v < vertex_count; ++v) {
        labels[v] = Label{static_cast<int>(v)};
    }
    return Hypergraph(arity, std::move(labels), TupleSet(arity));
}

SupportSet::SupportSet(std::vector<std::size_t> ground_sizes, TupleSet elements)
    : ground_sizes_(std::move(ground_sizes)), elements_(std::move(elements)) {
    if (ground_sizes_.empty()) {
        throw InvalidArgument("support set needs at least one coordinate");
    }
    const int k = static_cast<int>(ground_sizes_.size());
    if (elements_.empty()) {
        elements_ = TupleSet(k);
    }
    if (elements_.arity() != k) {
        throw InvalidArgument("support element arity does not match the number of ground sets");
    }
    for (std::size_t e = 0; e < elements_.size(); ++e) {
        auto x = elements_[e];
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] >= ground_sizes_[i]) {
                throw InvalidArgument("support element lies outside the ground set in coordinate " +
                                      std::to_string(i + 1));
            }
        }
    }
}

SupportSet adjacency_support(const Hypergraph& h) {
    const auto k = static_cast<std::size_t>(h.arity());
    std::vector<Vertex> flat = h.edges().flat();
    flat.reserve(flat.size() + h.vertex_count() * k);
    for (std::size_t v = 0; v < h.vertex_count(); ++v) {
        flat.insert(flat.end(), k, static_cast<Vertex>(v));
    }
    return SupportSet(std::vector<std::size_t>(k, h.vertex_count()), TupleSet::from_flat(h.arity(), std::move(flat)));
}

SupportSet diagonal_support(int arity, std::size_t vertex_count, std::span<const Vertex> subset) {
    std::vector<Vertex> flat;
    flat.reserve(subset.size() * static_cast<std::size_t>(arity));
    for (Vertex v : subset) {
        if (v >= vertex_count) {
            throw InvalidArgument("subset vertex " + std::to_string(v) + " out of range");
        }
        flat.insert(flat.end(), static_cast<std::size_t>(arity), v);
    }
    return SupportSet(std::vector<std::size_t>(static_cast<std::size_t>(arity), vertex_count),
                      TupleSet::from_flat(arity, std::move(flat)));
}

SupportSet support_product(const SupportSet& a, const SupportSet& b) {
    if (a.arity() != b.arity()) {
        throw InvalidArgument("support product needs equal arity");
    }
    const auto k = static_cast<std::size_t>(a.arity());
    std::vector<std::size_t> ground(k);
    for (std::size_t i = 0; i < k; ++i) {
        ground[i] = a.ground_sizes()[i] * b.ground_sizes()[i];
    }
    std::vector<Vertex> flat;
    flat.reserve(a.size() * b.size() * k);
    for (std::size_t x = 0; x < a.size(); ++x) {
        auto ax = a.elements()[x];
        for (std::size_t y = 0; y < b.size(); ++y) {
            auto by = b.elements()[y];
            for (std::size_t i = 0; i < k; ++i) {
                flat.push_back(static_cast<Vertex>(ax[i] * b.ground_sizes()[i] + by[i]));
            }
        }
    }
    return SupportSet(std::move(ground), TupleSet::from_flat(a.arity(), std::move(flat)));
}

SupportSet support_power(const SupportSet& base, int n, const ResourceCaps& caps) {
    if (n < 1) {
        throw InvalidArgument("power exponent must be at least 1");
    }
    checked_pow(base.size(), n, caps.max_support, "support size of the power");
    SupportSet out = base;
    for (int i = 1; i < n; ++i) {
        out = support_product(out, base);
    }
    return out;
}

Hypergraph strong_product(const Hypergraph& g, const Hypergraph& h) {
    if (g.arity() != h.arity()) {
        throw InvalidArgument("strong product needs equal arity (got " + std::to_string(g.arity()) + " and " +
                              std::to_string(h.arity()) + ")");
    }
    const SupportSet psi = support_product(adjacency_support(g), adjacency_support(h));
    std::vector<Vertex> flat;
    flat.reserve(psi.elements().flat().size());
    for (std::size_t e = 0; e < psi.size(); ++e) {
        auto x = psi.elements()[e];
        if (!is_constant(x)) {
            flat.insert(flat.end(), x.begin(), x.end());
        }
    }
    std::vector<Label> labels;
    labels.reserve(g.vertex_count() * h.vertex_count());
    for (const auto& lg : g.labels()) {
        for (const auto& lh : h.labels()) {
            Label l = lg;
            l.insert(l.end(), lh.begin(), lh.end());
            labels.push_back(std::move(l));
        }
    }
    return Hypergraph(g.arity(), std::move(labels), TupleSet::from_flat(g.arity(), std::move(flat)));
}

Hypergraph power(const Hypergraph& h, int n, const ResourceCaps& caps) {
    if (n < 1) {
        throw InvalidArgument("power exponent must be at least 1");
    }
    checked_pow(h.vertex_count() + h.edge_count(), n, caps.max_support, "support size of the power");
    Hypergraph out = h;
    for (int i = 1; i < n; ++i) {
        out = strong_product(out, h);
    }
    return out;
}

std::uint64_t encode_string(std::size_t base_size, std::span<const Vertex> string) {
    std::uint64_t index = 0;
    for (Vertex v : string) {
        if (v >= base_size) {
            throw InvalidArgument("string entry out of range");
        }
        index = index * base_size + v;
    }
    return index;
}

VertexString decode_string(std::size_t base_size, int n, std::uint64_t index) {
    VertexString out(static_cast<std::size_t>(n));
    for (int j = n - 1; j >= 0; --j) {
        out[static_cast<std::size_t>(j)] = static_cast<Vertex>(index % base_size);
        index /= base_size;
    }
    if (index != 0) {
        throw InvalidArgument("index out of range for the requested power");
    }
    return out;
}

bool power_support_contains(const SupportSet& base, std::span<const VertexString> strings) {
    const auto k = static_cast<std::size_t>(base.arity());
    if (strings.size() != k) {
        throw InvalidArgument("expected one string per coordinate");
    }
    const std::size_t n = strings[0].size();
    for (const auto& s : strings) {
        if (s.size() != n) {
            throw InvalidArgument("strings of a power tuple must have equal length");
        }
    }
    std::vector<Vertex> column(k);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < k; ++i) {
            column[i] = strings[i][j];
        }
        if (!base.contains(column)) {
            return false;
        }
    }
    return true;
}

bool is_power_edge(const SupportSet& base_support, std::span<const VertexString> strings) {
    if (!power_support_contains(base_support, strings)) {
        return false;
    }
    return std::adjacent_find(strings.begin(), strings.end(), std::not_equal_to<>()) != strings.end();
}

void for_each_power_support_element(const SupportSet& base, int n,
                                    const std::function<void(std::span<const VertexString>)>& visit) {
    if (n < 1) {
        throw InvalidArgument("power exponent must be at least 1");
    }
    const auto k = static_cast<std::size_t>(base.arity());
    if (base.size() == 0) {
        return;
    }
    std::vector<std::size_t> choice(static_cast<std::size_t>(n), 0);
    std::vector<VertexString> strings(k, VertexString(static_cast<std::size_t>(n)));
    while (true) {
        for (std::size_t j = 0; j < choice.size(); ++j) {
            auto x = base.elements()[choice[j]];
            for (std::size_t i = 0; i < k; ++i) {
                strings[i][j] = x[i];
            }
        }
        visit(strings);
        std::size_t pos = choice.size();
        while (pos > 0) {
            --pos;
            if (++choice[pos] < base.size()) {
                break;
            }
            choice[pos] = 0;
            if (pos == 0) {
                return;
            }
        }
    }
}

}  // namespace capdeg
