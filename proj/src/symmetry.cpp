#include "symmetry.hpp"

#include <algorithm>
#include <deque>

namespace capdeg::detail {

ColouredGraph::ColouredGraph(std::vector<std::uint32_t> colours,
                             const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges)
    : colours_(std::move(colours)), adjacency_(colours_.size()) {
    for (const auto& [a, b] : edges) {
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
}

bool ColouredGraph::adjacent(std::uint32_t a, std::uint32_t b) const {
    return std::binary_search(adjacency_[a].begin(), adjacency_[a].end(), b);
}

bool ColouredGraph::is_automorphism(const std::vector<std::uint32_t>& perm) const {
    for (std::uint32_t v = 0; v < size(); ++v) {
        if (colours_[perm[v]] != colours_[v] || adjacency_[perm[v]].size() != adjacency_[v].size()) {
            return false;
        }
        for (std::uint32_t w : adjacency_[v]) {
            if (!adjacent(perm[v], perm[w])) {
                return false;
            }
        }
    }
    return true;
}

bool Partition::discrete() const {
    for (std::uint32_t start = 0; start < elements.size(); start = cell_end[start]) {
        if (cell_end[start] - start > 1) {
            return false;
        }
    }
    return true;
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

}  // namespace

Partition Refiner::initial() {
    const auto n = static_cast<std::uint32_t>(graph_.size());
    Partition p;
    p.elements.resize(n);
    for (std::uint32_t v = 0; v < n; ++v) {
        p.elements[v] = v;
    }
    std::stable_sort(p.elements.begin(), p.elements.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return graph_.colour(a) < graph_.colour(b); });
    p.position.resize(n);
    p.cell_of.resize(n);
    p.cell_end.assign(n, 0);
    std::vector<std::uint32_t> queue;
    std::uint32_t start = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        p.position[p.elements[i]] = i;
        if (i > 0 && graph_.colour(p.elements[i]) != graph_.colour(p.elements[i - 1])) {
            p.cell_end[start] = i;
            queue.push_back(start);
            start = i;
        }
        p.cell_of[p.elements[i]] = start;
    }
    if (n > 0) {
        p.cell_end[start] = n;
        queue.push_back(start);
    }
    refine(p, std::move(queue));
    return p;
}

void Refiner::individualise(Partition& p, std::uint32_t v) {
    const std::uint32_t start = p.cell_of[v];
    const std::uint32_t end = p.cell_end[start];
    p.trace = mix(p.trace, 0xABCDEFULL + start);
    if (end - start == 1) {
        return;
    }
    // Move v to the front; {v} keeps the old start, the rest becomes a new cell.
    const std::uint32_t other = p.elements[start];
    std::swap(p.elements[start], p.elements[p.position[v]]);
    p.position[other] = p.position[v];
    p.position[v] = start;
    p.cell_end[start] = start + 1;
    p.cell_end[start + 1] = end;
    for (std::uint32_t i = start + 1; i < end; ++i) {
        p.cell_of[p.elements[i]] = start + 1;
    }
    refine(p, {start});
}

void Refiner::refine(Partition& p, std::vector<std::uint32_t> initial_queue) {
    std::deque<std::uint32_t> queue(initial_queue.begin(), initial_queue.end());
    std::vector<char> queued(p.elements.size(), 0);
    for (auto c : queue) {
        queued[c] = 1;
    }
    std::vector<std::uint32_t> touched;
    std::vector<std::uint32_t> touched_cells;
    while (!queue.empty()) {
        ++work_;
        const std::uint32_t splitter = queue.front();
        queue.pop_front();
        queued[splitter] = 0;
        touched.clear();
        for (std::uint32_t i = splitter; i < p.cell_end[splitter]; ++i) {
            for (std::uint32_t u : graph_.neighbours(p.elements[i])) {
                if (count_[u]++ == 0) {
                    touched.push_back(u);
                }
            }
        }
        touched_cells.clear();
        for (std::uint32_t u : touched) {
            touched_cells.push_back(p.cell_of[u]);
        }
        std::sort(touched_cells.begin(), touched_cells.end());
        touched_cells.erase(std::unique(touched_cells.begin(), touched_cells.end()), touched_cells.end());
        for (std::uint32_t cell : touched_cells) {
            const std::uint32_t end = p.cell_end[cell];
            auto first = p.elements.begin() + cell;
            auto last = p.elements.begin() + end;
            std::sort(first, last, [&](std::uint32_t a, std::uint32_t b) {
                return count_[a] != count_[b] ? count_[a] < count_[b] : a < b;
            });
            std::uint32_t part = cell;
            std::vector<std::uint32_t> parts{cell};
            for (std::uint32_t i = cell; i < end; ++i) {
                const std::uint32_t v = p.elements[i];
                p.position[v] = i;
                if (i > cell && count_[v] != count_[p.elements[i - 1]]) {
                    p.cell_end[part] = i;
                    part = i;
                    parts.push_back(i);
                }
                p.cell_of[v] = part;
            }
            p.cell_end[part] = end;
            p.trace = mix(p.trace, (static_cast<std::uint64_t>(splitter) << 40) ^ (static_cast<std::uint64_t>(cell) << 20) ^
                                       parts.size());
            for (std::uint32_t s : parts) {
                p.trace = mix(p.trace, (static_cast<std::uint64_t>(s) << 32) | count_[p.elements[s]]);
            }
            if (parts.size() > 1) {
                for (std::uint32_t s : parts) {
                    if (!queued[s]) {
                        queued[s] = 1;
                        queue.push_back(s);
                    }
                }
            }
        }
        for (std::uint32_t u : touched) {
            count_[u] = 0;
        }
    }
}

bool Refiner::compatible(const Partition& left, const Partition& right) const {
    if (left.trace != right.trace) {
        return false;
    }
    for (std::uint32_t start = 0; start < left.elements.size(); start = left.cell_end[start]) {
        if (right.cell_of[right.elements[start]] != start || right.cell_end[start] != left.cell_end[start]) {
            return false;
        }
    }
    return true;
}

std::optional<std::vector<std::uint32_t>> Refiner::search(const Partition& left, const Partition& right) {
    if (exhausted_) {
        return std::nullopt;
    }
    std::uint32_t target = static_cast<std::uint32_t>(left.elements.size());
    for (std::uint32_t start = 0; start < left.elements.size(); start = left.cell_end[start]) {
        if (left.cell_end[start] - start > 1) {
            target = start;
            break;
        }
    }
    if (target == left.elements.size()) {
        std::vector<std::uint32_t> perm(left.elements.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
            perm[left.elements[i]] = right.elements[i];
        }
        if (graph_.is_automorphism(perm)) {
            return perm;
        }
        return std::nullopt;
    }
    Partition next_left = left;
    individualise(next_left, left.elements[target]);
    for (std::uint32_t i = target; i < right.cell_end[target]; ++i) {
        if (work_ > budget_work_) {
            exhausted_ = true;
            return std::nullopt;
        }
        Partition next_right = right;
        individualise(next_right, right.elements[i]);
        if (!compatible(next_left, next_right)) {
            continue;
        }
        if (auto found = search(next_left, next_right)) {
            return found;
        }
        if (exhausted_) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::optional<std::vector<std::uint32_t>> Refiner::find(const Partition& base, std::uint32_t a, std::uint32_t b,
                                                        std::uint64_t work) {
    exhausted_ = false;
    work_ = 0;
    budget_work_ = work;
    if (base.cell_of[a] != base.cell_of[b]) {
        return std::nullopt;
    }
    Partition left = base;
    Partition right = base;
    individualise(left, a);
    individualise(right, b);
    if (!compatible(left, right)) {
        return std::nullopt;
    }
    return search(left, right);
}

}  // namespace capdeg::detail
