#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace capdeg::detail {

// Vertex-coloured undirected graph for automorphism computations.
class ColouredGraph {
public:
    ColouredGraph(std::vector<std::uint32_t> colours, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

    std::size_t size() const noexcept { return colours_.size(); }
    std::uint32_t colour(std::uint32_t v) const { return colours_[v]; }
    const std::vector<std::uint32_t>& neighbours(std::uint32_t v) const { return adjacency_[v]; }
    bool adjacent(std::uint32_t a, std::uint32_t b) const;
    bool is_automorphism(const std::vector<std::uint32_t>& perm) const;

private:
    std::vector<std::uint32_t> colours_;
    std::vector<std::vector<std::uint32_t>> adjacency_;  // sorted
};

// Ordered partition with cells stored contiguously; a cell is named by its first
// position.
struct Partition {
    std::vector<std::uint32_t> elements;
    std::vector<std::uint32_t> position;
    std::vector<std::uint32_t> cell_of;   // node -> cell start
    std::vector<std::uint32_t> cell_end;  // cell start -> end (exclusive)
    std::uint64_t trace = 0;              // hash of the refinement history

    std::size_t cell_size(std::uint32_t start) const { return cell_end[start] - start; }
    bool discrete() const;
};

class Refiner {
public:
    explicit Refiner(const ColouredGraph& graph) : graph_(graph), count_(graph.size(), 0) {}

    // Partition by colour, refined to equitability.
    Partition initial();
    // Splits v off its cell and refines.
    void individualise(Partition& p, std::uint32_t v);

    // Searches for an automorphism fixing every node of `fixed` and mapping a to b.
    // `base` must be the refined partition with `fixed` individualised. The search
    // is exhaustive unless it runs out of `work`; nullopt with exhausted() set
    // means undecided.
    std::optional<std::vector<std::uint32_t>> find(const Partition& base, std::uint32_t a, std::uint32_t b,
                                                   std::uint64_t work);
    bool exhausted() const noexcept { return exhausted_; }

private:
    void refine(Partition& p, std::vector<std::uint32_t> queue);
    bool compatible(const Partition& left, const Partition& right) const;
    std::optional<std::vector<std::uint32_t>> search(const Partition& left, const Partition& right);

    const ColouredGraph& graph_;
    std::vector<std::uint32_t> count_;
    std::uint64_t work_ = 0;
    std::uint64_t budget_work_ = 0;
    bool exhausted_ = false;
};

}  // namespace capdeg::detail
