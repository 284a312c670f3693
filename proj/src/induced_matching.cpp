#include <algorithm>
#include <memory>
#include <numeric>
#include <queue>
#include <unordered_map>

#include <boost/dynamic_bitset.hpp>

#include "capdeg/error.hpp"
#include "capdeg/exact_solvers.hpp"
#include "symmetry.hpp"

namespace capdeg {

namespace {

using Bitset = boost::dynamic_bitset<std::uint64_t>;
using Clock = std::chrono::steady_clock;

// Induced-matching branch and bound over support elements. The state lives on
// coordinate values: a value is used once a chosen element carries it. For every
// unchosen element x, let U(x) be its unused values. |U(x)| = 1 blocks that value
// for everybody; |U(x)| = 2 makes the two value classes mutually exclusive. Both
// facts feed the clique-cover bound, and no forbidden tuple is ever listed.
class InducedMatchingSearch {
public:
    InducedMatchingSearch(const SupportSet& phi, const Budget& budget)
        : k_(static_cast<std::size_t>(phi.arity())), n_(phi.size()), budget_(budget) {
        if (k_ < 2) {
            throw InvalidArgument("induced matchings need arity at least 2");
        }
        offset_.resize(k_ + 1, 0);
        for (std::size_t i = 0; i < k_; ++i) {
            offset_[i + 1] = offset_[i] + phi.ground_size(static_cast<int>(i));
        }
        const std::size_t values = offset_[k_];
        value_of_.resize(n_ * k_);
        members_.resize(values);
        for (std::size_t e = 0; e < n_; ++e) {
            auto x = phi.elements()[e];
            for (std::size_t i = 0; i < k_; ++i) {
                const auto v = static_cast<std::uint32_t>(offset_[i] + x[i]);
                value_of_[e * k_ + i] = v;
                members_[v].push_back(static_cast<Vertex>(e));
            }
        }
        class_.assign(values, Bitset(n_));
        for (std::size_t v = 0; v < values; ++v) {
            for (Vertex e : members_[v]) {
                class_[v].set(e);
            }
        }
        used_.assign(values, 0);
        blocked_.assign(values, 0);
        used_count_.assign(n_, 0);
        chosen_mask_.resize(n_);
        seen_.assign(values, 0);
        for (std::size_t x = 0; x < n_; ++x) {
            apply_effect(static_cast<Vertex>(x), +1);
        }

        // Element nodes followed by value nodes; automorphisms of this graph are
        // the coordinate-wise relabellings that map the support onto itself.
        std::vector<std::uint32_t> colours(n_ + values, 0);
        for (std::size_t i = 0; i < k_; ++i) {
            for (std::size_t v = offset_[i]; v < offset_[i + 1]; ++v) {
                colours[n_ + v] = static_cast<std::uint32_t>(i + 1);
            }
        }
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        edges.reserve(n_ * k_);
        for (std::size_t e = 0; e < n_; ++e) {
            for (std::size_t i = 0; i < k_; ++i) {
                edges.emplace_back(static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(n_ + value(static_cast<Vertex>(e), i)));
            }
        }
        graph_ = std::make_unique<detail::ColouredGraph>(std::move(colours), edges);
        refiner_ = std::make_unique<detail::Refiner>(*graph_);
    }

    SolveOutcome run() {
        const auto start = Clock::now();
        deadline_ = start + std::chrono::duration_cast<Clock::duration>(budget_.max_time);

        Bitset all(n_);
        all.set();
        greedy_incumbent(all);
        auto root = std::make_unique<detail::Partition>(refiner_->initial());
        expand(all, root.get());

        SolveOutcome out;
        out.value = best_.size();
        out.witness = best_;
        std::sort(out.witness.begin(), out.witness.end());
        out.status = aborted_ ? SolveStatus::lower_bound_only : SolveStatus::exact;
        out.nodes_explored = nodes_;
        out.wall_time = Clock::now() - start;
        return out;
    }

private:
    std::uint32_t value(Vertex e, std::size_t i) const { return value_of_[e * k_ + i]; }

    static std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
        if (a > b) {
            std::swap(a, b);
        }
        return (static_cast<std::uint64_t>(a) << 32) | b;
    }

    // Adds (sign = +1) or removes (sign = -1) the constraint contributed by the
    // unchosen element x in the current state.
    void apply_effect(Vertex x, int sign) {
        if (chosen_mask_.test(x)) {
            return;
        }
        const std::size_t open = k_ - used_count_[x];
        if (open == 1) {
            for (std::size_t i = 0; i < k_; ++i) {
                const auto v = value(x, i);
                if (!used_[v]) {
                    blocked_[v] += sign;
                }
            }
        } else if (open == 2) {
            std::uint32_t pair[2];
            int found = 0;
            for (std::size_t i = 0; i < k_; ++i) {
                const auto v = value(x, i);
                if (!used_[v]) {
                    pair[found++] = v;
                }
            }
            bump_pair(pair_key(pair[0], pair[1]), sign);
        }
    }

    void bump_pair(std::uint64_t key, int sign) {
        auto& slot = pairs_[key];
        if (sign > 0) {
            if (slot.count++ == 0) {
                slot.index = active_pairs_.size();
                active_pairs_.push_back(key);
            }
            return;
        }
        if (--slot.count == 0) {
            const std::uint64_t last = active_pairs_.back();
            active_pairs_[slot.index] = last;
            pairs_[last].index = slot.index;
            active_pairs_.pop_back();
        }
    }

    // Elements sharing a value with e, each listed once.
    void touched_by(Vertex e, std::vector<Vertex>& out) {
        out.clear();
        for (std::size_t i = 0; i < k_; ++i) {
            for (Vertex x : members_[value(e, i)]) {
                out.push_back(x);
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }

    void choose(Vertex e) {
        std::vector<Vertex> touched;
        touched_by(e, touched);
        for (Vertex x : touched) {
            apply_effect(x, -1);
        }
        chosen_.push_back(e);
        chosen_mask_.set(e);
        for (std::size_t i = 0; i < k_; ++i) {
            used_[value(e, i)] = 1;
        }
        for (Vertex x : touched) {
            for (std::size_t i = 0; i < k_; ++i) {
                used_count_[x] += used_[value(x, i)] && value_shared(e, value(x, i));
            }
            apply_effect(x, +1);
        }
    }

    void unchoose() {
        const Vertex e = chosen_.back();
        std::vector<Vertex> touched;
        touched_by(e, touched);
        for (Vertex x : touched) {
            apply_effect(x, -1);
        }
        for (Vertex x : touched) {
            for (std::size_t i = 0; i < k_; ++i) {
                used_count_[x] -= used_[value(x, i)] && value_shared(e, value(x, i));
            }
        }
        for (std::size_t i = 0; i < k_; ++i) {
            used_[value(e, i)] = 0;
        }
        chosen_mask_.reset(e);
        chosen_.pop_back();
        for (Vertex x : touched) {
            apply_effect(x, +1);
        }
    }

    bool value_shared(Vertex e, std::uint32_t v) const {
        for (std::size_t i = 0; i < k_; ++i) {
            if (value(e, i) == v) {
                return true;
            }
        }
        return false;
    }

    // True iff adding e keeps the chosen set an induced matching.
    bool addable(Vertex e) const {
        for (std::size_t i = 0; i < k_; ++i) {
            const auto v = value(e, i);
            if (used_[v] || blocked_[v]) {
                return false;
            }
        }
        for (std::size_t i = 0; i < k_; ++i) {
            for (Vertex x : members_[value(e, i)]) {
                if (x == e) {
                    continue;
                }
                bool inside = true;
                for (std::size_t j = 0; j < k_ && inside; ++j) {
                    const auto w = value(x, j);
                    inside = used_[w] || value_shared(e, w);
                }
                if (inside) {
                    return false;
                }
            }
        }
        return true;
    }

    // Candidates after choosing: drop classes of used or blocked values.
    void restrict(Bitset& candidates) const {
        for (auto e = candidates.find_first(); e != Bitset::npos; e = candidates.find_next(e)) {
            for (std::size_t i = 0; i < k_; ++i) {
                const auto v = value(static_cast<Vertex>(e), i);
                if (used_[v] || blocked_[v]) {
                    candidates.reset(e);
                    break;
                }
            }
        }
    }

    void greedy_incumbent(Bitset candidates) {
        while (true) {
            restrict(candidates);
            auto e = candidates.find_first();
            while (e != Bitset::npos && !addable(static_cast<Vertex>(e))) {
                candidates.reset(e);
                e = candidates.find_next(e);
            }
            if (e == Bitset::npos) {
                break;
            }
            candidates.reset(e);
            choose(static_cast<Vertex>(e));
        }
        best_ = chosen_;
        while (!chosen_.empty()) {
            unchoose();
        }
    }

    bool out_of_budget() {
        ++nodes_;
        if (nodes_ > budget_.max_nodes) {
            aborted_ = true;
        } else if ((nodes_ & 255u) == 0 && Clock::now() > deadline_) {
            aborted_ = true;
        }
        return aborted_;
    }

    // Lazy greedy clique cover of the candidates by value classes and by unions
    // of two mutually exclusive value classes; leftovers are singleton classes.
    void cover(const Bitset& candidates, std::vector<Vertex>& order, std::vector<std::size_t>& classes) {
        order.clear();
        classes.clear();
        Bitset rest = candidates;
        Bitset clique(n_);
        struct Entry {
            std::size_t count;
            std::size_t id;
            bool operator<(const Entry& o) const {
                return count != o.count ? count < o.count : id > o.id;
            }
        };
        const std::size_t values = offset_[k_];
        auto build = [&](std::size_t id) {
            if (id < values) {
                clique = class_[id];
            } else {
                const std::uint64_t key = active_pairs_[id - values];
                clique = class_[key >> 32];
                clique |= class_[key & 0xffffffffu];
            }
            clique &= rest;
        };
        std::priority_queue<Entry> heap;
        for (std::size_t v = 0; v < values; ++v) {
            if (!used_[v] && !blocked_[v]) {
                build(v);
                const auto c = clique.count();
                if (c >= 2) {
                    heap.push({c, v});
                }
            }
        }
        for (std::size_t p = 0; p < active_pairs_.size(); ++p) {
            build(values + p);
            const auto c = clique.count();
            if (c >= 2) {
                heap.push({c, values + p});
            }
        }
        std::size_t label = 0;
        while (!heap.empty()) {
            Entry top = heap.top();
            heap.pop();
            build(top.id);
            const auto c = clique.count();
            if (c < 2) {
                continue;
            }
            if (!heap.empty() && c < heap.top().count) {
                heap.push({c, top.id});
                continue;
            }
            ++label;
            rest -= clique;
            for (auto w = clique.find_first(); w != Bitset::npos; w = clique.find_next(w)) {
                order.push_back(static_cast<Vertex>(w));
                classes.push_back(label);
            }
        }
        for (auto w = rest.find_first(); w != Bitset::npos; w = rest.find_next(w)) {
            order.push_back(static_cast<Vertex>(w));
            classes.push_back(++label);
        }
    }

    // Value bound: elements added later use distinct live values, one per
    // coordinate each. For k >= 3 an unchosen element with two unused values already
    // carries a used value, so it can never be chosen and its two unused values
    // cannot both become used. Per pair of coordinates the values used later thus
    // form an independent set of a bipartite conflict graph, whose size König's
    // theorem bounds by |L_p| + |L_q| - (maximum matching).
    std::size_t value_bound(const Bitset& candidates) {
        const std::size_t values = offset_[k_];
        live_.assign(values, 0);
        for (auto e = candidates.find_first(); e != Bitset::npos; e = candidates.find_next(e)) {
            for (std::size_t i = 0; i < k_; ++i) {
                live_[value(static_cast<Vertex>(e), i)] = 1;
            }
        }
        std::vector<std::size_t> live_count(k_, 0);
        for (std::size_t i = 0; i < k_; ++i) {
            for (std::size_t v = offset_[i]; v < offset_[i + 1]; ++v) {
                live_count[i] += live_[v];
            }
        }
        std::size_t bound = *std::min_element(live_count.begin(), live_count.end());
        if (k_ < 3 || active_pairs_.empty()) {
            return bound;
        }
        for (auto& list : conflict_) {
            list.clear();
        }
        conflict_.resize(values);
        for (std::uint64_t key : active_pairs_) {
            const auto a = static_cast<std::uint32_t>(key >> 32);
            const auto b = static_cast<std::uint32_t>(key & 0xffffffffu);
            if (live_[a] && live_[b]) {
                conflict_[a].push_back(b);
                conflict_[b].push_back(a);
            }
        }
        for (std::size_t p = 0; p < k_; ++p) {
            for (std::size_t q = p + 1; q < k_; ++q) {
                const std::size_t matched = bipartite_matching(p, q);
                bound = std::min(bound, (live_count[p] + live_count[q] - matched) / 2);
            }
        }
        return bound;
    }

    // Maximum matching between live values of coordinates p and q along conflict
    // edges (augmenting paths).
    std::size_t bipartite_matching(std::size_t p, std::size_t q) {
        mate_.assign(offset_[k_], kNone);
        std::size_t matched = 0;
        for (std::size_t v = offset_[p]; v < offset_[p + 1]; ++v) {
            if (!live_[v]) {
                continue;
            }
            // Greedy first.
            for (std::uint32_t w : conflict_[v]) {
                if (w >= offset_[q] && w < offset_[q + 1] && mate_[w] == kNone) {
                    mate_[w] = static_cast<std::uint32_t>(v);
                    mate_[v] = w;
                    ++matched;
                    break;
                }
            }
        }
        for (std::size_t v = offset_[p]; v < offset_[p + 1]; ++v) {
            if (!live_[v] || mate_[v] != kNone) {
                continue;
            }
            ++stamp_;
            if (augment(static_cast<std::uint32_t>(v), q)) {
                ++matched;
            }
        }
        return matched;
    }

    bool augment(std::uint32_t v, std::size_t q) {
        for (std::uint32_t w : conflict_[v]) {
            if (w < offset_[q] || w >= offset_[q + 1] || seen_[w] == stamp_) {
                continue;
            }
            seen_[w] = stamp_;
            if (mate_[w] == kNone || augment(mate_[w], q)) {
                mate_[w] = v;
                mate_[v] = w;
                return true;
            }
        }
        return false;
    }

    // Orbits of the candidates under the automorphisms fixing every chosen
    // element, as a representative per element. False if the automorphism search
    // could not decide.
    bool orbits(const detail::Partition& part, const Bitset& candidates, std::vector<Vertex>& rep) {
        rep.resize(n_);
        std::iota(rep.begin(), rep.end(), Vertex{0});
        auto find = [&](Vertex x) {
            while (rep[x] != x) {
                rep[x] = rep[rep[x]];
                x = rep[x];
            }
            return x;
        };
        std::vector<std::vector<Vertex>> by_cell(part.elements.size());
        for (auto c = candidates.find_first(); c != Bitset::npos; c = candidates.find_next(c)) {
            by_cell[part.cell_of[c]].push_back(static_cast<Vertex>(c));
        }
        for (const auto& cell : by_cell) {
            for (std::size_t a = 0; a < cell.size(); ++a) {
                if (find(cell[a]) != cell[a]) {
                    continue;
                }
                for (std::size_t b = a + 1; b < cell.size(); ++b) {
                    if (find(cell[b]) == find(cell[a])) {
                        continue;
                    }
                    auto perm = refiner_->find(part, cell[a], cell[b], symmetry_work_);
                    if (refiner_->exhausted()) {
                        return false;
                    }
                    if (perm) {
                        for (Vertex x = 0; x < n_; ++x) {
                            const Vertex rx = find(x);
                            const Vertex ry = find((*perm)[x]);
                            if (rx != ry) {
                                rep[std::max(rx, ry)] = std::min(rx, ry);
                            }
                        }
                    }
                }
            }
        }
        for (Vertex x = 0; x < n_; ++x) {
            rep[x] = find(x);
        }
        return true;
    }

    // `part` is the refined partition with every chosen element individualised,
    // or null once symmetry is no longer exploited in this subtree.
    void expand(Bitset candidates, const detail::Partition* part) {
        if (out_of_budget()) {
            return;
        }
        if (chosen_.size() + value_bound(candidates) <= best_.size()) {
            return;
        }
        std::vector<Vertex> order;
        std::vector<std::size_t> classes;
        cover(candidates, order, classes);

        std::vector<Vertex> rep;
        bool symmetric = part != nullptr && orbits(*part, candidates, rep);
        if (symmetric) {
            symmetric = false;
            for (auto c = candidates.find_first(); c != Bitset::npos && !symmetric; c = candidates.find_next(c)) {
                symmetric = rep[c] != c;
            }
        }
        for (std::size_t idx = order.size(); idx-- > 0;) {
            const Vertex v = order[idx];
            if (!candidates.test(v)) {
                continue;
            }
            if (chosen_.size() + classes[idx] <= best_.size()) {
                return;
            }
            candidates.reset(v);
            Bitset rest_of_orbit(n_);
            if (symmetric) {
                for (auto c = candidates.find_first(); c != Bitset::npos; c = candidates.find_next(c)) {
                    if (rep[c] == rep[v]) {
                        rest_of_orbit.set(c);
                    }
                }
            }
            if (addable(v)) {
                choose(v);
                Bitset next = candidates;
                restrict(next);
                if (chosen_.size() > best_.size()) {
                    best_ = chosen_;
                }
                if (next.any() && chosen_.size() + next.count() > best_.size()) {
                    if (symmetric) {
                        detail::Partition child = *part;
                        refiner_->individualise(child, v);
                        expand(std::move(next), &child);
                    } else {
                        expand(std::move(next), nullptr);
                    }
                }
                unchoose();
            }
            candidates -= rest_of_orbit;
            if (aborted_) {
                return;
            }
        }
    }

    struct PairSlot {
        std::uint32_t count = 0;
        std::size_t index = 0;
    };

    std::size_t k_;
    std::size_t n_;
    Budget budget_;
    Clock::time_point deadline_;
    std::vector<std::size_t> offset_;
    std::vector<std::uint32_t> value_of_;
    std::vector<std::vector<Vertex>> members_;
    std::vector<Bitset> class_;
    std::vector<std::uint8_t> used_;
    std::vector<std::int32_t> blocked_;
    std::vector<std::uint32_t> used_count_;
    std::unordered_map<std::uint64_t, PairSlot> pairs_;
    std::vector<std::uint64_t> active_pairs_;
    Bitset chosen_mask_;
    std::vector<Vertex> chosen_;
    std::vector<Vertex> best_;
    std::unique_ptr<detail::ColouredGraph> graph_;
    std::unique_ptr<detail::Refiner> refiner_;
    static constexpr std::uint32_t kNone = 0xffffffffu;
    std::vector<std::uint8_t> live_;
    std::vector<std::vector<std::uint32_t>> conflict_;
    std::vector<std::uint32_t> mate_;
    std::vector<std::uint64_t> seen_;
    std::uint64_t stamp_ = 0;
    std::uint64_t symmetry_work_ = 5000;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
};

}  // namespace

SolveOutcome induced_matching_number(const SupportSet& phi, const Budget& budget) {
    SolveOutcome out;
    if (phi.size() > 0) {
        out = InducedMatchingSearch(phi, budget).run();
    }
    if (!verify_induced_matching(phi, out.witness)) {
        throw VerificationFailure("induced matching witness does not verify");
    }
    return out;
}

}  // namespace capdeg
