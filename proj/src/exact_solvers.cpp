#include "capdeg/exact_solvers.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <boost/dynamic_bitset.hpp>

#include "capdeg/error.hpp"

namespace capdeg {

std::string to_string(SolveStatus status) {
    return status == SolveStatus::exact ? "exact" : "lower-bound-only";
}

namespace {

using Bitset = boost::dynamic_bitset<std::uint64_t>;
using Clock = std::chrono::steady_clock;

// Branch and bound in the style of colour-ordered clique search, run on the
// complement: classes of the greedy clique partition each contribute at most one
// vertex. Forbidden sets of size >= 3 become pairwise conflicts once all but two
// of their members are chosen, and force exclusions once all but one are.
class FeasibleSetSearch {
public:
    FeasibleSetSearch(const ForbiddenSetFamily& family, const Budget& budget)
        : n_(family.vertex_count),
          budget_(budget),
          conflicts_(n_, Bitset(n_)),
          dynamic_(n_, Bitset(n_)),
          hyper_of_(n_),
          chosen_mask_(n_),
          banned_(n_) {
        std::set<std::vector<Vertex>> seen;
        for (auto set : family.sets) {
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
            if (set.empty()) {
                throw InvalidArgument("forbidden sets must be non-empty");
            }
            for (Vertex v : set) {
                if (v >= n_) {
                    throw InvalidArgument("forbidden set refers to an unknown vertex");
                }
            }
            if (set.size() == 1) {
                banned_.set(set[0]);
            } else if (set.size() == 2) {
                conflicts_[set[0]].set(set[1]);
                conflicts_[set[1]].set(set[0]);
            } else if (seen.insert(set).second) {
                hypersets_.push_back(std::move(set));
            }
        }
        // A larger set that contains a pairwise conflict or a banned vertex is implied.
        std::vector<std::vector<Vertex>> kept;
        for (auto& h : hypersets_) {
            bool redundant = false;
            for (std::size_t a = 0; a < h.size() && !redundant; ++a) {
                redundant = banned_.test(h[a]);
                for (std::size_t b = a + 1; b < h.size() && !redundant; ++b) {
                    redundant = conflicts_[h[a]].test(h[b]);
                }
            }
            if (!redundant) {
                kept.push_back(std::move(h));
            }
        }
        hypersets_ = std::move(kept);
        chosen_count_.assign(hypersets_.size(), 0);
        for (std::size_t id = 0; id < hypersets_.size(); ++id) {
            for (Vertex v : hypersets_[id]) {
                hyper_of_[v].push_back(static_cast<std::uint32_t>(id));
            }
        }
        if (!hypersets_.empty()) {
            pair_count_.assign(n_ * n_, 0);
        }
    }

    SolveOutcome run() {
        const auto start = Clock::now();
        deadline_ = start + std::chrono::duration_cast<Clock::duration>(budget_.max_time);

        Bitset all(n_);
        all.set();
        all -= banned_;
        greedy_incumbent(all);

        // Russian doll: suffix_best_[i] is the optimum over vertices {i, ..., n-1}.
        // Level i forces vertex i and looks for suffix_best_[i+1] + 1.
        suffix_best_.assign(n_ + 1, 0);
        std::vector<Vertex> forced;
        for (std::size_t i = n_; i-- > 0 && !aborted_;) {
            suffix_best_[i] = suffix_best_[i + 1];
            if (banned_.test(i)) {
                continue;
            }
            Bitset candidates(n_);
            for (std::size_t j = i + 1; j < n_; ++j) {
                candidates.set(j);
            }
            candidates -= banned_;
            candidates -= conflicts_[i];
            choose(static_cast<Vertex>(i), forced);
            for (Vertex w : forced) {
                candidates.reset(w);
            }
            target_ = suffix_best_[i + 1] + 1;
            level_best_ = suffix_best_[i + 1];
            found_ = false;
            if (target_ == 1) {
                found_ = true;
                record();
            } else if (1 + candidates.count() >= target_) {
                expand(std::move(candidates));
            }
            unchoose();
            if (found_) {
                suffix_best_[i] = target_;
            }
        }

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
    void greedy_incumbent(Bitset candidates) {
        std::vector<Vertex> forced;
        while (candidates.any()) {
            const auto v = static_cast<Vertex>(candidates.find_first());
            candidates.reset(v);
            choose(v, forced);
            candidates -= conflicts_[v];
            for (Vertex w : forced) {
                candidates.reset(w);
            }
        }
        best_ = chosen_;
        while (!chosen_.empty()) {
            unchoose();
        }
    }

    // Adds v to the chosen set; `forced` receives vertices that can no longer join.
    void choose(Vertex v, std::vector<Vertex>& forced) {
        forced.clear();
        chosen_.push_back(v);
        chosen_mask_.set(v);
        for (auto id : hyper_of_[v]) {
            const auto& h = hypersets_[id];
            const auto count = ++chosen_count_[id];
            if (count + 1 == h.size()) {
                for (Vertex w : h) {
                    if (!chosen_mask_.test(w)) {
                        forced.push_back(w);
                    }
                }
            } else if (count + 2 == h.size()) {
                bump_open_pair(h, +1);
            }
        }
    }

    void unchoose() {
        const Vertex v = chosen_.back();
        for (auto id : hyper_of_[v]) {
            const auto& h = hypersets_[id];
            if (chosen_count_[id] + 2 == h.size()) {
                bump_open_pair(h, -1);
            }
            --chosen_count_[id];
        }
        chosen_mask_.reset(v);
        chosen_.pop_back();
    }

    void bump_open_pair(const std::vector<Vertex>& h, int delta) {
        Vertex pair[2];
        int found = 0;
        for (Vertex w : h) {
            if (!chosen_mask_.test(w)) {
                pair[found++] = w;
            }
        }
        auto& count = pair_count_[static_cast<std::size_t>(pair[0]) * n_ + pair[1]];
        if (delta > 0) {
            if (count++ == 0) {
                dynamic_[pair[0]].set(pair[1]);
                dynamic_[pair[1]].set(pair[0]);
            }
        } else if (--count == 0) {
            dynamic_[pair[0]].reset(pair[1]);
            dynamic_[pair[1]].reset(pair[0]);
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

    // Greedy clique partition of `candidates` under static and dynamic conflicts.
    void partition(const Bitset& candidates, std::vector<Vertex>& order, std::vector<std::size_t>& classes) {
        order.clear();
        classes.clear();
        Bitset rest = candidates;
        std::size_t label = 0;
        Bitset clique(n_);
        Bitset extra(n_);
        while (rest.any()) {
            ++label;
            auto u = static_cast<Vertex>(rest.find_first());
            rest.reset(u);
            order.push_back(u);
            classes.push_back(label);
            clique = rest;
            clique &= conflicts_[u];
            extra = rest;
            extra &= dynamic_[u];
            clique |= extra;
            while (clique.any()) {
                auto w = static_cast<Vertex>(clique.find_first());
                rest.reset(w);
                order.push_back(w);
                classes.push_back(label);
                extra = clique;
                extra &= dynamic_[w];
                clique &= conflicts_[w];
                clique |= extra;
                clique.reset(w);
            }
        }
    }

    void record() {
        level_best_ = chosen_.size();
        if (chosen_.size() > best_.size()) {
            best_ = chosen_;
        }
        if (level_best_ >= target_) {
            found_ = true;
        }
    }

    void expand(Bitset candidates) {
        if (out_of_budget()) {
            return;
        }
        std::vector<Vertex> order;
        std::vector<std::size_t> classes;
        partition(candidates, order, classes);
        std::vector<Vertex> forced;
        for (std::size_t idx = order.size(); idx-- > 0;) {
            if (chosen_.size() + classes[idx] <= level_best_) {
                return;
            }
            const std::size_t lowest = candidates.find_first();
            if (chosen_.size() + suffix_best_[lowest] <= level_best_) {
                return;
            }
            const Vertex v = order[idx];
            candidates.reset(v);
            choose(v, forced);
            Bitset next = candidates;
            next -= conflicts_[v];
            for (Vertex w : forced) {
                next.reset(w);
            }
            if (next.none()) {
                if (chosen_.size() > level_best_) {
                    record();
                }
            } else if (chosen_.size() + next.count() > level_best_) {
                expand(std::move(next));
            }
            unchoose();
            if (aborted_ || found_) {
                return;
            }
        }
    }

    std::size_t n_;
    Budget budget_;
    Clock::time_point deadline_;
    std::vector<Bitset> conflicts_;
    std::vector<Bitset> dynamic_;
    std::vector<std::vector<Vertex>> hypersets_;
    std::vector<std::vector<std::uint32_t>> hyper_of_;
    std::vector<std::uint32_t> chosen_count_;
    std::vector<std::uint32_t> pair_count_;
    Bitset chosen_mask_;
    Bitset banned_;
    std::vector<Vertex> chosen_;
    std::vector<Vertex> best_;
    std::vector<std::size_t> suffix_best_;
    std::size_t target_ = 0;
    std::size_t level_best_ = 0;
    bool found_ = false;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
};

}  // namespace

SolveOutcome max_feasible_set(const ForbiddenSetFamily& family, const Budget& budget) {
    if (family.vertex_count == 0) {
        return SolveOutcome{};
    }
    return FeasibleSetSearch(family, budget).run();
}

ForbiddenSetFamily independence_family(const Hypergraph& h) {
    ForbiddenSetFamily family;
    family.vertex_count = h.vertex_count();
    family.sets.reserve(h.edge_count());
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
        auto edge = h.edges()[e];
        family.sets.emplace_back(edge.begin(), edge.end());
    }
    return family;
}

ForbiddenSetFamily induced_matching_family(const SupportSet& phi) {
    const auto k = static_cast<std::size_t>(phi.arity());
    ForbiddenSetFamily family;
    family.vertex_count = phi.size();

    // by_value[i][a]: elements whose i-th coordinate is a.
    std::vector<std::vector<std::vector<Vertex>>> by_value(k);
    for (std::size_t i = 0; i < k; ++i) {
        by_value[i].resize(phi.ground_size(static_cast<int>(i)));
    }
    for (std::size_t e = 0; e < phi.size(); ++e) {
        auto x = phi.elements()[e];
        for (std::size_t i = 0; i < k; ++i) {
            by_value[i][x[i]].push_back(static_cast<Vertex>(e));
        }
    }
    // Matching: two elements may not share a coordinate value.
    std::set<std::vector<Vertex>> pairs;
    for (const auto& groups : by_value) {
        for (const auto& group : groups) {
            for (std::size_t a = 0; a < group.size(); ++a) {
                for (std::size_t b = a + 1; b < group.size(); ++b) {
                    pairs.insert({group[a], group[b]});
                }
            }
        }
    }
    auto shares_coordinate = [&](Vertex a, Vertex b) {
        auto xa = phi.elements()[a];
        auto xb = phi.elements()[b];
        for (std::size_t i = 0; i < k; ++i) {
            if (xa[i] == xb[i]) {
                return true;
            }
        }
        return false;
    };
    // Inducedness: for x in phi, any choice of matching elements d^(i) with
    // d^(i)_i = x_i puts x into D_1 x ... x D_k; unless all d^(i) equal x this is
    // forbidden.
    std::set<std::vector<Vertex>> groups;
    std::vector<std::size_t> pick(k);
    std::vector<Vertex> members;
    for (std::size_t e = 0; e < phi.size(); ++e) {
        auto x = phi.elements()[e];
        std::fill(pick.begin(), pick.end(), 0);
        while (true) {
            members.clear();
            for (std::size_t i = 0; i < k; ++i) {
                members.push_back(by_value[i][x[i]][pick[i]]);
            }
            std::sort(members.begin(), members.end());
            members.erase(std::unique(members.begin(), members.end()), members.end());
            bool matching = members.size() > 1;
            for (std::size_t a = 0; a < members.size() && matching; ++a) {
                for (std::size_t b = a + 1; b < members.size() && matching; ++b) {
                    matching = !shares_coordinate(members[a], members[b]);
                }
            }
            if (matching) {
                if (members.size() == 2) {
                    pairs.insert(members);
                } else {
                    groups.insert(members);
                }
            }
            std::size_t pos = k;
            bool done = true;
            while (pos-- > 0) {
                if (++pick[pos] < by_value[pos][x[pos]].size()) {
                    done = false;
                    break;
                }
                pick[pos] = 0;
            }
            if (done) {
                break;
            }
        }
    }
    family.sets.assign(pairs.begin(), pairs.end());
    family.sets.insert(family.sets.end(), groups.begin(), groups.end());

    return family;
}

SolveOutcome independence_number(const Hypergraph& h, const Budget& budget) {
    SolveOutcome out = max_feasible_set(independence_family(h), budget);
    if (!verify_independent(h, out.witness)) {
        throw VerificationFailure("independence witness does not verify");
    }
    return out;
}

bool verify_independent(const Hypergraph& h, std::span<const Vertex> set) {
    std::vector<bool> member(h.vertex_count(), false);
    for (Vertex v : set) {
        if (v >= h.vertex_count()) {
            return false;
        }
        member[v] = true;
    }
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
        auto edge = h.edges()[e];
        if (std::all_of(edge.begin(), edge.end(), [&](Vertex v) { return member[v]; })) {
            return false;
        }
    }
    return true;
}

bool verify_induced_matching(const SupportSet& phi, std::span<const Vertex> elements) {
    const auto k = static_cast<std::size_t>(phi.arity());
    std::set<Vertex> chosen;
    for (Vertex e : elements) {
        if (e >= phi.size() || !chosen.insert(e).second) {
            return false;
        }
    }
    for (auto a = chosen.begin(); a != chosen.end(); ++a) {
        for (auto b = std::next(a); b != chosen.end(); ++b) {
            auto xa = phi.elements()[*a];
            auto xb = phi.elements()[*b];
            for (std::size_t i = 0; i < k; ++i) {
                if (xa[i] == xb[i]) {
                    return false;
                }
            }
        }
    }
    std::vector<std::vector<bool>> projection(k);
    for (std::size_t i = 0; i < k; ++i) {
        projection[i].assign(phi.ground_size(static_cast<int>(i)), false);
    }
    for (Vertex e : chosen) {
        auto x = phi.elements()[e];
        for (std::size_t i = 0; i < k; ++i) {
            projection[i][x[i]] = true;
        }
    }
    for (std::size_t e = 0; e < phi.size(); ++e) {
        auto x = phi.elements()[e];
        bool inside = true;
        for (std::size_t i = 0; i < k && inside; ++i) {
            inside = projection[i][x[i]];
        }
        if (inside && !chosen.contains(static_cast<Vertex>(e))) {
            return false;
        }
    }
    return true;
}

}  // namespace capdeg
