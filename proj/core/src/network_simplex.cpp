#include "network_simplex.hpp"

#include "scdepth/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace scdepth::detail {

namespace {
constexpr std::int64_t kInfFlow = std::numeric_limits<std::int64_t>::max();
}

TransportSimplex::TransportSimplex(std::span<const std::int64_t> supply, std::span<const std::int64_t> demand,
                                   std::span<const double> cost)
    : sources_(supply.size()), sinks_(demand.size()) {
    if (cost.size() != sources_ * sinks_) {
        throw Error(ErrorCode::DimensionMismatch, "cost matrix does not match marginal sizes");
    }
    node_num_ = static_cast<int>(sources_ + sinks_);
    arc_num_ = static_cast<int>(sources_ * sinks_);
    all_arc_num_ = arc_num_ + node_num_;
    root_ = node_num_;

    source_.resize(all_arc_num_);
    target_.resize(all_arc_num_);
    cost_.resize(all_arc_num_);
    flow_.assign(all_arc_num_, 0);
    state_.assign(all_arc_num_, kLower);

    double max_cost = 0;
    for (std::size_t i = 0; i < sources_; ++i) {
        for (std::size_t j = 0; j < sinks_; ++j) {
            const int e = static_cast<int>(i * sinks_ + j);
            source_[e] = static_cast<int>(i);
            target_[e] = static_cast<int>(sources_ + j);
            cost_[e] = cost[e];
            max_cost = std::max(max_cost, cost[e]);
        }
    }

    supply_.resize(node_num_ + 1);
    for (std::size_t i = 0; i < sources_; ++i) supply_[i] = supply[i];
    for (std::size_t j = 0; j < sinks_; ++j) supply_[sources_ + j] = -demand[j];

    const double art_cost = (max_cost + 1.0) * node_num_;
    // Reduced costs are formed from potentials of magnitude up to art_cost.
    epsilon_ = std::numeric_limits<double>::epsilon() * 64.0 * art_cost;

    const int n1 = node_num_ + 1;
    pi_.assign(n1, 0.0);
    parent_.assign(n1, -1);
    pred_.assign(n1, -1);
    thread_.assign(n1, 0);
    rev_thread_.assign(n1, 0);
    succ_num_.assign(n1, 0);
    last_succ_.assign(n1, 0);
    pred_dir_.assign(n1, kUp);

    parent_[root_] = -1;
    pred_[root_] = -1;
    thread_[root_] = 0;
    rev_thread_[0] = root_;
    succ_num_[root_] = node_num_ + 1;
    last_succ_[root_] = root_ - 1;
    supply_[root_] = 0;
    pi_[root_] = 0;

    for (int u = 0, e = arc_num_; u != node_num_; ++u, ++e) {
        parent_[u] = root_;
        pred_[u] = e;
        thread_[u] = u + 1;
        rev_thread_[u + 1] = u;
        succ_num_[u] = 1;
        last_succ_[u] = u;
        state_[e] = kTree;
        if (supply_[u] >= 0) {
            pred_dir_[u] = kUp;
            pi_[u] = 0;
            source_[e] = u;
            target_[e] = root_;
            flow_[e] = supply_[u];
            cost_[e] = 0;
        } else {
            pred_dir_[u] = kDown;
            pi_[u] = art_cost;
            source_[e] = root_;
            target_[e] = u;
            flow_[e] = -supply_[u];
            cost_[e] = art_cost;
        }
    }

    block_size_ = std::max(static_cast<int>(std::sqrt(static_cast<double>(arc_num_))), 10);
}

bool TransportSimplex::find_entering_arc() {
    double min = -epsilon_;
    bool found = false;
    int cnt = block_size_;
    int e;
    for (e = next_arc_; e != arc_num_; ++e) {
        const double c = state_[e] * (cost_[e] + pi_[source_[e]] - pi_[target_[e]]);
        if (c < min) {
            min = c;
            in_arc_ = e;
            found = true;
        }
        if (--cnt == 0) {
            if (found) goto search_end;
            cnt = block_size_;
        }
    }
    for (e = 0; e != next_arc_; ++e) {
        const double c = state_[e] * (cost_[e] + pi_[source_[e]] - pi_[target_[e]]);
        if (c < min) {
            min = c;
            in_arc_ = e;
            found = true;
        }
        if (--cnt == 0) {
            if (found) goto search_end;
            cnt = block_size_;
        }
    }
    if (!found) return false;

search_end:
    next_arc_ = e;
    return true;
}

void TransportSimplex::find_join_node() {
    int u = source_[in_arc_];
    int v = target_[in_arc_];
    while (u != v) {
        if (succ_num_[u] < succ_num_[v]) {
            u = parent_[u];
        } else {
            v = parent_[v];
        }
    }
    join_ = u;
}

bool TransportSimplex::find_leaving_arc() {
    // Entering arcs are always at their lower bound: flow goes source -> target.
    const int first = source_[in_arc_];
    const int second = target_[in_arc_];
    delta_ = kInfFlow;
    int result = 0;

    for (int u = first; u != join_; u = parent_[u]) {
        const int e = pred_[u];
        const std::int64_t d = pred_dir_[u] == kDown ? kInfFlow : flow_[e];
        if (d < delta_) {
            delta_ = d;
            u_out_ = u;
            result = 1;
        }
    }
    for (int u = second; u != join_; u = parent_[u]) {
        const int e = pred_[u];
        const std::int64_t d = pred_dir_[u] == kUp ? kInfFlow : flow_[e];
        if (d <= delta_) {
            delta_ = d;
            u_out_ = u;
            result = 2;
        }
    }

    if (result == 1) {
        u_in_ = first;
        v_in_ = second;
    } else {
        u_in_ = second;
        v_in_ = first;
    }
    return result != 0 && delta_ < kInfFlow;
}

void TransportSimplex::change_flow() {
    if (delta_ > 0) {
        const std::int64_t val = delta_;
        flow_[in_arc_] += val;
        for (int u = source_[in_arc_]; u != join_; u = parent_[u]) {
            flow_[pred_[u]] -= pred_dir_[u] * val;
        }
        for (int u = target_[in_arc_]; u != join_; u = parent_[u]) {
            flow_[pred_[u]] += pred_dir_[u] * val;
        }
    }
    state_[in_arc_] = kTree;
    state_[pred_[u_out_]] = kLower;
}

void TransportSimplex::update_tree_structure() {
    const int old_rev_thread = rev_thread_[u_out_];
    const int old_succ_num = succ_num_[u_out_];
    const int old_last_succ = last_succ_[u_out_];
    v_out_ = parent_[u_out_];

    if (u_in_ == u_out_) {
        parent_[u_in_] = v_in_;
        pred_[u_in_] = in_arc_;
        pred_dir_[u_in_] = u_in_ == source_[in_arc_] ? kUp : kDown;

        if (thread_[v_in_] != u_out_) {
            int after = thread_[old_last_succ];
            thread_[old_rev_thread] = after;
            rev_thread_[after] = old_rev_thread;
            after = thread_[v_in_];
            thread_[v_in_] = u_out_;
            rev_thread_[u_out_] = v_in_;
            thread_[old_last_succ] = after;
            rev_thread_[after] = old_last_succ;
        }
    } else {
        // When old_rev_thread == v_in, join and v_out coincide.
        const int thread_continue = old_rev_thread == v_in_ ? thread_[old_last_succ] : thread_[v_in_];

        // Re-hang the stem nodes between u_in and u_out.
        int stem = u_in_;
        int par_stem = v_in_;
        int next_stem;
        int last = last_succ_[u_in_];
        int before;
        int after = thread_[last];
        thread_[v_in_] = u_in_;
        dirty_revs_.clear();
        dirty_revs_.push_back(v_in_);
        while (stem != u_out_) {
            next_stem = parent_[stem];
            thread_[last] = next_stem;
            dirty_revs_.push_back(last);

            before = rev_thread_[stem];
            thread_[before] = after;
            rev_thread_[after] = before;

            parent_[stem] = par_stem;
            par_stem = stem;
            stem = next_stem;

            last = last_succ_[stem] == last_succ_[par_stem] ? rev_thread_[par_stem] : last_succ_[stem];
            after = thread_[last];
        }
        parent_[u_out_] = par_stem;
        thread_[last] = thread_continue;
        rev_thread_[thread_continue] = last;
        last_succ_[u_out_] = last;

        if (old_rev_thread != v_in_) {
            thread_[old_rev_thread] = after;
            rev_thread_[after] = old_rev_thread;
        }

        for (int u : dirty_revs_) {
            rev_thread_[thread_[u]] = u;
        }

        int tmp_sc = 0;
        const int tmp_ls = last_succ_[u_out_];
        for (int u = u_out_, p = parent_[u]; u != u_in_; u = p, p = parent_[u]) {
            pred_[u] = pred_[p];
            pred_dir_[u] = -pred_dir_[p];
            tmp_sc += succ_num_[u] - succ_num_[p];
            succ_num_[u] = tmp_sc;
            last_succ_[p] = tmp_ls;
        }
        pred_[u_in_] = in_arc_;
        pred_dir_[u_in_] = u_in_ == source_[in_arc_] ? kUp : kDown;
        succ_num_[u_in_] = old_succ_num;
    }

    const int up_limit_out = last_succ_[join_] == v_in_ ? join_ : -1;
    const int last_succ_out = last_succ_[u_out_];
    for (int u = v_in_; u != -1 && last_succ_[u] == v_in_; u = parent_[u]) {
        last_succ_[u] = last_succ_out;
    }

    if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
        for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u]) {
            last_succ_[u] = old_rev_thread;
        }
    } else if (last_succ_out != old_last_succ) {
        for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u]) {
            last_succ_[u] = last_succ_out;
        }
    }

    for (int u = v_in_; u != join_; u = parent_[u]) {
        succ_num_[u] += old_succ_num;
    }
    for (int u = v_out_; u != join_; u = parent_[u]) {
        succ_num_[u] -= old_succ_num;
    }
}

void TransportSimplex::update_potential() {
    const double sigma = pi_[v_in_] - pi_[u_in_] - pred_dir_[u_in_] * cost_[in_arc_];
    const int end = thread_[last_succ_[u_in_]];
    for (int u = u_in_; u != end; u = thread_[u]) {
        pi_[u] += sigma;
    }
}

void TransportSimplex::recompute_potentials() {
    pi_[root_] = 0;
    for (int u = thread_[root_]; u != root_; u = thread_[u]) {
        pi_[u] = pi_[parent_[u]] - pred_dir_[u] * cost_[pred_[u]];
    }
}

std::size_t TransportSimplex::run() {
    std::size_t pivots = 0;
    // Refreshing the potentials from the tree every so often bounds the
    // drift accumulated by incremental updates.
    const std::size_t refresh_every = static_cast<std::size_t>(std::max(node_num_, 1000));
    for (;;) {
        while (find_entering_arc()) {
            find_join_node();
            if (!find_leaving_arc()) {
                throw Error(ErrorCode::InvalidArgument, "transport problem is unbounded");
            }
            change_flow();
            update_tree_structure();
            update_potential();
            if (++pivots % refresh_every == 0) {
                recompute_potentials();
            }
        }
        // Confirm optimality against exact tree potentials; resume if drift hid a pivot.
        recompute_potentials();
        if (!find_entering_arc()) {
            break;
        }
    }
    return pivots;
}

std::vector<double> TransportSimplex::source_potentials() const {
    std::vector<double> out(sources_);
    for (std::size_t i = 0; i < sources_; ++i) out[i] = -pi_[i];
    return out;
}

std::vector<double> TransportSimplex::sink_potentials() const {
    std::vector<double> out(sinks_);
    for (std::size_t j = 0; j < sinks_; ++j) out[j] = pi_[sources_ + j];
    return out;
}

std::int64_t TransportSimplex::artificial_flow() const {
    std::int64_t total = 0;
    for (int e = arc_num_; e != all_arc_num_; ++e) total += flow_[e];
    return total;
}

} // namespace scdepth::detail
