#ifndef SCDEPTH_NETWORK_SIMPLEX_HPP
#define SCDEPTH_NETWORK_SIMPLEX_HPP

// Primal network simplex for the uncapacitated transportation problem on a
// dense bipartite graph. Spanning-tree bookkeeping (parent / pred / thread /
// succ_num / last_succ) and block-search pivoting follow the classic LEMON
// layout. Supplies are integers so flows stay exact; costs are doubles.

#include <cstdint>
#include <span>
#include <vector>

namespace scdepth::detail {

class TransportSimplex {
public:
    /**
     * @param supply Integer supply of each source; sums to the total demand.
     * @param demand Integer demand of each sink.
     * @param cost Row-major `supply.size() x demand.size()` cost matrix.
     */
    TransportSimplex(std::span<const std::int64_t> supply, std::span<const std::int64_t> demand,
                     std::span<const double> cost);

    /// Solve to optimality. Returns the number of pivots performed.
    std::size_t run();

    std::size_t sources() const noexcept { return sources_; }
    std::size_t sinks() const noexcept { return sinks_; }

    /// Flow on real arc (i, j).
    std::int64_t flow(std::size_t i, std::size_t j) const { return flow_[i * sinks_ + j]; }

    /// Dual potentials in the convention c_ij - f_i - g_j >= 0, tight on basic arcs.
    std::vector<double> source_potentials() const;
    std::vector<double> sink_potentials() const;

    /// Flow left on artificial arcs; zero on a feasible balanced instance.
    std::int64_t artificial_flow() const;

private:
    enum : signed char { kTree = 0, kLower = 1 };
    enum : int { kUp = 1, kDown = -1 };

    bool find_entering_arc();
    void find_join_node();
    bool find_leaving_arc();
    void change_flow();
    void update_tree_structure();
    void update_potential();
    void recompute_potentials();

    std::size_t sources_;
    std::size_t sinks_;
    int node_num_;
    int arc_num_;      // real arcs
    int all_arc_num_;  // real + artificial
    int root_;

    std::vector<int> source_;
    std::vector<int> target_;
    std::vector<double> cost_;
    std::vector<std::int64_t> supply_;
    std::vector<std::int64_t> flow_;
    std::vector<signed char> state_;

    std::vector<double> pi_;
    std::vector<int> parent_;
    std::vector<int> pred_;
    std::vector<int> thread_;
    std::vector<int> rev_thread_;
    std::vector<int> succ_num_;
    std::vector<int> last_succ_;
    std::vector<int> pred_dir_;
    std::vector<int> dirty_revs_;

    double epsilon_ = 0;
    int block_size_ = 0;
    int next_arc_ = 0;

    // pivot scratch
    int in_arc_ = -1;
    int join_ = -1;
    int u_in_ = -1, v_in_ = -1, u_out_ = -1, v_out_ = -1;
    std::int64_t delta_ = 0;
};

} // namespace scdepth::detail

#endif
