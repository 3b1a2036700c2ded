#ifndef HOMOGLAB_MAXFLOW_HPP
#define HOMOGLAB_MAXFLOW_HPP

#include <cstdint>
#include <vector>

namespace homoglab {

/// Highest-label push-relabel with gap heuristic and periodic global
/// relabeling, on 64-bit integer capacities.  Integer arithmetic keeps the
/// optimum bit-stable across platforms.
class MaxFlow {
  public:
    explicit MaxFlow(int num_nodes);

    /// Adds the residual arc pair u->v / v->u with the given capacities.
    void add_edge(int u, int v, std::uint64_t cap_uv, std::uint64_t cap_vu);

    /// Runs phase one and returns the max-flow value (= min-cut capacity).
    std::uint64_t solve(int source, int sink);

    /// After solve(): true for nodes that still reach the sink in the
    /// residual graph.  The complement is the canonical minimum cut's
    /// source side; extraction order is a deterministic BFS.
    const std::vector<char>& sink_side() const { return sink_side_; }

    /// Capacity of the extracted cut; equals the flow value (asserted in
    /// tests via the duality check).
    std::uint64_t cut_capacity() const;

  private:
    void build_adjacency();
    void global_relabel();
    void link_height(int u);
    void unlink_height(int u, int h);
    void set_height(int u, int new_h);
    void apply_gap(int gap_h);
    void enqueue(int v);

    int n_;
    int source_ = -1, sink_ = -1;
    std::vector<std::int32_t> edge_to_;
    std::vector<std::uint64_t> cap_;
    std::vector<std::uint64_t> orig_;
    std::vector<std::int32_t> first_;  // CSR offsets into arc_
    std::vector<std::int32_t> arc_;    // arc ids grouped by tail
    std::vector<std::int32_t> tail_;   // tail of each arc
    std::vector<int> height_;
    std::vector<std::uint64_t> excess_;
    std::vector<std::int32_t> cur_;
    std::vector<int> head_;  // per-height membership lists (gap heuristic)
    std::vector<int> nxt_;
    std::vector<int> prv_;
    std::vector<std::vector<int>> active_;
    std::vector<char> in_active_;
    std::vector<char> sink_side_;
    int highest_ = 0;
    int top_height_ = 0;
    std::size_t work_ = 0;
    std::size_t work_limit_ = 0;
};

}  // namespace homoglab

#endif
