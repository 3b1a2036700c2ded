#include "homoglab/maxflow.hpp"

#include <algorithm>
#include <deque>

#include "homoglab/errors.hpp"

namespace homoglab {

MaxFlow::MaxFlow(int num_nodes) : n_(num_nodes) {}

void MaxFlow::add_edge(int u, int v, std::uint64_t cap_uv, std::uint64_t cap_vu) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v)
        throw ContractViolation("MaxFlow::add_edge: bad endpoints");
    edge_to_.push_back(static_cast<std::int32_t>(v));
    cap_.push_back(cap_uv);
    orig_.push_back(cap_uv);
    tail_.push_back(static_cast<std::int32_t>(u));
    edge_to_.push_back(static_cast<std::int32_t>(u));
    cap_.push_back(cap_vu);
    orig_.push_back(cap_vu);
    tail_.push_back(static_cast<std::int32_t>(v));
}

void MaxFlow::build_adjacency() {
    first_.assign(n_ + 1, 0);
    const std::size_t m = edge_to_.size();
    for (std::size_t a = 0; a < m; ++a) ++first_[tail_[a] + 1];
    for (int v = 0; v < n_; ++v) first_[v + 1] += first_[v];
    arc_.assign(m, 0);
    std::vector<std::int32_t> fill(first_.begin(), first_.end() - 1);
    for (std::size_t a = 0; a < m; ++a) arc_[fill[tail_[a]]++] = static_cast<std::int32_t>(a);
}

// Doubly-linked membership lists per height, over all nodes below n.  They
// drive the gap heuristic: when a height empties, everything above it is
// cut off from the sink and gets lifted out of phase one at once.

void MaxFlow::link_height(int u) {
    const int h = height_[u];
    prv_[u] = -1;
    nxt_[u] = head_[h];
    if (head_[h] >= 0) prv_[head_[h]] = u;
    head_[h] = u;
    top_height_ = std::max(top_height_, h);
}

void MaxFlow::unlink_height(int u, int h) {
    if (prv_[u] >= 0)
        nxt_[prv_[u]] = nxt_[u];
    else
        head_[h] = nxt_[u];
    if (nxt_[u] >= 0) prv_[nxt_[u]] = prv_[u];
}

void MaxFlow::set_height(int u, int new_h) {
    const int old_h = height_[u];
    if (old_h < n_) unlink_height(u, old_h);
    height_[u] = new_h;
    if (new_h < n_) link_height(u);
}

void MaxFlow::apply_gap(int gap_h) {
    for (int h = gap_h + 1; h <= top_height_ && h < n_; ++h) {
        while (head_[h] >= 0) {
            const int u = head_[h];
            unlink_height(u, h);
            height_[u] = n_ + 1;
        }
    }
    top_height_ = std::min(top_height_, gap_h);
}

void MaxFlow::global_relabel() {
    // Exact residual distances to the sink; the source stays pinned at n.
    std::fill(height_.begin(), height_.end(), n_);
    std::deque<int> queue;
    height_[sink_] = 0;
    queue.push_back(sink_);
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (std::int32_t k = first_[u]; k < first_[u + 1]; ++k) {
            const std::int32_t a = arc_[k];
            const int v = edge_to_[a];
            if (cap_[a ^ 1] > 0 && height_[v] == n_ && v != source_) {
                height_[v] = height_[u] + 1;
                queue.push_back(v);
            }
        }
    }
    height_[source_] = n_;

    head_.assign(2 * n_ + 2, -1);
    nxt_.assign(n_, -1);
    prv_.assign(n_, -1);
    top_height_ = 0;
    for (int v = 0; v < n_; ++v)
        if (height_[v] < n_) link_height(v);

    for (auto& b : active_) b.clear();
    std::fill(in_active_.begin(), in_active_.end(), 0);
    highest_ = 0;
    for (int v = 0; v < n_; ++v) {
        if (v != source_ && v != sink_ && excess_[v] > 0 && height_[v] < n_) enqueue(v);
        cur_[v] = first_[v];
    }
    work_ = 0;
}

void MaxFlow::enqueue(int v) {
    if (!in_active_[v]) {
        active_[height_[v]].push_back(v);
        in_active_[v] = 1;
        highest_ = std::max(highest_, height_[v]);
    }
}

std::uint64_t MaxFlow::solve(int source, int sink) {
    if (source == sink) throw ContractViolation("MaxFlow::solve: source equals sink");
    source_ = source;
    sink_ = sink;
    build_adjacency();

    height_.assign(n_, 0);
    excess_.assign(n_, 0);
    cur_.assign(first_.begin(), first_.end() - 1);
    active_.assign(2 * n_ + 2, {});
    in_active_.assign(n_, 0);
    work_limit_ = 4 * edge_to_.size() + static_cast<std::size_t>(n_) * 4;

    global_relabel();

    for (std::int32_t k = first_[source]; k < first_[source + 1]; ++k) {
        const std::int32_t a = arc_[k];
        const std::uint64_t c = cap_[a];
        if (c == 0) continue;
        const int v = edge_to_[a];
        cap_[a] = 0;
        cap_[a ^ 1] += c;
        excess_[v] += c;
        if (v != sink && v != source && height_[v] < n_) enqueue(v);
    }

    while (true) {
        while (highest_ >= 0 && active_[highest_].empty()) --highest_;
        if (highest_ < 0) break;
        const int u = active_[highest_].back();
        active_[highest_].pop_back();
        in_active_[u] = 0;
        if (excess_[u] == 0 || height_[u] >= n_ || height_[u] != highest_) {
            if (excess_[u] > 0 && height_[u] < n_) enqueue(u);
            continue;
        }

        while (excess_[u] > 0 && height_[u] < n_) {
            if (cur_[u] == first_[u + 1]) {
                // Relabel u to one above its lowest residual neighbor.
                int min_h = 2 * n_;
                for (std::int32_t k = first_[u]; k < first_[u + 1]; ++k) {
                    const std::int32_t a = arc_[k];
                    if (cap_[a] > 0) min_h = std::min(min_h, height_[edge_to_[a]]);
                }
                work_ += static_cast<std::size_t>(first_[u + 1] - first_[u]) + 4;
                const int old_h = height_[u];
                const int new_h = min_h >= 2 * n_ ? n_ + 1 : min_h + 1;
                set_height(u, new_h);
                cur_[u] = first_[u];
                if (head_[old_h] < 0 && old_h < n_) {
                    // Gap: heights above old_h can never reach the sink.
                    if (height_[u] > old_h && height_[u] < n_) set_height(u, n_ + 1);
                    apply_gap(old_h);
                }
                if (height_[u] >= n_) break;
                if (work_ >= work_limit_) {
                    global_relabel();
                    break;
                }
                continue;
            }
            const std::int32_t a = arc_[cur_[u]];
            const int v = edge_to_[a];
            if (cap_[a] > 0 && height_[u] == height_[v] + 1) {
                const std::uint64_t delta = std::min(excess_[u], cap_[a]);
                cap_[a] -= delta;
                cap_[a ^ 1] += delta;
                excess_[u] -= delta;
                excess_[v] += delta;
                if (v != source_ && v != sink_ && height_[v] < n_) enqueue(v);
            } else {
                ++cur_[u];
            }
        }
        if (excess_[u] > 0 && height_[u] < n_) enqueue(u);
    }

    // Deterministic cut extraction: nodes that still reach the sink.
    sink_side_.assign(n_, 0);
    std::deque<int> queue;
    sink_side_[sink_] = 1;
    queue.push_back(sink_);
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (std::int32_t k = first_[u]; k < first_[u + 1]; ++k) {
            const std::int32_t a = arc_[k];
            const int v = edge_to_[a];
            if (!sink_side_[v] && cap_[a ^ 1] > 0) {
                sink_side_[v] = 1;
                queue.push_back(v);
            }
        }
    }

    return excess_[sink_];
}

std::uint64_t MaxFlow::cut_capacity() const {
    // Sum of original capacities of arcs crossing from the source side to
    // the sink side.
    std::uint64_t total = 0;
    for (std::size_t a = 0; a < edge_to_.size(); ++a) {
        const int u = tail_[a];
        const int v = edge_to_[a];
        if (!sink_side_[u] && sink_side_[v]) total += orig_[a];
    }
    return total;
}

}  // namespace homoglab
