#include "magneto/cycles.hpp"

#include <algorithm>
#include <stack>
#include <stdexcept>

namespace magneto {

std::map<Index, std::int64_t> CycleReport::histogram() const {
  std::map<Index, std::int64_t> h;
  for (Index m : lengths) ++h[m];
  return h;
}

namespace {

// Tarjan's SCC labelling, iterative to survive long chains.
std::vector<Index> strongly_connected_components(const DirectedGraph& g, Index& count) {
  const Index n = g.num_nodes();
  std::vector<Index> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<Index> stack;
  Index next_index = 0;
  count = 0;

  struct Frame {
    Index v;
    std::size_t edge;
  };
  for (Index root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& f = frames.back();
      const auto succ = g.successors(f.v);
      if (f.edge < succ.size()) {
        const Index w = succ[f.edge++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const Index v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        Index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
    }
  }
  return comp;
}

class JohnsonSearch {
 public:
  JohnsonSearch(const DirectedGraph& g, const std::vector<Index>& comp, const CycleLimits& limits, CycleReport& report)
      : g_(g), comp_(comp), limits_(limits), report_(report), blocked_(g.num_nodes(), 0), blockers_(g.num_nodes()) {
    Index count = 0;
    for (Index c : comp) count = std::max(count, c + 1);
    members_.resize(count);
    for (Index v = 0; v < g.num_nodes(); ++v) members_[comp[v]].push_back(v);
  }

  bool stopped() const { return stopped_; }

  void run_from(Index start) {
    start_ = start;
    for (Index v : members_[comp_[start]]) {
      blocked_[v] = 0;
      blockers_[v].clear();
    }
    circuit(start);
  }

 private:
  bool allowed(Index w) const { return w >= start_ && comp_[w] == comp_[start_]; }

  void unblock(Index u) {
    std::stack<Index> todo;
    todo.push(u);
    while (!todo.empty()) {
      const Index x = todo.top();
      todo.pop();
      if (!blocked_[x]) continue;
      blocked_[x] = 0;
      for (Index w : blockers_[x]) todo.push(w);
      blockers_[x].clear();
    }
  }

  void record_cycle() {
    if (static_cast<std::int64_t>(report_.lengths.size()) >= limits_.max_cycles) {
      report_.truncated = true;
      stopped_ = true;
      return;
    }
    report_.lengths.push_back(static_cast<Index>(path_.size()));
  }

  // Returns true when v must be unblocked on return: a cycle was closed
  // below it, or the length cap cut the search so blocking would be unsound.
  bool circuit(Index v) {
    bool release = false;
    path_.push_back(v);
    blocked_[v] = 1;
    for (Index w : g_.successors(v)) {
      if (stopped_) break;
      if (w == v || !allowed(w)) continue;
      if (w == start_) {
        record_cycle();
        release = true;
      } else if (!blocked_[w]) {
        if (static_cast<Index>(path_.size()) >= limits_.max_length) {
          report_.truncated = true;
          release = true;
        } else if (circuit(w)) {
          release = true;
        }
      }
    }
    if (release || stopped_) {
      unblock(v);
    } else {
      for (Index w : g_.successors(v)) {
        if (w == v || !allowed(w)) continue;
        auto& list = blockers_[w];
        if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
      }
    }
    path_.pop_back();
    return release;
  }

  const DirectedGraph& g_;
  const std::vector<Index>& comp_;
  const CycleLimits& limits_;
  CycleReport& report_;
  std::vector<char> blocked_;
  std::vector<std::vector<Index>> blockers_;
  std::vector<std::vector<Index>> members_;
  std::vector<Index> path_;
  Index start_ = 0;
  bool stopped_ = false;
};

}  // namespace

CycleReport elementary_cycles(const DirectedGraph& g, const CycleLimits& limits) {
  if (limits.max_cycles < 1) throw std::invalid_argument("max_cycles must be >= 1");
  if (limits.max_length < 2) throw std::invalid_argument("max_length must be >= 2");
  CycleReport report;
  Index num_components = 0;
  const auto comp = strongly_connected_components(g, num_components);
  std::vector<Index> comp_size(num_components, 0);
  for (Index c : comp) ++comp_size[c];

  JohnsonSearch search(g, comp, limits, report);
  for (Index s = 0; s < g.num_nodes() && !search.stopped(); ++s) {
    if (comp_size[comp[s]] < 2) continue;
    search.run_from(s);
  }
  std::sort(report.lengths.begin(), report.lengths.end());
  report.is_acyclic = report.lengths.empty() && !report.truncated;
  return report;
}

QCandidates q_candidates(const CycleReport& report, bool include_zero) {
  QCandidates out;
  if (report.is_acyclic) {
    out.values.push_back(Charge{});
    out.includes_zero_fallback = true;
    return out;
  }
  Index previous = 0;
  for (Index m : report.lengths) {
    if (m == previous) continue;
    out.values.push_back(Charge::reciprocal(m));
    previous = m;
  }
  if (include_zero || out.values.empty()) {
    out.values.push_back(Charge{});
    out.includes_zero_fallback = true;
  }
  return out;
}

}  // namespace magneto
