#include "detail/min_cost_flow.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>

namespace sia::detail {

int MinCostFlow::add_edge(int from, int to, std::int64_t capacity, std::int64_t cost) {
  const int id = static_cast<int>(edges_.size());
  edges_.push_back({to, capacity, cost, 0});
  edges_.push_back({from, 0, -cost, 0});
  adjacency_[static_cast<std::size_t>(from)].push_back(id);
  adjacency_[static_cast<std::size_t>(to)].push_back(id + 1);
  return id / 2;
}

std::int64_t MinCostFlow::flow(int edge_id) const { return edges_[static_cast<std::size_t>(edge_id) * 2].flow; }

std::optional<std::int64_t> MinCostFlow::solve(int source, int sink, std::int64_t required) {
  constexpr auto kInf = std::numeric_limits<std::int64_t>::max();
  const auto n = adjacency_.size();
  std::int64_t total_cost = 0;
  std::vector<std::int64_t> dist(n);
  std::vector<int> via(n);
  std::vector<char> queued(n);

  while (required > 0) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(via.begin(), via.end(), -1);
    std::fill(queued.begin(), queued.end(), 0);
    std::deque<int> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      queued[static_cast<std::size_t>(u)] = 0;
      for (int id : adjacency_[static_cast<std::size_t>(u)]) {
        const auto& e = edges_[static_cast<std::size_t>(id)];
        if (e.capacity - e.flow <= 0) continue;
        const auto candidate = dist[static_cast<std::size_t>(u)] + e.cost;
        auto& target = dist[static_cast<std::size_t>(e.to)];
        if (candidate < target) {
          target = candidate;
          via[static_cast<std::size_t>(e.to)] = id;
          if (!queued[static_cast<std::size_t>(e.to)]) {
            queued[static_cast<std::size_t>(e.to)] = 1;
            queue.push_back(e.to);
          }
        }
      }
    }
    if (dist[static_cast<std::size_t>(sink)] == kInf) return std::nullopt;

    std::int64_t push = required;
    for (int v = sink; v != source;) {
      const auto& e = edges_[static_cast<std::size_t>(via[static_cast<std::size_t>(v)])];
      push = std::min(push, e.capacity - e.flow);
      v = edges_[static_cast<std::size_t>(via[static_cast<std::size_t>(v)] ^ 1)].to;
    }
    for (int v = sink; v != source;) {
      const int id = via[static_cast<std::size_t>(v)];
      edges_[static_cast<std::size_t>(id)].flow += push;
      edges_[static_cast<std::size_t>(id ^ 1)].flow -= push;
      v = edges_[static_cast<std::size_t>(id ^ 1)].to;
    }
    total_cost += push * dist[static_cast<std::size_t>(sink)];
    required -= push;
  }
  return total_cost;
}

std::optional<TransportSolution> solve_transport(const std::vector<std::int64_t>& demand,
                                                 const std::vector<std::int64_t>& capacity,
                                                 const std::vector<std::int64_t>& unit_cost,
                                                 const std::vector<bool>& allowed) {
  const int J = static_cast<int>(demand.size());
  const int I = static_cast<int>(capacity.size());
  // Nodes: 0 source, 1..J services, J+1..J+I interfaces, J+I+1 sink.
  const int source = 0;
  const int sink = J + I + 1;
  MinCostFlow network(J + I + 2);
  std::int64_t required = 0;
  std::vector<int> link(static_cast<std::size_t>(I) * static_cast<std::size_t>(J), -1);
  for (int j = 0; j < J; ++j) {
    const auto d = demand[static_cast<std::size_t>(j)];
    if (d == 0) continue;
    required += d;
    network.add_edge(source, 1 + j, d, 0);
    bool reachable = false;
    for (int i = 0; i < I; ++i) {
      const auto idx = static_cast<std::size_t>(i) * static_cast<std::size_t>(J) + static_cast<std::size_t>(j);
      if (!allowed[idx] || capacity[static_cast<std::size_t>(i)] == 0) continue;
      link[idx] = network.add_edge(1 + j, 1 + J + i, d, 0);
      reachable = true;
    }
    if (!reachable) return std::nullopt;
  }
  for (int i = 0; i < I; ++i) {
    if (capacity[static_cast<std::size_t>(i)] > 0) {
      network.add_edge(1 + J + i, sink, capacity[static_cast<std::size_t>(i)], unit_cost[static_cast<std::size_t>(i)]);
    }
  }
  const auto cost = network.solve(source, sink, required);
  if (!cost) return std::nullopt;

  TransportSolution solution{*cost, std::vector<std::int64_t>(link.size(), 0)};
  for (std::size_t idx = 0; idx < link.size(); ++idx) {
    if (link[idx] >= 0) solution.units[idx] = network.flow(link[idx]);
  }
  return solution;
}

std::optional<TransportSolution> solve_weighted_transport(const std::vector<std::int64_t>& demand,
                                                          const std::vector<std::int64_t>& capacity,
                                                          const std::vector<std::int64_t>& unit_cost,
                                                          const std::vector<bool>& allowed,
                                                          const std::vector<std::int64_t>& weight) {
  const int J = static_cast<int>(demand.size());
  const int I = static_cast<int>(capacity.size());
  using State = std::vector<std::int64_t>;  // consumed capacity per interface
  struct Entry {
    std::int64_t cost;
    State previous;
    std::vector<std::int64_t> parts;  // units per interface for this layer's service
  };

  std::vector<int> served;
  for (int j = 0; j < J; ++j) {
    if (demand[static_cast<std::size_t>(j)] > 0) served.push_back(j);
  }
  std::vector<std::map<State, Entry>> layers(served.size() + 1);
  layers[0].emplace(State(static_cast<std::size_t>(I), 0), Entry{0, {}, {}});

  for (std::size_t layer = 0; layer < served.size(); ++layer) {
    const int j = served[layer];
    const auto d = demand[static_cast<std::size_t>(j)];
    auto at = [&](int i) { return static_cast<std::size_t>(i) * static_cast<std::size_t>(J) + static_cast<std::size_t>(j); };
    std::vector<int> usable;
    for (int i = 0; i < I; ++i) {
      if (allowed[at(i)]) usable.push_back(i);
    }
    auto& next = layers[layer + 1];
    for (const auto& [used, entry] : layers[layer]) {
      std::vector<std::int64_t> parts(static_cast<std::size_t>(I), 0);
      // Enumerate every split of d over the usable interfaces that fits.
      std::function<void(std::size_t, std::int64_t, std::int64_t)> place = [&](std::size_t pos, std::int64_t left,
                                                                               std::int64_t cost) {
        if (pos == usable.size()) {
          if (left != 0) return;
          State state = used;
          for (int i : usable) state[static_cast<std::size_t>(i)] += weight[at(i)] * parts[static_cast<std::size_t>(i)];
          const auto total = entry.cost + cost;
          auto it = next.find(state);
          if (it == next.end()) {
            next.emplace(std::move(state), Entry{total, used, parts});
          } else if (total < it->second.cost) {
            it->second = Entry{total, used, parts};
          }
          return;
        }
        const int i = usable[pos];
        const auto w = weight[at(i)];
        const auto room = capacity[static_cast<std::size_t>(i)] - used[static_cast<std::size_t>(i)];
        const auto most = std::min(left, w > 0 ? room / w : left);
        for (std::int64_t x = most; x >= 0; --x) {
          parts[static_cast<std::size_t>(i)] = x;
          place(pos + 1, left - x, cost + x * unit_cost[static_cast<std::size_t>(i)]);
        }
        parts[static_cast<std::size_t>(i)] = 0;
      };
      place(0, d, 0);
    }
    if (next.empty()) return std::nullopt;
  }

  const auto& last = layers.back();
  auto best = last.begin();
  for (auto it = last.begin(); it != last.end(); ++it) {
    if (it->second.cost < best->second.cost) best = it;
  }
  TransportSolution solution{best->second.cost,
                             std::vector<std::int64_t>(static_cast<std::size_t>(I) * static_cast<std::size_t>(J), 0)};
  State state = best->first;
  for (std::size_t layer = served.size(); layer > 0; --layer) {
    const auto& entry = layers[layer].at(state);
    const int j = served[layer - 1];
    for (int i = 0; i < I; ++i) {
      solution.units[static_cast<std::size_t>(i) * static_cast<std::size_t>(J) + static_cast<std::size_t>(j)] =
          entry.parts[static_cast<std::size_t>(i)];
    }
    state = entry.previous;
  }
  return solution;
}

}  // namespace sia::detail
