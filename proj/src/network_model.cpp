#include "dse/network_model.hpp"

#include <queue>
#include <string>

#include "dse/errors.hpp"
#include "dse/numerics.hpp"

namespace dse {

std::vector<int> NetworkModel::neighbors(int i) const {
  if (i < 0 || i >= size()) throw InvalidIndex("neighbors: no subsystem " + std::to_string(i));
  std::vector<int> out;
  out.reserve(subsystems[static_cast<std::size_t>(i)].coupling.size());
  for (const auto& [j, block] : subsystems[static_cast<std::size_t>(i)].coupling) out.push_back(j);
  return out;  // std::map iterates in ascending key order
}

int NetworkModel::delta(int i, int j) const {
  if (i < 0 || i >= size()) throw InvalidIndex("delta: no subsystem " + std::to_string(i));
  const auto& sub = subsystems[static_cast<std::size_t>(i)];
  if (!sub.coupling.count(j))
    throw InvalidIndex("delta: subsystem " + std::to_string(j) + " is not an in-neighbor of " +
                       std::to_string(i));
  const auto it = sub.delta.find(j);
  return it == sub.delta.end() ? 1 : it->second;
}

void NetworkModel::validate() const {
  const int m = size();
  if (m == 0) throw ModelError("network: no subsystems");
  for (int i = 0; i < m; ++i) {
    const auto& sub = subsystems[static_cast<std::size_t>(i)];
    const std::string tag = "subsystem " + std::to_string(i);
    const int n = sub.states();
    if (n == 0 || sub.a.cols() != n) throw ModelError(tag + ": A must be square and nonempty");
    if (sub.b.rows() != n) throw ModelError(tag + ": B row count does not match the state");
    if (sub.c.cols() != n || sub.outputs() == 0)
      throw ModelError(tag + ": C must map the state to at least one output");
    if (sub.d.rows() != n) throw ModelError(tag + ": D row count does not match the state");
    require_finite(sub.a, "network: A");
    require_finite(sub.b, "network: B");
    require_finite(sub.c, "network: C");
    require_finite(sub.d, "network: D");
    if (sub.disturbance_set.dim() != sub.disturbances())
      throw ModelError(tag + ": disturbance set dimension does not match D");
    if (sub.error_region.dim() != n)
      throw ModelError(tag + ": error region dimension does not match the state");

    for (const auto& [j, block] : sub.coupling) {
      if (j < 0 || j >= m)
        throw ModelError(tag + ": coupling references unknown subsystem " + std::to_string(j));
      if (j == i) throw ModelError(tag + ": self-coupling must live in A, not the coupling map");
      const auto& other = subsystems[static_cast<std::size_t>(j)];
      if (block.rows() != n || block.cols() != other.states())
        throw ModelError(tag + ": coupling block to " + std::to_string(j) + " has wrong shape");
      require_finite(block, "network: coupling block");
      if (block.isZero(0.0))
        throw ModelError(tag + ": coupling block to " + std::to_string(j) +
                         " is zero; remove the edge instead");
    }
    for (const auto& [j, flag] : sub.delta) {
      if (!sub.coupling.count(j))
        throw ModelError(tag + ": exchange switch for " + std::to_string(j) +
                         " has no matching coupling edge");
      if (flag != 0 && flag != 1)
        throw ModelError(tag + ": exchange switch must be 0 or 1");
    }
  }
}

bool NetworkModel::is_strongly_connected() const {
  const int m = size();
  if (m <= 1) return true;
  // Influence edge j -> i whenever A_ij is present; strong connectivity needs
  // node 0 to reach everything along edges and along reversed edges.
  std::vector<std::vector<int>> fwd(static_cast<std::size_t>(m)), bwd(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    for (const auto& [j, block] : subsystems[static_cast<std::size_t>(i)].coupling) {
      fwd[static_cast<std::size_t>(j)].push_back(i);
      bwd[static_cast<std::size_t>(i)].push_back(j);
    }
  }
  const auto reaches_all = [m](const std::vector<std::vector<int>>& adj) {
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    std::queue<int> todo;
    todo.push(0);
    seen[0] = true;
    int count = 1;
    while (!todo.empty()) {
      const int v = todo.front();
      todo.pop();
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (seen[static_cast<std::size_t>(w)]) continue;
        seen[static_cast<std::size_t>(w)] = true;
        ++count;
        todo.push(w);
      }
    }
    return count == m;
  };
  return reaches_all(fwd) && reaches_all(bwd);
}

}  // namespace dse
