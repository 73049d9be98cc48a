#pragma once

#include <memory>
#include <span>
#include <vector>

#include "apc/controllers.hpp"
#include "apc/core.hpp"

namespace apc::detail {

std::unique_ptr<Controller> make_earpc(std::vector<ParameterSpec> specs,
                                       const EarpcOptions& opt);
std::unique_ptr<Controller> make_qfixed(std::vector<ParameterSpec> specs,
                                        const RlParams& rl, int intervals);
std::unique_ptr<Controller> make_qtree(std::vector<ParameterSpec> specs,
                                       const RlParams& rl,
                                       const TreeOptions& opt);
std::unique_ptr<Controller> make_earpc_tree(std::vector<ParameterSpec> specs,
                                            const RlParams& rl,
                                            const TreeOptions& opt,
                                            const EarpcOptions& eopt,
                                            RngStream internal_rng);
std::unique_ptr<Controller> make_adaptive(std::vector<ParameterSpec> specs,
                                          const RlParams& rl,
                                          const AdaptiveOptions& opt);

// Fixed per-parameter discretization with a mixed-radix joint action id.
struct ActionGrid {
  std::vector<Partition> parts;
  std::size_t total = 1;

  ActionGrid() = default;
  ActionGrid(std::span<const ParameterSpec> specs, int m) {
    for (const auto& s : specs) {
      parts.push_back(Partition::equal_intervals(s.min, s.max, m));
      total *= parts.back().size();
    }
  }

  std::vector<std::size_t> decode(std::size_t a) const {
    std::vector<std::size_t> idx(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      idx[i] = a % parts[i].size();
      a /= parts[i].size();
    }
    return idx;
  }
};

inline void push_capped(std::vector<ExperienceTuple>& buf, ExperienceTuple t,
                        std::size_t cap) {
  if (cap > 0 && buf.size() >= cap) buf.erase(buf.begin());
  buf.push_back(std::move(t));
}

}  // namespace apc::detail
