#include <stdexcept>
#include <utility>

#include "apc/controllers.hpp"
#include "common.hpp"

namespace apc {

std::vector<std::string> controller_names() {
  return {"adaptive", "qlearn", "qtree", "earpc", "earpc-tree"};
}

std::string canonical_controller_name(const std::string& name) {
  if (name == "adaptive" || name == "A" || name == "a") return "adaptive";
  if (name == "qlearn" || name == "Q" || name == "q") return "qlearn";
  if (name == "qtree" || name == "K" || name == "k") return "qtree";
  if (name == "earpc" || name == "E" || name == "e") return "earpc";
  if (name == "earpc-tree" || name == "E+K" || name == "e+k" || name == "EK" ||
      name == "ek")
    return "earpc-tree";
  throw std::domain_error("unknown controller: " + name);
}

std::string short_controller_name(const std::string& canonical) {
  if (canonical == "adaptive") return "A";
  if (canonical == "qlearn") return "Q";
  if (canonical == "qtree") return "K";
  if (canonical == "earpc") return "E";
  if (canonical == "earpc-tree") return "E+K";
  throw std::domain_error("unknown controller: " + canonical);
}

std::unique_ptr<Controller> make_controller(
    const std::string& name, std::vector<ParameterSpec> specs,
    const RlParams& rl, const EarpcOptions& earpc, const TreeOptions& tree,
    const AdaptiveOptions& adaptive, RngStream internal_rng) {
  if (specs.empty())
    throw std::domain_error("make_controller: no parameters to control");
  const std::string c = canonical_controller_name(name);
  if (c == "adaptive") return detail::make_adaptive(std::move(specs), rl, adaptive);
  if (c == "qlearn") return detail::make_qfixed(std::move(specs), rl, tree.intervals);
  if (c == "qtree") return detail::make_qtree(std::move(specs), rl, tree);
  if (c == "earpc") return detail::make_earpc(std::move(specs), earpc);
  return detail::make_earpc_tree(std::move(specs), rl, tree, earpc, internal_rng);
}

}  // namespace apc
