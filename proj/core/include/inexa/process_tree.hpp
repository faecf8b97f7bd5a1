#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace inexa::discovery {

enum class Operator { Activity, Silent, Seq, Xor, And, Loop };

/// Block-structured process model. Loop children are (do, redo...).
struct ProcessTree {
  Operator op = Operator::Silent;
  std::string label;  ///< activity label, only for Operator::Activity
  std::vector<ProcessTree> children;
  std::string id;     ///< positional id ("0", "0.2", "0.2.1", ...), see assign_ids

  static ProcessTree activity(std::string label);
  static ProcessTree silent();
  static ProcessTree node(Operator op, std::vector<ProcessTree> children);

  bool leaf() const noexcept { return op == Operator::Activity || op == Operator::Silent; }
  bool operator==(const ProcessTree&) const = default;
};

/// Rewrites every node id from its position below `root_id`.
void assign_ids(ProcessTree& tree, const std::string& root_id = "0");

/// Labels of the activity leaves, left to right.
std::vector<std::string> leaf_labels(const ProcessTree& tree);

/// Compact text form, e.g. "seq(a, xor(b, c), loop(d, tau))".
std::string to_string(const ProcessTree& tree);
/// Parses the to_string form; throws ParseError.
ProcessTree parse_tree(std::string_view text);

std::string_view operator_name(Operator op);

}  // namespace inexa::discovery
