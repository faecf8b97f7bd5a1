#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace inexa::ocel {

enum class TypeClass {
  WorkflowBusiness,
  WorkflowLifecycle,
  WorkflowSubprocess,
  WorkflowResource,
  WorkflowDevice,
  Abstraction,
  History,
};

/// The seven repository aggregations, coarse to fine.
enum class AbstractionKind { Caa, Csa, Cla, Seq, Xor, And, Loop };

std::string_view suffix(AbstractionKind kind);
std::optional<AbstractionKind> kind_from_suffix(std::string_view suffix);
bool is_complete(AbstractionKind kind);
/// Human-readable class name, e.g. "Sequence control-flow structure".
std::string_view display_name(AbstractionKind kind);

/// Namespaced object type. The class is a pure function of the name:
///   "workflow:lc:..."  lifecycle      "workflow:sp:..."  subprocess
///   "workflow:res:..." resource       "workflow:dev:..." device
///   "workflow:..."     business       "abstraction:<target>$<suffix>"
///   "history"          the abstraction-history class
class ObjectType {
 public:
  /// Throws LogInvariantError for names outside the known namespaces or
  /// abstraction names with an unknown suffix.
  static ObjectType parse(std::string_view name);

  /// "abstraction:" + target + "$" + suffix. Target must be a workflow type.
  static ObjectType abstraction(const ObjectType& target, AbstractionKind kind);

  const std::string& name() const noexcept { return name_; }
  TypeClass type_class() const noexcept { return class_; }

  bool is_workflow() const noexcept;
  bool is_abstraction() const noexcept { return class_ == TypeClass::Abstraction; }
  bool is_history() const noexcept { return class_ == TypeClass::History; }

  /// For abstraction types: the aggregated workflow type and the aggregation.
  ObjectType abstraction_target() const;
  AbstractionKind abstraction_kind() const;

  /// Name without the "workflow:" namespace and class qualifier
  /// ("workflow:lc:finalize account opening" -> "finalize account opening").
  std::string short_name() const;

  friend bool operator==(const ObjectType& a, const ObjectType& b) { return a.name_ == b.name_; }
  friend std::strong_ordering operator<=>(const ObjectType& a, const ObjectType& b) {
    return a.name_ <=> b.name_;
  }

 private:
  ObjectType(std::string name, TypeClass cls) : name_(std::move(name)), class_(cls) {}

  std::string name_;
  TypeClass class_;
};

/// The complete aggregation matching a workflow type's class (caa/csa/cla).
AbstractionKind complete_kind_for(const ObjectType& workflow_type);

}  // namespace inexa::ocel
