#include "inexa/object_type.hpp"

#include <array>
#include <utility>

#include "inexa/errors.hpp"

namespace inexa::ocel {
namespace {

constexpr std::string_view kWorkflow = "workflow:";
constexpr std::string_view kAbstraction = "abstraction:";
constexpr std::string_view kHistory = "history";

constexpr std::array<std::pair<std::string_view, TypeClass>, 4> kWorkflowQualifiers{{
    {"lc:", TypeClass::WorkflowLifecycle},
    {"sp:", TypeClass::WorkflowSubprocess},
    {"res:", TypeClass::WorkflowResource},
    {"dev:", TypeClass::WorkflowDevice},
}};

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

}  // namespace

std::string_view suffix(AbstractionKind kind) {
  switch (kind) {
    case AbstractionKind::Caa: return "caa";
    case AbstractionKind::Csa: return "csa";
    case AbstractionKind::Cla: return "cla";
    case AbstractionKind::Seq: return "seq";
    case AbstractionKind::Xor: return "xor";
    case AbstractionKind::And: return "and";
    case AbstractionKind::Loop: return "loop";
  }
  return {};
}

std::optional<AbstractionKind> kind_from_suffix(std::string_view s) {
  for (auto k : {AbstractionKind::Caa, AbstractionKind::Csa, AbstractionKind::Cla, AbstractionKind::Seq,
                 AbstractionKind::Xor, AbstractionKind::And, AbstractionKind::Loop}) {
    if (suffix(k) == s) return k;
  }
  return std::nullopt;
}

bool is_complete(AbstractionKind kind) {
  return kind == AbstractionKind::Caa || kind == AbstractionKind::Csa || kind == AbstractionKind::Cla;
}

std::string_view display_name(AbstractionKind kind) {
  switch (kind) {
    case AbstractionKind::Caa: return "Complete artifact";
    case AbstractionKind::Csa: return "Complete subprocess";
    case AbstractionKind::Cla: return "Complete lifecycle";
    case AbstractionKind::Seq: return "Sequence control-flow structure";
    case AbstractionKind::Xor: return "XOR control-flow structure";
    case AbstractionKind::And: return "AND control-flow structure";
    case AbstractionKind::Loop: return "LOOP control-flow structure";
  }
  return {};
}

ObjectType ObjectType::parse(std::string_view name) {
  if (name == kHistory) return ObjectType(std::string(name), TypeClass::History);

  if (starts_with(name, kAbstraction)) {
    auto dollar = name.rfind('$');
    if (dollar == std::string_view::npos) {
      throw LogInvariantError("abstraction type '" + std::string(name) + "' lacks a '$<suffix>'");
    }
    auto sfx = name.substr(dollar + 1);
    if (!kind_from_suffix(sfx)) {
      throw LogInvariantError("abstraction type '" + std::string(name) + "' has unknown suffix '" +
                              std::string(sfx) + "'");
    }
    auto target = name.substr(kAbstraction.size(), dollar - kAbstraction.size());
    if (!starts_with(target, kWorkflow)) {
      throw LogInvariantError("abstraction type '" + std::string(name) + "' does not target a workflow type");
    }
    return ObjectType(std::string(name), TypeClass::Abstraction);
  }

  if (starts_with(name, kWorkflow)) {
    auto rest = name.substr(kWorkflow.size());
    if (rest.empty()) throw LogInvariantError("empty workflow type name");
    if (rest.find('$') != std::string_view::npos) {
      throw LogInvariantError("workflow type '" + std::string(name) + "' must not contain '$'");
    }
    for (const auto& [qualifier, cls] : kWorkflowQualifiers) {
      if (starts_with(rest, qualifier)) {
        if (rest.size() == qualifier.size()) {
          throw LogInvariantError("workflow type '" + std::string(name) + "' has an empty name");
        }
        return ObjectType(std::string(name), cls);
      }
    }
    return ObjectType(std::string(name), TypeClass::WorkflowBusiness);
  }

  throw LogInvariantError("object type '" + std::string(name) +
                          "' is outside the workflow:/abstraction:/history namespaces");
}

ObjectType ObjectType::abstraction(const ObjectType& target, AbstractionKind kind) {
  if (!target.is_workflow()) {
    throw LogInvariantError("abstraction target '" + target.name() + "' is not a workflow type");
  }
  return ObjectType(std::string(kAbstraction) + target.name() + "$" + std::string(suffix(kind)),
                    TypeClass::Abstraction);
}

bool ObjectType::is_workflow() const noexcept {
  switch (class_) {
    case TypeClass::WorkflowBusiness:
    case TypeClass::WorkflowLifecycle:
    case TypeClass::WorkflowSubprocess:
    case TypeClass::WorkflowResource:
    case TypeClass::WorkflowDevice:
      return true;
    default:
      return false;
  }
}

ObjectType ObjectType::abstraction_target() const {
  if (!is_abstraction()) throw LogInvariantError("'" + name_ + "' is not an abstraction type");
  auto dollar = name_.rfind('$');
  return parse(std::string_view(name_).substr(kAbstraction.size(), dollar - kAbstraction.size()));
}

AbstractionKind ObjectType::abstraction_kind() const {
  if (!is_abstraction()) throw LogInvariantError("'" + name_ + "' is not an abstraction type");
  return *kind_from_suffix(std::string_view(name_).substr(name_.rfind('$') + 1));
}

std::string ObjectType::short_name() const {
  std::string_view rest = name_;
  if (!is_workflow()) return name_;
  rest.remove_prefix(kWorkflow.size());
  for (const auto& [qualifier, cls] : kWorkflowQualifiers) {
    if (cls == class_) rest.remove_prefix(qualifier.size());
  }
  return std::string(rest);
}

AbstractionKind complete_kind_for(const ObjectType& t) {
  switch (t.type_class()) {
    case TypeClass::WorkflowLifecycle: return AbstractionKind::Cla;
    case TypeClass::WorkflowSubprocess: return AbstractionKind::Csa;
    case TypeClass::WorkflowBusiness:
    case TypeClass::WorkflowResource:
    case TypeClass::WorkflowDevice:
      return AbstractionKind::Caa;
    default:
      throw LogInvariantError("'" + t.name() + "' is not a workflow type");
  }
}

}  // namespace inexa::ocel
