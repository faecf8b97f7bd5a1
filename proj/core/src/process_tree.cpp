#include "inexa/process_tree.hpp"

#include <cctype>

#include "inexa/errors.hpp"

namespace inexa::discovery {

ProcessTree ProcessTree::activity(std::string label) {
  ProcessTree t;
  t.op = Operator::Activity;
  t.label = std::move(label);
  return t;
}

ProcessTree ProcessTree::silent() { return ProcessTree{}; }

ProcessTree ProcessTree::node(Operator op, std::vector<ProcessTree> children) {
  ProcessTree t;
  t.op = op;
  t.children = std::move(children);
  return t;
}

void assign_ids(ProcessTree& tree, const std::string& root_id) {
  tree.id = root_id;
  for (std::size_t i = 0; i < tree.children.size(); ++i) assign_ids(tree.children[i], root_id + "." + std::to_string(i));
}

namespace {

void collect_labels(const ProcessTree& t, std::vector<std::string>& out) {
  if (t.op == Operator::Activity) out.push_back(t.label);
  for (const auto& c : t.children) collect_labels(c, out);
}

bool needs_quotes(const std::string& s) {
  if (s.empty() || s == "tau") return true;
  for (char c : s) {
    if (c == '(' || c == ')' || c == ',' || c == '"' || c == '\\') return true;
  }
  return std::isspace(static_cast<unsigned char>(s.front())) || std::isspace(static_cast<unsigned char>(s.back()));
}

void write(const ProcessTree& t, std::string& out) {
  switch (t.op) {
    case Operator::Silent:
      out += "tau";
      return;
    case Operator::Activity:
      if (needs_quotes(t.label)) {
        out += '"';
        for (char c : t.label) {
          if (c == '"' || c == '\\') out += '\\';
          out += c;
        }
        out += '"';
      } else {
        out += t.label;
      }
      return;
    default:
      out += operator_name(t.op);
      out += '(';
      for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (i) out += ", ";
        write(t.children[i], out);
      }
      out += ')';
  }
}

class TreeParser {
 public:
  explicit TreeParser(std::string_view s) : s_(s) {}

  ProcessTree parse() {
    auto t = node();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("process tree: " + what + " at offset " + std::to_string(pos_), pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  ProcessTree node() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (s_[pos_] == '"') return ProcessTree::activity(quoted());
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != '(' && s_[pos_] != ')' && s_[pos_] != ',') ++pos_;
    std::string word(s_.substr(start, pos_ - start));
    while (!word.empty() && std::isspace(static_cast<unsigned char>(word.back()))) word.pop_back();
    if (word.empty()) fail("empty node");
    if (pos_ < s_.size() && s_[pos_] == '(') {
      Operator op;
      if (word == "seq") op = Operator::Seq;
      else if (word == "xor") op = Operator::Xor;
      else if (word == "and") op = Operator::And;
      else if (word == "loop") op = Operator::Loop;
      else fail("unknown operator '" + word + "'");
      ++pos_;
      std::vector<ProcessTree> children;
      while (true) {
        children.push_back(node());
        skip();
        if (pos_ >= s_.size()) fail("unterminated operator");
        if (s_[pos_] == ')') {
          ++pos_;
          break;
        }
        if (s_[pos_] != ',') fail("expected ',' or ')'");
        ++pos_;
      }
      if (op == Operator::Loop && children.size() < 2) fail("loop needs a do and a redo part");
      return ProcessTree::node(op, std::move(children));
    }
    if (word == "tau") return ProcessTree::silent();
    return ProcessTree::activity(std::move(word));
  }

  std::string quoted() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      out += s_[pos_++];
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::string> leaf_labels(const ProcessTree& tree) {
  std::vector<std::string> out;
  collect_labels(tree, out);
  return out;
}

std::string to_string(const ProcessTree& tree) {
  std::string out;
  write(tree, out);
  return out;
}

ProcessTree parse_tree(std::string_view text) {
  auto t = TreeParser(text).parse();
  assign_ids(t);
  return t;
}

std::string_view operator_name(Operator op) {
  switch (op) {
    case Operator::Activity: return "activity";
    case Operator::Silent: return "tau";
    case Operator::Seq: return "seq";
    case Operator::Xor: return "xor";
    case Operator::And: return "and";
    case Operator::Loop: return "loop";
  }
  return "?";
}

}  // namespace inexa::discovery
