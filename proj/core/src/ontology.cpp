// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#include "revision/ontology.hpp"

#include <algorithm>

#include "revision/error.hpp"
#include "revision/util.hpp"

namespace revision {

std::string LabelViolation::message() const {
  const char* kind = field == Field::kIntent ? "intent" : "argument";
  return std::string("unknown ") + kind + " label: '" + label + "'";
}

Ontology Ontology::load(const std::filesystem::path& path) {
  return from_text(read_file(path));
}

Ontology Ontology::from_text(const std::string& text) {
  Ontology o;
  std::set<std::string>* current = nullptr;
  bool in_collapse_map = false;
  bool saw_full_intents = false, saw_collapsed_intents = false,
       saw_collapsed_arguments = false;
  std::map<std::string, std::string> explicit_map;
  bool has_explicit_map = false;

  const auto lines = split_lines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i + 1);
    std::string line = lines[i];
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("unterminated section header '" + line + "'", lineno);
      }
      const std::string name = line.substr(1, line.size() - 2);
      in_collapse_map = false;
      current = nullptr;
      if (name == "full_intents") {
        current = &o.full_intents_;
        saw_full_intents = true;
      } else if (name == "collapsed_intents") {
        current = &o.collapsed_intents_;
        saw_collapsed_intents = true;
      } else if (name == "collapsed_arguments") {
        current = &o.collapsed_arguments_;
        saw_collapsed_arguments = true;
      } else if (name == "full_arguments") {
        current = &o.full_arguments_;
      } else if (name == "collapse_map") {
        in_collapse_map = true;
        has_explicit_map = true;
      } else {
        throw ParseError("unknown section '" + name + "'", lineno);
      }
      continue;
    }

    if (in_collapse_map) {
      auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ParseError("collapse_map line is not 'Full=Collapsed'", lineno);
      }
      std::string from = trim(line.substr(0, eq));
      std::string to = trim(line.substr(eq + 1));
      if (from.empty() || to.empty()) {
        throw ParseError("collapse_map entry has an empty side", lineno);
      }
      explicit_map[from] = to;
      continue;
    }

    if (current == nullptr) {
      throw ParseError("label '" + line + "' outside any section", lineno);
    }
    current->insert(line);
  }

  if (!saw_full_intents || !saw_collapsed_intents || !saw_collapsed_arguments) {
    throw ParseError(
        "missing required section(s); need [full_intents], "
        "[collapsed_intents] and [collapsed_arguments]");
  }

  if (has_explicit_map) {
    // An explicit [collapse_map] replaces the default rule and must cover
    // every full intent.
    std::vector<std::string> unmapped;
    for (const auto& intent : o.full_intents_) {
      if (!explicit_map.count(intent)) unmapped.push_back(intent);
    }
    if (!unmapped.empty()) {
      std::string msg = "collapse map not total; unmapped intents:";
      for (const auto& u : unmapped) msg += " " + u;
      throw ValidationError(msg);
    }
    o.collapse_map_ = std::move(explicit_map);
  } else {
    // Default rule: identity for intents that are also collapsed labels,
    // "Others" for the rest.
    for (const auto& intent : o.full_intents_) {
      o.collapse_map_[intent] =
          o.collapsed_intents_.count(intent) ? intent : kOthers;
    }
  }

  o.argument_accept_ = o.collapsed_arguments_;
  o.argument_accept_.insert(o.full_arguments_.begin(), o.full_arguments_.end());
  return o;
}

std::string Ontology::collapse_intent(const std::string& intent) const {
  const std::string name = trim(intent);
  if (collapsed_intents_.count(name)) return name;
  if (auto it = collapse_map_.find(name); it != collapse_map_.end()) {
    return it->second;
  }
  return kOthers;
}

std::vector<LabelViolation> Ontology::validate_parse_labels(
    const SemanticParse& parse) const {
  std::vector<LabelViolation> out;
  if (!collapsed_intents_.count(trim(parse.intent)) &&
      trim(parse.intent) != kOthers) {
    out.push_back({LabelViolation::Field::kIntent, parse.intent});
  }
  for (const auto& arg : parse.args) {
    if (!argument_accept_.count(trim(arg))) {
      out.push_back({LabelViolation::Field::kArgument, arg});
    }
  }
  return out;
}

}  // namespace revision
