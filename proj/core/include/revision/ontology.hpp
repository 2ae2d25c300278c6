// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace revision {

// A semantic parse of one rewritten instruction: a collapsed intent label
// plus a set of argument labels.
struct SemanticParse {
  std::string intent;
  std::set<std::string> args;

  bool operator==(const SemanticParse&) const = default;
};

struct LabelViolation {
  enum class Field { kIntent, kArgument };
  Field field;
  std::string label;

  std::string message() const;
};

// Immutable after load; safe for concurrent reads.
//
// File format: UTF-8 text with sections headed [full_intents],
// [collapsed_intents], [collapsed_arguments] (required), [full_arguments]
// (optional) and [collapse_map] (optional, Full=Collapsed lines). One label
// per line; '#' starts a comment; labels are trimmed and matched
// case-sensitively.
class Ontology {
 public:
  static Ontology load(const std::filesystem::path& path);
  static Ontology from_text(const std::string& text);

  const std::set<std::string>& full_intents() const { return full_intents_; }
  const std::set<std::string>& collapsed_intents() const {
    return collapsed_intents_;
  }
  const std::set<std::string>& full_arguments() const {
    return full_arguments_;
  }
  const std::set<std::string>& collapsed_arguments() const {
    return collapsed_arguments_;
  }
  const std::map<std::string, std::string>& intent_collapse_map() const {
    return collapse_map_;
  }

  // Accept-list for argument validation: full_arguments U collapsed_arguments.
  const std::set<std::string>& argument_accept_list() const {
    return argument_accept_;
  }

  // Total over all strings: collapsed labels map to themselves, full labels
  // through the collapse map, everything else to "Others". Idempotent.
  std::string collapse_intent(const std::string& intent) const;

  // Empty result iff parse.intent is a collapsed intent and every argument
  // is on the accept-list.
  std::vector<LabelViolation> validate_parse_labels(
      const SemanticParse& parse) const;

  static constexpr const char* kOthers = "Others";

 private:
  std::set<std::string> full_intents_;
  std::set<std::string> collapsed_intents_;
  std::set<std::string> full_arguments_;
  std::set<std::string> collapsed_arguments_;
  std::set<std::string> argument_accept_;
  std::map<std::string, std::string> collapse_map_;
};

}  // namespace revision
