// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <regex>
#include <string>
#include <vector>

#include "revision/adapters.hpp"
#include "revision/datagen.hpp"
#include "revision/ontology.hpp"

namespace revision {

class ParserAdapter {
 public:
  virtual ~ParserAdapter() = default;
  virtual SemanticParse parse(const std::string& text) = 0;
  virtual std::string identity() const = 0;
};

// Deterministic keyword/pattern parser over the collapsed ontology, driven
// by a rules file:
//   {"intents":   [{"intent": "...", "any": ["regex", ...]}, ...],
//    "arguments": [{"argument": "...", "any": ["regex", ...]}, ...]}
// Intent rules are tried in file order, first match wins (default
// "Others"); every matching argument rule contributes its label. Matching
// is case-insensitive ECMAScript regex over the raw text.
class RuleParserAdapter : public ParserAdapter {
 public:
  static RuleParserAdapter from_file(const std::filesystem::path& path);
  static RuleParserAdapter from_text(const std::string& json_text);

  SemanticParse parse(const std::string& text) override;
  std::string identity() const override { return "rule-fallback"; }

 private:
  struct IntentRule {
    std::string intent;
    std::vector<std::regex> patterns;
  };
  struct ArgumentRule {
    std::string argument;
    std::vector<std::regex> patterns;
  };
  std::vector<IntentRule> intents_;
  std::vector<ArgumentRule> arguments_;
};

// LLM-proxy parser. Sends the parse prompt template and reads a
//   Intent: <label> / Arguments: a, b
// response. Malformed responses degrade to {"Others", {}} with a warning;
// transport failures propagate as ProviderError.
class RemoteParserAdapter : public ParserAdapter {
 public:
  RemoteParserAdapter(std::shared_ptr<MultimodalLLMAdapter> llm,
                      const Ontology& ontology, PromptTemplates prompts,
                      int retries = 3, double backoff_seconds = 0.5);
  SemanticParse parse(const std::string& text) override;
  std::string identity() const override;

 private:
  std::shared_ptr<MultimodalLLMAdapter> llm_;
  const Ontology& ontology_;
  PromptTemplates prompts_;
  int retries_;
  double backoff_;
};

// Post-processed parse: intent collapsed, arguments filtered to the
// ontology accept-list. Never throws for the fallback adapter.
SemanticParse parse_instruction(const std::string& text, ParserAdapter& parser,
                                const Ontology& ontology);

// Fraction of aligned positions with identical intent labels.
double intent_accuracy(const std::vector<SemanticParse>& ref_parses,
                       const std::vector<SemanticParse>& hyp_parses);

// Mean Jaccard similarity of argument sets; empty-vs-empty counts 1.0.
double argument_mjs(const std::vector<SemanticParse>& ref_parses,
                    const std::vector<SemanticParse>& hyp_parses);

// Per-intent F1 over collapsed intents; 0.0 where undefined. Keys are the
// intents present in either side.
std::map<std::string, double> per_intent_f1(
    const std::vector<SemanticParse>& ref_parses,
    const std::vector<SemanticParse>& hyp_parses);

}  // namespace revision
