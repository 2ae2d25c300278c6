// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#include "revision/parsing.hpp"

#include <json.hpp>

#include "revision/error.hpp"
#include "revision/log.hpp"
#include "revision/util.hpp"

namespace revision {

using nlohmann::json;

RuleParserAdapter RuleParserAdapter::from_file(const std::filesystem::path& path) {
  return from_text(read_file(path));
}

RuleParserAdapter RuleParserAdapter::from_text(const std::string& json_text) {
  RuleParserAdapter a;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("parser rules: ") + e.what());
  }
  auto compile = [](const std::string& pattern) {
    try {
      return std::regex(pattern, std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error& e) {
      throw ParseError("bad rule pattern '" + pattern + "': " + e.what());
    }
  };
  try {
    for (const auto& r : j.value("intents", json::array())) {
      IntentRule rule;
      rule.intent = r.at("intent").get<std::string>();
      for (const auto& p : r.at("any")) {
        rule.patterns.push_back(compile(p.get<std::string>()));
      }
      a.intents_.push_back(std::move(rule));
    }
    for (const auto& r : j.value("arguments", json::array())) {
      ArgumentRule rule;
      rule.argument = r.at("argument").get<std::string>();
      for (const auto& p : r.at("any")) {
        rule.patterns.push_back(compile(p.get<std::string>()));
      }
      a.arguments_.push_back(std::move(rule));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("parser rules: ") + e.what());
  }
  return a;
}

SemanticParse RuleParserAdapter::parse(const std::string& text) {
  SemanticParse out;
  out.intent = Ontology::kOthers;
  for (const auto& rule : intents_) {
    bool hit = false;
    for (const auto& re : rule.patterns) {
      if (std::regex_search(text, re)) {
        hit = true;
        break;
      }
    }
    if (hit) {
      out.intent = rule.intent;
      break;
    }
  }
  for (const auto& rule : arguments_) {
    for (const auto& re : rule.patterns) {
      if (std::regex_search(text, re)) {
        out.args.insert(rule.argument);
        break;
      }
    }
  }
  return out;
}

RemoteParserAdapter::RemoteParserAdapter(
    std::shared_ptr<MultimodalLLMAdapter> llm, const Ontology& ontology,
    PromptTemplates prompts, int retries, double backoff_seconds)
    : llm_(std::move(llm)),
      ontology_(ontology),
      prompts_(std::move(prompts)),
      retries_(retries),
      backoff_(backoff_seconds) {}

std::string RemoteParserAdapter::identity() const {
  return "remote:" + llm_->identity();
}

SemanticParse RemoteParserAdapter::parse(const std::string& text) {
  auto join = [](const std::set<std::string>& labels) {
    std::string out;
    for (const auto& l : labels) {
      if (!out.empty()) out += ", ";
      out += l;
    }
    return out;
  };
  std::string prompt = prompts_.parse;
  prompt = replace_all(prompt, "{intents}", join(ontology_.collapsed_intents()));
  prompt = replace_all(prompt, "{arguments}",
                       join(ontology_.argument_accept_list()));
  prompt = replace_all(prompt, "{text}", text);
  const std::string response = with_retries(
      [&] { return llm_->complete(prompt, std::nullopt); }, retries_, backoff_);

  SemanticParse parse;
  parse.intent = Ontology::kOthers;
  bool saw_intent = false;
  for (const auto& raw : split_lines(response)) {
    const std::string line = trim(raw);
    const std::string lower = to_lower(line);
    if (starts_with(lower, "intent:")) {
      parse.intent = trim(line.substr(7));
      saw_intent = true;
    } else if (starts_with(lower, "arguments:")) {
      for (const auto& piece : split(line.substr(10), ',')) {
        const std::string label = trim(piece);
        if (!label.empty() && to_lower(label) != "none") {
          parse.args.insert(label);
        }
      }
    }
  }
  if (!saw_intent) {
    log::warn("parser proxy response had no 'Intent:' line; using Others");
    return SemanticParse{Ontology::kOthers, {}};
  }
  return parse;
}

SemanticParse parse_instruction(const std::string& text, ParserAdapter& parser,
                                const Ontology& ontology) {
  SemanticParse raw;
  try {
    raw = parser.parse(text);
  } catch (const ProviderError&) {
    throw;  // transport failures are the caller's problem (retry/exit 3)
  } catch (const Error& e) {
    log::warn(std::string("parser failed; degrading to Others: ") + e.what());
    return SemanticParse{Ontology::kOthers, {}};
  }
  SemanticParse out;
  out.intent = ontology.collapse_intent(raw.intent);
  for (const auto& arg : raw.args) {
    const std::string label = trim(arg);
    if (ontology.argument_accept_list().count(label)) {
      out.args.insert(label);
    } else {
      log::warn("dropping unknown argument label '" + label + "'");
    }
  }
  return out;
}

namespace {

void check_aligned(const std::vector<SemanticParse>& ref,
                   const std::vector<SemanticParse>& hyp) {
  if (ref.size() != hyp.size()) {
    throw ArgumentError("parse lists must be aligned (got " +
                        std::to_string(ref.size()) + " vs " +
                        std::to_string(hyp.size()) + ")");
  }
  if (ref.empty()) {
    throw ArgumentError("parse metrics are undefined on empty lists");
  }
}

}  // namespace

double intent_accuracy(const std::vector<SemanticParse>& ref_parses,
                       const std::vector<SemanticParse>& hyp_parses) {
  check_aligned(ref_parses, hyp_parses);
  long hits = 0;
  for (size_t i = 0; i < ref_parses.size(); ++i) {
    if (ref_parses[i].intent == hyp_parses[i].intent) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(ref_parses.size());
}

double argument_mjs(const std::vector<SemanticParse>& ref_parses,
                    const std::vector<SemanticParse>& hyp_parses) {
  check_aligned(ref_parses, hyp_parses);
  double sum = 0.0;
  for (size_t i = 0; i < ref_parses.size(); ++i) {
    const auto& a = ref_parses[i].args;
    const auto& b = hyp_parses[i].args;
    if (a.empty() && b.empty()) {
      sum += 1.0;  // by convention
      continue;
    }
    long inter = 0;
    for (const auto& x : a) inter += b.count(x) ? 1 : 0;
    const long uni = static_cast<long>(a.size() + b.size()) - inter;
    sum += static_cast<double>(inter) / static_cast<double>(uni);
  }
  return sum / static_cast<double>(ref_parses.size());
}

std::map<std::string, double> per_intent_f1(
    const std::vector<SemanticParse>& ref_parses,
    const std::vector<SemanticParse>& hyp_parses) {
  check_aligned(ref_parses, hyp_parses);
  std::map<std::string, long> tp, ref_count, hyp_count;
  for (size_t i = 0; i < ref_parses.size(); ++i) {
    ++ref_count[ref_parses[i].intent];
    ++hyp_count[hyp_parses[i].intent];
    if (ref_parses[i].intent == hyp_parses[i].intent) {
      ++tp[ref_parses[i].intent];
    }
  }
  std::map<std::string, double> f1;
  auto add = [&](const std::string& intent) {
    const double t = static_cast<double>(tp[intent]);
    const double r = static_cast<double>(ref_count[intent]);
    const double h = static_cast<double>(hyp_count[intent]);
    const double precision = h > 0 ? t / h : 0.0;
    const double recall = r > 0 ? t / r : 0.0;
    f1[intent] = (precision + recall) > 0
                     ? 2.0 * precision * recall / (precision + recall)
                     : 0.0;
  };
  for (const auto& [intent, _] : ref_count) add(intent);
  for (const auto& [intent, _] : hyp_count) add(intent);
  return f1;
}

}  // namespace revision
