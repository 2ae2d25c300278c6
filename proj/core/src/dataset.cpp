// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#include "revision/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "revision/error.hpp"
#include "revision/rng.hpp"
#include "revision/util.hpp"

namespace revision {

using ordered_json = nlohmann::ordered_json;

const std::vector<Category>& all_categories() {
  static const std::vector<Category> cats = {
      Category::kBook,     Category::kBusinessCard, Category::kCd,
      Category::kFlyer,    Category::kLandmark,     Category::kPainting,
      Category::kProduct};
  return cats;
}

std::string category_name(Category c) {
  switch (c) {
    case Category::kBook: return "Book";
    case Category::kBusinessCard: return "BusinessCard";
    case Category::kCd: return "CD";
    case Category::kFlyer: return "Flyer";
    case Category::kLandmark: return "Landmark";
    case Category::kPainting: return "Painting";
    case Category::kProduct: return "Product";
  }
  throw ArgumentError("bad category value");
}

Category category_from_name(const std::string& name) {
  for (Category c : all_categories()) {
    if (category_name(c) == name) return c;
  }
  throw ValidationError("unknown category '" + name + "'");
}

std::string split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kTest: return "test";
    case Split::kUnassigned: return "unassigned";
  }
  throw ArgumentError("bad split value");
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  if (name == "unassigned") return Split::kUnassigned;
  throw ValidationError("unknown split '" + name + "'");
}

std::string escape_markers(std::string_view text) {
  std::string out = replace_all(text, "<task>", "<<task>>");
  return replace_all(out, "<data>", "<<data>>");
}

std::string unescape_markers(std::string_view text) {
  std::string out = replace_all(text, "<<task>>", "<task>");
  return replace_all(out, "<<data>>", "<data>");
}

namespace {

void validate_example(const InstructionExample& ex, int lineno) {
  auto fail = [&](const std::string& what) {
    throw ValidationError("record '" + ex.id + "': " + what +
                          (lineno > 0 ? " (line " + std::to_string(lineno) + ")" : ""));
  };
  if (ex.id.empty()) fail("empty id");
  if (ex.image_ref.empty()) fail("empty image ref");
  if (ex.intent.empty()) fail("empty intent");
  if (ex.original.empty()) fail("empty original instruction");
  if (ex.rewritten.empty()) fail("empty rewritten instruction");
}

ordered_json example_to_json(const InstructionExample& ex) {
  ordered_json j;
  j["id"] = ex.id;
  j["image"] = ex.image_ref;
  j["category"] = category_name(ex.category);
  j["intent"] = ex.intent;
  j["original"] = escape_markers(ex.original);
  j["rewritten"] = escape_markers(ex.rewritten);
  if (ex.caption) j["caption"] = escape_markers(*ex.caption);
  if (ex.ocr_text) j["ocr"] = escape_markers(*ex.ocr_text);
  if (ex.split != Split::kUnassigned) j["split"] = split_name(ex.split);
  return j;
}

InstructionExample example_from_json(const ordered_json& j, int lineno) {
  InstructionExample ex;
  try {
    ex.id = j.at("id").get<std::string>();
    ex.image_ref = j.at("image").get<std::string>();
    ex.category = category_from_name(j.at("category").get<std::string>());
    ex.intent = j.at("intent").get<std::string>();
    ex.original = unescape_markers(j.at("original").get<std::string>());
    ex.rewritten = unescape_markers(j.at("rewritten").get<std::string>());
    if (j.contains("caption")) {
      ex.caption = unescape_markers(j.at("caption").get<std::string>());
    }
    if (j.contains("ocr")) {
      ex.ocr_text = unescape_markers(j.at("ocr").get<std::string>());
    }
    if (j.contains("split")) {
      ex.split = split_from_name(j.at("split").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad record: ") + e.what(), lineno);
  }
  validate_example(ex, lineno);
  return ex;
}

}  // namespace

std::vector<InstructionExample> dataset_from_text(const std::string& text) {
  std::vector<InstructionExample> out;
  std::set<std::string> seen_ids;
  const auto lines = split_lines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i + 1);
    if (trim(lines[i]).empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(lines[i]);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), lineno);
    }
    auto ex = example_from_json(j, lineno);
    if (!seen_ids.insert(ex.id).second) {
      throw ValidationError("duplicate id '" + ex.id + "' (line " +
                            std::to_string(lineno) + ")");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::string dataset_to_text(const std::vector<InstructionExample>& examples) {
  std::string out;
  for (const auto& ex : examples) {
    out += example_to_json(ex).dump();
    out += '\n';
  }
  return out;
}

std::vector<InstructionExample> load_dataset(const std::filesystem::path& path) {
  return dataset_from_text(read_file(path));
}

void save_dataset(const std::filesystem::path& path,
                  const std::vector<InstructionExample>& examples) {
  write_file(path, dataset_to_text(examples));
}

DatasetStats compute_stats(const std::vector<InstructionExample>& examples) {
  DatasetStats stats;
  std::map<Category, std::set<std::string>> images;
  for (const auto& ex : examples) {
    images[ex.category].insert(ex.image_ref);
    stats.per_category[ex.category].instruction_count += 1;
  }
  for (auto& [cat, s] : stats.per_category) {
    s.image_count = static_cast<long>(images[cat].size());
    stats.totals.image_count += s.image_count;
    stats.totals.instruction_count += s.instruction_count;
  }
  return stats;
}

std::pair<std::vector<InstructionExample>, std::vector<InstructionExample>>
split_dataset(const std::vector<InstructionExample>& examples, double ratio,
              std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw ArgumentError("split ratio must be in (0, 1)");
  }
  // Shuffle indices within each category, take round(ratio * n) for train,
  // then emit both sides in original dataset order.
  std::map<Category, std::vector<size_t>> by_category;
  for (size_t i = 0; i < examples.size(); ++i) {
    by_category[examples[i].category].push_back(i);
  }
  std::vector<bool> in_train(examples.size(), false);
  for (auto& [cat, idx] : by_category) {
    Rng rng = Rng(seed).fork("split:" + category_name(cat));
    rng.shuffle(idx);
    const auto n = static_cast<double>(idx.size());
    auto n_train = static_cast<size_t>(std::llround(ratio * n));
    n_train = std::min(n_train, idx.size());
    for (size_t k = 0; k < n_train; ++k) in_train[idx[k]] = true;
  }
  std::vector<InstructionExample> train, test;
  for (size_t i = 0; i < examples.size(); ++i) {
    auto ex = examples[i];
    ex.split = in_train[i] ? Split::kTrain : Split::kTest;
    (in_train[i] ? train : test).push_back(std::move(ex));
  }
  return {std::move(train), std::move(test)};
}

TemplateMode template_mode_from_name(const std::string& name) {
  if (name == "baseline") return TemplateMode::kBaseline;
  if (name == "metadata") return TemplateMode::kMetadata;
  throw ArgumentError("unknown template mode '" + name + "'");
}

std::string template_mode_name(TemplateMode m) {
  return m == TemplateMode::kBaseline ? "baseline" : "metadata";
}

std::string default_rewrite_prompt() {
  return "Rewrite the instruction so it is fully self-contained and "
         "interpretable without the image.";
}

std::string caption_prompt() { return "Caption this:"; }

std::string format_model_input(const InstructionExample& example,
                               TemplateMode mode,
                               const std::string& rewrite_prompt) {
  const std::string original = escape_markers(example.original);
  if (mode == TemplateMode::kBaseline) {
    return rewrite_prompt + "\nInstruction: " + original;
  }
  if (!example.caption || !example.ocr_text) {
    throw ArgumentError(
        "metadata mode requires caption and ocr fields to be present");
  }
  return "<task> " + rewrite_prompt + "\nInstruction: " + original +
         "\n<data> Caption: " + escape_markers(*example.caption) +
         "\nOCR: " + escape_markers(*example.ocr_text);
}

std::vector<CaptionExample> load_caption_corpus(const std::filesystem::path& path) {
  std::vector<CaptionExample> out;
  const auto lines = split_lines(read_file(path));
  for (size_t i = 0; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i + 1);
    if (trim(lines[i]).empty()) continue;
    try {
      auto j = ordered_json::parse(lines[i]);
      CaptionExample ex;
      ex.image_ref = j.at("image").get<std::string>();
      ex.caption = j.at("caption").get<std::string>();
      if (ex.image_ref.empty() || ex.caption.empty()) {
        throw ParseError("empty image or caption", lineno);
      }
      out.push_back(std::move(ex));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed caption record: ") + e.what(),
                       lineno);
    }
  }
  return out;
}

void save_caption_corpus(const std::filesystem::path& path,
                         const std::vector<CaptionExample>& examples) {
  std::string out;
  for (const auto& ex : examples) {
    ordered_json j;
    j["image"] = ex.image_ref;
    j["caption"] = ex.caption;
    out += j.dump();
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace revision
