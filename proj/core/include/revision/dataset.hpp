// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace revision {

enum class Category { kBook, kBusinessCard, kCd, kFlyer, kLandmark, kPainting, kProduct };

const std::vector<Category>& all_categories();
std::string category_name(Category c);
Category category_from_name(const std::string& name);

enum class Split { kTrain, kTest, kUnassigned };
std::string split_name(Split s);
Split split_from_name(const std::string& name);

// One <image, original instruction, rewritten instruction> triple plus
// optional caption/OCR metadata.
struct InstructionExample {
  std::string id;
  std::string image_ref;
  Category category = Category::kBook;
  std::string intent;
  std::string original;
  std::string rewritten;
  std::optional<std::string> caption;
  std::optional<std::string> ocr_text;
  Split split = Split::kUnassigned;

  bool operator==(const InstructionExample&) const = default;
};

// Dataset file: UTF-8 JSON-lines, one record per line, keys in fixed order
// id, image, category, intent, original, rewritten, caption, ocr, split.
// caption/ocr/split are omitted when absent (split omitted when
// unassigned). Text fields store template markers escaped: "<task>" as
// "<<task>>" and "<data>" as "<<data>>"; load undoes the escaping.
std::vector<InstructionExample> load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path,
                  const std::vector<InstructionExample>& examples);
std::string dataset_to_text(const std::vector<InstructionExample>& examples);
std::vector<InstructionExample> dataset_from_text(const std::string& text);

struct CategoryStats {
  long image_count = 0;
  long instruction_count = 0;
};

struct DatasetStats {
  std::map<Category, CategoryStats> per_category;
  CategoryStats totals;  // column sums over per_category
};

DatasetStats compute_stats(const std::vector<InstructionExample>& examples);

// Per-category stratified split at instruction level. Deterministic in
// seed; |train| per category is round(ratio * n). Image refs may appear on
// both sides; example ids never do.
std::pair<std::vector<InstructionExample>, std::vector<InstructionExample>>
split_dataset(const std::vector<InstructionExample>& examples, double ratio,
              std::uint64_t seed);

enum class TemplateMode { kBaseline, kMetadata };
TemplateMode template_mode_from_name(const std::string& name);
std::string template_mode_name(TemplateMode m);

// Default rewrite prompt; configurable via CLI flag.
std::string default_rewrite_prompt();

// Exactly "Caption this:".
std::string caption_prompt();

// Template marker escaping used by the file format and by
// format_model_input: double the angle brackets of literal markers.
std::string escape_markers(std::string_view text);
std::string unescape_markers(std::string_view text);

// baseline: "{prompt}\nInstruction: {original}"
// metadata: "<task> {prompt}\nInstruction: {original}\n<data> Caption:
//            {caption}\nOCR: {ocr}"
// Substituted fields are marker-escaped; the image travels separately.
std::string format_model_input(const InstructionExample& example,
                               TemplateMode mode,
                               const std::string& rewrite_prompt);

// Captioning corpus: JSON-lines records {"image": ..., "caption": ...}.
struct CaptionExample {
  std::string image_ref;
  std::string caption;
  bool operator==(const CaptionExample&) const = default;
};

std::vector<CaptionExample> load_caption_corpus(const std::filesystem::path& path);
void save_caption_corpus(const std::filesystem::path& path,
                         const std::vector<CaptionExample>& examples);

}  // namespace revision
