// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "revision/adapters.hpp"
#include "revision/dataset.hpp"
#include "revision/ontology.hpp"

namespace revision {

// Prompt texts for the four generation phases. Each template begins with a
// "### revision-prompt v1 phase=<name>" tag line (which also lets fixture
// adapters route on phase) and documents its response grammar.
struct PromptTemplates {
  std::string bootstrap;
  std::string validate;
  std::string rewrite;
  std::string verify;
  std::string parse;  // used by the remote parser proxy

  static PromptTemplates builtin();
  static PromptTemplates load(const std::filesystem::path& dir);
  void save(const std::filesystem::path& dir) const;
};

struct TaggedQuestion {
  std::string text;
  std::string intent;
};

struct DatagenOptions {
  int question_count = 20;
  int retries = 3;
  double backoff_seconds = 0.0;
  int parallelism = 1;
  bool attach_caption = false;
  std::vector<std::string> deixis_blocklist = {"this", "that",  "these",
                                               "those", "here", "it"};
};

// Phase 1: up to `count` direct questions about the image, parsed from a
// numbered list ("N. [Intent] question"). Unparseable responses yield an
// empty sequence plus a warning.
std::vector<std::string> bootstrap_questions(const ImageInput& image,
                                             const Ontology& ontology,
                                             MultimodalLLMAdapter& llm,
                                             int count,
                                             const PromptTemplates& prompts,
                                             const DatagenOptions& opts = {});
std::vector<TaggedQuestion> bootstrap_questions_tagged(
    const ImageInput& image, const Ontology& ontology,
    MultimodalLLMAdapter& llm, int count, const PromptTemplates& prompts,
    const DatagenOptions& opts = {});

// Phase 2: order-preserving subsequence of `questions` the provider judges
// relevant. Response grammar: "ALL", "NONE", or 1-based indices to keep.
std::vector<std::string> validate_questions(const ImageInput& image,
                                            const std::vector<std::string>& questions,
                                            MultimodalLLMAdapter& llm,
                                            const PromptTemplates& prompts,
                                            const DatagenOptions& opts = {});

// Phase 3: one self-contained rewrite of `question`. The deixis check is
// advisory: bare blocklist tokens log a warning, never fail.
std::string rewrite_instruction(const ImageInput& image,
                                const std::string& question,
                                MultimodalLLMAdapter& llm,
                                const PromptTemplates& prompts,
                                const DatagenOptions& opts = {});

// Phase 4: yes/no semantic-fidelity verdict; anything unparseable counts
// as "no" with a warning.
bool verify_rewrite(const ImageInput& image, const std::string& original,
                    const std::string& rewritten, MultimodalLLMAdapter& llm,
                    const PromptTemplates& prompts,
                    const DatagenOptions& opts = {});

struct PipelineImage {
  ImageInput image;
  Category category = Category::kBook;
};

struct ProvenanceRecord {
  std::string example_id;
  std::string image_key;
  std::string provider;
  long bootstrap_step = 0;
  long validate_step = 0;
  long rewrite_step = 0;
  long verify_step = 0;
};

struct PipelineResult {
  std::vector<InstructionExample> examples;
  std::vector<ProvenanceRecord> provenance;
  long images_failed = 0;
  long questions_dropped = 0;   // removed by validation
  long rewrites_rejected = 0;   // failed verification
};

// bootstrap -> validate -> rewrite -> verify per image; only verified pairs
// are emitted. Per-image failures are isolated and counted. Deterministic
// for deterministic adapters, including with parallelism > 1 (results are
// assembled in input order; provenance steps are per-image logical counters).
PipelineResult run_pipeline(const std::vector<PipelineImage>& images,
                            const Ontology& ontology,
                            MultimodalLLMAdapter& llm,
                            OCREngineAdapter* ocr,
                            const PromptTemplates& prompts,
                            const DatagenOptions& opts = {});

std::string provenance_to_text(const PipelineResult& result);

// --- annotation agreement ---------------------------------------------

enum class Verdict { kAccept, kReject };

struct AnnotationMatrix {
  std::vector<std::pair<std::string, std::vector<Verdict>>> items;
  int raters_per_item = 0;

  void validate() const;  // every item has exactly n verdicts, n >= 2
};

// TSV: id <TAB> verdict ... ; verdicts are "Accept" or "Reject".
AnnotationMatrix load_annotation_matrix(const std::filesystem::path& path);
AnnotationMatrix annotation_matrix_from_text(const std::string& text);

struct AgreementSummary {
  std::vector<double> per_annotator_accept_rate;
  double at_least_two_accept_rate = 0.0;
  double all_accept_rate = 0.0;
};

AgreementSummary agreement_summary(const AnnotationMatrix& matrix);

// Fleiss' kappa over {Accept, Reject}. Throws NumericError when all
// verdicts fall in one category (P_e = 1, kappa undefined).
double fleiss_kappa(const AnnotationMatrix& matrix);

}  // namespace revision
