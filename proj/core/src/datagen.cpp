// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#include "revision/datagen.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <set>
#include <thread>

#include "revision/error.hpp"
#include "revision/log.hpp"
#include "revision/metrics.hpp"
#include "revision/util.hpp"

namespace revision {
namespace {

constexpr const char* kBootstrapTemplate =
    "### revision-prompt v1 phase=bootstrap\n"
    "You are preparing training data for a visual assistant.\n"
    "Look at the attached image and generate {count} direct questions or "
    "commands a user might say about it.\n"
    "Reference visible objects or printed text explicitly, and keep every "
    "question inside this intent list:\n"
    "{intents}\n"
    "Respond with a numbered list, one item per line, formatted as\n"
    "N. [IntentLabel] question text\n";

constexpr const char* kValidateTemplate =
    "### revision-prompt v1 phase=validate\n"
    "Check the numbered questions below against the attached image.\n"
    "A question is valid only if it is unambiguous and clearly about this "
    "image.\n"
    "{questions}\n"
    "Respond with the numbers of the valid questions separated by spaces, "
    "or ALL if every question is valid, or NONE if none are.\n";

constexpr const char* kRewriteTemplate =
    "### revision-prompt v1 phase=rewrite\n"
    "Rewrite the question below so it is fully self-contained and "
    "interpretable without the image. Resolve every reference like 'this' "
    "or 'here' into the concrete object or text visible in the image.\n"
    "Question: {question}\n"
    "Respond with the rewritten question only, on a single line.\n";

constexpr const char* kVerifyTemplate =
    "### revision-prompt v1 phase=verify\n"
    "Original question: {original}\n"
    "Rewritten question: {rewritten}\n"
    "Does the rewritten question preserve the meaning of the original and "
    "stand on its own without the attached image?\n"
    "Respond with exactly yes or no.\n";

constexpr const char* kParseTemplate =
    "### revision-prompt v1 phase=parse\n"
    "Parse the instruction below into an intent and argument labels.\n"
    "Intent labels: {intents}\n"
    "Argument labels: {arguments}\n"
    "Instruction: {text}\n"
    "Respond with two lines:\n"
    "Intent: <label>\n"
    "Arguments: <comma-separated labels, or none>\n";

std::string join_labels(const std::set<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) {
    if (!out.empty()) out += ", ";
    out += l;
  }
  return out;
}

std::string substitute(std::string tmpl,
                       const std::vector<std::pair<std::string, std::string>>& vars) {
  for (const auto& [key, value] : vars) {
    tmpl = replace_all(tmpl, "{" + key + "}", value);
  }
  return tmpl;
}

std::string call_provider(MultimodalLLMAdapter& llm, const std::string& prompt,
                          const std::optional<ImageInput>& image,
                          const DatagenOptions& opts) {
  return with_retries([&] { return llm.complete(prompt, image); },
                      opts.retries, opts.backoff_seconds);
}

// "N. [Intent] question" or "N. question"
std::optional<TaggedQuestion> parse_numbered_line(const std::string& line) {
  size_t i = 0;
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  size_t digits = i;
  while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits]))) ++digits;
  if (digits == i) return std::nullopt;
  if (digits >= line.size() || (line[digits] != '.' && line[digits] != ')')) {
    return std::nullopt;
  }
  std::string rest = trim(line.substr(digits + 1));
  TaggedQuestion q;
  if (!rest.empty() && rest.front() == '[') {
    auto close = rest.find(']');
    if (close != std::string::npos) {
      q.intent = trim(rest.substr(1, close - 1));
      rest = trim(rest.substr(close + 1));
    }
  }
  if (rest.empty()) return std::nullopt;
  q.text = rest;
  return q;
}

void check_deixis(const std::string& rewritten, const DatagenOptions& opts) {
  const auto tokens = metric_tokenize(rewritten);
  const std::set<std::string> blocklist(opts.deixis_blocklist.begin(),
                                        opts.deixis_blocklist.end());
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!blocklist.count(tokens[i])) continue;
    const bool followed_by_word =
        i + 1 < tokens.size() &&
        std::isalnum(static_cast<unsigned char>(tokens[i + 1][0]));
    if (!followed_by_word) {
      log::warn("rewrite may still be deictic ('" + tokens[i] +
                "' with no following noun): " + rewritten);
      return;
    }
  }
}

}  // namespace

PromptTemplates PromptTemplates::builtin() {
  PromptTemplates t;
  t.bootstrap = kBootstrapTemplate;
  t.validate = kValidateTemplate;
  t.rewrite = kRewriteTemplate;
  t.verify = kVerifyTemplate;
  t.parse = kParseTemplate;
  return t;
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  PromptTemplates t;
  t.bootstrap = read_file(dir / "bootstrap.txt");
  t.validate = read_file(dir / "validate.txt");
  t.rewrite = read_file(dir / "rewrite.txt");
  t.verify = read_file(dir / "verify.txt");
  t.parse = read_file(dir / "parse.txt");
  return t;
}

void PromptTemplates::save(const std::filesystem::path& dir) const {
  write_file(dir / "bootstrap.txt", bootstrap);
  write_file(dir / "validate.txt", validate);
  write_file(dir / "rewrite.txt", rewrite);
  write_file(dir / "verify.txt", verify);
  write_file(dir / "parse.txt", parse);
}

std::vector<TaggedQuestion> bootstrap_questions_tagged(
    const ImageInput& image, const Ontology& ontology,
    MultimodalLLMAdapter& llm, int count, const PromptTemplates& prompts,
    const DatagenOptions& opts) {
  if (count < 1) throw ArgumentError("bootstrap count must be >= 1");
  const std::string prompt = substitute(
      prompts.bootstrap, {{"count", std::to_string(count)},
                          {"intents", join_labels(ontology.full_intents())}});
  const std::string response = call_provider(llm, prompt, image, opts);
  std::vector<TaggedQuestion> out;
  for (const auto& line : split_lines(response)) {
    if (trim(line).empty()) continue;
    auto q = parse_numbered_line(line);
    if (!q) continue;
    if (q->intent.empty()) {
      q->intent = "AnswerGeneralQuestion";
    } else if (!ontology.full_intents().count(q->intent)) {
      log::warn("bootstrap intent '" + q->intent +
                "' not in ontology; using AnswerGeneralQuestion");
      q->intent = "AnswerGeneralQuestion";
    }
    out.push_back(std::move(*q));
    if (static_cast<int>(out.size()) >= count) break;
  }
  if (out.empty() && !trim(response).empty()) {
    log::warn("bootstrap response had no parseable numbered lines for image " +
              image.key);
  }
  return out;
}

std::vector<std::string> bootstrap_questions(const ImageInput& image,
                                             const Ontology& ontology,
                                             MultimodalLLMAdapter& llm,
                                             int count,
                                             const PromptTemplates& prompts,
                                             const DatagenOptions& opts) {
  std::vector<std::string> out;
  for (auto& q : bootstrap_questions_tagged(image, ontology, llm, count,
                                            prompts, opts)) {
    out.push_back(std::move(q.text));
  }
  return out;
}

std::vector<std::string> validate_questions(const ImageInput& image,
                                            const std::vector<std::string>& questions,
                                            MultimodalLLMAdapter& llm,
                                            const PromptTemplates& prompts,
                                            const DatagenOptions& opts) {
  if (questions.empty()) {
    throw ArgumentError("validate_questions: questions must be non-empty");
  }
  std::string numbered;
  for (size_t i = 0; i < questions.size(); ++i) {
    numbered += std::to_string(i + 1) + ". " + questions[i] + "\n";
  }
  const std::string prompt =
      substitute(prompts.validate, {{"questions", numbered}});
  const std::string response =
      trim(call_provider(llm, prompt, image, opts));
  const std::string upper = to_lower(response);
  if (upper == "all") return questions;
  if (upper == "none") return {};
  std::set<size_t> keep;
  size_t i = 0;
  while (i < response.size()) {
    if (std::isdigit(static_cast<unsigned char>(response[i]))) {
      size_t j = i;
      while (j < response.size() &&
             std::isdigit(static_cast<unsigned char>(response[j]))) {
        ++j;
      }
      const long idx = std::stol(response.substr(i, j - i));
      if (idx >= 1 && idx <= static_cast<long>(questions.size())) {
        keep.insert(static_cast<size_t>(idx - 1));
      }
      i = j;
    } else {
      ++i;
    }
  }
  std::vector<std::string> out;
  for (size_t k = 0; k < questions.size(); ++k) {
    if (keep.count(k)) out.push_back(questions[k]);
  }
  return out;
}

std::string rewrite_instruction(const ImageInput& image,
                                const std::string& question,
                                MultimodalLLMAdapter& llm,
                                const PromptTemplates& prompts,
                                const DatagenOptions& opts) {
  if (trim(question).empty()) {
    throw ArgumentError("rewrite_instruction: question must be non-empty");
  }
  const std::string prompt =
      substitute(prompts.rewrite, {{"question", question}});
  const std::string response = call_provider(llm, prompt, image, opts);
  std::string rewritten;
  for (const auto& line : split_lines(response)) {
    rewritten = trim(line);
    if (!rewritten.empty()) break;
  }
  if (!rewritten.empty()) check_deixis(rewritten, opts);
  return rewritten;
}

bool verify_rewrite(const ImageInput& image, const std::string& original,
                    const std::string& rewritten, MultimodalLLMAdapter& llm,
                    const PromptTemplates& prompts,
                    const DatagenOptions& opts) {
  if (trim(original).empty() || trim(rewritten).empty()) {
    throw ArgumentError("verify_rewrite: texts must be non-empty");
  }
  const std::string prompt = substitute(
      prompts.verify, {{"original", original}, {"rewritten", rewritten}});
  const std::string response = call_provider(llm, prompt, image, opts);
  std::string head;
  for (char c : to_lower(trim(response))) {
    if (!std::isalpha(static_cast<unsigned char>(c))) break;
    head += c;
  }
  if (head == "yes") return true;
  if (head == "no") return false;
  log::warn("verify verdict not parseable ('" + trim(response) +
            "'); treating as no");
  return false;
}

namespace {

struct PerImageOutput {
  std::vector<InstructionExample> examples;
  std::vector<ProvenanceRecord> provenance;
  bool failed = false;
  long dropped = 0;
  long rejected = 0;
};

std::string sanitize_id(const std::string& key) {
  std::string stem = std::filesystem::path(key).stem().string();
  if (stem.empty()) stem = key;
  std::string out;
  for (char c : stem) {
    out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  }
  return out;
}

PerImageOutput process_image(const PipelineImage& item, const Ontology& ontology,
                             MultimodalLLMAdapter& llm, OCREngineAdapter* ocr,
                             const PromptTemplates& prompts,
                             const DatagenOptions& opts) {
  PerImageOutput out;
  long step = 0;
  try {
    auto tagged = bootstrap_questions_tagged(item.image, ontology, llm,
                                             opts.question_count, prompts, opts);
    const long bootstrap_step = ++step;
    if (tagged.empty()) return out;

    std::vector<std::string> questions;
    for (const auto& q : tagged) questions.push_back(q.text);
    auto kept = validate_questions(item.image, questions, llm, prompts, opts);
    const long validate_step = ++step;
    out.dropped += static_cast<long>(questions.size() - kept.size());

    std::optional<std::string> caption;
    if (opts.attach_caption) {
      caption = call_provider(llm, caption_prompt(), item.image, opts);
    }
    std::optional<std::string> ocr_text;
    if (ocr != nullptr) ocr_text = ocr->extract(item.image);

    const std::string base = sanitize_id(item.image.key);
    int seq = 0;
    for (const auto& question : kept) {
      const std::string rewritten =
          rewrite_instruction(item.image, question, llm, prompts, opts);
      const long rewrite_step = ++step;
      if (rewritten.empty()) {
        ++out.rejected;
        continue;
      }
      const bool ok =
          verify_rewrite(item.image, question, rewritten, llm, prompts, opts);
      const long verify_step = ++step;
      if (!ok) {
        ++out.rejected;
        continue;
      }
      InstructionExample ex;
      ex.id = base + "#" + std::to_string(seq++);
      ex.image_ref = item.image.key;
      ex.category = item.category;
      auto it = std::find_if(tagged.begin(), tagged.end(),
                             [&](const TaggedQuestion& t) { return t.text == question; });
      ex.intent = it != tagged.end() ? it->intent : "AnswerGeneralQuestion";
      ex.original = question;
      ex.rewritten = rewritten;
      ex.caption = caption;
      ex.ocr_text = ocr_text;
      out.provenance.push_back({ex.id, item.image.key, llm.identity(),
                                bootstrap_step, validate_step, rewrite_step,
                                verify_step});
      out.examples.push_back(std::move(ex));
    }
  } catch (const Error& e) {
    log::warn("pipeline failed for image " + item.image.key + ": " + e.what());
    out.failed = true;
  }
  return out;
}

}  // namespace

PipelineResult run_pipeline(const std::vector<PipelineImage>& images,
                            const Ontology& ontology,
                            MultimodalLLMAdapter& llm,
                            OCREngineAdapter* ocr,
                            const PromptTemplates& prompts,
                            const DatagenOptions& opts) {
  std::vector<PerImageOutput> partial(images.size());
  const int workers = std::max(1, std::min<int>(opts.parallelism,
                                                static_cast<int>(images.size())));
  if (workers <= 1) {
    for (size_t i = 0; i < images.size(); ++i) {
      partial[i] = process_image(images[i], ontology, llm, ocr, prompts, opts);
    }
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        for (;;) {
          const size_t i = next.fetch_add(1);
          if (i >= images.size()) return;
          partial[i] = process_image(images[i], ontology, llm, ocr, prompts, opts);
        }
      });
    }
    for (auto& t : threads) t.join();
  }
  PipelineResult result;
  for (auto& p : partial) {
    result.images_failed += p.failed ? 1 : 0;
    result.questions_dropped += p.dropped;
    result.rewrites_rejected += p.rejected;
    std::move(p.examples.begin(), p.examples.end(),
              std::back_inserter(result.examples));
    std::move(p.provenance.begin(), p.provenance.end(),
              std::back_inserter(result.provenance));
  }
  if (result.images_failed > 0) {
    log::warn("pipeline finished with " + std::to_string(result.images_failed) +
              " failed image(s) of " + std::to_string(images.size()));
  }
  return result;
}

std::string provenance_to_text(const PipelineResult& result) {
  std::string out =
      "# id\timage\tprovider\tbootstrap\tvalidate\trewrite\tverify\n";
  for (const auto& p : result.provenance) {
    out += p.example_id + "\t" + p.image_key + "\t" + p.provider + "\t" +
           std::to_string(p.bootstrap_step) + "\t" +
           std::to_string(p.validate_step) + "\t" +
           std::to_string(p.rewrite_step) + "\t" +
           std::to_string(p.verify_step) + "\n";
  }
  return out;
}

void AnnotationMatrix::validate() const {
  if (raters_per_item < 2) {
    throw ValidationError("annotation matrix needs at least 2 raters");
  }
  for (const auto& [id, verdicts] : items) {
    if (static_cast<int>(verdicts.size()) != raters_per_item) {
      throw ValidationError("item '" + id + "' has " +
                            std::to_string(verdicts.size()) + " verdicts, want " +
                            std::to_string(raters_per_item));
    }
  }
}

AnnotationMatrix annotation_matrix_from_text(const std::string& text) {
  AnnotationMatrix m;
  const auto lines = split_lines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i + 1);
    const std::string line = lines[i];
    if (trim(line).empty() || starts_with(trim(line), "#")) continue;
    auto cols = split(line, '\t');
    if (cols.size() < 3) {
      throw ParseError("annotation row needs id + >= 2 verdicts", lineno);
    }
    std::vector<Verdict> verdicts;
    for (size_t c = 1; c < cols.size(); ++c) {
      const std::string v = trim(cols[c]);
      if (v == "Accept") {
        verdicts.push_back(Verdict::kAccept);
      } else if (v == "Reject") {
        verdicts.push_back(Verdict::kReject);
      } else {
        throw ParseError("verdict must be Accept or Reject, got '" + v + "'",
                         lineno);
      }
    }
    if (m.raters_per_item == 0) {
      m.raters_per_item = static_cast<int>(verdicts.size());
    }
    m.items.emplace_back(trim(cols[0]), std::move(verdicts));
  }
  m.validate();
  return m;
}

AnnotationMatrix load_annotation_matrix(const std::filesystem::path& path) {
  return annotation_matrix_from_text(read_file(path));
}

AgreementSummary agreement_summary(const AnnotationMatrix& matrix) {
  matrix.validate();
  AgreementSummary s;
  const auto n_items = static_cast<double>(matrix.items.size());
  if (matrix.items.empty()) return s;
  s.per_annotator_accept_rate.assign(static_cast<size_t>(matrix.raters_per_item), 0.0);
  long at_least_two = 0, all_accept = 0;
  for (const auto& [id, verdicts] : matrix.items) {
    int accepts = 0;
    for (size_t r = 0; r < verdicts.size(); ++r) {
      if (verdicts[r] == Verdict::kAccept) {
        ++accepts;
        s.per_annotator_accept_rate[r] += 1.0;
      }
    }
    if (accepts >= 2) ++at_least_two;
    if (accepts == matrix.raters_per_item) ++all_accept;
  }
  for (auto& rate : s.per_annotator_accept_rate) rate /= n_items;
  s.at_least_two_accept_rate = static_cast<double>(at_least_two) / n_items;
  s.all_accept_rate = static_cast<double>(all_accept) / n_items;
  return s;
}

double fleiss_kappa(const AnnotationMatrix& matrix) {
  matrix.validate();
  if (matrix.items.size() < 2) {
    throw ArgumentError("fleiss_kappa needs at least 2 items");
  }
  const double n = matrix.raters_per_item;
  const double N = static_cast<double>(matrix.items.size());
  double sum_pi = 0.0;
  double accept_total = 0.0;
  for (const auto& [id, verdicts] : matrix.items) {
    double n_accept = 0.0;
    for (auto v : verdicts) {
      if (v == Verdict::kAccept) n_accept += 1.0;
    }
    const double n_reject = n - n_accept;
    accept_total += n_accept;
    sum_pi += (n_accept * (n_accept - 1.0) + n_reject * (n_reject - 1.0)) /
              (n * (n - 1.0));
  }
  const double p_bar = sum_pi / N;
  const double p_accept = accept_total / (N * n);
  const double p_reject = 1.0 - p_accept;
  const double p_e = p_accept * p_accept + p_reject * p_reject;
  if (p_e >= 1.0) {
    throw NumericError(
        "fleiss_kappa undefined: all verdicts fall in one category");
  }
  return (p_bar - p_e) / (1.0 - p_e);
}

}  // namespace revision
