// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace revision {

// Image handle passed to providers: a stable key (usually the file path)
// plus optionally the encoded bytes for providers that upload them.
struct ImageInput {
  std::string key;
  std::optional<std::vector<std::uint8_t>> bytes;
};

// Text-completion provider over an optional image. Implementations must be
// safe for concurrent complete() calls or set serialize_calls in their
// config.
class MultimodalLLMAdapter {
 public:
  virtual ~MultimodalLLMAdapter() = default;
  virtual std::string complete(const std::string& prompt,
                               const std::optional<ImageInput>& image) = 0;
  virtual std::string identity() const = 0;
};

class OCREngineAdapter {
 public:
  virtual ~OCREngineAdapter() = default;
  // Empty string (never an error) on images with no text.
  virtual std::string extract(const ImageInput& image) = 0;
  virtual std::string identity() const = 0;
};

struct AdapterConfig {
  std::string provider;       // "fixture" or "http"
  std::string endpoint;       // http only
  std::string api_key_env;    // name of the env var holding the credential
  std::string fixture_path;   // fixture only
  int parallelism = 1;
  int retries = 3;
  double backoff_seconds = 0.5;
  bool serialize_calls = false;
};

AdapterConfig load_adapter_config(const std::filesystem::path& path);

// Builds the adapter named by the config. Fixture adapters resolve
// fixture_path relative to the config file's directory.
std::unique_ptr<MultimodalLLMAdapter> make_llm_adapter(
    const AdapterConfig& config, const std::filesystem::path& config_dir = {});

// Rule-driven deterministic mock. Rules are matched in file order; the
// first hit wins. A rule matches when all of its present fields match:
//   phase    - substring "phase=<value>" present in the prompt
//   image    - equals the image key
//   contains - substring of the prompt
//   equals   - the whole prompt
// "response" is returned verbatim; "default_response" (top level) covers
// prompts no rule matches.
class FixtureLLMAdapter : public MultimodalLLMAdapter {
 public:
  static FixtureLLMAdapter from_file(const std::filesystem::path& path);
  static FixtureLLMAdapter from_text(const std::string& json_text);

  std::string complete(const std::string& prompt,
                       const std::optional<ImageInput>& image) override;
  std::string identity() const override { return "fixture"; }

 private:
  struct Rule {
    std::optional<std::string> phase;
    std::optional<std::string> image;
    std::optional<std::string> contains;
    std::optional<std::string> equals;
    std::string response;
  };
  std::vector<Rule> rules_;
  std::string default_response_;
};

// Test adapter backed by a callable.
class ScriptedLLMAdapter : public MultimodalLLMAdapter {
 public:
  using Fn = std::function<std::string(const std::string&,
                                       const std::optional<ImageInput>&)>;
  explicit ScriptedLLMAdapter(Fn fn, std::string name = "scripted")
      : fn_(std::move(fn)), name_(std::move(name)) {}
  std::string complete(const std::string& prompt,
                       const std::optional<ImageInput>& image) override {
    return fn_(prompt, image);
  }
  std::string identity() const override { return name_; }

 private:
  Fn fn_;
  std::string name_;
};

// POSTs {"prompt": ..., "image_key": ...?} to the configured endpoint and
// expects {"text": ...} back. Connection or HTTP >= 500 failures raise a
// retryable ProviderError; other HTTP errors are non-retryable.
class HttpLLMAdapter : public MultimodalLLMAdapter {
 public:
  explicit HttpLLMAdapter(const AdapterConfig& config);
  std::string complete(const std::string& prompt,
                       const std::optional<ImageInput>& image) override;
  std::string identity() const override;

 private:
  AdapterConfig config_;
};

// OCR adapters: a fixture map from image key to text, and a null engine.
class FixtureOCRAdapter : public OCREngineAdapter {
 public:
  static FixtureOCRAdapter from_file(const std::filesystem::path& path);
  static FixtureOCRAdapter from_text(const std::string& json_text);
  std::string extract(const ImageInput& image) override;
  std::string identity() const override { return "fixture-ocr"; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

class NullOCRAdapter : public OCREngineAdapter {
 public:
  std::string extract(const ImageInput&) override { return ""; }
  std::string identity() const override { return "null-ocr"; }
};

// Runs fn up to `retries` attempts, sleeping backoff * 2^attempt between
// tries, retrying only retryable ProviderErrors.
std::string with_retries(const std::function<std::string()>& fn, int retries,
                         double backoff_seconds);

}  // namespace revision
