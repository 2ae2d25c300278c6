// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#include "revision/adapters.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "revision/error.hpp"
#include "revision/log.hpp"
#include "revision/util.hpp"

namespace revision {

using nlohmann::json;

AdapterConfig load_adapter_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError("adapter config " + path.string() + ": " + e.what());
  }
  AdapterConfig cfg;
  try {
    cfg.provider = j.at("provider").get<std::string>();
    cfg.endpoint = j.value("endpoint", "");
    cfg.api_key_env = j.value("api_key_env", "");
    cfg.fixture_path = j.value("fixture", "");
    cfg.parallelism = j.value("parallelism", 1);
    cfg.retries = j.value("retries", 3);
    cfg.backoff_seconds = j.value("backoff_seconds", 0.5);
    cfg.serialize_calls = j.value("serialize_calls", false);
  } catch (const json::exception& e) {
    throw ParseError("adapter config " + path.string() + ": " + e.what());
  }
  if (cfg.parallelism < 1) {
    throw ValidationError("adapter config: parallelism must be >= 1");
  }
  return cfg;
}

std::unique_ptr<MultimodalLLMAdapter> make_llm_adapter(
    const AdapterConfig& config, const std::filesystem::path& config_dir) {
  if (config.provider == "fixture") {
    if (config.fixture_path.empty()) {
      throw ValidationError("fixture adapter needs a 'fixture' file path");
    }
    std::filesystem::path p = config.fixture_path;
    if (p.is_relative() && !config_dir.empty()) p = config_dir / p;
    return std::make_unique<FixtureLLMAdapter>(FixtureLLMAdapter::from_file(p));
  }
  if (config.provider == "http") {
    if (config.endpoint.empty()) {
      throw ValidationError("http adapter needs an 'endpoint'");
    }
    return std::make_unique<HttpLLMAdapter>(config);
  }
  throw ValidationError("unknown adapter provider '" + config.provider + "'");
}

FixtureLLMAdapter FixtureLLMAdapter::from_file(const std::filesystem::path& path) {
  return from_text(read_file(path));
}

FixtureLLMAdapter FixtureLLMAdapter::from_text(const std::string& json_text) {
  FixtureLLMAdapter a;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("fixture file: ") + e.what());
  }
  a.default_response_ = j.value("default_response", "");
  for (const auto& r : j.value("rules", json::array())) {
    Rule rule;
    if (r.contains("phase")) rule.phase = r.at("phase").get<std::string>();
    if (r.contains("image")) rule.image = r.at("image").get<std::string>();
    if (r.contains("contains")) rule.contains = r.at("contains").get<std::string>();
    if (r.contains("equals")) rule.equals = r.at("equals").get<std::string>();
    rule.response = r.value("response", "");
    a.rules_.push_back(std::move(rule));
  }
  return a;
}

std::string FixtureLLMAdapter::complete(const std::string& prompt,
                                        const std::optional<ImageInput>& image) {
  for (const auto& rule : rules_) {
    if (rule.phase &&
        prompt.find("phase=" + *rule.phase) == std::string::npos) {
      continue;
    }
    if (rule.image && (!image || image->key != *rule.image)) continue;
    if (rule.contains && prompt.find(*rule.contains) == std::string::npos) {
      continue;
    }
    if (rule.equals && prompt != *rule.equals) continue;
    return rule.response;
  }
  return default_response_;
}

HttpLLMAdapter::HttpLLMAdapter(const AdapterConfig& config) : config_(config) {}

std::string HttpLLMAdapter::identity() const {
  return "http:" + config_.endpoint;
}

std::string HttpLLMAdapter::complete(const std::string& prompt,
                                     const std::optional<ImageInput>& image) {
  // endpoint form: http://host:port/path
  std::string url = config_.endpoint;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ValidationError("endpoint must be an http URL: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  std::string host = url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(host);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(60, 0);

  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr) {
      throw ProviderError("credential env var " + config_.api_key_env +
                              " is not set",
                          /*retryable=*/false);
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  json body;
  body["prompt"] = prompt;
  if (image) body["image_key"] = image->key;

  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw ProviderError("cannot reach " + config_.endpoint, /*retryable=*/true);
  }
  if (res->status >= 500) {
    throw ProviderError("provider error HTTP " + std::to_string(res->status),
                        /*retryable=*/true);
  }
  if (res->status != 200) {
    throw ProviderError("provider rejected request, HTTP " +
                            std::to_string(res->status),
                        /*retryable=*/false);
  }
  try {
    return json::parse(res->body).at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("bad provider response: ") + e.what(),
                        /*retryable=*/false);
  }
}

FixtureOCRAdapter FixtureOCRAdapter::from_file(const std::filesystem::path& path) {
  return from_text(read_file(path));
}

FixtureOCRAdapter FixtureOCRAdapter::from_text(const std::string& json_text) {
  FixtureOCRAdapter a;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("ocr fixture file: ") + e.what());
  }
  for (const auto& [key, value] : j.items()) {
    a.entries_.emplace_back(key, value.get<std::string>());
  }
  return a;
}

std::string FixtureOCRAdapter::extract(const ImageInput& image) {
  for (const auto& [key, text] : entries_) {
    if (key == image.key) return text;
  }
  return "";
}

std::string with_retries(const std::function<std::string()>& fn, int retries,
                         double backoff_seconds) {
  int attempts = std::max(1, retries);
  for (int attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (const ProviderError& e) {
      if (!e.retryable() || attempt + 1 >= attempts) throw;
      log::warn(std::string("provider attempt ") + std::to_string(attempt + 1) +
                " failed, retrying: " + e.what());
      if (backoff_seconds > 0) {
        auto delay = backoff_seconds * static_cast<double>(1 << attempt);
        std::this_thread::sleep_for(std::chrono::duration<double>(delay));
      }
    }
  }
}

}  // namespace revision
