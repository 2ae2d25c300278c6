// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#include "revision/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "revision/error.hpp"

namespace revision {
namespace {

bool is_word_char(unsigned char c) {
  return c >= 0x80 || std::isalnum(c);
}

std::vector<std::string> ngrams(const std::vector<std::string>& toks, int n) {
  std::vector<std::string> out;
  if (static_cast<int>(toks.size()) < n) return out;
  out.reserve(toks.size() - static_cast<size_t>(n) + 1);
  for (size_t i = 0; i + static_cast<size_t>(n) <= toks.size(); ++i) {
    std::string g = toks[i];
    for (int k = 1; k < n; ++k) {
      g += '\x1f';
      g += toks[i + static_cast<size_t>(k)];
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::map<std::string, int> counts(const std::vector<std::string>& items) {
  std::map<std::string, int> c;
  for (const auto& it : items) ++c[it];
  return c;
}

double f1(double p, double r) {
  if (p + r <= 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

}  // namespace

std::vector<std::string> metric_tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else if (is_word_char(c)) {
      cur += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    } else {
      // punctuation: standalone token
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
      out.emplace_back(1, static_cast<char>(c));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double rouge_n(std::string_view candidate, std::string_view reference, int n) {
  if (n < 1) throw ArgumentError("rouge_n: n must be >= 1");
  const auto cand = ngrams(metric_tokenize(candidate), n);
  const auto ref = ngrams(metric_tokenize(reference), n);
  if (cand.empty() || ref.empty()) return 0.0;
  const auto cc = counts(cand);
  const auto rc = counts(ref);
  long overlap = 0;
  for (const auto& [g, c] : cc) {
    auto it = rc.find(g);
    if (it != rc.end()) overlap += std::min(c, it->second);
  }
  const double p = static_cast<double>(overlap) / static_cast<double>(cand.size());
  const double r = static_cast<double>(overlap) / static_cast<double>(ref.size());
  return f1(p, r);
}

double rouge_l(std::string_view candidate, std::string_view reference) {
  const auto cand = metric_tokenize(candidate);
  const auto ref = metric_tokenize(reference);
  if (cand.empty() || ref.empty()) return 0.0;
  // LCS over tokens, O(|cand| * |ref|) with a rolling row.
  std::vector<int> prev(ref.size() + 1, 0), cur(ref.size() + 1, 0);
  for (size_t i = 1; i <= cand.size(); ++i) {
    for (size_t j = 1; j <= ref.size(); ++j) {
      if (cand[i - 1] == ref[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  const int lcs = prev[ref.size()];
  const double p = static_cast<double>(lcs) / static_cast<double>(cand.size());
  const double r = static_cast<double>(lcs) / static_cast<double>(ref.size());
  return f1(p, r);
}

double bleu(const std::vector<std::string>& candidates,
            const std::vector<std::string>& references) {
  if (candidates.size() != references.size()) {
    throw ArgumentError("bleu: candidate/reference length mismatch");
  }
  constexpr int kMaxOrder = 4;
  long matched[kMaxOrder] = {0, 0, 0, 0};
  long total[kMaxOrder] = {0, 0, 0, 0};
  long cand_len = 0, ref_len = 0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const auto cand = metric_tokenize(candidates[i]);
    const auto ref = metric_tokenize(references[i]);
    cand_len += static_cast<long>(cand.size());
    ref_len += static_cast<long>(ref.size());
    for (int n = 1; n <= kMaxOrder; ++n) {
      const auto cg = ngrams(cand, n);
      if (cg.empty()) continue;
      total[n - 1] += static_cast<long>(cg.size());
      const auto cc = counts(cg);
      const auto rc = counts(ngrams(ref, n));
      for (const auto& [g, c] : cc) {
        auto it = rc.find(g);
        if (it != rc.end()) matched[n - 1] += std::min(c, it->second);
      }
    }
  }
  double log_sum = 0.0;
  for (int n = 1; n <= kMaxOrder; ++n) {
    long m = matched[n - 1], t = total[n - 1];
    double p;
    if (m == 0) {
      if (n == 1) return 0.0;  // no unigram match (or empty candidates)
      p = static_cast<double>(m + 1) / static_cast<double>(t + 1);
    } else {
      p = static_cast<double>(m) / static_cast<double>(t);
    }
    log_sum += std::log(p);
  }
  double bp = 1.0;
  if (cand_len <= ref_len) {
    if (cand_len == 0) return 0.0;
    bp = std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
  }
  return bp * std::exp(log_sum / kMaxOrder);
}

MeteorAlignment meteor_align(const std::vector<std::string>& cand,
                             const std::vector<std::string>& ref) {
  MeteorAlignment a;
  std::vector<bool> used(ref.size(), false);
  int prev_ref = -2;  // ref index of the previous matched candidate token
  bool prev_was_match = false;
  for (size_t i = 0; i < cand.size(); ++i) {
    int pick = -1;
    // Prefer the ref position that continues the current run.
    int cont = prev_ref + 1;
    if (prev_was_match && cont >= 0 && cont < static_cast<int>(ref.size()) &&
        !used[static_cast<size_t>(cont)] && ref[static_cast<size_t>(cont)] == cand[i]) {
      pick = cont;
    } else {
      for (size_t j = 0; j < ref.size(); ++j) {
        if (!used[j] && ref[j] == cand[i]) {
          pick = static_cast<int>(j);
          break;
        }
      }
    }
    if (pick >= 0) {
      used[static_cast<size_t>(pick)] = true;
      ++a.matches;
      if (!(prev_was_match && pick == prev_ref + 1)) ++a.chunks;
      prev_ref = pick;
      prev_was_match = true;
    } else {
      prev_was_match = false;
    }
  }
  return a;
}

double meteor(std::string_view candidate, std::string_view reference) {
  const auto cand = metric_tokenize(candidate);
  const auto ref = metric_tokenize(reference);
  if (cand.empty() || ref.empty()) return 0.0;
  const auto a = meteor_align(cand, ref);
  if (a.matches == 0) return 0.0;
  const double m = a.matches;
  const double p = m / static_cast<double>(cand.size());
  const double r = m / static_cast<double>(ref.size());
  const double f_mean = 10.0 * p * r / (r + 9.0 * p);
  const double frag = static_cast<double>(a.chunks) / m;
  const double penalty = 0.5 * frag * frag * frag;
  return f_mean * (1.0 - penalty);
}

}  // namespace revision
