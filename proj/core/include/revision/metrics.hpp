// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace revision {

// Lowercases, splits punctuation into standalone tokens, then splits on
// whitespace. Bytes >= 0x80 are treated as word characters.
std::vector<std::string> metric_tokenize(std::string_view text);

// ROUGE-N as F1 over n-gram multiset overlap. 0 when either side has no
// n-grams.
double rouge_n(std::string_view candidate, std::string_view reference, int n);

// ROUGE-L as F1 from the token-level longest common subsequence.
double rouge_l(std::string_view candidate, std::string_view reference);

// Corpus-level BLEU-4 with one reference per candidate. Modified n-gram
// precisions are pooled over the corpus; when the pooled match count is
// zero for n >= 2, add-one smoothing ((m+1)/(t+1)) applies. Brevity
// penalty exp(1 - r/c) when c <= r.
double bleu(const std::vector<std::string>& candidates,
            const std::vector<std::string>& references);

// Exact-unigram METEOR: greedy alignment that extends the current
// contiguous run when possible, otherwise takes the earliest unused
// occurrence. F_mean = 10PR/(R+9P), penalty = 0.5 (chunks/m)^3.
double meteor(std::string_view candidate, std::string_view reference);

// Alignment internals exposed for diagnostics and tests.
struct MeteorAlignment {
  int matches = 0;
  int chunks = 0;
};
MeteorAlignment meteor_align(const std::vector<std::string>& cand,
                             const std::vector<std::string>& ref);

}  // namespace revision
