// Copyright 2026 The sadet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sadet/contractions.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <unordered_set>

#include "sadet/datamodel.hpp"
#include "sadet/error.hpp"

namespace sadet {

namespace detail {
extern const std::string_view kBuiltinContractionsTsv;
}  // namespace detail

namespace {

bool is_word_char(char c) noexcept {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '\'';
}

char ascii_lower(char c) noexcept { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }
char ascii_upper(char c) noexcept { return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 32) : c; }

bool matches_at(std::string_view text, std::size_t pos, std::string_view phrase) {
  if (phrase.empty() || pos + phrase.size() > text.size()) return false;
  if (ascii_lower(text[pos]) != ascii_lower(phrase[0])) return false;
  if (text.substr(pos + 1, phrase.size() - 1) != phrase.substr(1)) return false;
  const std::size_t end = pos + phrase.size();
  return end == text.size() || !is_word_char(text[end]);
}

}  // namespace

ContractionDictionary::ContractionDictionary(std::vector<ContractionPair> pairs)
    : pairs_(std::move(pairs)) {
  std::unordered_set<std::string> forms;
  for (const auto& p : pairs_) {
    if (p.full.empty() || p.contracted.empty()) throw ConfigError("empty contraction form");
    if (!forms.insert(p.full).second || !forms.insert(p.contracted).second) {
      throw ConfigError("contraction form listed twice: '" + p.full + "' / '" + p.contracted + "'");
    }
  }
  for (const auto& p : pairs_) {
    if (apply_contractions(p.contracted, ContractionDirection::contract, *this).text != p.contracted ||
        apply_contractions(p.full, ContractionDirection::expand, *this).text != p.full) {
      throw ConfigError("contraction dictionary is not loop-free at '" + p.full + "'");
    }
  }
}

const ContractionDictionary& ContractionDictionary::builtin() {
  static const ContractionDictionary dict = [] {
    std::istringstream in{std::string(detail::kBuiltinContractionsTsv)};
    return from_tsv(in);
  }();
  return dict;
}

ContractionDictionary ContractionDictionary::from_tsv(std::istream& in) {
  std::vector<ContractionPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw DataError("contractions line " + std::to_string(line_no) + ": expected two tab-separated columns");
    }
    pairs.push_back({std::string(trim(line.substr(0, tab))), std::string(trim(line.substr(tab + 1)))});
  }
  return ContractionDictionary(std::move(pairs));
}

PerturbedText apply_contractions(std::string_view text, ContractionDirection direction,
                                 const ContractionDictionary& dictionary) {
  const bool contracting = direction == ContractionDirection::contract;
  const EditKind kind = contracting ? EditKind::contract : EditKind::expand;

  // Sources sorted longest first for the chosen direction.
  std::vector<const ContractionPair*> order;
  for (const auto& p : dictionary.pairs()) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(), [&](const auto* a, const auto* b) {
    return (contracting ? a->full.size() : a->contracted.size()) >
           (contracting ? b->full.size() : b->contracted.size());
  });

  PerturbedText out;
  out.text.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const bool at_word_start = i == 0 || !is_word_char(text[i - 1]);
    const ContractionPair* hit = nullptr;
    if (at_word_start && is_word_char(text[i])) {
      for (const auto* p : order) {
        if (matches_at(text, i, contracting ? p->full : p->contracted)) {
          hit = p;
          break;
        }
      }
    }
    if (!hit) {
      out.text.push_back(text[i++]);
      continue;
    }
    const std::string& source = contracting ? hit->full : hit->contracted;
    std::string replacement = contracting ? hit->contracted : hit->full;
    const char lead = text[i];
    if (lead >= 'A' && lead <= 'Z') replacement[0] = ascii_upper(replacement[0]);
    if (lead >= 'a' && lead <= 'z') replacement[0] = ascii_lower(replacement[0]);

    out.edits.push_back(EditOp{kind, out.text.size(), std::string(text.substr(i, source.size())),
                               replacement});
    out.text += replacement;
    i += source.size();
  }
  return out;
}

}  // namespace sadet
