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

#include "sadet/perturb.hpp"

#include <algorithm>

#include "sadet/error.hpp"

namespace sadet {
namespace {

bool is_alnum(char c) noexcept {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

}  // namespace

std::string_view to_string(EditKind kind) noexcept {
  switch (kind) {
    case EditKind::transpose: return "transpose";
    case EditKind::contract: return "contract";
    case EditKind::expand: return "expand";
  }
  return "transpose";
}

EditKind edit_kind_from_string(std::string_view name) {
  if (name == "transpose") return EditKind::transpose;
  if (name == "contract") return EditKind::contract;
  if (name == "expand") return EditKind::expand;
  throw DataError("unknown edit kind '" + std::string(name) + "'");
}

std::string apply_edit(std::string_view text, const EditOp& op) {
  if (op.position > text.size() || text.substr(op.position, op.before.size()) != op.before) {
    throw Error("edit does not match text at position " + std::to_string(op.position));
  }
  std::string out;
  out.reserve(text.size() - op.before.size() + op.after.size());
  out.append(text.substr(0, op.position));
  out.append(op.after);
  out.append(text.substr(op.position + op.before.size()));
  return out;
}

std::string apply_edits(std::string_view text, std::span<const EditOp> edits) {
  std::string out(text);
  for (const auto& op : edits) out = apply_edit(out, op);
  return out;
}

EditOp invert(const EditOp& op) {
  EditOp inv = op;
  std::swap(inv.before, inv.after);
  if (op.kind == EditKind::contract) inv.kind = EditKind::expand;
  if (op.kind == EditKind::expand) inv.kind = EditKind::contract;
  return inv;
}

std::vector<EditOp> invert(std::span<const EditOp> edits) {
  std::vector<EditOp> out;
  out.reserve(edits.size());
  for (auto it = edits.rbegin(); it != edits.rend(); ++it) out.push_back(invert(*it));
  return out;
}

std::vector<std::size_t> eligible_transpose_positions(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_alnum(text[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && is_alnum(text[end])) ++end;
    if (end - i >= 3) {
      for (std::size_t p = i; p + 1 < end; ++p) {
        if (text[p] != text[p + 1]) out.push_back(p);
      }
    }
    i = end;
  }
  return out;
}

PerturbedText inject_typos(std::string_view text, std::size_t k, Rng& rng) {
  if (k == 0) return {std::string(text), {}};
  std::vector<std::size_t> available = eligible_transpose_positions(text);
  if (available.size() < k) {
    throw InsufficientLengthError("text has " + std::to_string(available.size()) +
                                  " eligible positions, " + std::to_string(k) + " typos requested");
  }
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  while (chosen.size() < k) {
    if (available.empty()) {
      throw InsufficientLengthError("ran out of non-overlapping positions after " +
                                    std::to_string(chosen.size()) + " typos");
    }
    const std::size_t p = available[rng.uniform_index(available.size())];
    chosen.push_back(p);
    // Drop p and its neighbours.
    std::erase_if(available, [p](std::size_t q) { return q + 1 >= p && q <= p + 1; });
  }
  std::sort(chosen.begin(), chosen.end());
  return transpose_at(text, chosen);
}

PerturbedText transpose_at(std::string_view text, std::span<const std::size_t> positions) {
  const std::vector<std::size_t> eligible = eligible_transpose_positions(text);
  PerturbedText out{std::string(text), {}};
  std::vector<std::size_t> sorted(positions.begin(), positions.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const std::size_t p = sorted[i];
    if (!std::binary_search(eligible.begin(), eligible.end(), p)) {
      throw Error("position " + std::to_string(p) + " is not eligible");
    }
    if (i > 0 && p <= sorted[i - 1] + 1) {
      throw Error("overlapping transpositions at " + std::to_string(p));
    }
  }
  for (std::size_t p : sorted) {
    EditOp op{EditKind::transpose, p, std::string(text.substr(p, 2)), {}};
    op.after = {op.before[1], op.before[0]};
    out.text = apply_edit(out.text, op);
    out.edits.push_back(std::move(op));
  }
  return out;
}

}  // namespace sadet
