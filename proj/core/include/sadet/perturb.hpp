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

#ifndef SADET_PERTURB_HPP
#define SADET_PERTURB_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sadet/hash.hpp"

namespace sadet {

enum class EditKind { transpose, contract, expand };

std::string_view to_string(EditKind kind) noexcept;
EditKind edit_kind_from_string(std::string_view name);

/// One surface edit. `position` is a byte offset into the text the edit is
/// applied to; `before` must be found there and is replaced by `after`.
/// Transpositions have two-byte `before`/`after` that are each other's reverse.
struct EditOp {
  EditKind kind = EditKind::transpose;
  std::size_t position = 0;
  std::string before;
  std::string after;

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

/// Applies one edit. Throws Error if `before` does not match at `position`.
std::string apply_edit(std::string_view text, const EditOp& op);

/// Applies edits in order, each against the result of the previous one.
std::string apply_edits(std::string_view text, std::span<const EditOp> edits);

/// The edit that undoes `op` on the text `op` produced.
EditOp invert(const EditOp& op);

/// Inverse of a whole edit list: inverted ops in reverse order.
std::vector<EditOp> invert(std::span<const EditOp> edits);

struct PerturbedText {
  std::string text;
  std::vector<EditOp> edits;
};

/// Byte positions p where an adjacent swap of p and p+1 is allowed: both bytes
/// are ASCII alphanumeric, they differ, and they sit inside an alphanumeric
/// token of length >= 3. Ascending.
std::vector<std::size_t> eligible_transpose_positions(std::string_view text);

/// Swaps k adjacent character pairs at distinct, non-overlapping eligible positions
/// drawn uniformly without replacement from `rng`.
///
/// Edits are returned in ascending position order. Throws InsufficientLengthError
/// when fewer than k eligible positions exist, or when the draw runs out of
/// non-overlapping positions; the caller may retry with the same stream.
PerturbedText inject_typos(std::string_view text, std::size_t k, Rng& rng);

/// Swaps exactly the given positions; each must be eligible and the set non-overlapping.
PerturbedText transpose_at(std::string_view text, std::span<const std::size_t> positions);

}  // namespace sadet

#endif  // SADET_PERTURB_HPP
