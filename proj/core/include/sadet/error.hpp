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

#ifndef SADET_ERROR_HPP
#define SADET_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sadet {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input files: bad rows, missing fields, empty files.
class DataError : public Error {
 public:
  using Error::Error;
};

class UnmappedRatingError : public DataError {
 public:
  explicit UnmappedRatingError(int rating, const std::string& context = {})
      : DataError(context + "rating " + std::to_string(rating) + " unmapped"), rating_(rating) {}
  int rating() const noexcept { return rating_; }

 private:
  int rating_;
};

/// A text has fewer eligible transpose positions than requested typos.
class InsufficientLengthError : public Error {
 public:
  using Error::Error;
};

/// A classifier call failed inside the attack pipeline.
class ClassifierError : public Error {
 public:
  ClassifierError(std::string item_id, std::string text, const std::string& what)
      : Error("classifier failed on item '" + item_id + "': " + what),
        item_id_(std::move(item_id)),
        text_(std::move(text)) {}
  const std::string& item_id() const noexcept { return item_id_; }
  const std::string& text() const noexcept { return text_; }

 private:
  std::string item_id_;
  std::string text_;
};

/// Transport, status or schema failure talking to a remote model service.
class RemoteModelError : public Error {
 public:
  RemoteModelError(const std::string& what, std::string raw_response)
      : Error(what), raw_response_(std::move(raw_response)) {}
  const std::string& raw_response() const noexcept { return raw_response_; }

 private:
  std::string raw_response_;
};

class UnknownClassError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Score files and record files disagree on ids.
class ReconciliationError : public Error {
 public:
  using Error::Error;
};

/// First failure of a batch operation, tagged with the failing element index.
class BatchError : public Error {
 public:
  BatchError(std::size_t index, const std::string& what)
      : Error("item " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace sadet

#endif  // SADET_ERROR_HPP
