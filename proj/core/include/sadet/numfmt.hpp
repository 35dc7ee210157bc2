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

#ifndef SADET_NUMFMT_HPP
#define SADET_NUMFMT_HPP

#include <string>
#include <string_view>

namespace sadet {

/// Shortest decimal that round-trips to the same double. Infinities are written as "inf"/"-inf".
std::string format_double(double value);

/// Inverse of format_double; accepts "inf", "+inf", "-inf". Throws DataError on garbage.
double parse_double(std::string_view text);

/// Strict base-10 integer parse. Throws DataError on garbage or overflow.
long long parse_int(std::string_view text);

}  // namespace sadet

#endif  // SADET_NUMFMT_HPP
