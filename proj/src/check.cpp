// Copyright 2026 The EBUS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ebus/check.hpp"

#include <cstdio>
#include <cstdlib>

namespace ebus::detail {

void check_failed(const char* expr, const char* file, int line) {
  std::fprintf(stderr, "ebus: check failed: %s (%s:%d)\n", expr, file, line);
  std::abort();
}

}  // namespace ebus::detail
