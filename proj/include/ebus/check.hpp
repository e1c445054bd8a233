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

#pragma once

namespace ebus::detail {

[[noreturn]] void check_failed(const char* expr, const char* file, int line);

}  // namespace ebus::detail

// Always-on invariant check. Exactness guarantees depend on these never
// failing silently, so they are not compiled out in release builds.
#define EBUS_CHECK(expr) \
  ((expr) ? (void)0 : ::ebus::detail::check_failed(#expr, __FILE__, __LINE__))
