// Copyright 2026 The hieralm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HIERALM_SRC_LOGGING_H_
#define HIERALM_SRC_LOGGING_H_

#include <spdlog/spdlog.h>

namespace hieralm {

// Process-wide stderr logger. The level comes from HIERALM_LOG
// (error|warn|info|debug), default warn.
spdlog::logger& Log();

}  // namespace hieralm

#endif  // HIERALM_SRC_LOGGING_H_
