// Copyright 2026 The locpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOCPRIV_TOOLS_CLI_H_
#define LOCPRIV_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace locpriv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Environment variable naming the directory for relative output paths.
inline constexpr char kOutDirEnv[] = "LOCPRIV_OUT_DIR";

// Runs one invocation; `args` excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace locpriv::cli

#endif  // LOCPRIV_TOOLS_CLI_H_
