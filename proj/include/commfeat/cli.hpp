/*
Copyright 2026 The commfeat Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace commfeat::cli {

inline constexpr const char* kToolVersion = "1.0.0";

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInput = 2,
  kInfeasible = 3,
};

/// Runs one subcommand (generate, detect, features, modularity).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a file's bytes.
std::string file_sha256(const std::string& path);

}  // namespace commfeat::cli
