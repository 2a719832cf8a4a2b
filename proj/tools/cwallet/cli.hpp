#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coldwallet/random.hpp"

namespace cwallet {

struct CliEnv {
  // Asked only when a share or session file needs one.
  std::function<std::optional<std::string>()> passphrase;
  // Minimum-cost Argon2id, for tests.
  bool fast_kdf = false;
  // Defaults to the system CSPRNG.
  coldwallet::Rng* rng = nullptr;
};

// Runs one command. `args` excludes the program name. Returns the process
// exit code: 0 success, 2 config, 3 integrity or policy, 4 crypto, 5 I/O.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
           const CliEnv& env);

}  // namespace cwallet
