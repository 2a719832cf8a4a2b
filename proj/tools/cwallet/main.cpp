#include <termios.h>
#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "cwallet/cli.hpp"

namespace {

std::optional<std::string> PassphraseFromEnvOrTty() {
  if (const char* env = std::getenv("CW_PASSPHRASE")) return std::string(env);
  if (!isatty(STDIN_FILENO)) return std::nullopt;

  std::cerr << "share passphrase: " << std::flush;
  termios old{};
  tcgetattr(STDIN_FILENO, &old);
  termios quiet = old;
  quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
  tcsetattr(STDIN_FILENO, TCSANOW, &quiet);
  std::string line;
  std::getline(std::cin, line);
  tcsetattr(STDIN_FILENO, TCSANOW, &old);
  std::cerr << '\n';
  return line;
}

}  // namespace

int main(int argc, char** argv) {
  cwallet::CliEnv env;
  env.passphrase = PassphraseFromEnvOrTty;
  if (const char* kdf = std::getenv("CW_KDF"); kdf != nullptr && std::string(kdf) == "fast") {
    env.fast_kdf = true;
  }
  std::vector<std::string> args(argv + 1, argv + argc);
  return cwallet::RunCli(args, std::cout, std::cerr, env);
}
