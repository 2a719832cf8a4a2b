#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "coldwallet/bytes.hpp"
#include "coldwallet/keygen.hpp"
#include "coldwallet/sign.hpp"

namespace coldwallet {

// Disk layout shared by share files ("CWSK") and session files ("CWSS"):
//
//   magic (4) | version (1) | scheme (1) | role (1) | protection (1)
//   | opslimit (8) | memlimit (8) | salt (16) | nonce (24) | payload_len (4)
//   | payload
//
// protection 0 stores the payload in the clear (tests only); protection 1
// derives a key with Argon2id(passphrase, salt, opslimit, memlimit) and seals
// the payload with XChaCha20-Poly1305, the header bytes as associated data.

inline constexpr uint8_t kStorageVersion = 1;
inline constexpr size_t kStorageHeaderBytes = 4 + 1 + 1 + 1 + 1 + 8 + 8 + 16 + 24 + 4;

enum class Protection : uint8_t {
  kNone = 0,
  kArgon2idXChaCha20Poly1305 = 1,
};

struct KdfParams {
  uint64_t opslimit;
  uint64_t memlimit;

  static KdfParams Interactive();
  // Minimum cost; only for tests.
  static KdfParams Fast();
};

struct StorageHeader {
  Scheme scheme;
  Role role;
  Protection protection;
};

using Passphrase = std::optional<std::string>;

Bytes SerializeShare(const KeyShare& share);
KeyShare DeserializeShare(ByteView payload, Scheme scheme, Role role);

// nullopt passphrase writes an unprotected file.
Bytes SealShare(const KeyShare& share, const Passphrase& passphrase, Rng& rng,
                const KdfParams& kdf = KdfParams::Interactive());
KeyShare OpenShare(ByteView file, const Passphrase& passphrase);

// Refuses to replace an existing file unless `overwrite` (kShareExists).
void SaveShare(const KeyShare& share, const std::filesystem::path& path,
               const Passphrase& passphrase, Rng& rng,
               const KdfParams& kdf = KdfParams::Interactive(), bool overwrite = false);
// Missing file -> kNotFound, bad header -> kBadHeader, wrong passphrase or
// tampered ciphertext -> kAuthenticationFailed.
KeyShare LoadShare(const std::filesystem::path& path, const Passphrase& passphrase);

Bytes SerializeSession(const SessionState& state);
SessionState DeserializeSession(ByteView payload, Scheme scheme, Role role);

Bytes SealSession(const SessionState& state, const Passphrase& passphrase, Rng& rng,
                  const KdfParams& kdf = KdfParams::Interactive());
SessionState OpenSession(ByteView file, const Passphrase& passphrase);

void SaveSession(const SessionState& state, const std::filesystem::path& path,
                 const Passphrase& passphrase, Rng& rng,
                 const KdfParams& kdf = KdfParams::Interactive());
SessionState LoadSession(const std::filesystem::path& path, const Passphrase& passphrase);

std::filesystem::path SessionPath(const std::filesystem::path& workdir, const SessionId& id);

StorageHeader ReadStorageHeader(const std::filesystem::path& path);

Bytes ReadFileBytes(const std::filesystem::path& path);
// Write to a sibling temp file, fsync, rename over the target.
void WriteFileAtomic(const std::filesystem::path& path, ByteView data);

// Exclusive advisory lock on `<path>.lock`, held for the object's lifetime.
class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& path);
  ~FileLock();
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace coldwallet
