#include "coldwallet/storage.hpp"

#include <fcntl.h>
#include <sodium.h>
#include <sys/file.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>

#include "coldwallet/bigint.hpp"
#include "coldwallet/error.hpp"

namespace coldwallet {
namespace {

namespace fs = std::filesystem;

constexpr std::array<uint8_t, 4> kShareMagic = {'C', 'W', 'S', 'K'};
constexpr std::array<uint8_t, 4> kSessionMagic = {'C', 'W', 'S', 'S'};
constexpr size_t kSaltBytes = 16;
constexpr size_t kNonceBytes = 24;
constexpr size_t kMaxPayloadBytes = size_t{1} << 20;
// Bounds on header-supplied KDF cost, so a hostile file cannot demand
// unbounded memory or time.
constexpr uint64_t kMaxOpslimit = 16;
constexpr uint64_t kMaxMemlimit = uint64_t{1} << 30;

static_assert(kSaltBytes == crypto_pwhash_SALTBYTES);
static_assert(kNonceBytes == crypto_aead_xchacha20poly1305_ietf_NPUBBYTES);

// Overwrites its buffer on destruction.
struct Wiped {
  Bytes data;
  ~Wiped() {
    if (!data.empty()) sodium_memzero(data.data(), data.size());
  }
};

using Key = std::array<uint8_t, crypto_aead_xchacha20poly1305_ietf_KEYBYTES>;

Key DeriveKey(const std::string& passphrase, ByteView salt, uint64_t opslimit,
              uint64_t memlimit) {
  Key key{};
  if (crypto_pwhash(key.data(), key.size(), passphrase.data(), passphrase.size(), salt.data(),
                    opslimit, static_cast<size_t>(memlimit), crypto_pwhash_ALG_ARGON2ID13) != 0) {
    throw Error(ErrorCode::kRngFailure, "key derivation ran out of memory");
  }
  return key;
}

Bytes Seal(const std::array<uint8_t, 4>& magic, Scheme scheme, Role role, ByteView plaintext,
           const Passphrase& passphrase, Rng& rng, const KdfParams& kdf) {
  EnsureSodiumInitialized();
  const bool protect = passphrase.has_value();
  std::array<uint8_t, kSaltBytes> salt{};
  std::array<uint8_t, kNonceBytes> nonce{};
  if (protect) {
    rng.Fill(salt);
    rng.Fill(nonce);
  }
  const size_t payload_len =
      plaintext.size() + (protect ? crypto_aead_xchacha20poly1305_ietf_ABYTES : 0);

  Bytes out;
  out.reserve(kStorageHeaderBytes + payload_len);
  AppendBytes(magic, &out);
  AppendU8(kStorageVersion, &out);
  AppendU8(static_cast<uint8_t>(scheme), &out);
  AppendU8(static_cast<uint8_t>(role), &out);
  AppendU8(static_cast<uint8_t>(protect ? Protection::kArgon2idXChaCha20Poly1305
                                        : Protection::kNone),
           &out);
  AppendU64Be(protect ? kdf.opslimit : 0, &out);
  AppendU64Be(protect ? kdf.memlimit : 0, &out);
  AppendBytes(salt, &out);
  AppendBytes(nonce, &out);
  AppendU32Be(static_cast<uint32_t>(payload_len), &out);

  if (!protect) {
    AppendBytes(plaintext, &out);
    return out;
  }
  Key key = DeriveKey(*passphrase, salt, kdf.opslimit, kdf.memlimit);
  const size_t header_len = out.size();
  out.resize(header_len + payload_len);
  unsigned long long written = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(out.data() + header_len, &written, plaintext.data(),
                                             plaintext.size(), out.data(), header_len, nullptr,
                                             nonce.data(), key.data());
  sodium_memzero(key.data(), key.size());
  out.resize(header_len + written);
  return out;
}

struct Opened {
  StorageHeader header;
  Wiped plaintext;
};

StorageHeader ParseHeader(ByteReader& reader, const std::array<uint8_t, 4>& magic,
                          uint64_t* opslimit, uint64_t* memlimit, ByteView* salt,
                          ByteView* nonce, uint32_t* payload_len) {
  ByteView got = reader.ReadBytes(4);
  if (!std::equal(got.begin(), got.end(), magic.begin())) {
    throw Error(ErrorCode::kBadHeader, "unexpected file magic");
  }
  if (reader.ReadU8() != kStorageVersion) {
    throw Error(ErrorCode::kBadHeader, "unsupported file version");
  }
  uint8_t scheme = reader.ReadU8();
  uint8_t role = reader.ReadU8();
  uint8_t protection = reader.ReadU8();
  if (scheme < 1 || scheme > 2) throw Error(ErrorCode::kBadHeader, "unknown scheme byte");
  if (role < 1 || role > 3) throw Error(ErrorCode::kBadHeader, "unknown role byte");
  if (protection > 1) throw Error(ErrorCode::kBadHeader, "unknown protection byte");
  *opslimit = reader.ReadU64Be();
  *memlimit = reader.ReadU64Be();
  *salt = reader.ReadBytes(kSaltBytes);
  *nonce = reader.ReadBytes(kNonceBytes);
  *payload_len = reader.ReadU32Be();
  return StorageHeader{static_cast<Scheme>(scheme), static_cast<Role>(role),
                       static_cast<Protection>(protection)};
}

Opened Open(ByteView file, const std::array<uint8_t, 4>& magic, const Passphrase& passphrase) {
  EnsureSodiumInitialized();
  ByteReader reader(file);
  uint64_t opslimit = 0;
  uint64_t memlimit = 0;
  ByteView salt;
  ByteView nonce;
  uint32_t payload_len = 0;
  StorageHeader header;
  try {
    header = ParseHeader(reader, magic, &opslimit, &memlimit, &salt, &nonce, &payload_len);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTruncated) throw Error(ErrorCode::kBadHeader, "header truncated");
    throw;
  }
  if (payload_len > kMaxPayloadBytes || payload_len != reader.remaining()) {
    throw Error(ErrorCode::kBadHeader, "payload length does not match file size");
  }
  ByteView payload = reader.ReadBytes(payload_len);

  Opened opened{header, {}};
  if (header.protection == Protection::kNone) {
    opened.plaintext.data.assign(payload.begin(), payload.end());
    return opened;
  }
  if (opslimit < crypto_pwhash_OPSLIMIT_MIN || opslimit > kMaxOpslimit ||
      memlimit < crypto_pwhash_MEMLIMIT_MIN || memlimit > kMaxMemlimit) {
    throw Error(ErrorCode::kBadHeader, "key derivation parameters out of range");
  }
  if (payload_len < crypto_aead_xchacha20poly1305_ietf_ABYTES) {
    throw Error(ErrorCode::kBadHeader, "payload shorter than the authentication tag");
  }
  if (!passphrase) {
    throw Error(ErrorCode::kAuthenticationFailed, "file is passphrase-protected");
  }
  Key key = DeriveKey(*passphrase, salt, opslimit, memlimit);
  opened.plaintext.data.resize(payload_len - crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long written = 0;
  int rc = crypto_aead_xchacha20poly1305_ietf_decrypt(
      opened.plaintext.data.data(), &written, nullptr, payload.data(), payload.size(),
      file.data(), kStorageHeaderBytes, nonce.data(), key.data());
  sodium_memzero(key.data(), key.size());
  if (rc != 0) {
    throw Error(ErrorCode::kAuthenticationFailed, "wrong passphrase or corrupted file");
  }
  return opened;
}

// Payload records: tag (1) | length (4) | value.
class Records {
 public:
  void Put(uint8_t tag, ByteView value) {
    AppendU8(tag, &out_.data);
    AppendU32Be(static_cast<uint32_t>(value.size()), &out_.data);
    AppendBytes(value, &out_.data);
  }
  Bytes Take() { return std::move(out_.data); }

 private:
  Wiped out_;
};

std::map<uint8_t, ByteView> ParseRecords(ByteView payload) {
  std::map<uint8_t, ByteView> records;
  ByteReader reader(payload);
  while (!reader.empty()) {
    uint8_t tag = reader.ReadU8();
    uint32_t len = reader.ReadU32Be();
    if (!records.emplace(tag, reader.ReadBytes(len)).second) {
      throw Error(ErrorCode::kDuplicateTag, "repeated record in stored payload");
    }
  }
  return records;
}

ByteView Need(const std::map<uint8_t, ByteView>& records, uint8_t tag) {
  auto it = records.find(tag);
  if (it == records.end()) {
    throw Error(ErrorCode::kMissingField, "stored payload lacks record " + std::to_string(tag));
  }
  return it->second;
}

std::optional<ByteView> Maybe(const std::map<uint8_t, ByteView>& records, uint8_t tag) {
  auto it = records.find(tag);
  if (it == records.end()) return std::nullopt;
  return it->second;
}

enum ShareRecord : uint8_t {
  kShareSecret = 1,
  kSharePublic = 2,
  kShareCombined = 3,
  kSharePaillierP = 4,
  kSharePaillierQ = 5,
  kShareEncryptedSecret = 6,
  kShareRecoverable = 7,
};

enum SessionRecord : uint8_t {
  kSessionId = 1,
  kSessionPhase = 2,
  kSessionNonce = 3,
  kSessionNoncePoint = 4,
  kSessionTx = 5,
  kSessionSharedPublic = 6,
};

void CheckKnown(const std::map<uint8_t, ByteView>& records, uint8_t max_tag) {
  for (const auto& [tag, value] : records) {
    if (tag < 1 || tag > max_tag) {
      throw Error(ErrorCode::kUnknownTag, "unknown record in stored payload");
    }
  }
}

uint8_t ReadFlag(ByteView value) {
  if (value.size() != 1) throw Error(ErrorCode::kMalformedField, "flag must be one byte");
  return value[0];
}

mpz_class ReadMagnitude(ByteView value) {
  if (value.empty() || value[0] == 0) {
    throw Error(ErrorCode::kMalformedField, "integer must be a minimal non-zero magnitude");
  }
  return DecodeBigEndian(value);
}

void CheckHeaderMatches(const StorageHeader& header, Scheme scheme, Role role) {
  if (header.scheme != scheme || header.role != role) {
    throw Error(ErrorCode::kBadHeader, "header does not match payload");
  }
}

}  // namespace

KdfParams KdfParams::Interactive() {
  return {crypto_pwhash_OPSLIMIT_INTERACTIVE, crypto_pwhash_MEMLIMIT_INTERACTIVE};
}

KdfParams KdfParams::Fast() { return {crypto_pwhash_OPSLIMIT_MIN, crypto_pwhash_MEMLIMIT_MIN}; }

Bytes SerializeShare(const KeyShare& share) {
  const Group& group = share.group();
  Records records;
  {
    Wiped secret{group.ScalarToBytes(share.secret.Expose())};
    records.Put(kShareSecret, secret.data);
  }
  records.Put(kSharePublic, share.public_share.encoding());
  if (share.shared_public) records.Put(kShareCombined, share.shared_public->encoding());
  if (share.paillier) {
    Wiped p{EncodeBigEndian(share.paillier->sec.p())};
    Wiped q{EncodeBigEndian(share.paillier->sec.q_p())};
    records.Put(kSharePaillierP, p.data);
    records.Put(kSharePaillierQ, q.data);
  }
  if (share.encrypted_secret) {
    records.Put(kShareEncryptedSecret, EncodeBigEndian(share.encrypted_secret->value()));
  }
  records.Put(kShareRecoverable, Bytes{static_cast<uint8_t>(share.recoverable ? 1 : 0)});
  return records.Take();
}

KeyShare DeserializeShare(ByteView payload, Scheme scheme, Role role) {
  const Group& group = GroupForScheme(scheme);
  auto records = ParseRecords(payload);
  CheckKnown(records, kShareRecoverable);
  KeyShare share{scheme,
                 role,
                 SecretScalar(group.ScalarFromBytes(Need(records, kShareSecret))),
                 group.Decode(Need(records, kSharePublic)),
                 std::nullopt,
                 std::nullopt,
                 std::nullopt,
                 false};
  if (auto combined = Maybe(records, kShareCombined)) share.shared_public = group.Decode(*combined);
  auto p = Maybe(records, kSharePaillierP);
  auto q = Maybe(records, kSharePaillierQ);
  if (p.has_value() != q.has_value()) {
    throw Error(ErrorCode::kMissingField, "stored Paillier key is incomplete");
  }
  if (p) share.paillier = PaillierKeypair::FromPrimes(ReadMagnitude(*p), ReadMagnitude(*q));
  if (auto c = Maybe(records, kShareEncryptedSecret)) {
    if (!share.paillier) throw Error(ErrorCode::kInconsistentShare, "C_key without a Paillier key");
    share.encrypted_secret =
        PaillierCiphertext::FromInteger(share.paillier->pub, ReadMagnitude(*c));
  }
  uint8_t flag = ReadFlag(Need(records, kShareRecoverable));
  if (flag > 1) throw Error(ErrorCode::kMalformedField, "recoverable flag must be 0 or 1");
  share.recoverable = flag == 1;
  share.Validate();
  return share;
}

Bytes SealShare(const KeyShare& share, const Passphrase& passphrase, Rng& rng,
                const KdfParams& kdf) {
  Wiped plain{SerializeShare(share)};
  return Seal(kShareMagic, share.scheme, share.role, plain.data, passphrase, rng, kdf);
}

KeyShare OpenShare(ByteView file, const Passphrase& passphrase) {
  Opened opened = Open(file, kShareMagic, passphrase);
  return DeserializeShare(opened.plaintext.data, opened.header.scheme, opened.header.role);
}

void SaveShare(const KeyShare& share, const fs::path& path, const Passphrase& passphrase,
               Rng& rng, const KdfParams& kdf, bool overwrite) {
  if (!overwrite && fs::exists(path)) {
    throw Error(ErrorCode::kShareExists, path.string() + " already exists");
  }
  WriteFileAtomic(path, SealShare(share, passphrase, rng, kdf));
}

KeyShare LoadShare(const fs::path& path, const Passphrase& passphrase) {
  return OpenShare(ReadFileBytes(path), passphrase);
}

Bytes SerializeSession(const SessionState& state) {
  const Group& group = GroupForScheme(state.scheme);
  Records records;
  records.Put(kSessionId, state.id);
  records.Put(kSessionPhase, Bytes{static_cast<uint8_t>(state.phase)});
  if (state.nonce) {
    Wiped k{group.ScalarToBytes(state.nonce->Expose())};
    records.Put(kSessionNonce, k.data);
  }
  records.Put(kSessionNoncePoint, state.nonce_point.encoding());
  records.Put(kSessionTx, TxCanonicalBytes(state.tx));
  records.Put(kSessionSharedPublic, state.shared_public.encoding());
  return records.Take();
}

SessionState DeserializeSession(ByteView payload, Scheme scheme, Role role) {
  const Group& group = GroupForScheme(scheme);
  auto records = ParseRecords(payload);
  CheckKnown(records, kSessionSharedPublic);
  ByteView id = Need(records, kSessionId);
  if (id.size() != 16) throw Error(ErrorCode::kMalformedField, "session id must be 16 bytes");
  uint8_t phase = ReadFlag(Need(records, kSessionPhase));
  if (phase > static_cast<uint8_t>(SessionPhase::kFailed)) {
    throw Error(ErrorCode::kMalformedField, "unknown session phase");
  }
  SessionState state{scheme,
                     role,
                     {},
                     static_cast<SessionPhase>(phase),
                     std::nullopt,
                     group.Decode(Need(records, kSessionNoncePoint)),
                     TxFromCanonicalBytes(Need(records, kSessionTx)),
                     group.Decode(Need(records, kSessionSharedPublic))};
  std::copy(id.begin(), id.end(), state.id.begin());
  if (auto k = Maybe(records, kSessionNonce)) state.nonce = SecretScalar(group.ScalarFromBytes(*k));
  return state;
}

Bytes SealSession(const SessionState& state, const Passphrase& passphrase, Rng& rng,
                  const KdfParams& kdf) {
  Wiped plain{SerializeSession(state)};
  return Seal(kSessionMagic, state.scheme, state.role, plain.data, passphrase, rng, kdf);
}

SessionState OpenSession(ByteView file, const Passphrase& passphrase) {
  Opened opened = Open(file, kSessionMagic, passphrase);
  SessionState state =
      DeserializeSession(opened.plaintext.data, opened.header.scheme, opened.header.role);
  CheckHeaderMatches(opened.header, state.scheme, state.role);
  return state;
}

void SaveSession(const SessionState& state, const fs::path& path, const Passphrase& passphrase,
                 Rng& rng, const KdfParams& kdf) {
  WriteFileAtomic(path, SealSession(state, passphrase, rng, kdf));
}

SessionState LoadSession(const fs::path& path, const Passphrase& passphrase) {
  return OpenSession(ReadFileBytes(path), passphrase);
}

fs::path SessionPath(const fs::path& workdir, const SessionId& id) {
  return workdir / ("session-" + ToHex(id) + ".cwss");
}

StorageHeader ReadStorageHeader(const fs::path& path) {
  Bytes file = ReadFileBytes(path);
  ByteReader reader(file);
  ByteView magic = reader.remaining() >= 4 ? reader.ReadBytes(4) : ByteView{};
  const auto& expected =
      std::equal(magic.begin(), magic.end(), kSessionMagic.begin()) && magic.size() == 4
          ? kSessionMagic
          : kShareMagic;
  ByteReader again(file);
  uint64_t ops = 0;
  uint64_t mem = 0;
  ByteView salt;
  ByteView nonce;
  uint32_t len = 0;
  try {
    return ParseHeader(again, expected, &ops, &mem, &salt, &nonce, &len);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTruncated) throw Error(ErrorCode::kBadHeader, "header truncated");
    throw;
  }
}

Bytes ReadFileBytes(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(ErrorCode::kNotFound, path.string() + " does not exist");
  auto size = fs::file_size(path, ec);
  if (ec) throw Error(ErrorCode::kIo, path.string() + ": " + ec.message());
  if (size > 64 * kMaxPayloadBytes) throw Error(ErrorCode::kIo, path.string() + " is too large");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  Bytes data(size);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(size));
  if (!in) throw Error(ErrorCode::kIo, "short read on " + path.string());
  return data;
}

void WriteFileAtomic(const fs::path& path, ByteView data) {
  fs::path tmp = path;
  tmp += ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600);
  if (fd < 0) throw Error(ErrorCode::kIo, "cannot create " + tmp.string() + ": " + std::strerror(errno));
  size_t done = 0;
  while (done < data.size()) {
    ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      int err = errno;
      ::close(fd);
      ::unlink(tmp.c_str());
      throw Error(ErrorCode::kIo, "write to " + tmp.string() + " failed: " + std::strerror(err));
    }
    done += static_cast<size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    ::unlink(tmp.c_str());
    throw Error(ErrorCode::kIo, "cannot flush " + tmp.string());
  }
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    int err = errno;
    ::unlink(tmp.c_str());
    throw Error(ErrorCode::kIo, "cannot rename onto " + path.string() + ": " + std::strerror(err));
  }
}

FileLock::FileLock(const fs::path& path) {
  fs::path lock = path;
  lock += ".lock";
  fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
  if (fd_ < 0) throw Error(ErrorCode::kIo, "cannot open lock " + lock.string());
  while (::flock(fd_, LOCK_EX) != 0) {
    if (errno != EINTR) {
      ::close(fd_);
      throw Error(ErrorCode::kIo, "cannot lock " + lock.string());
    }
  }
}

FileLock::~FileLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace coldwallet
