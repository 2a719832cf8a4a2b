#include "cwallet/cli.hpp"

#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "coldwallet/bigint.hpp"
#include "coldwallet/complexity.hpp"
#include "coldwallet/compress.hpp"
#include "coldwallet/error.hpp"
#include "coldwallet/keygen.hpp"
#include "coldwallet/messages.hpp"
#include "coldwallet/sign.hpp"
#include "coldwallet/storage.hpp"
#include "coldwallet/transaction.hpp"

namespace cwallet {
namespace {

using namespace coldwallet;
namespace fs = std::filesystem;

constexpr int kExitInternal = 1;

class Context {
 public:
  Context(std::ostream& out, std::ostream& err, const CliEnv& env, Rng& rng)
      : out(out), err(err), rng(rng), env_(env) {}

  std::ostream& out;
  std::ostream& err;
  Rng& rng;
  bool verbose = false;

  KdfParams kdf() const { return env_.fast_kdf ? KdfParams::Fast() : KdfParams::Interactive(); }

  // Prompts at most once per invocation.
  const std::string& Passphrase() {
    if (!cached_) {
      std::optional<std::string> p = env_.passphrase ? env_.passphrase() : std::nullopt;
      if (!p || p->empty()) {
        throw Error(ErrorCode::kConfig,
                    "no passphrase available; set CW_PASSPHRASE or run from a terminal");
      }
      cached_ = std::move(p);
    }
    return *cached_;
  }

  coldwallet::Passphrase PassphraseFor(const fs::path& file) {
    if (ReadStorageHeader(file).protection == Protection::kNone) return std::nullopt;
    return Passphrase();
  }

 private:
  const CliEnv& env_;
  std::optional<std::string> cached_;
};

std::string ReadText(const fs::path& path) {
  Bytes raw = ReadFileBytes(path);
  return std::string(raw.begin(), raw.end());
}

void WriteText(const fs::path& path, const std::string& text) {
  WriteFileAtomic(path, ToBytes(text));
}

void DescribeEnvelope(Context& ctx, const Bytes& encoded) {
  if (!ctx.verbose) return;
  Envelope env = DecodeEnvelope(encoded);
  ctx.err << "envelope " << SchemeName(env.scheme) << ' ' << MsgTypeName(env.type) << " session "
          << ToHex(env.session_id) << ", " << encoded.size() << " bytes\n";
  for (const auto& field : env.fields) {
    ctx.err << "  " << FieldTagName(static_cast<FieldTag>(field.tag)) << ": "
            << field.value.size() << " bytes\n";
  }
}

void WriteEnvelope(Context& ctx, const fs::path& path, const ProtocolMessage& msg,
                   const SessionId& id, bool compress) {
  Bytes encoded = EncodeMessage(msg, id);
  DescribeEnvelope(ctx, encoded);
  Bytes file = compress ? PackForTransfer(encoded) : encoded;
  WriteFileAtomic(path, file);
  ctx.out << "envelope: " << path.string() << " (" << file.size() << " bytes)\n";
}

DecodedMessage ReadEnvelope(Context& ctx, const fs::path& path) {
  Bytes encoded = UnpackTransfer(ReadFileBytes(path));
  DescribeEnvelope(ctx, encoded);
  return DecodeMessage(encoded);
}

template <class T>
const T& Expect(const DecodedMessage& decoded, std::string_view what) {
  const T* msg = std::get_if<T>(&decoded.message);
  if (msg == nullptr) {
    throw Error(ErrorCode::kUnknownMessageType,
                "expected a " + std::string(what) + " envelope, got " +
                    std::string(MsgTypeName(decoded.type)));
  }
  return *msg;
}

void RequireScheme(const KeyShare& share, Scheme scheme) {
  if (share.scheme != scheme) {
    throw Error(ErrorCode::kSchemeMismatch, "envelope is " + std::string(SchemeName(scheme)) +
                                                ", share is " +
                                                std::string(SchemeName(share.scheme)));
  }
}

KeyShare LoadShareFile(Context& ctx, const fs::path& path) {
  return LoadShare(path, ctx.PassphraseFor(path));
}

void PrintShareSummary(Context& ctx, const KeyShare& share) {
  ctx.out << "scheme: " << SchemeName(share.scheme) << '\n'
          << "role: " << RoleName(share.role) << '\n'
          << "public share: " << ToHex(share.public_share.encoding()) << '\n';
}

// ---- keygen ---------------------------------------------------------------

struct KeygenArgs {
  std::string role;
  std::string scheme;
  std::string share;
  std::string out;
  size_t paillier_bits = kDefaultPaillierBits;
  bool force = false;
  bool plaintext = false;
  std::string master_seed;
  std::string account;
};

int Keygen(Context& ctx, const KeygenArgs& a) {
  const Scheme scheme = ParseScheme(a.scheme);
  const Role role = ParseRole(a.role);
  if (!a.force && fs::exists(a.share)) {
    throw Error(ErrorCode::kShareExists, a.share + " already exists; pass --force to replace it");
  }
  if (a.master_seed.empty() != a.account.empty()) {
    throw Error(ErrorCode::kConfig, "--master-seed and --account go together");
  }
  coldwallet::Passphrase passphrase;
  if (!a.plaintext) passphrase = ctx.Passphrase();

  KeyShare share = a.master_seed.empty()
                       ? GenerateShare(scheme, role, ctx.rng, a.paillier_bits)
                       : DeriveRecoverableShare(scheme, role, FromHex(a.master_seed), a.account,
                                                ctx.rng, a.paillier_bits);
  SaveShare(share, a.share, passphrase, ctx.rng, ctx.kdf(), a.force);
  ctx.out << "share: " << a.share << (passphrase ? " (encrypted)" : " (unencrypted)") << '\n';
  PrintShareSummary(ctx, share);
  WriteEnvelope(ctx, a.out, KeygenPubMsg{scheme, role, share.public_share},
                RandomSessionId(ctx.rng), false);
  return 0;
}

struct KeygenFinishArgs {
  std::string share;
  std::string peer;
  std::string descriptor;
};

int KeygenFinish(Context& ctx, const KeygenFinishArgs& a) {
  FileLock lock(a.share);
  const coldwallet::Passphrase passphrase = ctx.PassphraseFor(a.share);
  KeyShare share = LoadShare(a.share, passphrase);
  DecodedMessage decoded = ReadEnvelope(ctx, a.peer);
  const auto& peer = Expect<KeygenPubMsg>(decoded, "keygen_pub");
  RequireScheme(share, peer.scheme);
  if (IsInitiator(peer.role) == IsInitiator(share.role)) {
    throw Error(ErrorCode::kRoleMismatch, "peer is " + std::string(RoleName(peer.role)) +
                                              ", which cannot pair with " +
                                              std::string(RoleName(share.role)));
  }
  const bool had_key = share.shared_public.has_value();
  CombinePublicKey(share, peer.public_share);
  if (!had_key) SaveShare(share, a.share, passphrase, ctx.rng, ctx.kdf(), true);

  const std::string descriptor = DescribeWallet(share, std::time(nullptr)).ToJson();
  if (!a.descriptor.empty()) WriteText(a.descriptor, descriptor + "\n");
  ctx.out << descriptor << '\n';
  return 0;
}

// ---- signing --------------------------------------------------------------

struct SignInitArgs {
  std::string share;
  std::string tx;
  std::string out;
  std::string workdir = ".";
  bool compress = false;
};

int SignInit(Context& ctx, const SignInitArgs& a) {
  const coldwallet::Passphrase passphrase = ctx.PassphraseFor(a.share);
  KeyShare share = LoadShare(a.share, passphrase);
  if (!IsInitiator(share.role)) {
    throw Error(ErrorCode::kRoleMismatch, "sign-init runs on the gateway or user side");
  }
  if (!share.shared_public) {
    throw Error(ErrorCode::kMissingCombinedKey, "run keygen-finish before signing");
  }
  const Transaction tx = TxFromJson(ReadText(a.tx));
  fs::create_directories(a.workdir);

  SessionId id = RandomSessionId(ctx.rng);
  while (fs::exists(SessionPath(a.workdir, id))) id = RandomSessionId(ctx.rng);

  std::optional<SigningSession> session;
  std::optional<ProtocolMessage> msg;
  if (share.scheme == Scheme::kEcdsa) {
    auto init = EcdsaGatewayInit(share, tx, ctx.rng, InitOptions{std::nullopt, id});
    session.emplace(std::move(init.session));
    msg.emplace(std::move(init.msg));
  } else {
    auto init = SchnorrGatewayInit(share, tx, ctx.rng, InitOptions{std::nullopt, id});
    session.emplace(std::move(init.session));
    msg.emplace(std::move(init.msg));
  }
  const fs::path session_path = SessionPath(a.workdir, id);
  {
    FileLock lock(session_path);
    SaveSession(session->state(), session_path, passphrase, ctx.rng, ctx.kdf());
  }
  ctx.out << "session: " << ToHex(id) << '\n';
  WriteEnvelope(ctx, a.out, *msg, id, a.compress);
  return 0;
}

struct SignRespondArgs {
  std::string share;
  std::string policy;
  std::string in;
  std::string out;
  std::string report;
  bool compress = false;
};

std::string RefusalReport(const Error& e, const std::optional<DecodedMessage>& decoded) {
  std::ostringstream report;
  report << "REFUSED\n";
  if (decoded) report << "session: " << ToHex(decoded->session_id) << '\n';
  report << "reason: " << ErrorCodeName(e.code()) << '\n' << "detail: " << e.what() << '\n';
  if (decoded) {
    std::visit(
        [&report](const auto& m) {
          if constexpr (requires { m.tx; }) report << "transaction: " << TxToJson(m.tx) << '\n';
        },
        decoded->message);
  }
  return report.str();
}

int SignRespond(Context& ctx, const SignRespondArgs& a) {
  KeyShare share = LoadShareFile(ctx, a.share);
  if (share.role != Role::kCore) {
    throw Error(ErrorCode::kRoleMismatch, "sign-respond runs on the core");
  }
  const Policy policy = ParsePolicy(ReadText(a.policy));
  std::optional<DecodedMessage> decoded;
  try {
    decoded = ReadEnvelope(ctx, a.in);
    RequireScheme(share, decoded->scheme);
    std::optional<ProtocolMessage> reply;
    if (share.scheme == Scheme::kEcdsa) {
      reply.emplace(EcdsaCoreRespond(share, Expect<EcdsaSignMsg1>(*decoded, "sign_msg1"), policy,
                                     ctx.rng));
    } else {
      reply.emplace(SchnorrCoreRespond(share, Expect<SchnorrSignMsg1>(*decoded, "sign_msg1"),
                                       policy, ctx.rng));
    }
    WriteEnvelope(ctx, a.out, *reply, decoded->session_id, a.compress);
    return 0;
  } catch (const Error& e) {
    if (e.error_class() == ErrorClass::kIo) throw;
    const fs::path report = a.report.empty() ? fs::path(a.out + ".refused.txt") : fs::path(a.report);
    WriteText(report, RefusalReport(e, decoded));
    ctx.err << "refused; report written to " << report.string() << '\n';
    throw;
  }
}

struct SignFinalizeArgs {
  std::string share;
  std::string in;
  std::string workdir = ".";
  std::string signature_out;
};

int SignFinalize(Context& ctx, const SignFinalizeArgs& a) {
  const coldwallet::Passphrase passphrase = ctx.PassphraseFor(a.share);
  KeyShare share = LoadShare(a.share, passphrase);
  DecodedMessage decoded = ReadEnvelope(ctx, a.in);
  RequireScheme(share, decoded.scheme);

  const fs::path session_path = SessionPath(a.workdir, decoded.session_id);
  if (!fs::exists(session_path)) {
    throw Error(ErrorCode::kNotFound, "no session " + ToHex(decoded.session_id) + " in " + a.workdir);
  }
  FileLock lock(session_path);
  SigningSession session =
      SigningSession::FromState(LoadSession(session_path, ctx.PassphraseFor(session_path)));

  std::optional<Signature> sig;
  try {
    if (share.scheme == Scheme::kEcdsa) {
      sig = EcdsaGatewayFinalize(session, share, Expect<EcdsaSignMsg2>(decoded, "sign_msg2"));
    } else {
      sig = SchnorrGatewayFinalize(session, share, Expect<SchnorrSignMsg2>(decoded, "sign_msg2"));
    }
  } catch (const Error&) {
    // A failed attempt burns the nonce.
    if (session.phase() == SessionPhase::kFailed) {
      SaveSession(session.state(), session_path, passphrase, ctx.rng, ctx.kdf());
    }
    throw;
  }
  SaveSession(session.state(), session_path, passphrase, ctx.rng, ctx.kdf());

  const Group& group = share.group();
  const std::string hex = ToHex(sig->ToBytes());
  ctx.out << "signature: " << hex << '\n';
  ctx.out << (share.scheme == Scheme::kEcdsa ? "r: " : "e: ")
          << ToHex(group.ScalarToBytes(sig->first())) << '\n'
          << "s: " << ToHex(group.ScalarToBytes(sig->second())) << '\n'
          << "public key: " << ToHex(share.shared_public->encoding()) << '\n'
          << "verified: yes\n";
  if (!a.signature_out.empty()) WriteText(a.signature_out, hex + "\n");
  return 0;
}

// ---- verify and reports ---------------------------------------------------

struct VerifyArgs {
  std::string scheme;
  std::string pubkey;
  std::string tx;
  std::string signature;
};

int Verify(Context& ctx, const VerifyArgs& a) {
  const Scheme scheme = ParseScheme(a.scheme);
  const Group& group = GroupForScheme(scheme);
  const Point pub = group.Decode(FromHex(a.pubkey));
  const Transaction tx = TxFromJson(ReadText(a.tx));
  const Signature sig = Signature::FromBytes(scheme, FromHex(a.signature), group);
  if (!VerifyTransactionSignature(scheme, pub, tx, sig)) {
    ctx.out << "invalid\n";
    return ExitCodeFor(ErrorClass::kCrypto);
  }
  ctx.out << "valid\n";
  return 0;
}

Transaction SampleTransaction() {
  return Transaction{1, "BTC", "cw1-bench-source", "cw1-bench-destination", 125000, 7};
}

struct PairArgs {
  size_t paillier_bits;
};

std::pair<KeyShare, KeyShare> EphemeralPair(Context& ctx, Scheme scheme, size_t paillier_bits) {
  KeyShare gateway = GenerateShare(scheme, Role::kGateway, ctx.rng, paillier_bits);
  KeyShare core = GenerateShare(scheme, Role::kCore, ctx.rng, paillier_bits);
  CombinePublicKey(gateway, core.public_share);
  CombinePublicKey(core, gateway.public_share);
  return {std::move(gateway), std::move(core)};
}

int BenchSizes(Context& ctx, const PairArgs& a) {
  const Transaction tx = SampleTransaction();
  const Policy policy{{tx.destination_address}, std::nullopt};
  std::vector<SizeRow> rows;
  for (Scheme scheme : {Scheme::kEcdsa, Scheme::kSchnorr}) {
    auto [gateway, core] = EphemeralPair(ctx, scheme, a.paillier_bits);
    auto measured = MeasureSessionSizes(gateway, core, tx, policy, ctx.rng);
    rows.insert(rows.end(), measured.begin(), measured.end());
  }
  ctx.out << "paillier modulus: " << a.paillier_bits << " bits\n"
          << RenderSizeTable(rows)
          << "envelope/packed: whole envelope raw and after compression\n"
          << "extra/extra_z: multisig field values raw and after compression\n"
          << "theory: multisig terms of the theory row in bytes\n"
          << "impl(B)/impl(b): implementation row read as bytes / with 256-bit terms as bits\n";
  return 0;
}

void PrintCounts(Context& ctx, std::string_view label, const OpTally& expected,
                 const OpCounts& measured) {
  ctx.out << "  " << label << ": expected " << expected.modexp << " E_m, " << expected.ec_mul
          << " M_ec, " << expected.mod_inv << " I_m; measured " << measured.modexp << " E_m, "
          << measured.ec_mul << " M_ec, " << measured.mod_inv << " I_m ("
          << (MatchesMeasured(expected, measured) ? "match" : "MISMATCH") << ")\n";
}

int OpCountsCmd(Context& ctx, const PairArgs& a) {
  ctx.out << RenderComplexityTable() << "\nmeasured in one live session:\n";
  const Transaction tx = SampleTransaction();
  const Policy policy{{tx.destination_address}, std::nullopt};
  bool all_match = true;
  for (Scheme scheme : {Scheme::kEcdsa, Scheme::kSchnorr}) {
    auto [gateway, core] = EphemeralPair(ctx, scheme, a.paillier_bits);
    PartyCounts counts = CountSessionOps(gateway, core, tx, policy, ctx.rng);
    const auto& gw = FindComplexityRow(Method::kTwoParty, scheme, Party::kGateway);
    const auto& co = FindComplexityRow(Method::kTwoParty, scheme, Party::kCore);
    ctx.out << SchemeName(scheme) << '\n';
    PrintCounts(ctx, "gateway keygen (cached C_key)", gw.AtKeygen(), counts.gateway_keygen);
    PrintCounts(ctx, "gateway per session", gw.PerSession(), counts.gateway);
    PrintCounts(ctx, "core per session", co.PerSession(), counts.core);
    all_match = all_match && MatchesMeasured(gw.AtKeygen(), counts.gateway_keygen) &&
                MatchesMeasured(gw.PerSession(), counts.gateway) &&
                MatchesMeasured(co.PerSession(), counts.core);
  }
  return all_match ? 0 : ExitCodeFor(ErrorClass::kCrypto);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
           const CliEnv& env) {
  SystemRng system_rng;
  Context ctx(out, err, env, env.rng != nullptr ? *env.rng : system_rng);

  CLI::App app{"Two-party cold wallet: key generation, signing and verification across an air gap",
               "cwallet"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", ctx.verbose, "Describe envelopes on stderr");

  KeygenArgs keygen;
  auto* c_keygen = app.add_subcommand("keygen", "Generate this party's key share");
  c_keygen->add_option("--role", keygen.role, "gateway, core or user")->required();
  c_keygen->add_option("--scheme", keygen.scheme, "ecdsa or schnorr")->required();
  c_keygen->add_option("--share", keygen.share, "Share file to create")->required();
  c_keygen->add_option("--out", keygen.out, "keygen_pub envelope for the peer")->required();
  c_keygen->add_option("--paillier-bits", keygen.paillier_bits, "Paillier modulus size")
      ->capture_default_str();
  c_keygen->add_flag("--force", keygen.force, "Replace an existing share file");
  c_keygen->add_flag("--plaintext-share", keygen.plaintext, "Store the share unencrypted");
  c_keygen->add_option("--master-seed", keygen.master_seed, "Hex seed for a recoverable share");
  c_keygen->add_option("--account", keygen.account, "Account id for a recoverable share");

  KeygenFinishArgs finish;
  auto* c_finish = app.add_subcommand("keygen-finish", "Combine with the peer's public share");
  c_finish->add_option("--share", finish.share, "This party's share file")->required();
  c_finish->add_option("--peer", finish.peer, "Peer's keygen_pub envelope")->required();
  c_finish->add_option("--descriptor", finish.descriptor, "Also write the wallet descriptor here");

  SignInitArgs init;
  auto* c_init = app.add_subcommand("sign-init", "Start a signing session (gateway or user)");
  c_init->add_option("--share", init.share, "Share file")->required();
  c_init->add_option("--tx", init.tx, "Transaction JSON")->required();
  c_init->add_option("--out", init.out, "sign_msg1 envelope to carry to the core")->required();
  c_init->add_option("--workdir", init.workdir, "Where session state is kept")
      ->capture_default_str();
  c_init->add_flag("--compress", init.compress, "Deflate the envelope when smaller");

  SignRespondArgs respond;
  auto* c_respond = app.add_subcommand("sign-respond", "Answer a signing request (core)");
  c_respond->add_option("--share", respond.share, "Share file")->required();
  c_respond->add_option("--policy", respond.policy, "Destination whitelist")->required();
  c_respond->add_option("--in", respond.in, "sign_msg1 envelope")->required();
  c_respond->add_option("--out", respond.out, "sign_msg2 envelope to carry back")->required();
  c_respond->add_option("--report", respond.report, "Refusal report path (default <out>.refused.txt)");
  c_respond->add_flag("--compress", respond.compress, "Deflate the envelope when smaller");

  SignFinalizeArgs fin;
  auto* c_fin = app.add_subcommand("sign-finalize", "Finish the signature (gateway or user)");
  c_fin->add_option("--share", fin.share, "Share file")->required();
  c_fin->add_option("--in", fin.in, "sign_msg2 envelope")->required();
  c_fin->add_option("--workdir", fin.workdir, "Where session state is kept")
      ->capture_default_str();
  c_fin->add_option("--signature-out", fin.signature_out, "Also write the signature hex here");

  VerifyArgs verify;
  auto* c_verify = app.add_subcommand("verify", "Check a signature on a transaction");
  c_verify->add_option("--scheme", verify.scheme, "ecdsa or schnorr")->required();
  c_verify->add_option("--pubkey", verify.pubkey, "Shared public key, hex")->required();
  c_verify->add_option("--tx", verify.tx, "Transaction JSON")->required();
  c_verify->add_option("--signature", verify.signature, "Signature hex (64 bytes)")->required();

  PairArgs sizes{kDefaultPaillierBits};
  auto* c_sizes = app.add_subcommand("bench-sizes", "Envelope sizes per signing step");
  c_sizes->add_option("--paillier-bits", sizes.paillier_bits, "Paillier modulus size")
      ->capture_default_str();

  PairArgs ops{1024};
  auto* c_ops = app.add_subcommand("op-counts", "Operation counts per party and step");
  c_ops->add_option("--paillier-bits", ops.paillier_bits, "Paillier modulus size")
      ->capture_default_str();

  std::vector<const char*> argv{"cwallet"};
  for (const auto& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : ExitCodeFor(ErrorClass::kConfig);
  }

  try {
    if (c_keygen->parsed()) return Keygen(ctx, keygen);
    if (c_finish->parsed()) return KeygenFinish(ctx, finish);
    if (c_init->parsed()) return SignInit(ctx, init);
    if (c_respond->parsed()) return SignRespond(ctx, respond);
    if (c_fin->parsed()) return SignFinalize(ctx, fin);
    if (c_verify->parsed()) return Verify(ctx, verify);
    if (c_sizes->parsed()) return BenchSizes(ctx, sizes);
    if (c_ops->parsed()) return OpCountsCmd(ctx, ops);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e.error_class());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(ErrorClass::kIo);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace cwallet
