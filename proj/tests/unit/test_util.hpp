#pragma once

#include <gtest/gtest.h>

#include <filesystem>
#include <optional>
#include <string>

#include "coldwallet/error.hpp"
#include "coldwallet/keygen.hpp"
#include "coldwallet/paillier.hpp"
#include "coldwallet/random.hpp"
#include "coldwallet/transaction.hpp"

namespace cwtest {

using namespace coldwallet;

// {v=1, "BTC", "srcA", "dstB", 1000, nonce}
Transaction SampleTx(uint64_t nonce = 7);
Policy AllowSampleDestination();

// 1024-bit keypair generated once per process; clears the 832-bit floor.
const PaillierKeypair& TestPaillier();

struct SharePair {
  KeyShare initiator;
  KeyShare core;
};

// Combined pair. The ECDSA initiator reuses TestPaillier().
SharePair MakePair(Scheme scheme, Rng& rng, std::optional<Scalar> x1 = std::nullopt,
                   std::optional<Scalar> x2 = std::nullopt);

// Fresh empty directory under the system temp dir.
std::filesystem::path TempDir(const std::string& label);

template <class F>
std::optional<ErrorCode> CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace cwtest

#define EXPECT_CODE(stmt, code) EXPECT_EQ(::cwtest::CodeOf([&] { stmt; }), (code))
