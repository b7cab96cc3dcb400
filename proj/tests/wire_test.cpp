#include "doctest.h"
#include "rsmm/decoder.hpp"
#include "rsmm/errors.hpp"
#include "rsmm/wire.hpp"
#include "test_util.hpp"

using namespace rsmm;
using rsmm::testing::params;
using rsmm::testing::random_batch;

namespace {

struct Fixture {
  explicit Fixture(Rational alpha, std::size_t m = 8, std::uint64_t seed = 0)
      : plan(build_plan(params(5, 4, 2, alpha, 97, 4, 3, 2, m))), gen(seed) {
    a = random_batch(gen, plan.field, Role::kA, m, 4, 3);
    b = random_batch(gen, plan.field, Role::kB, m, 3, 2);
    shares = encode(a, draw_randomness(plan, seed), plan);
    const auto slots = align_to_slots(b, plan, 3, 2);
    for (const auto& s : shares.servers) responses.push_back(process(s, slots));
  }
  BlockPlan plan;
  std::mt19937_64 gen;
  MatrixSeq a, b;
  SharePackage shares;
  std::vector<ServerResponse> responses;
};

void check_same(const wire::Dump& x, const wire::Dump& y) {
  CHECK(x.role == y.role);
  CHECK(x.params.q == y.params.q);
  CHECK(x.params.N == y.params.N);
  CHECK(x.params.k == y.params.k);
  CHECK(x.params.l == y.params.l);
  CHECK(x.params.alpha == y.params.alpha);
  CHECK(x.params.C == y.params.C);
  CHECK(x.params.D == y.params.D);
  CHECK(x.params.E == y.params.E);
  CHECK(x.params.m == y.params.m);
  CHECK(x.seed == y.seed);
  REQUIRE(x.servers.size() == y.servers.size());
  for (std::size_t i = 0; i < x.servers.size(); ++i) {
    CHECK(x.servers[i].server == y.servers[i].server);
    CHECK(x.servers[i].residues == y.servers[i].residues);
  }
}

}  // namespace

TEST_CASE("binary and JSON dumps round-trip") {
  for (Rational alpha : {Rational(1, 4), Rational(1, 2)}) {
    for (std::uint64_t seed : {0ULL, 1ULL, 2ULL}) {
      Fixture fx(alpha, 5 + seed, seed);
      for (const wire::Dump& dump : {wire::make_dump(fx.shares, seed),
                                     wire::make_dump(fx.plan, fx.responses, seed)}) {
        check_same(dump, wire::from_binary(wire::to_binary(dump)));
        check_same(dump, wire::from_json(wire::to_json(dump)));
        check_same(dump, wire::from_json(nlohmann::json::parse(wire::to_json(dump).dump())));
      }
    }
  }
}

TEST_CASE("binary header layout") {
  Fixture fx(Rational(1, 4));
  const auto bytes = wire::to_binary(wire::make_dump(fx.shares, 7));
  REQUIRE(bytes.size() > 4 + 4 + 4 + 11 * 8 + 8);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "RSMM");
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 0);
  CHECK(bytes[12] == 97);  // q, little-endian
  // Header, then per server id + count + residues.
  std::size_t residues = 0;
  for (const auto& s : fx.shares.servers) {
    for (const auto& item : s.items) residues += item.rows() * item.cols();
  }
  CHECK(bytes.size() == 12 + 11 * 8 + 8 + 5 * 16 + residues * 8);
}

TEST_CASE("malformed binary dumps are rejected") {
  Fixture fx(Rational(1, 4));
  const auto good = wire::to_binary(wire::make_dump(fx.shares, 7));

  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(wire::from_binary(bad_magic), FormatError);

  auto bad_version = good;
  bad_version[4] = 9;
  CHECK_THROWS_AS(wire::from_binary(bad_version), FormatError);

  auto bad_role = good;
  bad_role[8] = 5;
  CHECK_THROWS_AS(wire::from_binary(bad_role), FormatError);

  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{50}, good.size() - 1}) {
    const std::span<const std::uint8_t> truncated(good.data(), cut);
    CHECK_THROWS_AS(wire::from_binary(truncated), FormatError);
  }
  auto trailing = good;
  trailing.push_back(0);
  CHECK_THROWS_AS(wire::from_binary(trailing), FormatError);
}

TEST_CASE("malformed JSON dumps are rejected") {
  Fixture fx(Rational(1, 4));
  auto doc = nlohmann::json::parse(wire::to_json(wire::make_dump(fx.shares, 7)).dump());
  auto no_role = doc;
  no_role.erase("role");
  CHECK_THROWS_AS(wire::from_json(no_role), FormatError);
  CHECK_THROWS_AS(wire::from_json(nlohmann::json::array()), FormatError);
}

TEST_CASE("dumps rebuild shares and responses") {
  Fixture fx(Rational(1, 4), 7, 3);
  const SharePackage shares = wire::to_shares(wire::from_binary(wire::to_binary(wire::make_dump(fx.shares, 3))));
  REQUIRE(shares.servers.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(shares.servers[i].items == fx.shares.servers[i].items);

  const auto responses = wire::to_responses(wire::make_dump(fx.plan, fx.responses, 3));
  MatrixSeq direct{Role::kAB, {}};
  for (std::size_t s = 0; s < 7; ++s) direct.items.push_back(mat_mul(fx.a.items[s], fx.b.items[s]));
  CHECK(decode(responses, fx.plan) == direct);

  // Responses of a subset keep their server ids.
  const std::vector<ServerResponse> some = {fx.responses[1], fx.responses[2], fx.responses[3],
                                            fx.responses[4]};
  const auto back = wire::to_responses(wire::make_dump(fx.plan, some, 3));
  REQUIRE(back.size() == 4);
  CHECK(back[0].server == 2);
  CHECK(decode(back, fx.plan) == direct);

  CHECK_THROWS_AS(wire::to_responses(wire::make_dump(fx.shares, 3)), FormatError);
}
